#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace obsr::dom {

struct Attribute {
  std::string name;
  std::string value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// One node of the document tree. Element and text nodes share a struct so the
// tree can be held by value; the synthetic Document node is the tree root and
// never serializes itself.
struct Node {
  enum class Kind { Document, Element, Text };

  Kind kind = Kind::Element;
  std::string tag;                    // elements only, lowercase
  std::vector<Attribute> attributes;  // document order, lowercase names
  std::string text;                   // text nodes only, entity-decoded
  std::vector<Node> children;

  static Node element(std::string tag, std::vector<Attribute> attributes = {},
                      std::vector<Node> children = {});
  static Node text_node(std::string text);
  static Node document(std::vector<Node> children = {});

  bool is_element() const noexcept { return kind == Kind::Element; }
  bool is_text() const noexcept { return kind == Kind::Text; }

  const std::string* attr(std::string_view name) const noexcept;
  bool has_attr(std::string_view name) const noexcept { return attr(name) != nullptr; }
  // Sets or overwrites; new attributes go last.
  void set_attr(std::string_view name, std::string value);
  bool remove_attr(std::string_view name);

  const std::string* bid() const noexcept { return attr("bid"); }

  // Concatenation of the element's own text-node children.
  std::string direct_text() const;
  // All descendant text in document order, no separators.
  std::string all_text() const;

  friend bool operator==(const Node&, const Node&) = default;
};

using NodePath = std::vector<std::size_t>;

const Node& node_at(const Node& root, const NodePath& path);
Node& node_at(Node& root, const NodePath& path);

// Tags serialized without an end tag.
bool is_void_tag(std::string_view tag) noexcept;
// Tags whose content is not markup (kept verbatim).
bool is_raw_text_tag(std::string_view tag) noexcept;

// Placeholder tag produced by removing an element's tag information.
inline constexpr std::string_view kUnknownTag = "unk";

// Collapse runs of whitespace into one space and trim.
std::string collapse_whitespace(std::string_view text);
std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text) noexcept;

}  // namespace obsr::dom
