#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "obsr/dom/document.hpp"

namespace obsr::dom {

// One `(bid, attr)` ablation unit. `attr` is a lowercase attribute name or one
// of the two special tokens for the tag type and the direct text.
struct ElementRef {
  enum class Kind { Attribute, Tag, Text };

  std::string bid;
  Kind kind = Kind::Tag;
  std::string attribute;  // Attribute kind only

  static ElementRef attr(std::string bid, std::string_view name);
  static ElementRef tag(std::string bid);
  static ElementRef text(std::string bid);

  // "@tag", "@text", or the attribute name.
  std::string attr_token() const;
  // Inverse of attr_token(); attribute names are lowercased.
  static ElementRef from_token(std::string bid, std::string_view token);

  // "bid:attr"
  std::string to_string() const;

  friend bool operator==(const ElementRef& a, const ElementRef& b) {
    return a.bid == b.bid && a.attr_token() == b.attr_token();
  }
  // Lexical on (bid, attr token).
  friend std::strong_ordering operator<=>(const ElementRef& a, const ElementRef& b);
};

inline constexpr std::string_view kTagToken = "@tag";
inline constexpr std::string_view kTextToken = "@text";

using RefList = std::vector<ElementRef>;

// Sorts and removes duplicates.
void canonicalize(RefList& refs);

// Removes every ref's information from a copy of `doc`. Named attributes are
// deleted, @text drops the element's direct text nodes, @tag renames the
// element to `unk`. A named ref whose attribute is absent is a no-op.
// Throws UnknownBid.
DomDocument ablate(const DomDocument& doc, const RefList& refs);

// True iff the information a ref names is present in `doc`. Text counts as
// present when the direct text holds a non-whitespace character.
bool contains_ref(const DomDocument& doc, const ElementRef& ref);

bool contains_all(const DomDocument& doc, const RefList& refs);

// Edge count between two elements through their lowest common ancestor.
std::size_t hop_distance(const NodePath& a, const NodePath& b) noexcept;

// 0 for the same ref, 1 for two attrs of one element, hop + 1 otherwise.
// Throws UnknownBid.
std::size_t dom_distance(const DomDocument& doc, const ElementRef& a, const ElementRef& b);

}  // namespace obsr::dom
