#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "obsr/dom/node.hpp"
#include "obsr/error.hpp"

namespace obsr::dom {

class DuplicateBid : public Error {
 public:
  explicit DuplicateBid(const std::string& bid) : Error("duplicate bid '" + bid + "'") {}
};

// Immutable parsed HTML tree with a bid index. Every transformation builds a
// new document from an edited copy of the root.
class DomDocument {
 public:
  // `root` must be a Document node. Throws DuplicateBid.
  explicit DomDocument(Node root);

  const Node& root() const noexcept { return root_; }

  bool has_bid(std::string_view bid) const;
  // nullptr when the bid is absent.
  const Node* find(std::string_view bid) const;
  const NodePath* path_of(std::string_view bid) const;
  // Same as find() but throws UnknownBid.
  const Node& at(std::string_view bid) const;

  // Bid-carrying elements in document (pre-)order.
  const std::vector<std::string>& bids() const noexcept { return order_; }

  friend bool operator==(const DomDocument& a, const DomDocument& b) { return a.root_ == b.root_; }

 private:
  Node root_;
  std::unordered_map<std::string, NodePath> index_;
  std::vector<std::string> order_;
};

// Lenient HTML parsing: unknown end tags are ignored, unclosed elements close
// at end of input, comments and doctypes are dropped. Throws UnparseableInput
// when the text contains no element at all.
DomDocument parse_html(std::string_view html);

// Canonical serialization: lowercase names, attributes in stored order, every
// attribute written as name="value", no whitespace inserted.
std::string serialize(const DomDocument& doc);
std::string serialize(const Node& node);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text) noexcept;

// Character count of the canonical serialization.
std::size_t char_length(const DomDocument& doc);

}  // namespace obsr::dom
