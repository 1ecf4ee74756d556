#include "obsr/dom/ablation.hpp"

#include <algorithm>

namespace obsr::dom {

ElementRef ElementRef::attr(std::string bid, std::string_view name) {
  return ElementRef{std::move(bid), Kind::Attribute, to_lower(name)};
}

ElementRef ElementRef::tag(std::string bid) { return ElementRef{std::move(bid), Kind::Tag, {}}; }

ElementRef ElementRef::text(std::string bid) { return ElementRef{std::move(bid), Kind::Text, {}}; }

std::string ElementRef::attr_token() const {
  switch (kind) {
    case Kind::Tag: return std::string(kTagToken);
    case Kind::Text: return std::string(kTextToken);
    case Kind::Attribute: break;
  }
  return attribute;
}

ElementRef ElementRef::from_token(std::string bid, std::string_view token) {
  if (token == kTagToken) return tag(std::move(bid));
  if (token == kTextToken) return text(std::move(bid));
  return attr(std::move(bid), token);
}

std::string ElementRef::to_string() const { return bid + ":" + attr_token(); }

std::strong_ordering operator<=>(const ElementRef& a, const ElementRef& b) {
  if (auto c = a.bid <=> b.bid; c != 0) return c;
  return a.attr_token() <=> b.attr_token();
}

void canonicalize(RefList& refs) {
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
}

DomDocument ablate(const DomDocument& doc, const RefList& refs) {
  if (refs.empty()) return doc;
  Node root = doc.root();
  for (const auto& ref : refs) {
    const NodePath* path = doc.path_of(ref.bid);
    if (path == nullptr) throw UnknownBid(ref.bid);
    Node& el = node_at(root, *path);
    switch (ref.kind) {
      case ElementRef::Kind::Attribute:
        el.remove_attr(ref.attribute);
        break;
      case ElementRef::Kind::Tag:
        el.tag = std::string(kUnknownTag);
        break;
      case ElementRef::Kind::Text:
        // Paths of other refs stay valid: text nodes are only blanked here and
        // dropped when the new document canonicalizes its tree.
        for (auto& c : el.children) {
          if (c.is_text()) c.text.clear();
        }
        break;
    }
  }
  return DomDocument(std::move(root));
}

bool contains_ref(const DomDocument& doc, const ElementRef& ref) {
  const Node* el = doc.find(ref.bid);
  if (el == nullptr) return false;
  switch (ref.kind) {
    case ElementRef::Kind::Attribute: return el->has_attr(ref.attribute);
    case ElementRef::Kind::Tag: return el->tag != kUnknownTag;
    case ElementRef::Kind::Text: return !trim(el->direct_text()).empty();
  }
  return false;
}

bool contains_all(const DomDocument& doc, const RefList& refs) {
  return std::all_of(refs.begin(), refs.end(),
                     [&](const ElementRef& r) { return contains_ref(doc, r); });
}

std::size_t hop_distance(const NodePath& a, const NodePath& b) noexcept {
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  return (a.size() - common) + (b.size() - common);
}

std::size_t dom_distance(const DomDocument& doc, const ElementRef& a, const ElementRef& b) {
  const NodePath* pa = doc.path_of(a.bid);
  if (pa == nullptr) throw UnknownBid(a.bid);
  const NodePath* pb = doc.path_of(b.bid);
  if (pb == nullptr) throw UnknownBid(b.bid);
  if (a.bid == b.bid) return a == b ? 0 : 1;
  return hop_distance(*pa, *pb) + 1;
}

}  // namespace obsr::dom
