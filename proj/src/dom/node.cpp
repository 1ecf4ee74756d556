#include "obsr/dom/node.hpp"

#include <algorithm>
#include <array>

namespace obsr::dom {

Node Node::element(std::string tag, std::vector<Attribute> attributes, std::vector<Node> children) {
  Node n;
  n.kind = Kind::Element;
  n.tag = std::move(tag);
  n.attributes = std::move(attributes);
  n.children = std::move(children);
  return n;
}

Node Node::text_node(std::string text) {
  Node n;
  n.kind = Kind::Text;
  n.text = std::move(text);
  return n;
}

Node Node::document(std::vector<Node> children) {
  Node n;
  n.kind = Kind::Document;
  n.children = std::move(children);
  return n;
}

const std::string* Node::attr(std::string_view name) const noexcept {
  for (const auto& a : attributes) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

void Node::set_attr(std::string_view name, std::string value) {
  for (auto& a : attributes) {
    if (a.name == name) {
      a.value = std::move(value);
      return;
    }
  }
  attributes.push_back({std::string(name), std::move(value)});
}

bool Node::remove_attr(std::string_view name) {
  auto it = std::find_if(attributes.begin(), attributes.end(),
                         [&](const Attribute& a) { return a.name == name; });
  if (it == attributes.end()) return false;
  attributes.erase(it);
  return true;
}

std::string Node::direct_text() const {
  std::string out;
  for (const auto& c : children) {
    if (c.is_text()) out += c.text;
  }
  return out;
}

namespace {
void append_text(const Node& n, std::string& out) {
  for (const auto& c : n.children) {
    if (c.is_text()) {
      out += c.text;
    } else {
      append_text(c, out);
    }
  }
}
}  // namespace

std::string Node::all_text() const {
  std::string out;
  append_text(*this, out);
  return out;
}

const Node& node_at(const Node& root, const NodePath& path) {
  const Node* cur = &root;
  for (auto i : path) cur = &cur->children.at(i);
  return *cur;
}

Node& node_at(Node& root, const NodePath& path) {
  Node* cur = &root;
  for (auto i : path) cur = &cur->children.at(i);
  return *cur;
}

bool is_void_tag(std::string_view tag) noexcept {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base", "br", "col", "embed", "hr", "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

bool is_raw_text_tag(std::string_view tag) noexcept {
  return tag == "script" || tag == "style";
}

namespace {
bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
}  // namespace

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view text) noexcept {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return text.substr(b, e - b);
}

}  // namespace obsr::dom
