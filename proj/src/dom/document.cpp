#include "obsr/dom/document.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

namespace obsr::dom {

namespace {

// Adjacent text nodes merge and empty ones vanish so that serialization and
// re-parsing always yield the same tree.
void canonicalize_text(Node& node) {
  std::vector<Node> kids;
  kids.reserve(node.children.size());
  for (auto& c : node.children) {
    if (c.is_text()) {
      if (c.text.empty()) continue;
      if (!kids.empty() && kids.back().is_text()) {
        kids.back().text += c.text;
        continue;
      }
    } else {
      canonicalize_text(c);
    }
    kids.push_back(std::move(c));
  }
  node.children = std::move(kids);
}

void index_subtree(const Node& node, NodePath& path, std::unordered_map<std::string, NodePath>& index,
                   std::vector<std::string>& order) {
  if (node.is_element()) {
    if (const auto* bid = node.bid()) {
      if (!index.emplace(*bid, path).second) throw DuplicateBid(*bid);
      order.push_back(*bid);
    }
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    index_subtree(node.children[i], path, index, order);
    path.pop_back();
  }
}

}  // namespace

DomDocument::DomDocument(Node root) : root_(std::move(root)) {
  root_.kind = Node::Kind::Document;
  canonicalize_text(root_);
  NodePath path;
  index_subtree(root_, path, index_, order_);
}

bool DomDocument::has_bid(std::string_view bid) const {
  return index_.find(std::string(bid)) != index_.end();
}

const Node* DomDocument::find(std::string_view bid) const {
  auto it = index_.find(std::string(bid));
  if (it == index_.end()) return nullptr;
  return &node_at(root_, it->second);
}

const NodePath* DomDocument::path_of(std::string_view bid) const {
  auto it = index_.find(std::string(bid));
  return it == index_.end() ? nullptr : &it->second;
}

const Node& DomDocument::at(std::string_view bid) const {
  const Node* n = find(bid);
  if (n == nullptr) throw UnknownBid(std::string(bid));
  return *n;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_alpha(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct NamedEntity {
  std::string_view name;
  std::uint32_t cp;
};

constexpr NamedEntity kEntities[] = {
    {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
    {"nbsp", 0xA0},    {"copy", 0xA9},    {"reg", 0xAE},     {"trade", 0x2122}, {"hellip", 0x2026},
    {"mdash", 0x2014}, {"ndash", 0x2013}, {"laquo", 0xAB},   {"raquo", 0xBB},   {"times", 0xD7},
    {"middot", 0xB7},  {"bull", 0x2022},  {"euro", 0x20AC},  {"lsquo", 0x2018}, {"rsquo", 0x2019},
    {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"deg", 0xB0},     {"para", 0xB6},    {"sect", 0xA7},
};

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    bool done = false;
    if (name.size() >= 2 && name[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = name[1] == 'x' || name[1] == 'X';
      auto digits = name.substr(hex ? 2 : 1);
      bool ok = !digits.empty();
      for (char c : digits) {
        int v = -1;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        if (v < 0 || cp > 0x10FFFF) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      }
      if (ok) {
        append_utf8(out, cp);
        done = true;
      }
    } else {
      for (const auto& e : kEntities) {
        if (e.name == name) {
          append_utf8(out, e.cp);
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view in) : in_(in) { stack_.push_back(Node::document()); }

  DomDocument run() {
    while (pos_ < in_.size()) {
      if (in_[pos_] == '<' && try_markup()) continue;
      read_text();
    }
    flush_text();
    while (stack_.size() > 1) pop();
    if (!saw_element_) throw UnparseableInput("no HTML element found in input");
    return DomDocument(std::move(stack_.front()));
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
  std::vector<Node> stack_;
  std::string pending_text_;
  bool saw_element_ = false;

  void flush_text() {
    if (pending_text_.empty()) return;
    auto& kids = stack_.back().children;
    auto decoded = decode_entities(pending_text_);
    if (!kids.empty() && kids.back().is_text()) {
      kids.back().text += decoded;
    } else {
      kids.push_back(Node::text_node(std::move(decoded)));
    }
    pending_text_.clear();
  }

  void pop() {
    Node done = std::move(stack_.back());
    stack_.pop_back();
    stack_.back().children.push_back(std::move(done));
  }

  void read_text() {
    auto next = in_.find('<', pos_ + 1);
    if (next == std::string_view::npos) next = in_.size();
    pending_text_.append(in_.substr(pos_, next - pos_));
    pos_ = next;
  }

  // Returns false when the '<' does not start markup; it is then text.
  bool try_markup() {
    auto rest = in_.substr(pos_);
    if (rest.starts_with("<!--")) {
      flush_text();
      auto end = in_.find("-->", pos_ + 4);
      pos_ = end == std::string_view::npos ? in_.size() : end + 3;
      return true;
    }
    if (rest.starts_with("<!") || rest.starts_with("<?")) {
      flush_text();
      auto end = in_.find('>', pos_);
      pos_ = end == std::string_view::npos ? in_.size() : end + 1;
      return true;
    }
    if (rest.starts_with("</")) {
      if (rest.size() < 3 || !is_alpha(rest[2])) return false;
      flush_text();
      std::size_t i = pos_ + 2;
      std::size_t b = i;
      while (i < in_.size() && !is_space(in_[i]) && in_[i] != '>' && in_[i] != '/') ++i;
      auto name = to_lower(in_.substr(b, i - b));
      auto end = in_.find('>', i);
      pos_ = end == std::string_view::npos ? in_.size() : end + 1;
      close_tag(name);
      return true;
    }
    if (rest.size() < 2 || !is_alpha(rest[1])) return false;
    flush_text();
    read_start_tag();
    return true;
  }

  void close_tag(const std::string& name) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i].tag == name) {
        while (stack_.size() > i) pop();
        return;
      }
    }
  }

  void skip_space() {
    while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
  }

  void read_start_tag() {
    ++pos_;  // '<'
    std::size_t b = pos_;
    while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '>' && in_[pos_] != '/') ++pos_;
    Node el = Node::element(to_lower(in_.substr(b, pos_ - b)));
    bool self_closing = false;
    while (pos_ < in_.size()) {
      skip_space();
      if (pos_ >= in_.size()) break;
      char c = in_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      std::size_t nb = pos_;
      while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '=' && in_[pos_] != '>' &&
             !(in_[pos_] == '/' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '>')) {
        ++pos_;
      }
      auto name = to_lower(in_.substr(nb, pos_ - nb));
      std::string value;
      skip_space();
      if (pos_ < in_.size() && in_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
          char q = in_[pos_++];
          auto end = in_.find(q, pos_);
          if (end == std::string_view::npos) end = in_.size();
          value = decode_entities(in_.substr(pos_, end - pos_));
          pos_ = std::min(in_.size(), end + 1);
        } else {
          std::size_t vb = pos_;
          while (pos_ < in_.size() && !is_space(in_[pos_]) && in_[pos_] != '>') ++pos_;
          value = decode_entities(in_.substr(vb, pos_ - vb));
        }
      }
      if (!name.empty() && !el.has_attr(name)) el.attributes.push_back({std::move(name), std::move(value)});
    }
    saw_element_ = true;
    const std::string tag = el.tag;
    if (self_closing || is_void_tag(tag)) {
      stack_.back().children.push_back(std::move(el));
      return;
    }
    if (is_raw_text_tag(tag)) {
      std::size_t end = pos_;
      while (true) {
        end = in_.find("</", end);
        if (end == std::string_view::npos) {
          end = in_.size();
          break;
        }
        if (to_lower(in_.substr(end + 2, tag.size())) == tag) break;
        end += 2;
      }
      if (end > pos_) el.children.push_back(Node::text_node(std::string(in_.substr(pos_, end - pos_))));
      pos_ = end;
      if (pos_ < in_.size()) {
        auto gt = in_.find('>', pos_);
        pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
      }
      stack_.back().children.push_back(std::move(el));
      return;
    }
    stack_.push_back(std::move(el));
  }
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': if (attribute) out.push_back(c); else out += "&lt;"; break;
      case '>': if (attribute) out.push_back(c); else out += "&gt;"; break;
      case '"': if (attribute) out += "&quot;"; else out.push_back(c); break;
      default: out.push_back(c);
    }
  }
}

void serialize_into(std::string& out, const Node& n, bool raw_parent) {
  switch (n.kind) {
    case Node::Kind::Text:
      if (raw_parent) {
        out += n.text;
      } else {
        escape_into(out, n.text, false);
      }
      return;
    case Node::Kind::Document:
      for (const auto& c : n.children) serialize_into(out, c, false);
      return;
    case Node::Kind::Element:
      break;
  }
  out.push_back('<');
  out += n.tag;
  for (const auto& a : n.attributes) {
    out.push_back(' ');
    out += a.name;
    out += "=\"";
    escape_into(out, a.value, true);
    out.push_back('"');
  }
  out.push_back('>');
  if (is_void_tag(n.tag) && n.children.empty()) return;
  const bool raw = is_raw_text_tag(n.tag);
  for (const auto& c : n.children) serialize_into(out, c, raw);
  out += "</";
  out += n.tag;
  out.push_back('>');
}

}  // namespace

DomDocument parse_html(std::string_view html) { return Parser(html).run(); }

std::string serialize(const Node& node) {
  std::string out;
  serialize_into(out, node, false);
  return out;
}

std::string serialize(const DomDocument& doc) { return serialize(doc.root()); }

std::size_t utf8_length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::size_t char_length(const DomDocument& doc) { return utf8_length(serialize(doc)); }

}  // namespace obsr::dom
