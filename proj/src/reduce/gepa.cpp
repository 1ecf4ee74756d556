#include "obsr/reduce/gepa.hpp"

#include <algorithm>
#include <deque>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "obsr/dom/document.hpp"
#include "obsr/dom/node.hpp"
#include "obsr/error.hpp"
#include "obsr/text/porter.hpp"
#include "obsr/text/tokenize.hpp"

namespace obsr::reduce {

using dom::Node;

GepaProgram parse_gepa_program(std::string_view id) {
  if (id == "seed") return GepaProgram::Seed;
  if (id == "workarena_r02") return GepaProgram::WorkArenaR02;
  if (id == "weblinx_r02") return GepaProgram::WebLinxR02;
  throw ConfigError("unknown pruning program '" + std::string(id) +
                    "' (expected seed, workarena_r02 or weblinx_r02)");
}

std::string_view to_string(GepaProgram program) noexcept {
  switch (program) {
    case GepaProgram::Seed: return "seed";
    case GepaProgram::WorkArenaR02: return "workarena_r02";
    case GepaProgram::WebLinxR02: return "weblinx_r02";
  }
  return "unknown";
}

namespace {

using StemSet = std::unordered_set<std::string>;

const std::set<std::string, std::less<>> kInteractive = {"input", "button", "select", "textarea",
                                                         "a",     "label",  "option"};

bool is_interactive(const Node& el) { return kInteractive.contains(el.tag); }

// Stems of the \w+ tokens of `text` (lowercased) longer than `min_len` chars.
StemSet stems_of(std::string_view text, std::size_t min_len) {
  StemSet out;
  for (const auto& w : text::lower_word_tokens(text)) {
    if (dom::utf8_length(w) > min_len) out.insert(text::porter_stem(w));
  }
  return out;
}

bool intersects(const StemSet& a, const StemSet& b) {
  const auto& small = a.size() < b.size() ? a : b;
  const auto& large = a.size() < b.size() ? b : a;
  return std::any_of(small.begin(), small.end(), [&](const std::string& s) { return large.contains(s); });
}

StemSet query_stems(std::string_view goal, std::string_view history, std::size_t min_len) {
  std::string q(goal);
  q.push_back(' ');
  q += history;
  return stems_of(q, min_len);
}

void collect_strings(const Node& n, std::vector<std::string_view>& out) {
  for (const auto& c : n.children) {
    if (c.is_text()) {
      out.push_back(c.text);
    } else {
      collect_strings(c, out);
    }
  }
}

// Descendant strings, each stripped, empty ones dropped, joined by `sep`.
std::string get_text(const Node& n, std::string_view sep) {
  std::vector<std::string_view> strings;
  collect_strings(n, strings);
  std::string out;
  bool first = true;
  for (auto s : strings) {
    auto t = dom::trim(s);
    if (t.empty()) continue;
    if (!first) out += sep;
    out += t;
    first = false;
  }
  return out;
}

void remove_tags(Node& n, const std::set<std::string, std::less<>>& tags) {
  std::erase_if(n.children, [&](const Node& c) { return c.is_element() && tags.contains(c.tag); });
  for (auto& c : n.children) remove_tags(c, tags);
}

// Removes (with their subtrees) bid-carrying elements whose bid is not kept.
void remove_unkept(Node& n, const std::unordered_set<std::string>& keep) {
  std::erase_if(n.children, [&](const Node& c) {
    const auto* bid = c.is_element() ? c.bid() : nullptr;
    return bid != nullptr && !keep.contains(*bid);
  });
  for (auto& c : n.children) remove_unkept(c, keep);
}

template <typename Fn>
void for_each_bid_element(const Node& n, Fn&& fn) {
  if (n.is_element() && n.bid() != nullptr) fn(n);
  for (const auto& c : n.children) for_each_bid_element(c, fn);
}

// ---------------------------------------------------------------------------
// seed
// ---------------------------------------------------------------------------

Node run_seed(Node root, std::string_view goal, std::string_view history) {
  remove_tags(root, {"head", "script", "style", "link", "meta"});
  const auto kw = query_stems(goal, history, 2);

  std::unordered_set<std::string> keep;
  for_each_bid_element(root, [&](const Node& el) {
    if (is_interactive(el) || intersects(stems_of(get_text(el, " "), 0), kw)) keep.insert(*el.bid());
  });

  // Bid-carrying ancestors of kept elements.
  std::vector<const Node*> stack;
  auto walk = [&](auto&& self, const Node& n) -> void {
    if (n.is_element()) {
      if (const auto* bid = n.bid(); bid != nullptr && keep.contains(*bid)) {
        for (const Node* p : stack) {
          if (const auto* pb = p->bid()) keep.insert(*pb);
        }
      }
      stack.push_back(&n);
    }
    for (const auto& c : n.children) self(self, c);
    if (n.is_element()) stack.pop_back();
  };
  walk(walk, root);

  remove_unkept(root, keep);
  return root;
}

// ---------------------------------------------------------------------------
// workarena_r02
// ---------------------------------------------------------------------------

const std::set<std::string, std::less<>> kWorkArenaAttributes = {
    "bid",  "id",          "name",       "value", "type",    "href",     "src",      "alt",     "title",
    "placeholder", "aria-label", "data-label", "for", "role", "checked", "selected", "disabled", "readonly"};

std::string collapse_strip(std::string_view s) { return dom::collapse_whitespace(s); }

// Child cleanup below kept bid elements: non-bid element children without a
// keyword hit are dropped, text children are whitespace-collapsed.
void clean_children(Node& n, const StemSet& kw) {
  if (n.is_element() && n.bid() != nullptr) {
    std::vector<Node> kids;
    kids.reserve(n.children.size());
    for (auto& ch : n.children) {
      if (ch.is_element()) {
        if (ch.bid() == nullptr) {
          if (!intersects(stems_of(get_text(ch, " "), 1), kw)) continue;
        }
      } else if (ch.is_text()) {
        ch.text = collapse_strip(ch.text);
        if (ch.text.empty()) continue;
      }
      kids.push_back(std::move(ch));
    }
    n.children = std::move(kids);
  }
  for (auto& c : n.children) {
    if (c.is_element()) clean_children(c, kw);
  }
}

void filter_bid_attributes(Node& n) {
  if (n.is_element() && n.bid() != nullptr) {
    std::erase_if(n.attributes,
                  [](const dom::Attribute& a) { return !kWorkArenaAttributes.contains(dom::to_lower(a.name)); });
  }
  for (auto& c : n.children) filter_bid_attributes(c);
}

void clean_all_strings(Node& n) {
  std::vector<Node> kids;
  kids.reserve(n.children.size());
  for (auto& ch : n.children) {
    if (ch.is_text()) {
      ch.text = collapse_strip(ch.text);
      if (ch.text.empty()) continue;
    } else {
      clean_all_strings(ch);
    }
    kids.push_back(std::move(ch));
  }
  n.children = std::move(kids);
}

Node run_workarena(Node root, std::string_view goal, std::string_view history) {
  remove_tags(root, {"head", "script", "style", "link", "meta"});
  const auto kw = query_stems(goal, history, 1);

  std::unordered_set<std::string> action_bids;
  std::unordered_set<std::string> select_targets;
  static const std::regex action_re(R"((?:click|fill)\('([^']+)'\)|select_option\('([^']+)',\s*'([^']+)'\))");
  const std::string hist(history);
  for (auto it = std::sregex_iterator(hist.begin(), hist.end(), action_re); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[1].matched && m[1].length() > 0) {
      action_bids.insert(m[1].str());
    } else if (m[2].matched && m[3].matched) {
      action_bids.insert(m[2].str());
      select_targets.insert(m[3].str());
    }
  }

  std::unordered_set<std::string> keep;
  for_each_bid_element(root, [&](const Node& el) {
    const std::string& bid = *el.bid();
    if (action_bids.contains(bid)) keep.insert(bid);
    if (el.tag == "option" && !select_targets.empty()) {
      const auto* v = el.attr("value");
      const std::string value = v == nullptr ? "" : *v;
      if (select_targets.contains(value) || select_targets.contains(get_text(el, ""))) keep.insert(bid);
    }
    std::string combined = get_text(el, " ");
    for (std::string_view a : {"title", "alt", "aria-label", "placeholder", "value", "data-label"}) {
      if (const auto* v = el.attr(a); v != nullptr && !v->empty()) {
        if (!combined.empty()) combined.push_back(' ');
        combined += *v;
      }
    }
    if (is_interactive(el) || intersects(stems_of(combined, 1), kw)) keep.insert(bid);
  });

  // Bid-carrying ancestors up to (not including) the nearest body.
  std::unordered_set<std::string> with_ancestors = keep;
  std::vector<const Node*> stack;
  auto walk = [&](auto&& self, const Node& n) -> void {
    if (n.is_element()) {
      if (const auto* bid = n.bid(); bid != nullptr && keep.contains(*bid)) {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          if ((*it)->tag == "body") break;
          if (const auto* pb = (*it)->bid()) with_ancestors.insert(*pb);
        }
      }
      stack.push_back(&n);
    }
    for (const auto& c : n.children) self(self, c);
    if (n.is_element()) stack.pop_back();
  };
  walk(walk, root);
  keep = std::move(with_ancestors);

  remove_unkept(root, keep);
  clean_children(root, kw);
  filter_bid_attributes(root);
  clean_all_strings(root);
  return root;
}

// ---------------------------------------------------------------------------
// weblinx_r02
// ---------------------------------------------------------------------------

const std::set<std::string, std::less<>> kWebLinxAttributes = {
    "bid",         "id",         "name",     "value",    "type",     "href",         "src",
    "alt",         "title",      "placeholder", "aria-label", "role", "checked",   "selected",
    "disabled",    "contenteditable", "for", "colspan",  "rowspan",  "tabindex",     "maxlength",
    "data-testid", "data-test-id", "data-test", "content"};

constexpr std::string_view kTextualAttributes[] = {"value", "placeholder", "aria-label", "title",
                                                   "alt",   "name",        "content"};

bool is_contenteditable(const Node& el) {
  const auto* v = el.attr("contenteditable");
  return v != nullptr && *v == "true";
}

void collect_bids(const Node& n, std::unordered_set<std::string>& out) {
  for (const auto& c : n.children) {
    if (!c.is_element()) continue;
    if (const auto* b = c.bid()) out.insert(*b);
    collect_bids(c, out);
  }
}

void rebuild_weblinx(const Node& node, bool parent_keeps_text, std::vector<Node>& target,
                     const std::unordered_set<std::string>& keep) {
  for (const auto& ch : node.children) {
    if (ch.is_text()) {
      if (dom::trim(ch.text).empty()) continue;
      if (parent_keeps_text) target.push_back(ch);
      continue;
    }
    if (!ch.is_element()) continue;
    const auto* bid = ch.bid();
    const bool kept = bid != nullptr && keep.contains(*bid);
    const bool is_root = ch.tag == "html" || ch.tag == "body";
    if (kept || is_root) {
      Node copy = Node::element(ch.tag);
      for (const auto& a : ch.attributes) {
        if (kWebLinxAttributes.contains(a.name)) copy.attributes.push_back(a);
      }
      rebuild_weblinx(ch, true, copy.children, keep);
      target.push_back(std::move(copy));
    } else {
      rebuild_weblinx(ch, false, target, keep);
    }
  }
}

Node run_weblinx(Node root, std::string_view goal, std::string_view history) {
  remove_tags(root, {"script", "style", "noscript"});
  const auto kw = query_stems(goal, history, 2);

  std::unordered_set<std::string> keep;
  for_each_bid_element(root, [&](const Node& el) {
    const std::string& bid = *el.bid();
    if (is_interactive(el) || is_contenteditable(el) || el.tag == "title") {
      keep.insert(bid);
      return;
    }
    if (el.tag == "meta") {
      const auto* name = el.attr("name");
      if (name != nullptr && *name == "description") {
        keep.insert(bid);
        return;
      }
    }
    std::string text;
    auto add = [&](std::string_view part) {
      if (part.empty()) return;
      if (!text.empty()) text.push_back(' ');
      text += part;
    };
    for (const auto& ch : el.children) {
      if (ch.is_text()) add(dom::trim(ch.text));
    }
    for (auto a : kTextualAttributes) {
      if (const auto* v = el.attr(a)) add(*v);
    }
    if (!text.empty() && intersects(stems_of(text, 0), kw)) keep.insert(bid);
  });

  std::unordered_set<std::string> keep_final = keep;
  for_each_bid_element(root, [&](const Node& el) {
    if (keep_final.contains(*el.bid()) && keep.contains(*el.bid()) && is_contenteditable(el)) {
      collect_bids(el, keep_final);
    }
  });

  Node out = Node::document();
  // Top-level strings belong to the document node, never kept.
  rebuild_weblinx(root, false, out.children, keep_final);
  if (out.children.empty()) {
    out.children.push_back(Node::element("html", {}, {Node::element("body")}));
  }
  return out;
}

}  // namespace

dom::DomDocument run_gepa_program(const dom::DomDocument& doc, std::string_view goal,
                                  std::string_view action_history, GepaProgram program) {
  switch (program) {
    case GepaProgram::Seed: return dom::DomDocument(run_seed(doc.root(), goal, action_history));
    case GepaProgram::WorkArenaR02: return dom::DomDocument(run_workarena(doc.root(), goal, action_history));
    case GepaProgram::WebLinxR02: return dom::DomDocument(run_weblinx(doc.root(), goal, action_history));
  }
  throw ConfigError("unknown pruning program");
}

}  // namespace obsr::reduce
