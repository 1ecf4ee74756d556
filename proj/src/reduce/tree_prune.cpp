#include "obsr/reduce/tree_prune.hpp"

#include <unordered_set>

namespace obsr::reduce {

using dom::Node;
using dom::NodePath;

std::string join_history(const std::vector<std::string>& history) {
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += history[i];
  }
  return out;
}

namespace {

using Keep = std::unordered_set<const Node*>;

std::vector<const Node*> element_children(const Node& n) {
  std::vector<const Node*> out;
  for (const auto& c : n.children) {
    if (c.is_element()) out.push_back(&c);
  }
  return out;
}

void keep_descendants(const Node& n, std::size_t depth_left, std::size_t max_children, Keep& keep) {
  if (depth_left == 0) return;
  auto kids = element_children(n);
  if (kids.size() > max_children) kids.resize(max_children);
  for (const Node* c : kids) {
    keep.insert(c);
    keep_descendants(*c, depth_left - 1, max_children, keep);
  }
}

void keep_skeleton(const Node& n, Keep& keep) {
  for (const auto& c : n.children) {
    if (!c.is_element()) continue;
    if (c.tag == "html" || c.tag == "body") keep.insert(&c);
    keep_skeleton(c, keep);
  }
}

void rebuild(const Node& n, bool parent_kept, const Keep& keep, std::vector<Node>& out) {
  if (n.is_text()) {
    if (parent_kept) out.push_back(n);
    return;
  }
  if (!n.is_element()) return;
  if (keep.contains(&n)) {
    Node copy = Node::element(n.tag, n.attributes);
    for (const auto& c : n.children) rebuild(c, true, keep, copy.children);
    out.push_back(std::move(copy));
  } else {
    for (const auto& c : n.children) rebuild(c, false, keep, out);
  }
}

}  // namespace

dom::DomDocument tree_prune(const dom::DomDocument& doc, std::span<const std::string> selected_bids,
                            const TreePruneConfig& config) {
  const Node& root = doc.root();
  Keep keep;
  keep_skeleton(root, keep);
  for (const auto& bid : selected_bids) {
    const NodePath* path = doc.path_of(bid);
    if (path == nullptr) throw UnknownBid(bid);
    const Node* parent = nullptr;
    const Node* cur = &root;
    for (auto i : *path) {
      parent = cur;
      cur = &cur->children[i];
      keep.insert(cur);
    }
    keep_descendants(*cur, config.max_descendant_depth, config.max_children_per_node, keep);
    if (parent != nullptr && config.max_sibling > 0) {
      auto sibs = element_children(*parent);
      std::size_t idx = 0;
      while (sibs[idx] != cur) ++idx;
      std::size_t lo = idx >= config.max_sibling ? idx - config.max_sibling : 0;
      std::size_t hi = std::min(sibs.size() - 1, idx + config.max_sibling);
      for (std::size_t j = lo; j <= hi; ++j) keep.insert(sibs[j]);
    }
  }
  Node out = Node::document();
  for (const auto& c : root.children) rebuild(c, true, keep, out.children);
  return dom::DomDocument(std::move(out));
}

}  // namespace obsr::reduce
