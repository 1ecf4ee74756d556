#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obsr/dom/document.hpp"

namespace obsr::reduce {

struct ReductionRequest {
  dom::DomDocument doc;
  std::string goal;
  std::vector<std::string> action_history;
  // Selection budget; required by the k-parameterized methods.
  std::optional<std::size_t> k;
  // Opaque image reference handed to vision-capable providers.
  std::optional<std::string> screenshot_ref;
  // Accessibility-tree bid allowlist, when the caller has one.
  std::optional<std::vector<std::string>> axtree_bids;
};

struct TreePruneConfig {
  std::size_t max_descendant_depth = 5;
  std::size_t max_children_per_node = 50;
  std::size_t max_sibling = 3;

  static constexpr TreePruneConfig standard() { return {5, 50, 3}; }
  // Stricter variant used after accessibility-tree selection.
  static constexpr TreePruneConfig axtree() { return {1, 50, 0}; }
};

// Keyword -> positive weight, in the order the keywords were produced.
using KeywordWeights = std::vector<std::pair<std::string, double>>;

// Newline-joined history, the form the pruning programs consume.
std::string join_history(const std::vector<std::string>& history);

}  // namespace obsr::reduce
