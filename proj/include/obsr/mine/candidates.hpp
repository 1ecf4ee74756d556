#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obsr/dom/ablation.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/reduce/providers.hpp"

namespace obsr::mine {

enum class CandidateSource { SelfReport, Bm25TopK, DenseTopK, DomAdjacent };

std::string_view to_string(CandidateSource source) noexcept;
// Throws ConfigError.
CandidateSource parse_candidate_source(std::string_view text);

struct CandidateSet {
  std::string instance_id;
  dom::DomDocument doc;
  dom::RefList refs;  // canonical order
  std::map<std::string, CandidateSource> sources;  // keyed by ElementRef::to_string()

  // Adds a ref unless present; the first source sticks. Returns true if added.
  bool add(const dom::ElementRef& ref, CandidateSource source);
};

// Keeps only the refs naming information present in the document.
CandidateSet make_candidate_set(std::string instance_id, dom::DomDocument doc, const dom::RefList& reported,
                                CandidateSource source = CandidateSource::SelfReport);

struct ExpansionOptions {
  std::size_t retrieval_k = 10;
  std::size_t max_neighbors = 10;
  bool use_dense = true;
  // Element the failing action targeted; its neighbors join the set.
  std::optional<std::string> action_target;
};

// Bid elements within two levels: parent, children, siblings, grandparent,
// in that order, at most `cap`. Throws UnknownBid.
std::vector<std::string> structural_neighbors(const dom::DomDocument& doc, std::string_view bid, std::size_t cap);

// Base refs plus BM25 and dense top-k bids and the action target's structural
// neighbors, all added as tag refs.
CandidateSet expand_candidates(const CandidateSet& base, std::string_view goal,
                               const std::vector<std::string>& history,
                               const reduce::EmbeddingProvider* embedder, const ExpansionOptions& options = {});

}  // namespace obsr::mine
