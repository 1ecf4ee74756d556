#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "obsr/dom/document.hpp"
#include "obsr/reduce/providers.hpp"

namespace obsr::reduce {

// "Goal: ...", a blank line, "Previous Actions:", then "- Step <i>: <action>"
// per history entry (zero-based).
std::string build_query(std::string_view goal, const std::vector<std::string>& action_history);

// Absolute tag path; `tag[n]` (1-based) only where the tag repeats among
// element siblings.
std::string xpath_of(const dom::DomDocument& doc, const dom::NodePath& path);

inline constexpr std::size_t kReprTextLimit = 200;
inline constexpr std::size_t kReprAttributeLimit = 100;
inline constexpr std::size_t kReprChildLimit = 5;

// The attributes an element representation may list, in listing order.
const std::vector<std::string>& repr_attributes();

// Six-line structured text for one bid-carrying element:
//   [[tag]] / [[xpath]] / [[bid]] / [[text]] / [[attributes]] / [[children]]
// Throws UnknownBid.
std::string element_repr(const dom::DomDocument& doc, std::string_view bid);

struct ScoredBid {
  std::string bid;
  double score = 0.0;
};

// BM25 (k1 = 1.5, b = 0.75) of every element representation against the
// query, in document order.
std::vector<ScoredBid> bm25_scores(const dom::DomDocument& doc, std::string_view query);

// Cosine similarity of each element representation to the query.
std::vector<ScoredBid> dense_scores(const dom::DomDocument& doc, std::string_view query,
                                    const EmbeddingProvider& embedder);

// Highest k scores; equal scores keep document order.
std::vector<std::string> top_k(const std::vector<ScoredBid>& scored, std::size_t k);

}  // namespace obsr::reduce
