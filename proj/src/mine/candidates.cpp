#include "obsr/mine/candidates.hpp"

#include <algorithm>

#include "obsr/error.hpp"
#include "obsr/reduce/retrieval.hpp"

namespace obsr::mine {

std::string_view to_string(CandidateSource source) noexcept {
  switch (source) {
    case CandidateSource::SelfReport: return "self-report";
    case CandidateSource::Bm25TopK: return "bm25-topk";
    case CandidateSource::DenseTopK: return "dense-topk";
    case CandidateSource::DomAdjacent: return "dom-adjacent";
  }
  return "unknown";
}

CandidateSource parse_candidate_source(std::string_view text) {
  for (auto s : {CandidateSource::SelfReport, CandidateSource::Bm25TopK, CandidateSource::DenseTopK,
                 CandidateSource::DomAdjacent}) {
    if (to_string(s) == text) return s;
  }
  throw ConfigError("unknown candidate source '" + std::string(text) + "'");
}

bool CandidateSet::add(const dom::ElementRef& ref, CandidateSource source) {
  auto it = std::lower_bound(refs.begin(), refs.end(), ref);
  if (it != refs.end() && *it == ref) return false;
  refs.insert(it, ref);
  sources.emplace(ref.to_string(), source);
  return true;
}

CandidateSet make_candidate_set(std::string instance_id, dom::DomDocument doc, const dom::RefList& reported,
                                CandidateSource source) {
  CandidateSet set{std::move(instance_id), std::move(doc), {}, {}};
  for (const auto& r : reported) {
    if (dom::contains_ref(set.doc, r)) set.add(r, source);
  }
  return set;
}

std::vector<std::string> structural_neighbors(const dom::DomDocument& doc, std::string_view bid, std::size_t cap) {
  const auto* path = doc.path_of(bid);
  if (path == nullptr) throw UnknownBid(std::string(bid));
  std::vector<std::string> out;
  auto push = [&](const dom::Node& n) {
    if (out.size() >= cap || !n.is_element()) return;
    const auto* b = n.bid();
    if (b == nullptr || *b == bid || std::find(out.begin(), out.end(), *b) != out.end()) return;
    out.push_back(*b);
  };
  const auto& self = dom::node_at(doc.root(), *path);
  if (path->empty()) return out;
  dom::NodePath parent_path(path->begin(), path->end() - 1);
  const auto& parent = dom::node_at(doc.root(), parent_path);
  push(parent);
  for (const auto& c : self.children) push(c);
  for (const auto& s : parent.children) push(s);
  if (!parent_path.empty()) {
    dom::NodePath grand(parent_path.begin(), parent_path.end() - 1);
    push(dom::node_at(doc.root(), grand));
  }
  return out;
}

CandidateSet expand_candidates(const CandidateSet& base, std::string_view goal,
                               const std::vector<std::string>& history,
                               const reduce::EmbeddingProvider* embedder, const ExpansionOptions& options) {
  CandidateSet out = base;
  const auto query = reduce::build_query(goal, history);
  for (const auto& b : reduce::top_k(reduce::bm25_scores(base.doc, query), options.retrieval_k)) {
    out.add(dom::ElementRef::tag(b), CandidateSource::Bm25TopK);
  }
  if (options.use_dense) {
    if (embedder == nullptr) throw ProviderUnavailable("dense candidate expansion needs an embedding provider");
    for (const auto& b : reduce::top_k(reduce::dense_scores(base.doc, query, *embedder), options.retrieval_k)) {
      out.add(dom::ElementRef::tag(b), CandidateSource::DenseTopK);
    }
  }
  if (options.action_target) {
    for (const auto& b : structural_neighbors(base.doc, *options.action_target, options.max_neighbors)) {
      out.add(dom::ElementRef::tag(b), CandidateSource::DomAdjacent);
    }
  }
  return out;
}

}  // namespace obsr::mine
