#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obsr/dom/document.hpp"
#include "obsr/reduce/gepa.hpp"
#include "obsr/reduce/providers.hpp"
#include "obsr/reduce/request.hpp"

namespace obsr::reduce {

dom::DomDocument reduce_original(const ReductionRequest& req);

// Uniform sample of min(k, #bids) bids without replacement, then tree_prune.
// Throws MissingK.
dom::DomDocument reduce_random(const ReductionRequest& req, std::uint64_t seed);

// Interactive tags plus elements carrying role, aria-label or tabindex.
std::vector<std::string> heuristic_axtree_bids(const dom::DomDocument& doc);

// allowed ∩ bids, pruned with the accessibility-tree configuration. Falls back
// to req.axtree_bids, then to the heuristic extractor.
dom::DomDocument reduce_axtree(const ReductionRequest& req,
                               const std::optional<std::vector<std::string>>& allowed_bids = std::nullopt);

dom::DomDocument reduce_dmr_bm25(const ReductionRequest& req);
dom::DomDocument reduce_dmr_dense(const ReductionRequest& req, const EmbeddingProvider& embedder);
// Generates the retrieval query with an LLM, then ranks densely.
dom::DomDocument reduce_dmr_querygen(const ReductionRequest& req, const TextCompletionProvider& llm,
                                     const EmbeddingProvider& embedder);
dom::DomDocument reduce_focusagent(const ReductionRequest& req, const TextCompletionProvider& llm);
dom::DomDocument reduce_prune4web(const ReductionRequest& req, const KeywordWeights& weights);
// Planner then filter, then keyword scoring.
dom::DomDocument reduce_prune4web_pipeline(const ReductionRequest& req, const TextCompletionProvider& llm);
dom::DomDocument reduce_gepa_program(const ReductionRequest& req, GepaProgram program);

class Reducer {
 public:
  virtual ~Reducer() = default;
  virtual std::string_view method_id() const noexcept = 0;
  // Pure function of the request and the reducer's configuration.
  virtual dom::DomDocument reduce(const ReductionRequest& req) const = 0;
};

// A method and its parameters, written `id[:key=value,...]`, e.g.
// `random:k=10,seed=7` or `gepa:program=seed`.
struct MethodSpec {
  std::string method_id;
  std::optional<std::size_t> k;
  std::optional<std::string> program;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;

  // Throws ConfigError.
  static MethodSpec parse(std::string_view text);
  // Canonical `id[:k=..,program=..,seed=..,<params>]`.
  std::string label() const;
};

const std::vector<std::string>& registered_methods();

// Throws ConfigError for unknown methods or missing providers.
std::unique_ptr<Reducer> make_reducer(const MethodSpec& spec, const ProviderSet& providers = {});

// Adapter for ad-hoc reducers (tests, ablations).
class FunctionReducer final : public Reducer {
 public:
  using Fn = std::function<dom::DomDocument(const ReductionRequest&)>;
  FunctionReducer(std::string id, Fn fn) : id_(std::move(id)), fn_(std::move(fn)) {}
  std::string_view method_id() const noexcept override { return id_; }
  dom::DomDocument reduce(const ReductionRequest& req) const override { return fn_(req); }

 private:
  std::string id_;
  Fn fn_;
};

}  // namespace obsr::reduce
