#include "obsr/reduce/reducers.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "obsr/error.hpp"
#include "obsr/reduce/prompts.hpp"
#include "obsr/reduce/prune4web.hpp"
#include "obsr/reduce/retrieval.hpp"
#include "obsr/reduce/tree_prune.hpp"

namespace obsr::reduce {

namespace {

std::size_t require_k(const ReductionRequest& req, std::string_view method) {
  if (!req.k) throw MissingK(std::string(method));
  return *req.k;
}

// Uniform integer in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

// Known bids only, first occurrence kept.
std::vector<std::string> known_unique(const dom::DomDocument& doc, const std::vector<std::string>& bids) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& b : bids) {
    if (doc.has_bid(b) && seen.insert(b).second) out.push_back(b);
  }
  return out;
}

}  // namespace

dom::DomDocument reduce_original(const ReductionRequest& req) { return req.doc; }

dom::DomDocument reduce_random(const ReductionRequest& req, std::uint64_t seed) {
  const std::size_t k = require_k(req, "random");
  std::vector<std::string> bids = req.doc.bids();
  const std::size_t take = std::min(k, bids.size());
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + bounded(rng, bids.size() - i);
    std::swap(bids[i], bids[j]);
  }
  bids.resize(take);
  return tree_prune(req.doc, bids);
}

std::vector<std::string> heuristic_axtree_bids(const dom::DomDocument& doc) {
  static const std::set<std::string, std::less<>> interactive = {"input", "button", "select", "textarea",
                                                                 "a",     "label",  "option"};
  std::vector<std::string> out;
  for (const auto& bid : doc.bids()) {
    const auto& el = doc.at(bid);
    if (interactive.contains(el.tag) || el.has_attr("role") || el.has_attr("aria-label") ||
        el.has_attr("tabindex")) {
      out.push_back(bid);
    }
  }
  return out;
}

dom::DomDocument reduce_axtree(const ReductionRequest& req,
                               const std::optional<std::vector<std::string>>& allowed_bids) {
  std::vector<std::string> allowed;
  if (allowed_bids) {
    allowed = *allowed_bids;
  } else if (req.axtree_bids) {
    allowed = *req.axtree_bids;
  } else {
    allowed = heuristic_axtree_bids(req.doc);
  }
  return tree_prune(req.doc, known_unique(req.doc, allowed), TreePruneConfig::axtree());
}

dom::DomDocument reduce_dmr_bm25(const ReductionRequest& req) {
  const std::size_t k = require_k(req, "dmr-bm25");
  const auto scored = bm25_scores(req.doc, build_query(req.goal, req.action_history));
  return tree_prune(req.doc, top_k(scored, k));
}

dom::DomDocument reduce_dmr_dense(const ReductionRequest& req, const EmbeddingProvider& embedder) {
  const std::size_t k = require_k(req, "dmr-dense");
  const auto scored = dense_scores(req.doc, build_query(req.goal, req.action_history), embedder);
  return tree_prune(req.doc, top_k(scored, k));
}

dom::DomDocument reduce_dmr_querygen(const ReductionRequest& req, const TextCompletionProvider& llm,
                                     const EmbeddingProvider& embedder) {
  const std::size_t k = require_k(req, "dmr-querygen");
  const auto query = parse_querygen_response(llm.complete(build_querygen_prompt(req.goal, req.action_history)));
  return tree_prune(req.doc, top_k(dense_scores(req.doc, query, embedder), k));
}

dom::DomDocument reduce_focusagent(const ReductionRequest& req, const TextCompletionProvider& llm) {
  const std::size_t k = require_k(req, "focusagent");
  const auto prompt = build_focusagent_prompt(req.goal, req.action_history, dom::serialize(req.doc), k);
  const auto bids = parse_focusagent_response(llm.complete(prompt));
  return tree_prune(req.doc, known_unique(req.doc, bids));
}

dom::DomDocument reduce_prune4web(const ReductionRequest& req, const KeywordWeights& weights) {
  const std::size_t k = require_k(req, "prune4web");
  std::vector<ScoredBid> scored;
  scored.reserve(req.doc.bids().size());
  for (const auto& bid : req.doc.bids()) scored.push_back({bid, prune4web_score(req.doc.at(bid), weights)});
  return tree_prune(req.doc, top_k(scored, k));
}

dom::DomDocument reduce_prune4web_pipeline(const ReductionRequest& req, const TextCompletionProvider& llm) {
  require_k(req, "prune4web");
  const auto plan = llm.complete(
      build_planner_prompt(req.goal, req.action_history, kDefaultActionSpace, req.screenshot_ref));
  const auto weights = parse_filter_response(llm.complete(build_filter_prompt(plan)));
  return reduce_prune4web(req, weights);
}

dom::DomDocument reduce_gepa_program(const ReductionRequest& req, GepaProgram program) {
  return run_gepa_program(req.doc, req.goal, join_history(req.action_history), program);
}

// ---------------------------------------------------------------------------
// Method specs and the registry
// ---------------------------------------------------------------------------

namespace {

std::uint64_t parse_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || p != end) {
    throw ConfigError("parameter '" + std::string(key) + "' expects a non-negative integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

}  // namespace

MethodSpec MethodSpec::parse(std::string_view text) {
  MethodSpec spec;
  const auto colon = text.find(':');
  spec.method_id = std::string(dom::trim(text.substr(0, colon)));
  if (spec.method_id.empty()) throw ConfigError("empty method id");
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = dom::trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("method parameter '" + std::string(item) + "' lacks '='");
    const auto key = dom::trim(item.substr(0, eq));
    const auto value = dom::trim(item.substr(eq + 1));
    if (key == "k") {
      const auto k = parse_uint(key, value);
      if (k == 0) throw ConfigError("k must be positive");
      spec.k = static_cast<std::size_t>(k);
    } else if (key == "seed") {
      spec.seed = parse_uint(key, value);
    } else if (key == "program") {
      spec.program = std::string(value);
    } else {
      spec.params[std::string(key)] = std::string(value);
    }
  }
  return spec;
}

std::string MethodSpec::label() const {
  std::vector<std::string> parts;
  if (k) parts.push_back("k=" + std::to_string(*k));
  if (program) parts.push_back("program=" + *program);
  if (method_id == "random" || seed != 0) parts.push_back("seed=" + std::to_string(seed));
  for (const auto& [key, value] : params) parts.push_back(key + "=" + value);
  std::string out = method_id;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += i == 0 ? ":" : ",";
    out += parts[i];
  }
  return out;
}

const std::vector<std::string>& registered_methods() {
  static const std::vector<std::string> ids = {"original",     "random",     "axtree",    "dmr-bm25", "dmr-dense",
                                               "dmr-querygen", "focusagent", "prune4web", "gepa"};
  return ids;
}

namespace {

KeywordWeights load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open keyword weights file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    // Either a bare object or a filter answer payload.
    auto j = nlohmann::ordered_json::parse(buf.str());
    if (j.contains("keyword_weights")) j = j["keyword_weights"];
    KeywordWeights out;
    for (const auto& [kw, w] : j.items()) {
      if (!w.is_number() || w.get<double>() <= 0) throw ConfigError("weight of '" + kw + "' must be positive");
      out.emplace_back(kw, w.get<double>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid keyword weights file " + path + ": " + e.what());
  }
}

template <typename T>
std::shared_ptr<const T> need(const std::shared_ptr<const T>& p, const std::string& method, const char* what) {
  if (!p) throw ConfigError("method '" + method + "' needs " + what + " provider");
  return p;
}

class SpecReducer final : public Reducer {
 public:
  SpecReducer(std::string id, std::function<dom::DomDocument(const ReductionRequest&)> fn, std::optional<std::size_t> k)
      : id_(std::move(id)), fn_(std::move(fn)), k_(k) {}
  std::string_view method_id() const noexcept override { return id_; }
  dom::DomDocument reduce(const ReductionRequest& req) const override {
    if (k_ && !req.k) {
      ReductionRequest with_k = req;
      with_k.k = k_;
      return fn_(with_k);
    }
    return fn_(req);
  }

 private:
  std::string id_;
  std::function<dom::DomDocument(const ReductionRequest&)> fn_;
  std::optional<std::size_t> k_;
};

}  // namespace

std::unique_ptr<Reducer> make_reducer(const MethodSpec& spec, const ProviderSet& providers) {
  const std::string& id = spec.method_id;
  std::function<dom::DomDocument(const ReductionRequest&)> fn;
  if (id == "original") {
    fn = reduce_original;
  } else if (id == "random") {
    fn = [seed = spec.seed](const ReductionRequest& r) { return reduce_random(r, seed); };
  } else if (id == "axtree") {
    fn = [](const ReductionRequest& r) { return reduce_axtree(r); };
  } else if (id == "dmr-bm25") {
    fn = reduce_dmr_bm25;
  } else if (id == "dmr-dense") {
    auto emb = need(providers.embedder, id, "an embedding");
    fn = [emb](const ReductionRequest& r) { return reduce_dmr_dense(r, *emb); };
  } else if (id == "dmr-querygen") {
    auto emb = need(providers.embedder, id, "an embedding");
    auto llm = need(providers.completion, id, "a completion");
    fn = [emb, llm](const ReductionRequest& r) { return reduce_dmr_querygen(r, *llm, *emb); };
  } else if (id == "focusagent") {
    auto llm = need(providers.completion, id, "a completion");
    fn = [llm](const ReductionRequest& r) { return reduce_focusagent(r, *llm); };
  } else if (id == "prune4web") {
    if (auto it = spec.params.find("weights"); it != spec.params.end()) {
      fn = [w = load_weights(it->second)](const ReductionRequest& r) { return reduce_prune4web(r, w); };
    } else {
      auto llm = need(providers.completion, id, "a completion");
      fn = [llm](const ReductionRequest& r) { return reduce_prune4web_pipeline(r, *llm); };
    }
  } else if (id == "gepa") {
    if (!spec.program) throw ConfigError("method 'gepa' needs program=seed|workarena_r02|weblinx_r02");
    const auto program = parse_gepa_program(*spec.program);
    fn = [program](const ReductionRequest& r) { return reduce_gepa_program(r, program); };
  } else {
    throw ConfigError("unknown method '" + id + "'");
  }
  return std::make_unique<SpecReducer>(id, std::move(fn), spec.k);
}

}  // namespace obsr::reduce
