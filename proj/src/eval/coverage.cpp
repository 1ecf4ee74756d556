#include "obsr/eval/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <thread>
#include <unordered_map>

#include "obsr/error.hpp"
#include "obsr/eval/stats.hpp"
#include "obsr/mine/partition.hpp"

namespace obsr::eval {

double MethodResult::coverage() const {
  if (per_instance.empty()) return 0.0;
  const auto hits = std::count_if(per_instance.begin(), per_instance.end(), [](const auto& r) { return r.covered; });
  return static_cast<double>(hits) / static_cast<double>(per_instance.size());
}

double MethodResult::mean_rr() const {
  std::vector<double> v;
  for (const auto& r : per_instance) v.push_back(r.rr);
  return mean(v);
}

double MethodResult::mean_wall_time() const {
  std::vector<double> v;
  for (const auto& r : per_instance) v.push_back(r.wall_time);
  return mean(v);
}

std::size_t MethodResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(per_instance.begin(), per_instance.end(), [](const auto& r) { return r.error.has_value(); }));
}

double reduction_ratio(const dom::DomDocument& reduced, const dom::DomDocument& original) {
  const auto orig = dom::char_length(original);
  if (orig == 0) return 1.0;
  return std::min(1.0, static_cast<double>(dom::char_length(reduced)) / static_cast<double>(orig));
}

namespace {

InstanceResult evaluate_instance(const reduce::Reducer& reducer, const mine::MfsInstance& inst,
                                 const CoverageOptions& options) {
  InstanceResult out;
  out.instance_id = inst.instance_id;
  try {
    const auto doc = inst.parse();
    reduce::ReductionRequest req{doc, inst.goal, inst.action_history, std::nullopt, std::nullopt, std::nullopt};
    const auto start = std::chrono::steady_clock::now();
    auto reduced = reducer.reduce(req);
    const auto stop = std::chrono::steady_clock::now();
    if (options.measure_time) out.wall_time = std::chrono::duration<double>(stop - start).count();
    out.rr = reduction_ratio(reduced, doc);
    if (options.post_process) reduced = options.post_process(reduced);
    out.covered = dom::contains_all(reduced, inst.mfs);
  } catch (const std::exception& e) {
    out.covered = false;
    out.rr = 1.0;
    out.error = e.what();
  }
  return out;
}

}  // namespace

MethodResult evaluate_coverage(const reduce::Reducer& reducer, const std::vector<mine::MfsInstance>& dataset,
                               const CoverageOptions& options) {
  if (dataset.empty()) throw PreconditionViolated("coverage needs a non-empty dataset");
  MethodResult result;
  result.method_id = std::string(reducer.method_id());
  result.per_instance.resize(dataset.size());
  const std::size_t workers = std::clamp<std::size_t>(options.jobs, 1, dataset.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < dataset.size(); i = next++) {
      result.per_instance[i] = evaluate_instance(reducer, dataset[i], options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return result;
}

MethodResult evaluate_method(const reduce::MethodSpec& spec, const reduce::Reducer& reducer,
                             const std::vector<mine::MfsInstance>& dataset, const CoverageOptions& options) {
  auto result = evaluate_coverage(reducer, dataset, options);
  result.method_id = spec.label();
  result.config["method"] = spec.method_id;
  if (spec.k) result.config["k"] = std::to_string(*spec.k);
  if (spec.program) result.config["program"] = *spec.program;
  result.config["seed"] = std::to_string(spec.seed);
  for (const auto& [key, value] : spec.params) result.config[key] = value;
  return result;
}

int gepa_objective(const dom::DomDocument& reduced, const dom::DomDocument& original, const dom::RefList& mfs,
                   double r_target) {
  if (!(r_target > 0.0 && r_target <= 1.0)) throw PreconditionViolated("r_target must lie in (0, 1]");
  const auto orig = dom::char_length(original);
  const double ratio = orig == 0 ? 1.0 : static_cast<double>(dom::char_length(reduced)) / static_cast<double>(orig);
  return ratio <= r_target && dom::contains_all(reduced, mfs) ? 1 : 0;
}

AblationTarget AblationTarget::parse(std::string_view text) {
  if (text == "TEXT" || text == "@text") return {Kind::Text, ""};
  if (text.starts_with("tag:") && text.size() > 4) return {Kind::Tag, dom::to_lower(text.substr(4))};
  if (text.starts_with("attr:") && text.size() > 5) return {Kind::Attribute, dom::to_lower(text.substr(5))};
  throw ConfigError("invalid ablation target '" + std::string(text) + "' (expected tag:<name>, attr:<name> or TEXT)");
}

std::string AblationTarget::to_string() const {
  switch (kind) {
    case Kind::Tag: return "tag:" + name;
    case Kind::Attribute: return "attr:" + name;
    case Kind::Text: return "TEXT";
  }
  return {};
}

namespace {

void strip_node(dom::Node& n, const AblationTarget& target) {
  if (n.is_element()) {
    switch (target.kind) {
      case AblationTarget::Kind::Tag:
        if (n.tag == target.name) n.tag = std::string(dom::kUnknownTag);
        break;
      case AblationTarget::Kind::Attribute:
        if (target.name != "bid") n.remove_attr(target.name);
        break;
      case AblationTarget::Kind::Text:
        std::erase_if(n.children, [](const dom::Node& c) { return c.is_text(); });
        break;
    }
  } else if (n.kind == dom::Node::Kind::Document && target.kind == AblationTarget::Kind::Text) {
    std::erase_if(n.children, [](const dom::Node& c) { return c.is_text(); });
  }
  for (auto& c : n.children) strip_node(c, target);
}

}  // namespace

dom::DomDocument strip_element_type(const dom::DomDocument& doc, const AblationTarget& target) {
  dom::Node root = doc.root();
  strip_node(root, target);
  return dom::DomDocument(std::move(root));
}

AblationResult ablate_element_type(const reduce::Reducer& reducer, const std::vector<mine::MfsInstance>& dataset,
                                   const AblationTarget& target, std::size_t jobs) {
  CoverageOptions base;
  base.jobs = jobs;
  base.measure_time = false;
  CoverageOptions ablated = base;
  ablated.post_process = [target](const dom::DomDocument& d) { return strip_element_type(d, target); };
  AblationResult out;
  out.baseline_coverage = evaluate_coverage(reducer, dataset, base).coverage();
  out.ablated_coverage = evaluate_coverage(reducer, dataset, ablated).coverage();
  out.drop = (out.baseline_coverage - out.ablated_coverage) * 100.0;
  return out;
}

SubsampleResult subsample_rank_correlation(const std::vector<MethodResult>& results,
                                           const std::map<std::string, double>& external_scores, std::size_t n,
                                           std::size_t trials, std::uint64_t seed) {
  std::vector<const MethodResult*> scored;
  std::vector<double> scores;
  for (const auto& r : results) {
    if (auto it = external_scores.find(r.method_id); it != external_scores.end()) {
      scored.push_back(&r);
      scores.push_back(it->second);
    }
  }
  if (scored.size() < 3) throw InsufficientData("rank correlation needs at least 3 scored methods");
  if (trials == 0) throw PreconditionViolated("trials must be at least 1");

  std::vector<std::string> ids;
  for (const auto& inst : scored.front()->per_instance) ids.push_back(inst.instance_id);
  if (n == 0 || n > ids.size()) throw PreconditionViolated("sample size must lie in [1, dataset size]");

  std::vector<std::unordered_map<std::string, bool>> covered(scored.size());
  for (std::size_t m = 0; m < scored.size(); ++m) {
    for (const auto& inst : scored[m]->per_instance) covered[m][inst.instance_id] = inst.covered;
  }

  std::mt19937_64 rng(seed);
  std::vector<double> rhos;
  for (std::size_t t = 0; t < trials; ++t) {
    auto pool = ids;
    for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + mine::uniform_below(rng, pool.size() - i)]);
    std::vector<double> cov(scored.size(), 0.0);
    for (std::size_t m = 0; m < scored.size(); ++m) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        auto it = covered[m].find(pool[i]);
        if (it != covered[m].end() && it->second) ++hits;
      }
      cov[m] = static_cast<double>(hits) / static_cast<double>(n);
    }
    try {
      rhos.push_back(spearman(cov, scores));
    } catch (const DegenerateInput&) {
      // All coverages equal on this sample; rho is undefined.
    }
  }
  if (rhos.empty()) throw DegenerateInput("every subsample had constant coverage or constant scores");
  return {mean(rhos), stddev(rhos), rhos.size()};
}

}  // namespace obsr::eval
