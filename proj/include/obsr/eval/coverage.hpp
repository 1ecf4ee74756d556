#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obsr/dom/ablation.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/mine/dataset.hpp"
#include "obsr/reduce/reducers.hpp"

namespace obsr::eval {

struct InstanceResult {
  std::string instance_id;
  bool covered = false;
  double rr = 1.0;
  double wall_time = 0.0;  // seconds, reduce call only
  std::optional<std::string> error;
};

struct MethodResult {
  std::string method_id;
  std::map<std::string, std::string> config;
  std::vector<InstanceResult> per_instance;

  double coverage() const;
  double mean_rr() const;
  double mean_wall_time() const;
  std::size_t failures() const;
};

// Applied to each reduced document before the retention check.
using PostProcess = std::function<dom::DomDocument(const dom::DomDocument&)>;

struct CoverageOptions {
  std::size_t jobs = 1;
  PostProcess post_process;
  bool measure_time = true;
};

// Reduces every instance (in parallel with `jobs` workers) and checks full MFS
// retention. Instance failures count as uncovered with rr 1.0 and keep their
// diagnostic. Throws PreconditionViolated for an empty dataset.
MethodResult evaluate_coverage(const reduce::Reducer& reducer, const std::vector<mine::MfsInstance>& dataset,
                               const CoverageOptions& options = {});

// MethodSpec-aware variant: fills method_id with the spec label and config
// with the spec fields.
MethodResult evaluate_method(const reduce::MethodSpec& spec, const reduce::Reducer& reducer,
                             const std::vector<mine::MfsInstance>& dataset, const CoverageOptions& options = {});

// min(1, char_length(reduced) / char_length(original)).
double reduction_ratio(const dom::DomDocument& reduced, const dom::DomDocument& original);

// 1 iff the size ratio is within r_target and every MFS ref survives.
// Throws PreconditionViolated unless 0 < r_target <= 1.
int gepa_objective(const dom::DomDocument& reduced, const dom::DomDocument& original, const dom::RefList& mfs,
                   double r_target);

// An element type to strip from reduced outputs: a tag name (elements renamed
// to `unk`), an attribute name (removed everywhere), or all direct text.
struct AblationTarget {
  enum class Kind { Tag, Attribute, Text };
  Kind kind = Kind::Text;
  std::string name;

  // "tag:<name>", "attr:<name>", "TEXT" or "@text". Throws ConfigError.
  static AblationTarget parse(std::string_view text);
  std::string to_string() const;
};

dom::DomDocument strip_element_type(const dom::DomDocument& doc, const AblationTarget& target);

struct AblationResult {
  double baseline_coverage = 0.0;
  double ablated_coverage = 0.0;
  // (baseline - ablated) in percentage points.
  double drop = 0.0;
};

AblationResult ablate_element_type(const reduce::Reducer& reducer, const std::vector<mine::MfsInstance>& dataset,
                                   const AblationTarget& target, std::size_t jobs = 1);

struct SubsampleResult {
  double mean_rho = 0.0;
  double stddev_rho = 0.0;
  std::size_t trials_used = 0;  // trials whose coverages were not all equal
};

// Per trial: n instance ids drawn without replacement, coverage per method on
// the sample, Spearman rho against the external scores. Methods without a
// score are ignored. Throws InsufficientData (< 3 scored methods),
// PreconditionViolated (n out of range, trials = 0), DegenerateInput (every
// trial degenerate).
SubsampleResult subsample_rank_correlation(const std::vector<MethodResult>& results,
                                           const std::map<std::string, double>& external_scores, std::size_t n,
                                           std::size_t trials, std::uint64_t seed);

}  // namespace obsr::eval
