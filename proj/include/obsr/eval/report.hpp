#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obsr/eval/coverage.hpp"
#include "obsr/eval/stats.hpp"

namespace obsr::eval {

using ExternalScores = std::map<std::string, double>;

// JSON object of method label -> number, or -> array of numbers (one per
// policy model). Arrays are averaged unless `model_index` picks one entry.
// Throws ConfigError.
ExternalScores read_scores(const std::string& path, std::optional<std::size_t> model_index = std::nullopt);

nlohmann::json to_json(const MethodResult& result);
MethodResult method_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorrelationReport& report);

struct EvalReport {
  std::vector<MethodResult> methods;
  std::optional<CorrelationReport> correlation;
  std::vector<std::string> warnings;
};

// Correlates coverage with the external scores over the scored methods, and
// partially with mean RR as the control. Too few methods or degenerate inputs
// leave the section empty and add a warning.
void attach_correlations(EvalReport& report, const ExternalScores& scores);

// {"methods": [...], "correlation": {...}, "warnings": [...]}
nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

// Tab-separated, one row per method: method, coverage, rr, wall_time_mean,
// instances, failures.
std::string report_table(const std::vector<MethodResult>& methods);

}  // namespace obsr::eval
