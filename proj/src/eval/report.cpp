#include "obsr/eval/report.hpp"

#include <cstdio>
#include <fstream>

#include "obsr/error.hpp"

namespace obsr::eval {

using nlohmann::json;

namespace {

// Exact key first, then keys that parse to the same canonical method label.
std::optional<double> find_score(const ExternalScores& scores, const std::string& method_id) {
  if (auto it = scores.find(method_id); it != scores.end()) return it->second;
  for (const auto& [key, value] : scores) {
    try {
      if (reduce::MethodSpec::parse(key).label() == method_id) return value;
    } catch (const ConfigError&) {
    }
  }
  return std::nullopt;
}

}  // namespace

ExternalScores read_scores(const std::string& path, std::optional<std::size_t> model_index) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scores file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid scores file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("scores file must hold a JSON object of method -> score");
  ExternalScores out;
  for (const auto& [method, value] : j.items()) {
    if (value.is_number()) {
      out[method] = value.get<double>();
      continue;
    }
    if (!value.is_array() || value.empty()) throw ConfigError("score of '" + method + "' must be a number or a non-empty array");
    std::vector<double> v;
    for (const auto& x : value) {
      if (!x.is_number()) throw ConfigError("score of '" + method + "' holds a non-number");
      v.push_back(x.get<double>());
    }
    if (model_index) {
      if (*model_index >= v.size()) throw ConfigError("score of '" + method + "' has no entry " + std::to_string(*model_index));
      out[method] = v[*model_index];
    } else {
      out[method] = mean(v);
    }
  }
  return out;
}

json to_json(const MethodResult& result) {
  json per = json::array();
  for (const auto& r : result.per_instance) {
    json item{{"instance_id", r.instance_id}, {"covered", r.covered}, {"rr", r.rr}, {"wall_time", r.wall_time}};
    if (r.error) item["error"] = *r.error;
    per.push_back(std::move(item));
  }
  return json{{"method_id", result.method_id},
              {"config", result.config},
              {"coverage", result.coverage()},
              {"rr", result.mean_rr()},
              {"wall_time_mean", result.mean_wall_time()},
              {"failures", result.failures()},
              {"per_instance", per}};
}

MethodResult method_result_from_json(const json& j) {
  MethodResult r;
  r.method_id = j.at("method_id").get<std::string>();
  if (j.contains("config")) r.config = j.at("config").get<std::map<std::string, std::string>>();
  for (const auto& item : j.at("per_instance")) {
    InstanceResult inst;
    inst.instance_id = item.at("instance_id").get<std::string>();
    inst.covered = item.at("covered").get<bool>();
    inst.rr = item.at("rr").get<double>();
    inst.wall_time = item.value("wall_time", 0.0);
    if (item.contains("error")) inst.error = item.at("error").get<std::string>();
    r.per_instance.push_back(std::move(inst));
  }
  return r;
}

json to_json(const CorrelationReport& report) {
  json j{{"n_points", report.n_points},
         {"pearson_r", report.pearson_r},
         {"spearman_rho", report.spearman_rho},
         {"kendall_tau", report.kendall_tau}};
  if (report.partial_pearson_r) {
    j["partial_pearson_r"] = *report.partial_pearson_r;
    j["partial_spearman_rho"] = *report.partial_spearman_rho;
    j["partial_kendall_tau"] = *report.partial_kendall_tau;
  }
  return j;
}

void attach_correlations(EvalReport& report, const ExternalScores& scores) {
  std::vector<double> coverage;
  std::vector<double> success;
  std::vector<double> rr;
  for (const auto& m : report.methods) {
    const auto score = find_score(scores, m.method_id);
    if (!score) {
      report.warnings.push_back("no external score for method " + m.method_id);
      continue;
    }
    coverage.push_back(m.coverage());
    success.push_back(*score);
    rr.push_back(m.mean_rr());
  }
  if (coverage.size() < 3) {
    report.warnings.push_back("correlation omitted: fewer than 3 methods have external scores");
    return;
  }
  try {
    report.correlation = correlations(coverage, success);
  } catch (const Error& e) {
    report.warnings.push_back(std::string("correlation omitted: ") + e.what());
    return;
  }
  if (coverage.size() < 4) {
    report.warnings.push_back("partial correlation omitted: fewer than 4 scored methods");
    return;
  }
  try {
    const auto partial = partial_correlations(coverage, success, rr);
    report.correlation->partial_pearson_r = partial.partial_pearson_r;
    report.correlation->partial_spearman_rho = partial.partial_spearman_rho;
    report.correlation->partial_kendall_tau = partial.partial_kendall_tau;
  } catch (const Error& e) {
    report.warnings.push_back(std::string("partial correlation omitted: ") + e.what());
  }
}

json to_json(const EvalReport& report) {
  json methods = json::array();
  for (const auto& m : report.methods) methods.push_back(to_json(m));
  json j{{"methods", methods}};
  if (report.correlation) j["correlation"] = to_json(*report.correlation);
  j["warnings"] = report.warnings;
  return j;
}

EvalReport eval_report_from_json(const json& j) {
  EvalReport r;
  for (const auto& m : j.at("methods")) r.methods.push_back(method_result_from_json(m));
  if (j.contains("correlation")) {
    const auto& c = j.at("correlation");
    CorrelationReport cr;
    cr.n_points = c.at("n_points").get<std::size_t>();
    cr.pearson_r = c.at("pearson_r").get<double>();
    cr.spearman_rho = c.at("spearman_rho").get<double>();
    cr.kendall_tau = c.at("kendall_tau").get<double>();
    if (c.contains("partial_pearson_r")) {
      cr.partial_pearson_r = c.at("partial_pearson_r").get<double>();
      cr.partial_spearman_rho = c.at("partial_spearman_rho").get<double>();
      cr.partial_kendall_tau = c.at("partial_kendall_tau").get<double>();
    }
    r.correlation = cr;
  }
  if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string report_table(const std::vector<MethodResult>& methods) {
  std::string out = "method\tcoverage\trr\twall_time_mean\tinstances\tfailures\n";
  char buf[160];
  for (const auto& m : methods) {
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t%.6f\t%zu\t%zu\n", m.coverage(), m.mean_rr(), m.mean_wall_time(),
                  m.per_instance.size(), m.failures());
    out += m.method_id + buf;
  }
  return out;
}

}  // namespace obsr::eval
