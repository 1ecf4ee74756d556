#include "obsr/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/error.hpp"
#include "obsr/eval/coverage.hpp"
#include "obsr/eval/report.hpp"
#include "obsr/mine/candidates.hpp"
#include "obsr/mine/dataset.hpp"
#include "obsr/mine/ddmin.hpp"
#include "obsr/mine/oracles.hpp"
#include "obsr/mine/partition.hpp"
#include "obsr/mine/simulate.hpp"
#include "obsr/reduce/reducers.hpp"

namespace obsr::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kMaxJobs = 16;

std::size_t default_jobs() {
  const auto hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, kMaxJobs);
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " is required");
  if (!fs::exists(path)) throw ConfigError(std::string(what) + " does not exist: " + path);
}

std::string registered_list() {
  std::string s;
  for (const auto& m : reduce::registered_methods()) s += (s.empty() ? "" : ", ") + m;
  return s;
}

// Method spec with command-line defaults for fields the spec text omits.
reduce::MethodSpec resolve_spec(const std::string& text, std::optional<std::size_t> k,
                                std::optional<std::string> program, std::optional<std::uint64_t> seed) {
  auto spec = reduce::MethodSpec::parse(text);
  const auto& ids = reduce::registered_methods();
  if (std::find(ids.begin(), ids.end(), spec.method_id) == ids.end()) {
    throw ConfigError("unknown method '" + spec.method_id + "'; registered methods: " + registered_list());
  }
  static const std::vector<std::string> budgeted = {"random", "dmr-bm25", "dmr-dense", "dmr-querygen", "focusagent",
                                                    "prune4web"};
  const bool takes_k = std::find(budgeted.begin(), budgeted.end(), spec.method_id) != budgeted.end();
  if (!spec.k && k && takes_k) spec.k = k;
  if (!spec.program && program && spec.method_id == "gepa") spec.program = program;
  if (seed && text.find("seed=") == std::string::npos) spec.seed = *seed;
  return spec;
}

struct Observation {
  std::string instance_id;
  reduce::ReductionRequest request;
};

std::vector<Observation> read_observations(const std::string& path, std::ostream& err, bool& had_errors) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  const std::string base_dir = fs::path(path).parent_path().string();
  std::vector<Observation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    try {
      std::string html;
      if (j.contains("html") == j.contains("html_path")) throw ConfigError("exactly one of html and html_path is required");
      if (j.contains("html")) {
        html = j.at("html").get<std::string>();
      } else {
        fs::path p = j.at("html_path").get<std::string>();
        if (p.is_relative()) p = fs::path(base_dir) / p;
        html = mine::read_text_file(p.string());
      }
      reduce::ReductionRequest req{dom::parse_html(html), j.value("goal", std::string{}),
                                   j.value("action_history", std::vector<std::string>{}),
                                   std::nullopt, std::nullopt, std::nullopt};
      if (j.contains("k")) req.k = j.at("k").get<std::size_t>();
      if (j.contains("screenshot_ref")) req.screenshot_ref = j.at("screenshot_ref").get<std::string>();
      if (j.contains("axtree_bids")) req.axtree_bids = j.at("axtree_bids").get<std::vector<std::string>>();
      out.push_back({j.at("instance_id").get<std::string>(), std::move(req)});
    } catch (const std::exception& e) {
      err << path << ":" << lineno << ": skipped: " << e.what() << "\n";
      had_errors = true;
    }
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << std::fixed << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

struct ReduceArgs {
  std::string input, out, method, provider = "fake";
  std::optional<std::size_t> k;
  std::optional<std::string> program;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = default_jobs();
  bool no_timing = false;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.input, "--input");
  if (a.method.empty()) throw ConfigError("--method is required");
  const auto spec = resolve_spec(a.method, a.k, a.program, a.seed);
  const auto providers = reduce::make_providers(a.provider);
  const auto reducer = reduce::make_reducer(spec, providers);

  bool partial = false;
  const auto observations = read_observations(a.input, err, partial);
  std::vector<json> records(observations.size());
  std::vector<std::string> errors(observations.size());
  parallel_for(observations.size(), a.jobs, [&](std::size_t i) {
    const auto& obs = observations[i];
    json rec{{"instance_id", obs.instance_id}, {"method_id", spec.label()}};
    try {
      const auto start = std::chrono::steady_clock::now();
      const auto reduced = reducer->reduce(obs.request);
      const auto stop = std::chrono::steady_clock::now();
      rec["reduced_html"] = dom::serialize(reduced);
      rec["rr"] = eval::reduction_ratio(reduced, obs.request.doc);
      rec["wall_time"] = a.no_timing ? 0.0 : std::chrono::duration<double>(stop - start).count();
    } catch (const std::exception& e) {
      rec["error"] = e.what();
      errors[i] = e.what();
    }
    records[i] = std::move(rec);
  });

  std::string body;
  for (std::size_t i = 0; i < records.size(); ++i) {
    body += records[i].dump() + "\n";
    if (!errors[i].empty()) {
      err << observations[i].instance_id << ": " << errors[i] << "\n";
      partial = true;
    }
  }
  if (a.out.empty()) {
    out << body;
  } else {
    mine::write_text_file_atomic(a.out, body);
  }
  return partial ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// mine
// ---------------------------------------------------------------------------

struct MineArgs {
  std::string input, out, stats, oracle = "simulation", partitioner = "fps", provider = "fake";
  std::uint64_t seed = 0;
  std::size_t jobs = default_jobs();
  bool expand = false;
};

int cmd_mine(const MineArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.input, "--input");
  if (a.oracle != "simulation" && a.oracle != "proxy") throw ConfigError("--oracle must be simulation or proxy");
  if (a.partitioner != "fps" && a.partitioner != "random") throw ConfigError("--partitioner must be fps or random");
  const auto records = mine::read_candidates(a.input);
  reduce::ProviderSet providers;
  if (a.oracle == "proxy" || a.expand) providers = reduce::make_providers(a.provider);
  if (a.oracle == "proxy" && !providers.completion) {
    throw ConfigError("the proxy oracle needs a completion provider (--provider canned:<file> or http)");
  }

  struct Outcome {
    std::optional<mine::MfsInstance> instance;
    json stats;
    std::string error;
  };
  std::vector<Outcome> outcomes(records.size());
  parallel_for(records.size(), a.jobs, [&](std::size_t i) {
    const auto& rec = records[i];
    Outcome& o = outcomes[i];
    o.stats = json{{"instance_id", rec.instance_id}};
    try {
      const auto doc = dom::parse_html(rec.html);
      mine::CandidateSet cands{rec.instance_id, doc, {}, {}};
      for (std::size_t r = 0; r < rec.refs.size(); ++r) {
        if (dom::contains_ref(doc, rec.refs[r])) cands.add(rec.refs[r], rec.sources[r]);
      }
      if (a.expand) {
        mine::ExpansionOptions opts;
        opts.use_dense = providers.embedder != nullptr;
        opts.action_target = rec.action_target;
        cands = mine::expand_candidates(cands, rec.goal, rec.action_history, providers.embedder.get(), opts);
      }
      std::unique_ptr<mine::Oracle> oracle;
      if (a.oracle == "simulation") {
        if (!rec.ground_truth) throw ConfigError("simulation oracle needs a ground_truth field");
        oracle = std::make_unique<mine::SimulationOracle>(*rec.ground_truth);
      } else {
        if (!rec.erroneous_action) throw ConfigError("proxy oracle needs an erroneous_action field");
        oracle = std::make_unique<mine::ProxyOracle>(doc, rec.goal, rec.action_history, *providers.completion,
                                                     *rec.erroneous_action);
      }
      auto partitioner = mine::make_partitioner(a.partitioner, doc, a.seed);
      const auto result = mine::ddmin(cands.refs, *oracle, *partitioner);
      o.instance = mine::MfsInstance{rec.instance_id, rec.benchmark,      rec.source_model, rec.goal,
                                     rec.action_history, rec.html, result.mfs, rec.step_index};
      o.stats["status"] = "ok";
      o.stats["candidates"] = cands.refs.size();
      o.stats["mfs_size"] = result.mfs.size();
      o.stats["oracle_calls"] = result.oracle_calls;
      o.stats["iterations"] = result.iterations;
    } catch (const std::exception& e) {
      o.error = e.what();
      o.stats["status"] = "skipped";
      o.stats["error"] = e.what();
      o.stats["oracle_calls"] = 0;
    }
  });

  bool partial = false;
  std::vector<mine::MfsInstance> mined;
  json stats{{"oracle", a.oracle}, {"partitioner", a.partitioner}, {"seed", a.seed}, {"instances", json::array()}};
  std::size_t total_calls = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].instance) {
      mined.push_back(std::move(*outcomes[i].instance));
      total_calls += outcomes[i].stats["oracle_calls"].get<std::size_t>();
    } else {
      err << records[i].instance_id << ": skipped: " << outcomes[i].error << "\n";
      partial = true;
    }
    stats["instances"].push_back(outcomes[i].stats);
  }
  stats["mined"] = mined.size();
  stats["skipped"] = outcomes.size() - mined.size();
  stats["total_oracle_calls"] = total_calls;

  const auto body = mine::dataset_to_jsonl(mined);
  if (a.out.empty()) {
    out << body;
  } else {
    mine::write_text_file_atomic(a.out, body);
    const std::string stats_path = a.stats.empty() ? a.out + ".stats.json" : a.stats;
    mine::write_text_file_atomic(stats_path, stats.dump(2) + "\n");
  }
  return partial ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string mfs, out, table, scores, provider = "fake";
  std::vector<std::string> methods;
  std::optional<std::size_t> k;
  std::optional<std::string> program;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> score_model;
  std::size_t jobs = default_jobs();
  bool no_timing = false;
};

std::vector<mine::MfsInstance> load_dataset(const std::string& path) {
  require_file(path, "--mfs");
  auto dataset = mine::read_dataset(path);
  if (dataset.empty()) throw ConfigError("MFS dataset is empty: " + path);
  return dataset;
}

std::string table_path_for(const std::string& out) {
  fs::path p(out);
  p.replace_extension(".tsv");
  return p.string();
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.methods.empty()) throw ConfigError("at least one --method is required");
  const auto dataset = load_dataset(a.mfs);
  std::vector<reduce::MethodSpec> specs;
  for (const auto& m : a.methods) specs.push_back(resolve_spec(m, a.k, a.program, a.seed));
  std::optional<eval::ExternalScores> scores;
  if (!a.scores.empty()) {
    require_file(a.scores, "--scores");
    scores = eval::read_scores(a.scores, a.score_model);
  }
  const auto providers = reduce::make_providers(a.provider);

  eval::EvalReport report;
  bool partial = false;
  for (const auto& spec : specs) {
    const auto reducer = reduce::make_reducer(spec, providers);
    eval::CoverageOptions opts;
    opts.jobs = a.jobs;
    opts.measure_time = !a.no_timing;
    auto result = eval::evaluate_method(spec, *reducer, dataset, opts);
    for (const auto& inst : result.per_instance) {
      if (inst.error) {
        err << result.method_id << " / " << inst.instance_id << ": " << *inst.error << "\n";
        partial = true;
      }
    }
    report.methods.push_back(std::move(result));
  }
  if (scores) eval::attach_correlations(report, *scores);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";

  const auto table = eval::report_table(report.methods);
  if (a.out.empty()) {
    out << eval::to_json(report).dump(2) << "\n";
  } else {
    mine::write_text_file_atomic(a.out, eval::to_json(report).dump(2) + "\n");
    mine::write_text_file_atomic(a.table.empty() ? table_path_for(a.out) : a.table, table);
    out << table;
  }
  return partial ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// ablate
// ---------------------------------------------------------------------------

struct AblateArgs {
  std::string mfs, out, method = "original", provider = "fake";
  std::vector<std::string> targets;
  std::optional<std::size_t> k;
  std::optional<std::string> program;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = default_jobs();
};

int cmd_ablate(const AblateArgs& a, std::ostream& out, std::ostream&) {
  if (a.targets.empty()) throw ConfigError("at least one --target is required");
  std::vector<eval::AblationTarget> targets;
  for (const auto& t : a.targets) targets.push_back(eval::AblationTarget::parse(t));
  const auto dataset = load_dataset(a.mfs);
  const auto spec = resolve_spec(a.method, a.k, a.program, a.seed);
  const auto reducer = reduce::make_reducer(spec, reduce::make_providers(a.provider));

  json rows = json::array();
  std::string table = "target\tbaseline\tablated\tdrop_pp\n";
  for (const auto& t : targets) {
    const auto r = eval::ablate_element_type(*reducer, dataset, t, a.jobs);
    rows.push_back(json{{"target", t.to_string()},
                        {"baseline_coverage", r.baseline_coverage},
                        {"ablated_coverage", r.ablated_coverage},
                        {"drop", r.drop}});
    table += t.to_string() + "\t" + format_number(r.baseline_coverage) + "\t" + format_number(r.ablated_coverage) +
             "\t" + format_number(r.drop) + "\n";
  }
  const json doc{{"method_id", spec.label()}, {"instances", dataset.size()}, {"ablations", rows}};
  if (!a.out.empty()) mine::write_text_file_atomic(a.out, doc.dump(2) + "\n");
  out << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string out;
  std::size_t trials = 50;
  std::size_t cases = 20;
  std::uint64_t seed = 0;
  mine::SyntheticSpec spec;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
  if (a.trials == 0) throw ConfigError("--trials must be at least 1");
  if (a.cases == 0) throw ConfigError("--cases must be at least 1");
  const auto& s = a.spec;
  if (s.mfs_size == 0 || s.alternatives == 0 || s.clusters < s.alternatives || s.min_leaves < s.mfs_size ||
      s.max_leaves < s.min_leaves) {
    throw ConfigError("invalid synthetic spec: need 1 <= mfs-size <= min-leaves <= max-leaves and "
                      "1 <= alternatives <= clusters");
  }
  const auto r = mine::run_partition_study(s, a.cases, a.trials, a.seed);
  std::string table = "setting\tfps\trandom\n";
  table += "A\t" + format_number(r.setting_a.fps_mean) + "\t" + format_number(r.setting_a.random_mean) + "\n";
  table += "B\t" + format_number(r.setting_b.fps_mean) + "\t" + format_number(r.setting_b.random_mean) + "\n";
  if (!a.out.empty()) {
    if (fs::path(a.out).extension() == ".json") {
      const json doc{{"cases", r.cases},
                     {"trials", r.trials},
                     {"seed", a.seed},
                     {"spec",
                      {{"clusters", s.clusters},
                       {"min_leaves", s.min_leaves},
                       {"max_leaves", s.max_leaves},
                       {"mfs_size", s.mfs_size},
                       {"alternatives", s.alternatives}}},
                     {"setting_a", {{"fps", r.setting_a.fps_mean}, {"random", r.setting_a.random_mean}}},
                     {"setting_b", {{"fps", r.setting_b.fps_mean}, {"random", r.setting_b.random_mean}}}};
      mine::write_text_file_atomic(a.out, doc.dump(2) + "\n");
    } else {
      mine::write_text_file_atomic(a.out, table);
    }
  }
  out << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string input, out, scores;
  std::optional<std::size_t> score_model;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.input, "--input");
  eval::EvalReport report;
  try {
    report = eval::eval_report_from_json(json::parse(mine::read_text_file(a.input)));
  } catch (const json::exception& e) {
    throw ConfigError("invalid report file " + a.input + ": " + e.what());
  }
  if (!a.scores.empty()) {
    require_file(a.scores, "--scores");
    report.correlation.reset();
    report.warnings.clear();
    eval::attach_correlations(report, eval::read_scores(a.scores, a.score_model));
    for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  }
  const auto table = eval::report_table(report.methods);
  if (!a.out.empty()) {
    if (fs::path(a.out).extension() == ".json") {
      mine::write_text_file_atomic(a.out, eval::to_json(report).dump(2) + "\n");
    } else {
      mine::write_text_file_atomic(a.out, table);
    }
  }
  out << table;
  if (report.correlation) {
    const auto& c = *report.correlation;
    out << "pearson_r\t" << format_number(c.pearson_r) << "\nspearman_rho\t" << format_number(c.spearman_rho)
        << "\nkendall_tau\t" << format_number(c.kendall_tau) << "\n";
    if (c.partial_pearson_r) {
      out << "partial_pearson_r\t" << format_number(*c.partial_pearson_r) << "\npartial_spearman_rho\t"
          << format_number(*c.partial_spearman_rho) << "\npartial_kendall_tau\t"
          << format_number(*c.partial_kendall_tau) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Observation-reduction toolkit for web agents: reduce, mine minimal failure sets, evaluate coverage", "obsr"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ReduceArgs ra;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce observations with one method");
  reduce_cmd->add_option("--input", ra.input, "JSONL observations {instance_id, html|html_path, goal, action_history}");
  reduce_cmd->add_option("--method", ra.method, "Method spec, e.g. random:k=10,seed=7");
  reduce_cmd->add_option("--k", ra.k, "Selection budget");
  reduce_cmd->add_option("--program", ra.program, "Pruning program for gepa");
  reduce_cmd->add_option("--seed", ra.seed, "Random seed");
  reduce_cmd->add_option("--provider", ra.provider, "fake | canned:<file> | http");
  reduce_cmd->add_option("--out", ra.out, "Output JSONL (stdout when omitted)");
  reduce_cmd->add_option("--jobs", ra.jobs, "Worker threads");
  reduce_cmd->add_flag("--no-timing", ra.no_timing, "Report wall_time as 0 for byte-stable output");

  MineArgs ma;
  auto* mine_cmd = app.add_subcommand("mine", "Minimize candidate sets into an MFS dataset");
  mine_cmd->add_option("--input", ma.input, "JSONL candidate sets");
  mine_cmd->add_option("--oracle", ma.oracle, "simulation | proxy");
  mine_cmd->add_option("--partitioner", ma.partitioner, "fps | random");
  mine_cmd->add_option("--seed", ma.seed, "Seed for the random partitioner");
  mine_cmd->add_option("--provider", ma.provider, "fake | canned:<file> | http");
  mine_cmd->add_option("--out", ma.out, "Output MFS dataset (stdout when omitted)");
  mine_cmd->add_option("--stats", ma.stats, "Stats sidecar path (default <out>.stats.json)");
  mine_cmd->add_option("--jobs", ma.jobs, "Worker threads");
  mine_cmd->add_flag("--expand", ma.expand, "Add retrieval and DOM-adjacent candidates first");

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "Coverage and reduction ratio per method");
  eval_cmd->add_option("--mfs", ea.mfs, "MFS dataset (JSONL)");
  eval_cmd->add_option("--method", ea.methods, "Method spec; repeatable");
  eval_cmd->add_option("--k", ea.k, "Default selection budget");
  eval_cmd->add_option("--program", ea.program, "Default pruning program for gepa");
  eval_cmd->add_option("--seed", ea.seed, "Default seed");
  eval_cmd->add_option("--scores", ea.scores, "External success rates, JSON object method -> score(s)");
  eval_cmd->add_option("--score-model", ea.score_model, "Use this entry of array scores instead of the mean");
  eval_cmd->add_option("--provider", ea.provider, "fake | canned:<file> | http");
  eval_cmd->add_option("--out", ea.out, "Report JSON (stdout when omitted)");
  eval_cmd->add_option("--table", ea.table, "TSV export (default <out>.tsv)");
  eval_cmd->add_option("--jobs", ea.jobs, "Worker threads");
  eval_cmd->add_flag("--no-timing", ea.no_timing, "Skip wall-time measurement");

  AblateArgs aa;
  auto* ablate_cmd = app.add_subcommand("ablate", "Coverage drop when one element type is stripped");
  ablate_cmd->add_option("--mfs", aa.mfs, "MFS dataset (JSONL)");
  ablate_cmd->add_option("--method", aa.method, "Method spec (default original)");
  ablate_cmd->add_option("--target", aa.targets, "tag:<name> | attr:<name> | TEXT; repeatable");
  ablate_cmd->add_option("--k", aa.k, "Default selection budget");
  ablate_cmd->add_option("--program", aa.program, "Default pruning program for gepa");
  ablate_cmd->add_option("--seed", aa.seed, "Default seed");
  ablate_cmd->add_option("--provider", aa.provider, "fake | canned:<file> | http");
  ablate_cmd->add_option("--out", aa.out, "Result JSON");
  ablate_cmd->add_option("--jobs", aa.jobs, "Worker threads");

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "FPS vs random partitioning on synthetic pages");
  sim_cmd->add_option("--trials", sa.trials, "Trials per case");
  sim_cmd->add_option("--cases", sa.cases, "Synthetic cases");
  sim_cmd->add_option("--seed", sa.seed, "Seed");
  sim_cmd->add_option("--clusters", sa.spec.clusters, "Sections per page");
  sim_cmd->add_option("--min-leaves", sa.spec.min_leaves, "Fewest leaves per section");
  sim_cmd->add_option("--max-leaves", sa.spec.max_leaves, "Most leaves per section");
  sim_cmd->add_option("--mfs-size", sa.spec.mfs_size, "Refs per failure set");
  sim_cmd->add_option("--alternatives", sa.spec.alternatives, "Alternative failure sets per page");
  sim_cmd->add_option("--out", sa.out, "Table (TSV, or JSON with a .json extension)");

  ReportArgs pa;
  auto* report_cmd = app.add_subcommand("report", "Re-tabulate an eval report, optionally with new scores");
  report_cmd->add_option("--input", pa.input, "Report JSON from eval");
  report_cmd->add_option("--scores", pa.scores, "External success rates");
  report_cmd->add_option("--score-model", pa.score_model, "Use this entry of array scores instead of the mean");
  report_cmd->add_option("--out", pa.out, "TSV, or JSON with a .json extension");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (reduce_cmd->parsed()) return cmd_reduce(ra, out, err);
    if (mine_cmd->parsed()) return cmd_mine(ma, out, err);
    if (eval_cmd->parsed()) return cmd_eval(ea, out, err);
    if (ablate_cmd->parsed()) return cmd_ablate(aa, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(sa, out, err);
    if (report_cmd->parsed()) return cmd_report(pa, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace obsr::cli
