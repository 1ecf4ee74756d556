#include "obsr/mine/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "obsr/error.hpp"

namespace obsr::mine {

using nlohmann::json;
namespace fs = std::filesystem;

json ref_to_json(const dom::ElementRef& ref) { return json{{"bid", ref.bid}, {"attr", ref.attr_token()}}; }

dom::ElementRef ref_from_json(const json& j) {
  if (!j.is_object() || !j.contains("bid") || !j.contains("attr")) {
    throw ConfigError("element ref must be an object with bid and attr");
  }
  return dom::ElementRef::from_token(j.at("bid").get<std::string>(), j.at("attr").get<std::string>());
}

namespace {

dom::RefList refs_from_json(const json& j) {
  dom::RefList out;
  for (const auto& r : j) out.push_back(ref_from_json(r));
  return out;
}

std::string html_from_json(const json& j, const std::string& base_dir) {
  const bool inline_html = j.contains("html");
  const bool path_html = j.contains("html_path");
  if (inline_html == path_html) throw ConfigError("exactly one of html and html_path is required");
  if (inline_html) return j.at("html").get<std::string>();
  fs::path p = j.at("html_path").get<std::string>();
  if (p.is_relative()) p = fs::path(base_dir) / p;
  return read_text_file(p.string());
}

std::vector<std::string> history_from_json(const json& j) {
  if (!j.contains("action_history")) return {};
  return j.at("action_history").get<std::vector<std::string>>();
}

template <typename T, typename Fn>
std::vector<T> read_jsonl(const std::string& path, Fn&& parse_one) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  const std::string base_dir = fs::path(path).parent_path().string();
  std::vector<T> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      out.push_back(parse_one(json::parse(line), base_dir));
    } catch (const json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

json to_json(const MfsInstance& inst) {
  json mfs = json::array();
  for (const auto& r : inst.mfs) mfs.push_back(ref_to_json(r));
  return json{{"instance_id", inst.instance_id},       {"benchmark", inst.benchmark},
              {"source_model", inst.source_model},     {"goal", inst.goal},
              {"action_history", inst.action_history}, {"html", inst.html},
              {"mfs", mfs},                            {"step_index", inst.step_index}};
}

MfsInstance instance_from_json(const json& j, const std::string& base_dir) {
  MfsInstance inst;
  inst.instance_id = j.at("instance_id").get<std::string>();
  inst.benchmark = j.value("benchmark", std::string{});
  inst.source_model = j.value("source_model", std::string{});
  inst.goal = j.value("goal", std::string{});
  inst.action_history = history_from_json(j);
  inst.html = html_from_json(j, base_dir);
  inst.mfs = refs_from_json(j.at("mfs"));
  inst.step_index = j.value("step_index", std::size_t{0});
  dom::canonicalize(inst.mfs);
  if (inst.mfs.empty()) throw ConfigError("instance " + inst.instance_id + " has an empty mfs");
  const auto doc = inst.parse();
  for (const auto& r : inst.mfs) {
    if (!dom::contains_ref(doc, r)) {
      throw ConfigError("instance " + inst.instance_id + ": mfs ref " + r.to_string() + " is not in the html");
    }
  }
  return inst;
}

std::vector<MfsInstance> read_dataset(const std::string& path) {
  return read_jsonl<MfsInstance>(path, instance_from_json);
}

std::string dataset_to_jsonl(const std::vector<MfsInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) out += to_json(inst).dump() + "\n";
  return out;
}

CandidateRecord candidate_from_json(const json& j, const std::string& base_dir) {
  CandidateRecord rec;
  rec.instance_id = j.at("instance_id").get<std::string>();
  rec.benchmark = j.value("benchmark", std::string{});
  rec.source_model = j.value("source_model", std::string{});
  rec.goal = j.value("goal", std::string{});
  rec.action_history = history_from_json(j);
  rec.html = html_from_json(j, base_dir);
  rec.step_index = j.value("step_index", std::size_t{0});
  for (const auto& r : j.at("refs")) {
    rec.refs.push_back(ref_from_json(r));
    rec.sources.push_back(r.contains("source") ? parse_candidate_source(r.at("source").get<std::string>())
                                               : CandidateSource::SelfReport);
  }
  if (j.contains("ground_truth")) rec.ground_truth = refs_from_json(j.at("ground_truth"));
  if (j.contains("erroneous_action")) rec.erroneous_action = j.at("erroneous_action").get<std::string>();
  if (j.contains("action_target")) rec.action_target = j.at("action_target").get<std::string>();
  return rec;
}

json to_json(const CandidateRecord& rec) {
  json refs = json::array();
  for (std::size_t i = 0; i < rec.refs.size(); ++i) {
    auto r = ref_to_json(rec.refs[i]);
    r["source"] = std::string(to_string(i < rec.sources.size() ? rec.sources[i] : CandidateSource::SelfReport));
    refs.push_back(std::move(r));
  }
  json j{{"instance_id", rec.instance_id}, {"benchmark", rec.benchmark},
         {"source_model", rec.source_model}, {"goal", rec.goal},
         {"action_history", rec.action_history}, {"html", rec.html},
         {"step_index", rec.step_index}, {"refs", refs}};
  if (rec.ground_truth) {
    json gt = json::array();
    for (const auto& r : *rec.ground_truth) gt.push_back(ref_to_json(r));
    j["ground_truth"] = gt;
  }
  if (rec.erroneous_action) j["erroneous_action"] = *rec.erroneous_action;
  if (rec.action_target) j["action_target"] = *rec.action_target;
  return j;
}

std::vector<CandidateRecord> read_candidates(const std::string& path) {
  return read_jsonl<CandidateRecord>(path, candidate_from_json);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot replace " + path + ": " + ec.message());
  }
}

}  // namespace obsr::mine
