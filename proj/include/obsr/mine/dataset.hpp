#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obsr/dom/ablation.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/mine/candidates.hpp"

namespace obsr::mine {

struct MfsInstance {
  std::string instance_id;
  std::string benchmark;
  std::string source_model;
  std::string goal;
  std::vector<std::string> action_history;
  std::string html;
  dom::RefList mfs;
  std::size_t step_index = 0;

  dom::DomDocument parse() const { return dom::parse_html(html); }
};

// One mining job: the observation, the candidate refs with their sources, and
// what the oracle needs (a ground-truth set for simulation, the erroneous
// action for the proxy oracle).
struct CandidateRecord {
  std::string instance_id;
  std::string benchmark;
  std::string source_model;
  std::string goal;
  std::vector<std::string> action_history;
  std::string html;
  std::size_t step_index = 0;
  dom::RefList refs;
  std::vector<CandidateSource> sources;  // parallel to refs
  std::optional<dom::RefList> ground_truth;
  std::optional<std::string> erroneous_action;
  std::optional<std::string> action_target;
};

// {"bid": ..., "attr": ...}
nlohmann::json ref_to_json(const dom::ElementRef& ref);
dom::ElementRef ref_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MfsInstance& inst);
// Relative `html_path` values resolve against `base_dir`.
MfsInstance instance_from_json(const nlohmann::json& j, const std::string& base_dir);

// JSON lines; blank lines skipped. Validates non-empty MFS and that every MFS
// ref is present in the html. Throws ConfigError with the line number.
std::vector<MfsInstance> read_dataset(const std::string& path);
std::string dataset_to_jsonl(const std::vector<MfsInstance>& instances);

CandidateRecord candidate_from_json(const nlohmann::json& j, const std::string& base_dir);
nlohmann::json to_json(const CandidateRecord& rec);
std::vector<CandidateRecord> read_candidates(const std::string& path);

// Whole file as a string. Throws ConfigError.
std::string read_text_file(const std::string& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace obsr::mine
