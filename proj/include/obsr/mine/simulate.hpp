#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "obsr/dom/ablation.hpp"
#include "obsr/dom/document.hpp"

namespace obsr::mine {

// Synthetic page: `clusters` sections under body, each holding a container
// with between `min_leaves` and `max_leaves` leaf elements. Leaves within a
// cluster are 3 apart, leaves of different clusters 7 apart. The candidate set
// is every leaf's tag ref. Each alternative failure set is `mfs_size` leaves of
// one cluster, alternatives in distinct clusters.
struct SyntheticSpec {
  std::size_t clusters = 4;
  std::size_t min_leaves = 3;
  std::size_t max_leaves = 4;
  std::size_t mfs_size = 2;
  std::size_t alternatives = 2;
};

struct SimulationCase {
  dom::DomDocument doc;
  dom::RefList candidates;
  std::vector<dom::RefList> alternatives;
};

// Throws PreconditionViolated on an unsatisfiable spec.
SimulationCase make_synthetic_case(const SyntheticSpec& spec, std::mt19937_64& rng);

// Mean ddmin oracle calls with a simulation oracle for `ground_truth`, over
// `trials` runs (the random partitioner is reseeded per trial).
double simulate_partitioning(const SimulationCase& sim, const dom::RefList& ground_truth,
                             std::string_view strategy, std::size_t trials, std::uint64_t seed);

struct SettingResult {
  double fps_mean = 0.0;
  double random_mean = 0.0;
};

struct PartitionStudyResult {
  std::size_t cases = 0;
  std::size_t trials = 0;
  // A: ground truth = set ddmin finds with FPS on the multi-solution oracle.
  // B: ground truth = set ddmin finds with random partitioning.
  SettingResult setting_a;
  SettingResult setting_b;
};

PartitionStudyResult run_partition_study(const SyntheticSpec& spec, std::size_t cases, std::size_t trials, std::uint64_t seed);

}  // namespace obsr::mine
