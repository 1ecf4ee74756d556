#include "obsr/mine/simulate.hpp"

#include <algorithm>
#include <numeric>

#include "obsr/error.hpp"
#include "obsr/mine/ddmin.hpp"
#include "obsr/mine/oracles.hpp"
#include "obsr/mine/partition.hpp"

namespace obsr::mine {

using dom::Node;

SimulationCase make_synthetic_case(const SyntheticSpec& spec, std::mt19937_64& rng) {
  if (spec.clusters < spec.alternatives || spec.alternatives == 0 || spec.mfs_size == 0 ||
      spec.min_leaves < spec.mfs_size || spec.max_leaves < spec.min_leaves) {
    throw PreconditionViolated("unsatisfiable synthetic spec");
  }
  std::size_t next_bid = 1;
  auto bid = [&] { return std::to_string(next_bid++); };

  Node body = Node::element("body", {{"bid", bid()}});
  std::vector<std::vector<std::string>> leaves(spec.clusters);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    const std::size_t count = spec.min_leaves + uniform_below(rng, spec.max_leaves - spec.min_leaves + 1);
    Node section = Node::element("section", {{"bid", bid()}});
    Node container = Node::element("div", {{"bid", bid()}});
    for (std::size_t l = 0; l < count; ++l) {
      leaves[c].push_back(bid());
      container.children.push_back(Node::element(
          "span", {{"bid", leaves[c].back()}}, {Node::text_node("c" + std::to_string(c) + "l" + std::to_string(l))}));
    }
    section.children.push_back(std::move(container));
    body.children.push_back(std::move(section));
  }
  Node html = Node::element("html", {}, {std::move(body)});
  SimulationCase sim{dom::DomDocument(Node::document({std::move(html)})), {}, {}};

  for (const auto& cluster : leaves) {
    for (const auto& b : cluster) sim.candidates.push_back(dom::ElementRef::tag(b));
  }
  dom::canonicalize(sim.candidates);

  std::vector<std::size_t> order(spec.clusters);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
  for (std::size_t a = 0; a < spec.alternatives; ++a) {
    auto pool = leaves[order[a]];
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[uniform_below(rng, i)]);
    dom::RefList alt;
    for (std::size_t i = 0; i < spec.mfs_size; ++i) alt.push_back(dom::ElementRef::tag(pool[i]));
    dom::canonicalize(alt);
    sim.alternatives.push_back(std::move(alt));
  }
  return sim;
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  return rng();
}

}  // namespace

double simulate_partitioning(const SimulationCase& sim, const dom::RefList& ground_truth,
                             std::string_view strategy, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw PreconditionViolated("trials must be at least 1");
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    SimulationOracle oracle(ground_truth);
    auto partitioner = make_partitioner(strategy, sim.doc, trial_seed(seed, t));
    total += static_cast<double>(ddmin(sim.candidates, oracle, *partitioner).oracle_calls);
  }
  return total / static_cast<double>(trials);
}

PartitionStudyResult run_partition_study(const SyntheticSpec& spec, std::size_t cases, std::size_t trials, std::uint64_t seed) {
  PartitionStudyResult out;
  out.cases = cases;
  out.trials = trials;
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto sim = make_synthetic_case(spec, rng);
    const auto alternatives = sim.alternatives;
    auto underlying = [&] {
      return FunctionOracle([alternatives](const dom::RefList& removed) {
        for (const auto& alt : alternatives) {
          if (contains_set(removed, alt)) return Verdict::Fail;
        }
        return Verdict::Pass;
      });
    };
    auto fps_oracle = underlying();
    FpsPartitioner fps(sim.doc);
    const auto truth_a = ddmin(sim.candidates, fps_oracle, fps).mfs;
    auto random_oracle = underlying();
    RandomPartitioner random(trial_seed(seed ^ 0x5eedULL, c));
    const auto truth_b = ddmin(sim.candidates, random_oracle, random).mfs;

    const std::uint64_t case_seed = trial_seed(seed, c);
    out.setting_a.fps_mean += simulate_partitioning(sim, truth_a, "fps", trials, case_seed);
    out.setting_a.random_mean += simulate_partitioning(sim, truth_a, "random", trials, case_seed);
    out.setting_b.fps_mean += simulate_partitioning(sim, truth_b, "fps", trials, case_seed);
    out.setting_b.random_mean += simulate_partitioning(sim, truth_b, "random", trials, case_seed);
  }
  if (cases > 0) {
    for (auto* s : {&out.setting_a, &out.setting_b}) {
      s->fps_mean /= static_cast<double>(cases);
      s->random_mean /= static_cast<double>(cases);
    }
  }
  return out;
}

}  // namespace obsr::mine
