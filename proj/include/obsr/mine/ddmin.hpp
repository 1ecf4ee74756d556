#pragma once

#include <cstddef>

#include "obsr/dom/ablation.hpp"
#include "obsr/mine/oracles.hpp"
#include "obsr/mine/partition.hpp"

namespace obsr::mine {

struct DdminResult {
  dom::RefList mfs;
  // Including the initial check of the full candidate set.
  std::size_t oracle_calls = 0;
  std::size_t iterations = 0;
};

// Delta debugging over the removal set: returns a 1-minimal M within the
// candidates with test(M) = FAIL. Chunks are re-derived each round.
// Throws PreconditionViolated when test(candidates) is not FAIL.
DdminResult ddmin(const dom::RefList& candidates, Oracle& oracle, Partitioner& partitioner);

}  // namespace obsr::mine
