#include "obsr/mine/ddmin.hpp"

#include <algorithm>

#include "obsr/error.hpp"

namespace obsr::mine {

namespace {

dom::RefList minus(const dom::RefList& set, const dom::RefList& chunk) {
  dom::RefList out;
  out.reserve(set.size());
  for (const auto& r : set) {
    if (std::find(chunk.begin(), chunk.end(), r) == chunk.end()) out.push_back(r);
  }
  return out;
}

}  // namespace

DdminResult ddmin(const dom::RefList& candidates, Oracle& oracle, Partitioner& partitioner) {
  DdminResult result;
  dom::RefList c = candidates;
  dom::canonicalize(c);
  const std::size_t start_calls = oracle.call_count();
  if (c.empty() || oracle.test(c) != Verdict::Fail) {
    throw PreconditionViolated("the full candidate set does not induce the failure");
  }

  std::size_t n = 2;
  while (c.size() >= 2) {
    ++result.iterations;
    const Chunks chunks = partitioner.partition(c, n);
    bool found = false;
    for (const auto& chunk : chunks) {
      auto rest = minus(c, chunk);
      if (oracle.test(rest) == Verdict::Fail) {
        c = std::move(rest);
        n = std::max<std::size_t>(n - 1, 2);
        found = true;
        break;
      }
    }
    if (!found) {
      if (n >= c.size()) break;
      n = std::min(2 * n, c.size());
    }
  }
  result.mfs = std::move(c);
  result.oracle_calls = oracle.call_count() - start_calls;
  return result;
}

}  // namespace obsr::mine
