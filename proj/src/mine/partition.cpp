#include "obsr/mine/partition.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "obsr/error.hpp"

namespace obsr::mine {

Chunks fps_partition(const dom::DomDocument& doc, const RefList& refs_in, std::size_t n) {
  RefList refs = refs_in;
  dom::canonicalize(refs);
  if (refs.empty()) return {};
  n = std::clamp<std::size_t>(n, 1, refs.size());
  const std::size_t m = refs.size();

  std::vector<std::vector<std::size_t>> dist(m, std::vector<std::size_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) dist[i][j] = dist[j][i] = dom::dom_distance(doc, refs[i], refs[j]);
  }

  // Seeds; refs are sorted, so the lowest index is the lowest ref.
  std::vector<std::size_t> seeds{0};
  std::vector<std::size_t> nearest(m);
  for (std::size_t i = 0; i < m; ++i) nearest[i] = dist[i][0];
  std::vector<bool> is_seed(m, false);
  is_seed[0] = true;
  while (seeds.size() < n) {
    std::size_t best = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_seed[i]) continue;
      if (best == m || nearest[i] > nearest[best]) best = i;
    }
    seeds.push_back(best);
    is_seed[best] = true;
    for (std::size_t i = 0; i < m; ++i) nearest[i] = std::min(nearest[i], dist[i][best]);
  }

  const std::size_t cap = (m + n - 1) / n;
  Chunks chunks(n);
  std::vector<std::size_t> sizes(n, 1);
  for (std::size_t s = 0; s < n; ++s) chunks[s].push_back(refs[seeds[s]]);

  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;  // distance, ref, seed slot
  for (std::size_t i = 0; i < m; ++i) {
    if (is_seed[i]) continue;
    for (std::size_t s = 0; s < n; ++s) pairs.emplace_back(dist[i][seeds[s]], i, s);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> assigned = is_seed;
  for (const auto& [d, i, s] : pairs) {
    if (assigned[i] || sizes[s] >= cap) continue;
    chunks[s].push_back(refs[i]);
    ++sizes[s];
    assigned[i] = true;
  }
  for (auto& c : chunks) std::sort(c.begin(), c.end());
  return chunks;
}

Chunks contiguous_partition(const RefList& refs, std::size_t n) {
  if (refs.empty()) return {};
  n = std::clamp<std::size_t>(n, 1, refs.size());
  Chunks chunks;
  chunks.reserve(n);
  const std::size_t base = refs.size() / n;
  const std::size_t extra = refs.size() % n;
  std::size_t pos = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    chunks.emplace_back(refs.begin() + static_cast<std::ptrdiff_t>(pos),
                        refs.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return chunks;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

Chunks RandomPartitioner::partition(const RefList& refs, std::size_t n) {
  RefList shuffled = refs;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[uniform_below(rng_, i)]);
  }
  return contiguous_partition(shuffled, n);
}

std::unique_ptr<Partitioner> make_partitioner(std::string_view name, const dom::DomDocument& doc,
                                              std::uint64_t seed) {
  if (name == "fps") return std::make_unique<FpsPartitioner>(doc);
  if (name == "random") return std::make_unique<RandomPartitioner>(seed);
  if (name == "contiguous") return std::make_unique<ContiguousPartitioner>();
  throw ConfigError("unknown partitioner '" + std::string(name) + "' (expected fps, random or contiguous)");
}

}  // namespace obsr::mine
