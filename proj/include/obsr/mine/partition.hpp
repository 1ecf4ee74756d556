#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string_view>
#include <vector>

#include "obsr/dom/ablation.hpp"
#include "obsr/dom/document.hpp"

namespace obsr::mine {

using dom::ElementRef;
using dom::RefList;
using Chunks = std::vector<RefList>;

// Farthest-point partition under dom_distance. The first seed is the lowest
// ref; each further seed maximizes its distance to the nearest chosen seed
// (ties to the lower ref). Remaining refs are assigned greedily by ascending
// (distance, ref, seed order), each chunk holding at most ceil(|refs| / n).
// Returns min(n, |refs|) chunks in seed order, each sorted.
Chunks fps_partition(const dom::DomDocument& doc, const RefList& refs, std::size_t n);

// Input order, min(n, |refs|) chunks, the first |refs| % n one larger.
Chunks contiguous_partition(const RefList& refs, std::size_t n);

class Partitioner {
 public:
  virtual ~Partitioner() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual Chunks partition(const RefList& refs, std::size_t n) = 0;
};

class FpsPartitioner final : public Partitioner {
 public:
  explicit FpsPartitioner(const dom::DomDocument& doc) : doc_(doc) {}
  std::string_view name() const noexcept override { return "fps"; }
  Chunks partition(const RefList& refs, std::size_t n) override { return fps_partition(doc_, refs, n); }

 private:
  const dom::DomDocument& doc_;
};

// Fresh shuffle on every call, then contiguous chunks.
class RandomPartitioner final : public Partitioner {
 public:
  explicit RandomPartitioner(std::uint64_t seed) : rng_(seed) {}
  std::string_view name() const noexcept override { return "random"; }
  Chunks partition(const RefList& refs, std::size_t n) override;

 private:
  std::mt19937_64 rng_;
};

class ContiguousPartitioner final : public Partitioner {
 public:
  std::string_view name() const noexcept override { return "contiguous"; }
  Chunks partition(const RefList& refs, std::size_t n) override { return contiguous_partition(refs, n); }
};

// "fps", "random", "contiguous". Throws ConfigError.
std::unique_ptr<Partitioner> make_partitioner(std::string_view name, const dom::DomDocument& doc,
                                              std::uint64_t seed);

// Uniform integer in [0, bound), bound > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace obsr::mine
