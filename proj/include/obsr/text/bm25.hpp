#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace obsr::text {

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
};

// Okapi BM25 over a fixed tokenized corpus. idf(t) = ln(1 + (N - df + 0.5) /
// (df + 0.5)); query tokens are summed with multiplicity.
class Bm25Index {
 public:
  explicit Bm25Index(std::vector<std::vector<std::string>> docs, Bm25Params params = {});

  std::size_t size() const noexcept { return doc_len_.size(); }
  double avg_doc_len() const noexcept { return avgdl_; }
  double idf(const std::string& term) const;

  double score(std::span<const std::string> query, std::size_t doc) const;
  std::vector<double> scores(std::span<const std::string> query) const;

 private:
  Bm25Params params_;
  std::vector<std::unordered_map<std::string, std::size_t>> tf_;
  std::vector<std::size_t> doc_len_;
  std::unordered_map<std::string, std::size_t> df_;
  double avgdl_ = 0.0;
};

// Indices of the k largest scores, descending; equal scores keep index order.
std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k);

}  // namespace obsr::text
