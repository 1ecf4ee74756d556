#include "obsr/text/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace obsr::text {

Bm25Index::Bm25Index(std::vector<std::vector<std::string>> docs, Bm25Params params) : params_(params) {
  std::size_t total = 0;
  tf_.reserve(docs.size());
  for (const auto& d : docs) {
    std::unordered_map<std::string, std::size_t> tf;
    for (const auto& t : d) ++tf[t];
    for (const auto& [term, _] : tf) ++df_[term];
    doc_len_.push_back(d.size());
    total += d.size();
    tf_.push_back(std::move(tf));
  }
  avgdl_ = docs.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs.size());
}

double Bm25Index::idf(const std::string& term) const {
  auto it = df_.find(term);
  const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
  const double n = static_cast<double>(size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double Bm25Index::score(std::span<const std::string> query, std::size_t doc) const {
  if (avgdl_ == 0.0) return 0.0;
  const auto& tf = tf_.at(doc);
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * static_cast<double>(doc_len_[doc]) / avgdl_);
  double s = 0.0;
  for (const auto& q : query) {
    auto it = tf.find(q);
    if (it == tf.end()) continue;
    const double f = static_cast<double>(it->second);
    s += idf(q) * f * (params_.k1 + 1.0) / (f + norm);
  }
  return s;
}

std::vector<double> Bm25Index::scores(std::span<const std::string> query) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = score(query, i);
  return out;
}

std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

}  // namespace obsr::text
