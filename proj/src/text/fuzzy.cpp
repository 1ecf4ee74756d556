#include "obsr/text/fuzzy.hpp"

#include <algorithm>
#include <vector>

#include "obsr/text/tokenize.hpp"

namespace obsr::text {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

double ratio32(std::u32string_view a, std::u32string_view b) {
  auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

}  // namespace

double similarity_ratio(std::string_view a, std::string_view b) {
  return ratio32(decode_utf8(a), decode_utf8(b));
}

double partial_ratio(std::string_view a, std::string_view b) {
  auto x = decode_utf8(a);
  auto y = decode_utf8(b);
  if (x.size() > y.size()) std::swap(x, y);
  if (x.empty()) return y.empty() ? 1.0 : 0.0;
  double best = 0.0;
  std::u32string_view longer(y);
  for (std::size_t i = 0; i + x.size() <= y.size(); ++i) {
    best = std::max(best, ratio32(x, longer.substr(i, x.size())));
    if (best == 1.0) break;
  }
  return best;
}

}  // namespace obsr::text
