#include "obsr/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "obsr/error.hpp"

namespace obsr::eval {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionViolated("inputs have different lengths");
  if (x.size() < 2) throw PreconditionViolated("at least two points are needed");
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

void check_varying(std::span<const double> x, std::span<const double> y) {
  if (is_constant(x) || is_constant(y)) throw DegenerateInput("correlation is undefined for a constant input");
}

// Residuals at rounding-noise level relative to the original values.
bool negligible(std::span<const double> residuals, std::span<const double> original) {
  double scale = 0.0;
  for (double v : original) scale = std::max(scale, std::abs(v));
  double spread = 0.0;
  for (double r : residuals) spread = std::max(spread, std::abs(r));
  return spread <= 1e-12 * std::max(scale, 1.0);
}

int sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double a : v) ss += (a - m) * (a - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  check_varying(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  check_varying(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  check_varying(x, y);
  long long concordant_minus_discordant = 0;
  long long untied_x = 0;
  long long untied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = sign(x[i] - x[j]);
      const int sy = sign(y[i] - y[j]);
      concordant_minus_discordant += sx * sy;
      untied_x += sx != 0;
      untied_y += sy != 0;
    }
  }
  return std::clamp(static_cast<double>(concordant_minus_discordant) /
                        std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y)),
                    -1.0, 1.0);
}

std::vector<double> ols_residuals(std::span<const double> y, std::span<const double> control) {
  if (y.size() != control.size()) throw PreconditionViolated("inputs have different lengths");
  if (control.empty() || is_constant(control)) throw DegenerateInput("control variable is constant");
  const double mc = mean(control);
  const double my = mean(y);
  double scy = 0, scc = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    scy += (control[i] - mc) * (y[i] - my);
    scc += (control[i] - mc) * (control[i] - mc);
  }
  const double slope = scy / scc;
  const double intercept = my - slope * mc;
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] - (intercept + slope * control[i]);
  return out;
}

CorrelationReport correlations(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 3 || x.size() != y.size()) throw PreconditionViolated("need two equal-length inputs of at least 3 points");
  CorrelationReport r;
  r.n_points = x.size();
  r.pearson_r = pearson(x, y);
  r.spearman_rho = spearman(x, y);
  r.kendall_tau = kendall_tau_b(x, y);
  return r;
}

CorrelationReport partial_correlations(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> control) {
  if (x.size() < 4 || x.size() != y.size() || x.size() != control.size()) {
    throw PreconditionViolated("need three equal-length inputs of at least 4 points");
  }
  const auto rx = ols_residuals(x, control);
  const auto ry = ols_residuals(y, control);
  if (negligible(rx, x) || negligible(ry, y)) {
    throw DegenerateInput("a residual vector is constant; the control explains the variable exactly");
  }
  CorrelationReport r;
  r.n_points = x.size();
  r.partial_pearson_r = pearson(rx, ry);
  r.partial_spearman_rho = spearman(rx, ry);
  r.partial_kendall_tau = kendall_tau_b(rx, ry);
  return r;
}

}  // namespace obsr::eval
