#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace obsr::eval {

double mean(std::span<const double> v);
// Population standard deviation.
double stddev(std::span<const double> v);

// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> v);

// The three coefficients below throw PreconditionViolated on unequal lengths
// and DegenerateInput when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
// Tie-corrected tau-b.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Residuals of the least-squares fit y ~ a + b * control.
// Throws DegenerateInput when control is constant.
std::vector<double> ols_residuals(std::span<const double> y, std::span<const double> control);

struct CorrelationReport {
  std::size_t n_points = 0;
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  double kendall_tau = 0.0;
  std::optional<double> partial_pearson_r;
  std::optional<double> partial_spearman_rho;
  std::optional<double> partial_kendall_tau;
};

// Needs at least 3 points (PreconditionViolated).
CorrelationReport correlations(std::span<const double> x, std::span<const double> y);

// Correlations of the residuals of x and y after regressing each on control.
// Needs at least 4 points. Fills only the partial fields.
CorrelationReport partial_correlations(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> control);

}  // namespace obsr::eval
