#pragma once

#include <array>
#include <span>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

struct LimitEstimate {
  double value = 0.0;
  double error = 0.0;  // spread of the last two accepted extrapolants
  int column = 0;      // epsilon-table column used (0 = raw sequence)
};

/// Limit of a sequence by Wynn's epsilon algorithm. Exact for a constant plus
/// up to column/2 geometric terms, which is what sampling x^a on a geometric
/// grid produces.
LimitEstimate extrapolate_limit(std::span<const double> seq);

/// True when the differences of seq change sign repeatedly without decaying.
/// Differences below noise_floor are ignored.
bool detect_oscillation(std::span<const double> seq, double noise_floor);

struct GrowthFit {
  GrowthModel model = GrowthModel::Bounded;
  /// Log: v = offset + coefficient ln n. Power: v = offset + coefficient n^exponent.
  /// Bounded: v = offset + coefficient n^(-exponent).
  double offset = 0.0;
  double coefficient = 0.0;
  double exponent = 0.0;
  double rss = 0.0;
  double r_squared = 0.0;
  double aic = 0.0;
};

struct GrowthComparison {
  GrowthFit best;
  std::array<GrowthFit, 3> fits;  // bounded, log, power
};

/// Least-squares fits of the three growth models with an AIC comparison.
GrowthComparison fit_growth(std::span<const double> n, std::span<const double> values);

/// Ordinary least squares y = a + b x; returns {a, b, r_squared}.
std::array<double, 3> linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace hardy
