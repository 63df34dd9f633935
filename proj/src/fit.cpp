#include "hardy/fit.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace hardy {

LimitEstimate extrapolate_limit(std::span<const double> seq) {
  const int m = static_cast<int>(seq.size());
  if (m == 0) throw Error(ErrorKind::DomainError, "cannot extrapolate an empty sequence");
  if (m == 1) return {seq[0], std::numeric_limits<double>::infinity(), 0};

  std::vector<std::vector<double>> table(m);
  table[0].assign(seq.begin(), seq.end());
  std::vector<double> before(m + 1, 0.0);  // column -1
  for (int k = 1; k < m; ++k) {
    const auto& prev = table[k - 1];
    const auto& prev2 = k >= 2 ? table[k - 2] : before;
    table[k].resize(m - k);
    for (int n = 0; n < m - k; ++n) {
      const double diff = prev[n + 1] - prev[n];
      table[k][n] = prev2[n + 1] + (diff == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / diff);
    }
  }

  LimitEstimate best{seq[m - 1], std::abs(seq[m - 1] - seq[m - 2]) * 2.0, 0};
  if (m >= 3) best.error = std::abs(seq[m - 1] - seq[m - 2]) + std::abs(seq[m - 2] - seq[m - 3]);
  for (int k = 2; k < m; k += 2) {
    const auto& col = table[k];
    const int len = static_cast<int>(col.size());
    if (len < 3) break;
    const double e0 = col[len - 1];
    const double e1 = col[len - 2];
    const double e2 = col[len - 3];
    if (!std::isfinite(e0) || !std::isfinite(e1) || !std::isfinite(e2)) continue;
    const double err = std::abs(e0 - e1) + std::abs(e1 - e2);
    if (err < best.error) best = {e0, err, k};
  }
  return best;
}

bool detect_oscillation(std::span<const double> seq, double noise_floor) {
  const int m = static_cast<int>(seq.size());
  if (m < 6) return false;
  std::vector<double> diff(m - 1);
  for (int j = 0; j + 1 < m; ++j) diff[j] = seq[j + 1] - seq[j];

  int changes = 0;
  double last_sign = 0.0;
  for (double d : diff) {
    if (std::abs(d) <= noise_floor) continue;
    const double s = d > 0 ? 1.0 : -1.0;
    if (last_sign != 0.0 && s != last_sign) ++changes;
    last_sign = s;
  }
  const int third = static_cast<int>(diff.size()) / 3;
  double early = 0.0;
  double late = 0.0;
  for (int j = 0; j < third; ++j) early = std::max(early, std::abs(diff[j]));
  for (int j = static_cast<int>(diff.size()) - third; j < static_cast<int>(diff.size()); ++j) {
    late = std::max(late, std::abs(diff[j]));
  }
  return changes >= 2 && late > noise_floor && late >= 0.1 * early;
}

std::array<double, 3> linear_fit(std::span<const double> x, std::span<const double> y) {
  const int m = static_cast<int>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (int i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double b = sxx > 0.0 ? sxy / sxx : 0.0;
  const double a = my - b * mx;
  double rss = 0.0;
  for (int i = 0; i < m; ++i) rss += std::pow(y[i] - a - b * x[i], 2);
  const double r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return {a, b, r2};
}

namespace {

struct Scored {
  double offset, coefficient, rss;
};

Scored fit_transformed(std::span<const double> n, std::span<const double> v,
                       const std::function<double(double)>& transform) {
  std::vector<double> x(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) x[i] = transform(n[i]);
  const auto [a, b, r2] = linear_fit(x, v);
  double rss = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) rss += std::pow(v[i] - a - b * x[i], 2);
  return {a, b, rss};
}

// Best exponent on [lo, hi]: grid scan followed by Brent refinement.
std::pair<double, Scored> fit_exponent(std::span<const double> n, std::span<const double> v, double lo,
                                       double hi, double sign) {
  auto score = [&](double g) {
    return fit_transformed(n, v, [g, sign](double t) { return std::pow(t, sign * g); });
  };
  double best_g = lo;
  double best_rss = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::round((hi - lo) / 0.01));
  for (int i = 0; i <= steps; ++i) {
    const double g = lo + (hi - lo) * i / steps;
    const double rss = score(g).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best_g = g;
    }
  }
  const double a = std::max(lo, best_g - 0.01);
  const double b = std::min(hi, best_g + 0.01);
  const auto refined =
      boost::math::tools::brent_find_minima([&](double g) { return score(g).rss; }, a, b, 40);
  if (refined.second < best_rss) best_g = refined.first;
  return {best_g, score(best_g)};
}

}  // namespace

GrowthComparison fit_growth(std::span<const double> n, std::span<const double> values) {
  const int m = static_cast<int>(n.size());
  if (m < 4 || values.size() != n.size()) {
    throw Error(ErrorKind::DomainError, "growth fit needs at least four (n, value) pairs");
  }
  double scale = 0.0;
  double mean = 0.0;
  for (double v : values) {
    scale = std::max(scale, std::abs(v));
    mean += v / m;
  }
  double tss = 0.0;
  for (double v : values) tss += (v - mean) * (v - mean);
  const double floor = m * std::pow(1e-13 * std::max(scale, 1e-300), 2);
  auto aic = [&](double rss, int k) { return m * std::log(std::max(rss, floor) / m) + 2.0 * k; };
  auto r2 = [&](double rss) { return tss > 0.0 ? 1.0 - rss / tss : 1.0; };

  GrowthComparison out;
  {
    const auto [g, s] = fit_exponent(n, values, 0.05, 4.0, -1.0);
    out.fits[0] = {GrowthModel::Bounded, s.offset, s.coefficient, g, s.rss, r2(s.rss), aic(s.rss, 3)};
  }
  {
    const auto s = fit_transformed(n, values, [](double t) { return std::log(t); });
    out.fits[1] = {GrowthModel::Log, s.offset, s.coefficient, 0.0, s.rss, r2(s.rss), aic(s.rss, 2)};
  }
  {
    const auto [g, s] = fit_exponent(n, values, 0.05, 8.0, 1.0);
    out.fits[2] = {GrowthModel::Power, s.offset, s.coefficient, g, s.rss, r2(s.rss), aic(s.rss, 3)};
  }

  if (tss <= floor) {
    out.best = out.fits[0];
    out.best.offset = mean;
    out.best.coefficient = 0.0;
    return out;
  }
  out.best = *std::min_element(out.fits.begin(), out.fits.end(),
                               [](const GrowthFit& a, const GrowthFit& b) { return a.aic < b.aic; });
  return out;
}

}  // namespace hardy
