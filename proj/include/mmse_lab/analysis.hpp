#pragma once

// Checkers for the structural properties of the MMSE functional: the
// single-crossing property against a Gaussian reference, Gaussian dominance,
// concavity in the input law, conditioning, and the sum inequalities.
// Checkers return signed residuals whose sign the inequality fixes; callers
// compare them against their own tolerance.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/mmse.hpp"
#include "mmse_lab/parallel.hpp"

namespace mmse_lab {

enum class CrossingClass { identical, no_crossing_nonneg, no_crossing_negative_tail_impossible, single_crossing };

inline std::string to_string(CrossingClass c) {
  switch (c) {
    case CrossingClass::identical:
      return "identical";
    case CrossingClass::no_crossing_nonneg:
      return "no_crossing_nonneg";
    case CrossingClass::no_crossing_negative_tail_impossible:
      return "no_crossing_negative_tail_impossible";
    default:
      return "single_crossing";
  }
}

struct CrossingGrid {
  double gamma_min = 1e-4;
  double gamma_max = 1e4;
  int points = 400;        // log-spaced
  double zero_band = 1e-9; // |f| inside the band counts as zero
};

struct CrossingBracket {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
};

struct CrossingReport {
  double sigma2 = 1.0;
  double f_at_zero = 0.0;  // sigma2 - (conditional) variance
  std::vector<double> gamma;
  std::vector<double> f_grid;
  std::vector<CrossingBracket> crossings;
  CrossingClass classification = CrossingClass::identical;
  bool increasing_where_negative = true;  // statement 1
  bool nonneg_after_crossing = true;      // statement 2
  bool tail_vanishes = true;              // statement 3

  std::optional<double> snr0() const {
    if (crossings.empty()) return std::nullopt;
    return crossings.front().mid();
  }
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw InputError("crossing grid: need 0 < gamma_min < gamma_max, points >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

inline int band_sign(double f, double band) { return f > band ? 1 : (f < -band ? -1 : 0); }

// Shared engine for the unconditional and conditional forms; mmse_of(g) must
// be the (conditional) MMSE at g and variance its value at g = 0.
inline CrossingReport analyze_crossing(double sigma2, double variance, const std::function<double(double)>& mmse_of,
                                       const CrossingGrid& grid) {
  if (!(sigma2 > 0.0)) throw InputError("single_crossing: sigma2 must be positive");
  CrossingReport r;
  r.sigma2 = sigma2;
  r.f_at_zero = sigma2 - variance;
  r.gamma = log_grid(grid.gamma_min, grid.gamma_max, grid.points);
  auto f = [&](double g) { return sigma2 / (1.0 + sigma2 * g) - mmse_of(g); };
  r.f_grid = parallel_map<double>(r.gamma.size(), [&](std::size_t i) { return f(r.gamma[i]); });

  const double band = grid.zero_band;
  // Sign changes over the nonzero-signed samples, with gamma = 0 leading.
  std::vector<std::pair<double, double>> pts{{0.0, r.f_at_zero}};
  for (std::size_t i = 0; i < r.gamma.size(); ++i) pts.emplace_back(r.gamma[i], r.f_grid[i]);
  int last_sign = 0;
  double last_gamma = 0.0;
  for (const auto& [g, v] : pts) {
    const int s = band_sign(v, band);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) r.crossings.push_back({last_gamma, g});
    last_sign = s;
    last_gamma = g;
  }
  if (r.crossings.size() > 1)
    throw NumericalError("single_crossing: " + std::to_string(r.crossings.size()) +
                         " certified sign changes; at most one is possible");

  for (auto& b : r.crossings) {
    double flo = b.lo == 0.0 ? r.f_at_zero : f(b.lo);
    while (b.hi - b.lo > 1e-8 * (1.0 + b.mid())) {
      const double m = b.mid();
      const double fm = f(m);
      if ((fm < 0.0) == (flo < 0.0)) {
        b.lo = m;
        flo = fm;
      } else {
        b.hi = m;
      }
    }
  }

  bool any_negative = r.f_at_zero < -band;
  bool all_zero = std::abs(r.f_at_zero) <= band;
  for (double v : r.f_grid) {
    any_negative = any_negative || v < -band;
    all_zero = all_zero && std::abs(v) <= band;
  }
  if (!r.crossings.empty())
    r.classification = CrossingClass::single_crossing;
  else if (all_zero)
    r.classification = CrossingClass::identical;
  else if (any_negative)
    r.classification = CrossingClass::no_crossing_negative_tail_impossible;
  else
    r.classification = CrossingClass::no_crossing_nonneg;

  for (std::size_t i = 0; i + 1 < r.f_grid.size(); ++i)
    if (r.f_grid[i] < -band && !(r.f_grid[i + 1] > r.f_grid[i])) r.increasing_where_negative = false;
  if (!r.crossings.empty()) {
    for (std::size_t i = 0; i < r.gamma.size(); ++i)
      if (r.gamma[i] > r.crossings.front().hi && r.f_grid[i] < -band) r.nonneg_after_crossing = false;
  }
  const double gmax = r.gamma.back();
  r.tail_vanishes = std::abs(r.f_grid.back()) <= 1.0 / gmax + sigma2 / (1.0 + sigma2 * gmax);

  if (!r.increasing_where_negative || !r.nonneg_after_crossing || !r.tail_vanishes)
    throw NumericalError("single_crossing: sampled f violates the single-crossing statements");
  return r;
}

}  // namespace detail

// f(g) = sigma2/(1 + sigma2 g) - mmse(X, g) on a log grid; at most one sign
// change is possible on (0, inf).
inline CrossingReport single_crossing(const InputDistribution& dist, double sigma2, const CrossingGrid& grid = {}) {
  return detail::analyze_crossing(
      sigma2, dist.variance(), [&](double g) { return mmse_at(dist, g).value; }, grid);
}

// Same with the conditional MMSE E[mmse(X_U, g | U)].
inline CrossingReport conditional_single_crossing(const Family& family, double sigma2, const CrossingGrid& grid = {}) {
  detail::require_family(family);
  double variance = 0.0;
  for (const auto& [d, p] : family) variance += p * d.variance();
  return detail::analyze_crossing(
      sigma2, variance, [&](double g) { return conditional_mmse(family, g).value; }, grid);
}

struct DominanceReport {
  double max_violation = 0.0;  // max of mmse - sigma^2/(1 + sigma^2 g); <= 0 in theory
  double at_snr = 0.0;
  std::vector<double> gaps;    // sigma^2/(1 + sigma^2 g) - mmse, per grid point
};

// mmse(X, g) <= Var(X)/(1 + Var(X) g).
inline DominanceReport check_gaussian_dominance(const InputDistribution& dist, std::span<const double> snrs) {
  if (snrs.empty()) throw InputError("check_gaussian_dominance: empty grid");
  const double v = dist.variance();
  DominanceReport r;
  r.gaps = parallel_map<double>(snrs.size(), [&](std::size_t i) {
    detail::require_snr(snrs[i]);
    return v / (1.0 + v * snrs[i]) - mmse_at(dist, snrs[i]).value;
  });
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    if (-r.gaps[i] > r.max_violation) {
      r.max_violation = -r.gaps[i];
      r.at_snr = snrs[i];
    }
  }
  return r;
}

// mmse(alpha P0 + (1-alpha) P1) - [alpha mmse(P0) + (1-alpha) mmse(P1)] >= 0.
inline double check_concavity(const InputDistribution& d0, const InputDistribution& d1, double alpha, double snr) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("check_concavity: alpha must be in [0, 1]");
  const auto m = mix({{d0, alpha}, {d1, 1.0 - alpha}});
  return mmse_at(m, snr).value - (alpha * mmse_at(d0, snr).value + (1.0 - alpha) * mmse_at(d1, snr).value);
}

// mmse(X) - mmse(X | U) >= 0, with X ~ family marginal.
inline double check_conditioning(const Family& family, double snr) {
  return mmse_at(family_marginal(family), snr).value - conditional_mmse(family, snr).value;
}

struct SumMonotonicityReport {
  std::vector<double> values;  // mmse(S_n, snr), n = 1..n_max
  std::vector<double> gaps;    // values[n] - values[n-1]
  double gaussian_limit = 0.0; // Var(X)/(1 + Var(X) snr)
};

// mmse(S_{n+1}) >= mmse(S_n) for S_n = (X_1 + ... + X_n)/sqrt(n), rising
// toward the Gaussian of equal variance.
inline SumMonotonicityReport check_sum_monotonicity(const InputDistribution& dist, int n_max, double snr,
                                                    std::size_t part_cap = kDefaultPartCap) {
  if (n_max < 1) throw InputError("check_sum_monotonicity: n_max must be positive");
  SumMonotonicityReport r;
  for (int n = 1; n <= n_max; ++n) r.values.push_back(mmse_at(normalized_iid_sum(dist, n, part_cap), snr).value);
  for (int n = 1; n < n_max; ++n) r.gaps.push_back(r.values[n] - r.values[n - 1]);
  const double v = dist.variance();
  r.gaussian_limit = v / (1.0 + v * snr);
  return r;
}

// mmse(cos a X1 + sin a X2) - [cos^2 a mmse(X1) + sin^2 a mmse(X2)] >= 0.
inline double check_cosine_mix(const InputDistribution& d1, const InputDistribution& d2, double alpha, double snr) {
  // Snap cos/sin at multiples of pi/2 so that the trivial cases are exact.
  auto snap = [](double v) { return std::abs(v) < 1e-15 ? 0.0 : v; };
  const double c = snap(std::cos(alpha));
  const double s = snap(std::sin(alpha));
  const auto sum = convolve(affine(d1, c, 0.0), affine(d2, s, 0.0));
  return mmse_at(sum, snr).value - (c * c * mmse_at(d1, snr).value + s * s * mmse_at(d2, snr).value);
}

// mmse(sum X_i) - sum_i lambda_i mmse(X_{\i} / sqrt((n-1) lambda_i)) >= 0.
inline double check_tv_inequality(const std::vector<InputDistribution>& dists, const std::vector<double>& lambdas,
                                  double gamma) {
  const std::size_t n = dists.size();
  if (n < 2) throw InputError("check_tv_inequality: need at least two variables");
  if (lambdas.size() != n) throw InputError("check_tv_inequality: one lambda per variable");
  double total = 0.0;
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw InputError("check_tv_inequality: lambdas must be nonnegative");
    total += l;
  }
  detail::require_unit_sum(total, "check_tv_inequality");
  detail::require_snr(gamma);

  InputDistribution sum = dists[0];
  for (std::size_t i = 1; i < n; ++i) sum = convolve(sum, dists[i]);
  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lambdas[i] == 0.0) continue;
    std::optional<InputDistribution> rest;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      rest = rest ? convolve(*rest, dists[j]) : dists[j];
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n - 1) * lambdas[i]);
    rhs += lambdas[i] * mmse_at(affine(*rest, scale, 0.0), gamma).value;
  }
  return mmse_at(sum, gamma).value - rhs;
}

}  // namespace mmse_lab
