#pragma once

// Capacity applications of the single-crossing property under a unit power
// constraint: the Gaussian wiretap secrecy capacity, the Gaussian broadcast
// region together with a numerical walk through its MMSE-based converse, and
// the Gaussian-perturbation case of the entropy power inequality.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/infotheory.hpp"
#include "mmse_lab/mmse.hpp"
#include "mmse_lab/parallel.hpp"

namespace mmse_lab {

inline constexpr double kPowerSlack = 1e-9;

namespace detail {

inline void require_snr_pair(double snr1, double snr2) {
  require_snr(snr2);
  if (!(snr1 >= snr2)) throw InputError("need snr1 >= snr2 >= 0");
}

inline void require_unit_power(const InputDistribution& dist) {
  if (dist.second_moment() > 1.0 + kPowerSlack) throw InputError("power constraint E[X^2] <= 1 violated");
}

}  // namespace detail

// (1/2) ln((1 + snr1)/(1 + snr2)).
inline double secrecy_capacity(double snr1, double snr2) {
  detail::require_snr_pair(snr1, snr2);
  return 0.5 * (std::log1p(snr1) - std::log1p(snr2));
}

// I(X;Y) - I(X;Z) = (1/2) int_{snr2}^{snr1} mmse(X, g) dg.
inline double secrecy_gap(const InputDistribution& dist, double snr1, double snr2) {
  detail::require_snr_pair(snr1, snr2);
  detail::require_unit_power(dist);
  if (snr1 == snr2) return 0.0;
  return mutual_information_increment(dist, snr2, snr1).value;
}

struct CapacityRegionSample {
  double alpha = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

inline CapacityRegionSample broadcast_point(double snr1, double snr2, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("broadcast_region: alpha must be in [0, 1]");
  return {alpha, 0.5 * std::log1p(alpha * snr1), 0.5 * (std::log1p(snr2) - std::log1p(alpha * snr2))};
}

inline std::vector<CapacityRegionSample> broadcast_region(double snr1, double snr2, std::span<const double> alphas) {
  detail::require_snr_pair(snr1, snr2);
  std::vector<CapacityRegionSample> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(broadcast_point(snr1, snr2, a));
  return out;
}

struct BroadcastConverseReport {
  double alpha = 0.0;
  double snr0 = 0.0;
  double i_xz_given_u = 0.0;  // I(X;Z|U)
  double i_xy_given_u = 0.0;  // I(X;Y|U), the R1 coordinate
  double i_xz = 0.0;          // I(X;Z)
  double r1 = 0.0;
  double r2 = 0.0;            // I(U;Z) = I(X;Z) - I(X;Z|U)
  CapacityRegionSample bound; // the alpha-point of the Gaussian region
  double exug_max_violation = 0.0;  // max over [snr2, snr1] of E[mmse(X_U,g|U)] - alpha/(alpha g + 1)
  bool inside_region = false;
};

struct ConverseOptions {
  double tol = 1e-8;
  int scan_points = 64;
};

// Follows the converse: alpha from I(X;Z|U) = ln(1 + alpha snr2)/2, snr0 by
// the intermediate-value step on [0, snr2], the conditional MMSE bound on
// [snr2, snr1], and finally (I(X;Y|U), I(U;Z)) against the alpha-point.
inline BroadcastConverseReport broadcast_converse_check(const Family& joint, double snr1, double snr2,
                                                        const ConverseOptions& opt = {}) {
  detail::require_family(joint);
  detail::require_snr_pair(snr1, snr2);
  if (!(snr2 > 0.0)) throw InputError("broadcast_converse_check: snr2 must be positive");
  const auto marginal = family_marginal(joint);
  detail::require_unit_power(marginal);

  BroadcastConverseReport r;
  for (const auto& [d, p] : joint) {
    if (p == 0.0) continue;
    const double low = mutual_information(d, snr2).value;
    r.i_xz_given_u += p * low;
    r.i_xy_given_u += p * (low + mutual_information_increment(d, snr2, snr1).value);
  }
  r.i_xz = mutual_information(marginal, snr2).value;
  r.r1 = r.i_xy_given_u;
  r.r2 = r.i_xz - r.i_xz_given_u;

  r.alpha = std::expm1(2.0 * r.i_xz_given_u) / snr2;
  if (r.alpha > 1.0 + opt.tol) throw NumericalError("broadcast_converse_check: alpha exceeds 1", r.alpha);
  r.alpha = std::clamp(r.alpha, 0.0, 1.0);
  const double alpha = r.alpha;
  auto g = [&](double gamma) { return conditional_mmse(joint, gamma).value - alpha / (alpha * gamma + 1.0); };

  // snr0: first sign change of g on a scan of [0, snr2], refined by
  // bisection; when g vanishes identically, the point of smallest |g|.
  const int n = std::max(2, opt.scan_points);
  const auto gs = parallel_map<double>(n + 1, [&](std::size_t i) { return g(snr2 * i / n); });
  std::size_t best = 0;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
    if (std::abs(gs[i]) < std::abs(gs[best])) best = i;
  r.snr0 = snr2 * best / n;
  for (int i = 0; i < n; ++i) {
    if ((gs[i] < 0.0) == (gs[i + 1] < 0.0) || gs[i] == 0.0) continue;
    double lo = snr2 * i / n;
    double hi = snr2 * (i + 1) / n;
    const bool lo_negative = gs[i] < 0.0;
    while (hi - lo > 1e-10 * (1.0 + hi)) {
      const double m = 0.5 * (lo + hi);
      ((g(m) < 0.0) == lo_negative ? lo : hi) = m;
    }
    r.snr0 = 0.5 * (lo + hi);
    break;
  }

  const auto upper = parallel_map<double>(n + 1, [&](std::size_t i) { return g(snr2 + (snr1 - snr2) * i / n); });
  r.exug_max_violation = *std::max_element(upper.begin(), upper.end());

  r.bound = broadcast_point(snr1, snr2, alpha);
  r.inside_region = r.r1 <= r.bound.r1 + opt.tol && r.r2 <= r.bound.r2 + opt.tol && r.exug_max_violation <= opt.tol;
  if (!r.inside_region)
    throw NumericalError("broadcast_converse_check: rate pair outside the alpha-point of the region",
                         std::max(r.r1 - r.bound.r1, r.r2 - r.bound.r2));
  return r;
}

struct EpiReport {
  double h_x = 0.0;
  double h_xz = 0.0;
  double lhs = 0.0;     // e^{2 h(X+Z)}
  double rhs = 0.0;     // e^{2 h(X)} + 2 pi e var_z
  double margin = 0.0;  // lhs - rhs
  double relative_margin = 0.0;
  double a2 = 0.0;      // entropy power of X over that of N(0,1)
  std::vector<double> ha_snr;
  std::vector<double> ha_values;  // (1/2) int_0^snr [mmse(X,g) - a2/(1 + a2 g)] dg
  double ha_min = 0.0;
};

struct EpiOptions {
  double ha_snr_min = 1e-3;
  double ha_snr_max = 1e3;
  int ha_points = 25;
};

// e^{2h(X+Z)} >= e^{2h(X)} + 2 pi e var_z for Z ~ N(0, var_z), plus the
// proof integral against the Gaussian with the same entropy as X.
inline EpiReport epi_gaussian_check(const InputDistribution& dist, double var_z, const EpiOptions& opt = {}) {
  if (dist.has_discrete_part()) throw InputError("epi_gaussian_check: input must be purely continuous");
  if (!(var_z > 0.0)) throw InputError("epi_gaussian_check: var_z must be positive");
  constexpr double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  EpiReport r;
  r.h_x = differential_entropy(dist).value;
  r.h_xz = differential_entropy(convolve(dist, make_gaussian(0.0, var_z))).value;
  r.lhs = std::exp(2.0 * r.h_xz);
  r.rhs = std::exp(2.0 * r.h_x) + two_pi_e * var_z;
  r.margin = r.lhs - r.rhs;
  r.relative_margin = r.margin / r.rhs;
  r.a2 = std::exp(2.0 * r.h_x) / two_pi_e;

  const int n = std::max(2, opt.ha_points);
  for (int i = 0; i < n; ++i)
    r.ha_snr.push_back(opt.ha_snr_min * std::pow(opt.ha_snr_max / opt.ha_snr_min, static_cast<double>(i) / (n - 1)));
  const auto pieces = parallel_map<double>(n, [&](std::size_t i) {
    const double lo = i == 0 ? 0.0 : r.ha_snr[i - 1];
    return mutual_information_increment(dist, lo, r.ha_snr[i]).value;
  });
  double mi = 0.0;
  r.ha_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    mi += pieces[i];
    r.ha_values.push_back(mi - 0.5 * std::log1p(r.a2 * r.ha_snr[i]));
    r.ha_min = std::min(r.ha_min, r.ha_values.back());
  }
  return r;
}

}  // namespace mmse_lab
