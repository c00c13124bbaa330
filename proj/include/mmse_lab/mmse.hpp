#pragma once

// mmse(X, snr) = E[(X - E[X | sqrt(snr) X + N])^2] and the identities built on
// it: upper bounds, shift/scale laws, the SNR-increment identity, and the
// conditional MMSE given a finite side-information variable.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmse_lab/channel.hpp"
#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/parallel.hpp"
#include "mmse_lab/quadrature.hpp"

namespace mmse_lab {

struct MmseValue {
  double value = 0.0;
  double quad_err = 0.0;
};

// Side information U with finitely many values: (law of X given U = u, P(U = u)).
using Family = std::vector<std::pair<InputDistribution, double>>;

namespace detail {

inline void require_snr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) throw InputError("snr must be finite and nonnegative");
}

inline void require_family(const Family& family) {
  if (family.empty()) throw InputError("family must not be empty");
  double total = 0.0;
  for (const auto& [d, p] : family) {
    if (!(p >= 0.0)) throw InputError("family weights must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("family weights must sum to 1");
}

inline MmseValue checked(const QuadResult& q, const char* what) {
  if (!q.converged)
    throw NumericalError(std::string(what) + ": quadrature did not reach tolerance", q.value, q.error);
  return {q.value, q.error};
}

}  // namespace detail

// Average posterior variance, integrated over the output density.
inline MmseValue mmse_at(const InputDistribution& dist, double snr, const QuadOptions& opt = {}) {
  detail::require_snr(snr);
  if (snr == 0.0) return {dist.variance(), 0.0};
  if (dist.is_point_mass()) return {0.0, 0.0};
  const auto q = integrate_over_output(
      dist, std::sqrt(snr), [](const Posterior& p) { return std::max(0.0, p.central_moment(2)); }, opt);
  auto out = detail::checked(q, "mmse_at");
  out.value = std::max(0.0, out.value);
  return out;
}

// E[X^2] - int h_1^2 / h_0 dy. Same quantity as mmse_at by a different route;
// subject to cancellation when the MMSE is small relative to E[X^2].
inline MmseValue mmse_energy_route(const InputDistribution& dist, double snr, const QuadOptions& opt = {}) {
  detail::require_snr(snr);
  if (snr == 0.0) return {dist.variance(), 0.0};
  const auto q = integrate_over_output(dist, std::sqrt(snr), [](const Posterior& p) { return p.mean * p.mean; }, opt);
  return {dist.second_moment() - q.value, q.error};
}

// min(Var X, 1/snr); with the variance unknown, 1/snr (+inf at snr = 0).
inline double mmse_upper_bound(std::optional<double> variance, double snr) {
  detail::require_snr(snr);
  const double inv = snr == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / snr;
  return variance ? std::min(*variance, inv) : inv;
}

inline double mmse_bounds(const InputDistribution& dist, double snr) {
  return mmse_upper_bound(dist.variance(), snr);
}

struct ShiftScaleCheck {
  bool pass = false;
  double transformed = 0.0;  // mmse(aX + b, snr)
  double predicted = 0.0;    // a^2 mmse(X, a^2 snr)
  double residual = 0.0;
};

inline ShiftScaleCheck mmse_shift_scale_check(const InputDistribution& dist, double a, double b, double snr,
                                              double tol = 1e-8) {
  ShiftScaleCheck r;
  r.transformed = mmse_at(affine(dist, a, b), snr).value;
  r.predicted = a * a * mmse_at(dist, a * a * snr).value;
  r.residual = std::abs(r.transformed - r.predicted);
  r.pass = r.residual <= tol;
  return r;
}

// mmse(X, gamma | sqrt(snr) X + N): the output-weighted average of the MMSE of
// each posterior law X_{y;snr} at SNR gamma.
inline MmseValue incremental_mmse(const InputDistribution& dist, double snr, double gamma,
                                  const QuadOptions& opt = {.rel_tol = 1e-10, .abs_tol = 1e-16}) {
  detail::require_snr(snr);
  detail::require_snr(gamma);
  if (snr == 0.0) return mmse_at(dist, gamma);
  if (dist.is_point_mass()) return {0.0, 0.0};
  QuadOptions inner;
  inner.rel_tol = 1e-12;
  const auto q = integrate_over_output(
      dist, std::sqrt(snr),
      [&](const Posterior& p) {
        const InputDistribution slice(p.atoms, p.comps);
        return mmse_at(slice, gamma, inner).value;
      },
      opt);
  return detail::checked(q, "incremental_mmse");
}

inline MmseValue conditional_mmse(const Family& family, double snr, const QuadOptions& opt = {}) {
  detail::require_family(family);
  MmseValue out;
  for (const auto& [d, p] : family) {
    if (p == 0.0) continue;
    const auto m = mmse_at(d, snr, opt);
    out.value += p * m.value;
    out.quad_err += p * m.quad_err;
  }
  return out;
}

inline InputDistribution family_marginal(const Family& family) {
  detail::require_family(family);
  return mix(std::span<const std::pair<InputDistribution, double>>(family));
}

// (2/sqrt(snr))^n sqrt(n!), bounding E|X - E[X|Y]|^n.
inline double error_moment_bound(double snr, int n) {
  if (!(snr > 0.0)) throw InputError("error_moment_bound: snr must be positive");
  if (n < 0) throw InputError("error_moment_bound: n must be nonnegative");
  return std::exp(n * std::log(2.0 / std::sqrt(snr)) + 0.5 * std::lgamma(n + 1.0));
}

// E|X - E[X|Y]|^n.
inline MmseValue error_abs_moment(const InputDistribution& dist, double snr, int n, const QuadOptions& opt = {}) {
  if (!(snr > 0.0)) throw InputError("error_abs_moment: snr must be positive");
  if (n < 0 || n > kMaxMomentOrder) throw InputError("error_abs_moment: n must be in [0, 16]");
  if (n == 0) return {1.0, 0.0};
  if (dist.is_point_mass()) return {0.0, 0.0};
  const auto q = integrate_over_output(
      dist, std::sqrt(snr), [n](const Posterior& p) { return posterior_abs_moment(p, n, true); }, opt);
  return detail::checked(q, "error_abs_moment");
}

// One factor |M_i|^power of a posterior-moment product.
struct MomentFactor {
  int index;
  int power;
};

// snr^{-n/2} 2^n sqrt(n!) with n = sum index * power.
inline double moment_product_bound(double snr, std::span<const MomentFactor> factors) {
  int n = 0;
  for (const auto& f : factors) n += f.index * f.power;
  return error_moment_bound(snr, n);
}

// E[prod_j |M_{i_j}|^{n_j}] over the output, i_j in [2, 8].
inline MmseValue moment_product_expectation(const InputDistribution& dist, double snr,
                                            std::span<const MomentFactor> factors,
                                            const QuadOptions& opt = {.rel_tol = 1e-10}) {
  if (!(snr > 0.0)) throw InputError("moment_product_expectation: snr must be positive");
  for (const auto& f : factors)
    if (f.index < 2 || f.index > kMaxPosteriorOrder || f.power < 0)
      throw InputError("moment_product_expectation: index in [2, 8], power >= 0");
  if (dist.is_point_mass()) return {0.0, 0.0};
  std::vector<MomentFactor> fs(factors.begin(), factors.end());
  const auto q = integrate_over_output(
      dist, std::sqrt(snr),
      [&fs](const Posterior& p) {
        double prod = 1.0;
        for (const auto& f : fs) prod *= std::pow(std::abs(p.central_moment(f.index)), f.power);
        return prod;
      },
      opt);
  return detail::checked(q, "moment_product_expectation");
}

struct CurvePoint {
  double snr;
  double value;
  double quad_err;
  double upper_bound;
};

struct MmseCurve {
  std::vector<CurvePoint> grid;
};

inline MmseCurve mmse_curve(const InputDistribution& dist, std::span<const double> snrs) {
  for (std::size_t i = 1; i < snrs.size(); ++i)
    if (!(snrs[i] > snrs[i - 1])) throw InputError("snr grid must be strictly increasing");
  MmseCurve curve;
  curve.grid = parallel_map<CurvePoint>(snrs.size(), [&](std::size_t i) {
    const auto m = mmse_at(dist, snrs[i]);
    return CurvePoint{snrs[i], m.value, m.quad_err, mmse_bounds(dist, snrs[i])};
  });
  return curve;
}

}  // namespace mmse_lab
