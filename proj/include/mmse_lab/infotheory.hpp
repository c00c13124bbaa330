#pragma once

// Information measures generated by the MMSE through dI/dsnr = mmse/2:
// mutual information, the entropy of discrete inputs, the differential
// entropy of continuous inputs, and derivatives of the mutual information.
// All values are in nats.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mmse_lab/calculus.hpp"
#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/mmse.hpp"
#include "mmse_lab/quadrature.hpp"

namespace mmse_lab {

struct InfoValue {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr double kLn2 = std::numbers::ln2;

namespace detail {

// int_{lo}^{hi} mmse(X, g) dg, integrated in u = ln(1 + g) so that the
// O(1/g) decay at high SNR is flattened.
inline InfoValue integrate_mmse(const InputDistribution& dist, double lo, double hi, const QuadOptions& outer) {
  if (!(hi > lo)) return {};
  QuadOptions inner;
  inner.rel_tol = 1e-12;
  const double ulo = std::log1p(lo);
  const double uhi = std::log1p(hi);
  std::vector<double> breaks;
  constexpr int kPanels = 8;
  for (int i = 0; i <= kPanels; ++i) breaks.push_back(ulo + (uhi - ulo) * i / kPanels);
  const auto q = integrate_adaptive(
      [&](double u) {
        const double g = std::expm1(u);
        return mmse_at(dist, g, inner).value * (1.0 + g);
      },
      std::span<const double>(breaks), outer);
  if (!q.converged) throw NumericalError("mmse integral did not reach tolerance", q.value, q.error);
  return {q.value, q.error};
}

}  // namespace detail

// I(X; sqrt(snr) X + N) = (1/2) int_0^snr mmse(X, g) dg.
inline InfoValue mutual_information(const InputDistribution& dist, double snr,
                                    const QuadOptions& opt = {.rel_tol = 1e-11}) {
  detail::require_snr(snr);
  if (snr == 0.0 || dist.is_point_mass()) return {};
  const auto r = detail::integrate_mmse(dist, 0.0, snr, opt);
  return {0.5 * r.value, 0.5 * r.error};
}

// (1/2) int_{lo}^{hi} mmse(X, g) dg = I(X; at hi) - I(X; at lo).
inline InfoValue mutual_information_increment(const InputDistribution& dist, double lo, double hi,
                                              const QuadOptions& opt = {.rel_tol = 1e-11}) {
  detail::require_snr(lo);
  detail::require_snr(hi);
  if (hi < lo) throw InputError("mutual_information_increment: hi < lo");
  if (dist.is_point_mass()) return {};
  const auto r = detail::integrate_mmse(dist, lo, hi, opt);
  return {0.5 * r.value, 0.5 * r.error};
}

struct EntropyOptions {
  double integrand_floor = 1e-12;  // stop extending once mmse(g_max) falls below
  double initial_gamma_max = 64.0;
  double gamma_cap = 1048576.0;  // 2^20
};

// H(X) = (1/2) int_0^inf mmse(X, g) dg for discrete X. The range doubles
// until the integrand is negligible; the remainder is extrapolated assuming
// exponential decay fitted on [g_max/2, g_max].
inline InfoValue discrete_entropy(const InputDistribution& dist, const EntropyOptions& opt = {}) {
  if (dist.has_continuous_part()) throw InputError("discrete_entropy: input must be purely discrete");
  if (dist.is_point_mass()) return {};
  double gmax = opt.initial_gamma_max;
  double tail_value = mmse_at(dist, gmax).value;
  while (tail_value >= opt.integrand_floor) {
    gmax *= 2.0;
    if (gmax > opt.gamma_cap)
      throw NumericalError("discrete_entropy: mmse does not decay within the SNR cap", 0.0, tail_value);
    tail_value = mmse_at(dist, gmax).value;
  }
  const auto body = detail::integrate_mmse(dist, 0.0, gmax, {.rel_tol = 1e-10});
  double tail = 0.0;
  if (tail_value > 0.0) {
    const double half_value = mmse_at(dist, 0.5 * gmax).value;
    const double rate = std::log(half_value / tail_value) / (0.5 * gmax);
    if (!(rate > 0.0)) throw NumericalError("discrete_entropy: tail is not decaying", body.value, tail_value);
    tail = tail_value / rate;
  }
  return {0.5 * (body.value + tail), 0.5 * (body.error + tail)};
}

struct DiffEntropyOptions {
  double gamma_max = 0.0;        // 0 selects max(1e4, 1e3 / smallest component variance)
  double residual_budget = 1e-4; // absolute, on the fitted tail
};

// h(X) = ln(2 pi e)/2 - (1/2) int_0^inf [1/(1+g) - mmse(X, g)] dg for purely
// continuous X. Beyond g_max the integrand is modelled as c / g^2, with c
// fitted by least squares over the last decade.
inline InfoValue differential_entropy(const InputDistribution& dist, const DiffEntropyOptions& opt = {}) {
  if (dist.has_discrete_part()) throw InputError("differential_entropy: input must be purely continuous");
  double min_var = std::numeric_limits<double>::infinity();
  for (const auto& c : dist.components()) min_var = std::min(min_var, c.variance);
  const double gmax = opt.gamma_max > 0.0 ? opt.gamma_max : std::max(1e4, 1e3 / min_var);

  QuadOptions inner;
  inner.rel_tol = 1e-12;
  const double umax = std::log1p(gmax);
  std::vector<double> breaks;
  constexpr int kPanels = 12;
  for (int i = 0; i <= kPanels; ++i) breaks.push_back(umax * i / kPanels);
  // In u = ln(1+g): [1/(1+g) - mmse] (1+g) = 1 - (1+g) mmse.
  const auto q = integrate_adaptive(
      [&](double u) {
        const double g = std::expm1(u);
        return 1.0 - (1.0 + g) * mmse_at(dist, g, inner).value;
      },
      std::span<const double>(breaks), QuadOptions{.rel_tol = 1e-10, .abs_tol = 1e-12});
  if (!q.converged) throw NumericalError("differential_entropy: integral did not reach tolerance", q.value, q.error);

  // Least-squares c for g(x) ~ c / x^2 on [gmax/10, gmax].
  constexpr int kFitPoints = 9;
  std::vector<double> xs, gs;
  for (int i = 0; i < kFitPoints; ++i) {
    const double x = gmax * std::pow(10.0, -1.0 + static_cast<double>(i) / (kFitPoints - 1));
    xs.push_back(x);
    gs.push_back(1.0 / (1.0 + x) - mmse_at(dist, x, inner).value);
  }
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kFitPoints; ++i) {
    num += gs[i] / (xs[i] * xs[i]);
    den += 1.0 / std::pow(xs[i], 4);
  }
  const double c = num / den;
  double worst = 0.0;
  for (int i = 0; i < kFitPoints; ++i) worst = std::max(worst, std::abs(gs[i] - c / (xs[i] * xs[i])) * xs[i] * xs[i]);
  const double tail = c / gmax;
  const double tail_residual = worst / gmax;
  if (tail_residual > opt.residual_budget)
    throw NumericalError("differential_entropy: tail fit residual over budget", 0.0, tail_residual);
  const double integral = q.value + tail;
  return {0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) - 0.5 * integral,
          0.5 * (q.error + tail_residual)};
}

// d^order/dsnr^order I(X; sqrt(snr) X + N), order 1..4:
//   1: E[M2]/2, 2: -E[M2^2]/2, 3: E[M2^3 - M3^2/2],
//   4: E[-M4^2 + 6 M4 M2^2 + 12 M3^2 M2 - 15 M2^4]/2.
inline double mi_derivative(const InputDistribution& dist, double snr, int order) {
  if (order < 1 || order > 4) throw InputError("mi_derivative: order must be in [1, 4]");
  if (!(snr > 0.0)) throw InputError("mi_derivative: snr must be positive");
  if (order == 1) return 0.5 * mmse_at(dist, snr).value;
  return 0.5 * mmse_derivative(dist, snr, order - 1);
}

inline double to_bits(double nats) { return nats / kLn2; }

}  // namespace mmse_lab
