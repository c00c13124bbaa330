#pragma once

// Derivatives of mmse(X, snr) in snr as expectations of polynomials in the
// posterior central moments M_2, M_3, M_4; the zero-SNR Taylor expansion;
// Hermite polynomials; and a Richardson-extrapolated finite-difference oracle.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "mmse_lab/channel.hpp"
#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/mmse.hpp"
#include "mmse_lab/quadrature.hpp"

namespace mmse_lab {

inline constexpr int kMaxHermiteOrder = 32;

// Probabilists' Hermite polynomial He_n, He_n = (-1)^n phi^(n) / phi.
inline double hermite(int n, double x) {
  if (n < 0 || n > kMaxHermiteOrder) throw InputError("hermite: order must be in [0, 32]");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace detail {

inline void require_derivative_order(int order) {
  if (order < 1 || order > 3) throw InputError("mmse derivative order must be 1, 2 or 3");
}

// d^order mmse / d snr^order as a polynomial in central moments m2, m3, m4.
// At snr = 0 these are the prior central moments; at snr > 0 the posterior
// ones, averaged over the output.
inline double derivative_polynomial(int order, double m2, double m3, double m4) {
  switch (order) {
    case 1:
      return -m2 * m2;
    case 2:
      return 2.0 * m2 * m2 * m2 - m3 * m3;
    default:
      return 6.0 * m4 * m2 * m2 - m4 * m4 + 12.0 * m3 * m3 * m2 - 15.0 * m2 * m2 * m2 * m2;
  }
}

}  // namespace detail

// Sign-changing integrands for orders 2 and 3 cap attainable relative
// accuracy, hence the looser default.
inline MmseValue mmse_derivative_with_error(const InputDistribution& dist, double snr, int order,
                                            const QuadOptions& opt = {.rel_tol = 1e-10}) {
  detail::require_derivative_order(order);
  detail::require_snr(snr);
  if (dist.is_point_mass()) return {0.0, 0.0};
  if (snr == 0.0) {
    const double m2 = moment(dist, 2, true);
    const double m3 = moment(dist, 3, true);
    const double m4 = moment(dist, 4, true);
    return {detail::derivative_polynomial(order, m2, m3, m4), 0.0};
  }
  const auto q = integrate_over_output(
      dist, std::sqrt(snr),
      [order](const Posterior& p) {
        const double m2 = p.central_moment(2);
        const double m3 = order >= 2 ? p.central_moment(3) : 0.0;
        const double m4 = order >= 3 ? p.central_moment(4) : 0.0;
        return detail::derivative_polynomial(order, m2, m3, m4);
      },
      opt);
  return detail::checked(q, "mmse_derivative");
}

inline double mmse_derivative(const InputDistribution& dist, double snr, int order) {
  return mmse_derivative_with_error(dist, snr, order).value;
}

// E[M_2^2], the negated first derivative; also the quantity in the Jensen gap
// E[M_2^2] >= mmse^2.
inline double mean_squared_posterior_variance(const InputDistribution& dist, double snr) {
  return -mmse_derivative(dist, snr, 1);
}

// Coefficients c_0..c_max of mmse(X, snr) = sum_k c_k snr^k + O(snr^{max+1}).
inline std::vector<double> taylor_zero(const InputDistribution& dist, int max_order = 3) {
  if (max_order < 0 || max_order > 3) throw InputError("taylor_zero: max_order must be in [0, 3]");
  const double m2 = moment(dist, 2, true);
  const double m3 = moment(dist, 3, true);
  const double m4 = moment(dist, 4, true);
  std::vector<double> c{m2};
  constexpr std::array<double, 4> factorial{1.0, 1.0, 2.0, 6.0};
  for (int k = 1; k <= max_order; ++k) c.push_back(detail::derivative_polynomial(k, m2, m3, m4) / factorial[k]);
  return c;
}

inline double taylor_partial_sum(std::span<const double> coefficients, double snr) {
  double sum = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) sum = sum * snr + coefficients[k];
  return sum;
}

inline double conditional_mmse_derivative(const Family& family, double snr) {
  detail::require_family(family);
  if (!(snr > 0.0)) throw InputError("conditional_mmse_derivative: snr must be positive");
  double sum = 0.0;
  for (const auto& [d, p] : family)
    if (p > 0.0) sum += p * mmse_derivative(d, snr, 1);
  return sum;
}

struct FdOptions {
  double base_step = 0.0;  // 0 selects 1e-2 * max(x, 1), shrunk to keep the stencil inside x > 0
  int levels = 3;          // h, h/2, h/4, ...
  double tol = 1e-6;       // relative agreement between the last two extrapolants
};

struct FdResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool within_tolerance = false;
};

// Central differences of order 1..3 with Richardson extrapolation over a
// halving step schedule. Evaluates f only at points x + j h with |j| <= 2.
template <class F>
FdResult finite_difference(F&& f, double x, int order, const FdOptions& opt = {}) {
  detail::require_derivative_order(order);
  const double reach = order == 3 ? 2.0 : 1.0;
  double h = opt.base_step;
  if (h == 0.0) {
    h = 1e-2 * std::max(x, 1.0);
    if (x > 0.0) h = std::min(h, x / (2.0 * reach));
  }
  if (!(x - reach * h > 0.0)) throw InputError("finite_difference: stencil leaves snr > 0");
  auto central = [&](double step) {
    switch (order) {
      case 1:
        return (f(x + step) - f(x - step)) / (2.0 * step);
      case 2:
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
      default:
        return (f(x + 2 * step) - 2.0 * f(x + step) + 2.0 * f(x - step) - f(x - 2 * step)) /
               (2.0 * step * step * step);
    }
  };
  const int levels = std::max(2, opt.levels);
  std::vector<std::vector<double>> table(levels);
  for (int i = 0; i < levels; ++i) {
    table[i].push_back(central(h / std::pow(2.0, i)));
    double factor = 4.0;
    for (int j = 1; j <= i; ++j) {
      table[i].push_back((factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
      factor *= 4.0;
    }
  }
  FdResult r;
  r.value = table[levels - 1][levels - 1];
  r.error_estimate = std::abs(r.value - table[levels - 1][levels - 2]);
  r.within_tolerance = r.error_estimate <= opt.tol * std::max(std::abs(r.value), 1e-12);
  return r;
}

inline FdResult mmse_finite_difference(const InputDistribution& dist, double snr, int order,
                                       const FdOptions& opt = {}) {
  QuadOptions tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-300;
  return finite_difference([&](double s) { return mmse_at(dist, s, tight).value; }, snr, order, opt);
}

struct DerivativeReport {
  double snr = 0.0;
  int order = 1;
  double analytic = 0.0;
  double finite_diff = 0.0;
  double rel_gap = 0.0;
};

inline double relative_gap(double analytic, double reference, double floor = 1e-12) {
  return std::abs(analytic - reference) / std::max(std::abs(analytic), floor);
}

inline DerivativeReport derivative_report(const InputDistribution& dist, double snr, int order) {
  DerivativeReport r;
  r.snr = snr;
  r.order = order;
  r.analytic = mmse_derivative(dist, snr, order);
  r.finite_diff = mmse_finite_difference(dist, snr, order).value;
  r.rel_gap = relative_gap(r.analytic, r.finite_diff);
  return r;
}

}  // namespace mmse_lab
