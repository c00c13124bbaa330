#pragma once

// Numerical integration used throughout the library: globally adaptive
// Gauss-Kronrod (7/15) on finite intervals with caller-supplied breakpoints,
// and Gauss-Hermite rules for expectations against the standard normal.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "mmse_lab/errors.hpp"

namespace mmse_lab {

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule, at Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// One G7K15 panel with the QUADPACK error heuristic.
template <class F>
Segment kronrod_panel(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> left{};
  std::array<double, 7> right{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    left[j] = f(center - dx);
    right[j] = f(center + dx);
    const double pair = left[j] + right[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(left[j]) + std::abs(right[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));

  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = abs_sum * std::abs(half);
  if (resasc != 0.0 && error != 0.0)
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    error = std::max(50.0 * eps * resabs, error);
  return {lo, hi, value, error};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over [breaks.front(), breaks.back()].
// The breakpoints seed the initial partition; they must be sorted.
template <class F>
QuadResult integrate_adaptive(F&& f, std::span<const double> breaks,
                              const QuadOptions& opt = {}) {
  QuadResult out;
  if (breaks.size() < 2) return out;
  std::priority_queue<detail::Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto seg = detail::kronrod_panel(f, breaks[i], breaks[i + 1]);
    out.evaluations += 15;
    total += seg.value;
    total_err += seg.error;
    heap.push(seg);
  }
  auto done = [&] {
    return total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  };
  while (!done() && static_cast<int>(heap.size()) < opt.max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      heap.push(worst);
      break;
    }
    auto a = detail::kronrod_panel(f, worst.lo, mid);
    auto b = detail::kronrod_panel(f, mid, worst.hi);
    out.evaluations += 30;
    total += a.value + b.value - worst.value;
    total_err += a.error + b.error - worst.error;
    heap.push(a);
    heap.push(b);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return out;
}

template <class F>
QuadResult integrate_adaptive(F&& f, double lo, double hi, const QuadOptions& opt = {}) {
  const std::array<double, 2> b{lo, hi};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(b), opt);
}

// Nodes and weights for E[g(Z)], Z ~ N(0,1): sum_k w_k g(x_k), sum_k w_k = 1.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Probabilists' Gauss-Hermite rule of the given size, by Newton iteration on
// the orthonormal Hermite recurrence (physicists' nodes, rescaled).
inline HermiteRule gauss_hermite_rule(int n) {
  if (n < 1 || n > 400) throw InputError("gauss_hermite_rule: size must be in [1, 400]");
  constexpr double pim4 = 0.7511255444649425;  // pi^(-1/4)
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
    rule.weights[i] = w[n - 1 - i] * inv_sqrt_pi;
  }
  return rule;
}

// E[g(Z)] with node doubling 33 -> 65 -> 129 -> 257, stopping once two
// successive rules agree to rel_tol.
template <class G>
QuadResult gauss_hermite_expectation(G&& g, double rel_tol = 1e-10) {
  static const std::array<HermiteRule, 4> rules = {gauss_hermite_rule(33), gauss_hermite_rule(65),
                                                   gauss_hermite_rule(129),
                                                   gauss_hermite_rule(257)};
  QuadResult out;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rule : rules) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * g(rule.nodes[k]);
    out.evaluations += static_cast<int>(rule.nodes.size());
    if (!std::isnan(previous)) {
      out.error = std::abs(sum - previous);
      out.value = sum;
      if (out.error <= rel_tol * std::abs(sum) || out.error <= 1e-300) {
        out.converged = true;
        return out;
      }
    }
    previous = sum;
    out.value = sum;
  }
  return out;
}

}  // namespace mmse_lab
