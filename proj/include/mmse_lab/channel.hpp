#pragma once

// The scalar Gaussian channel Y = a X + N, a = sqrt(snr), N ~ N(0,1).
//
// For inputs in the discrete + Gaussian-mixture class the posterior law of X
// given Y = y is again in that class: each atom keeps its location with weight
// proportional to p_k phi(y - a x_k), and each Gaussian component N(mu, v)
// becomes N((mu + a v y)/(1 + a^2 v), v/(1 + a^2 v)) with weight proportional
// to w N(y; a mu, 1 + a^2 v). The kernels h_i(y;a) = E[X^i phi(y - aX)] are
// therefore h_0(y;a) times posterior raw moments, and the posterior central
// moments are evaluated in closed form about the posterior mean.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/quadrature.hpp"

namespace mmse_lab {

inline constexpr int kMaxKernelOrder = 16;
inline constexpr int kMaxPosteriorOrder = 8;

inline double std_normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

inline double log_std_normal_pdf(double t) {
  return -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi);
}

// P(Z >= t)
inline double std_normal_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

struct ChannelPoint {
  double snr = 0.0;
  double a = 0.0;
  double y = 0.0;

  static ChannelPoint at(double y, double snr) {
    if (!(snr >= 0.0)) throw InputError("snr must be nonnegative");
    return {snr, std::sqrt(snr), y};
  }
};

// Exact posterior law of X given Y = y, with normalized weights.
struct Posterior {
  double log_density = 0.0;  // log h_0(y; a)
  double mean = 0.0;
  std::vector<Atom> atoms;
  std::vector<GaussianComponent> comps;

  double density() const { return std::exp(log_density); }

  double central_moment(int k) const {
    if (k == 1) return 0.0;
    return detail::moment_about(atoms, comps, mean, k);
  }
  double raw_moment(int k) const { return detail::moment_about(atoms, comps, 0.0, k); }
};

struct PosteriorSummary {
  ChannelPoint point;
  double mean = 0.0;
  std::vector<double> central;  // central[i] = M_i for i <= k_max; central[0] = 1, central[1] = 0
  double density = 0.0;
};

namespace detail {

inline void require_finite_y(double y) {
  if (!std::isfinite(y)) throw InputError("observation y must be finite");
}

}  // namespace detail

inline Posterior posterior(const InputDistribution& dist, double y, double a) {
  detail::require_finite_y(y);
  Posterior post;
  const auto atoms = dist.atoms();
  const auto comps = dist.components();
  post.atoms.reserve(atoms.size());
  post.comps.reserve(comps.size());

  std::vector<double> logw;
  logw.reserve(atoms.size() + comps.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& at : atoms) {
    logw.push_back(std::log(at.weight) + log_std_normal_pdf(y - a * at.location));
    peak = std::max(peak, logw.back());
  }
  for (const auto& c : comps) {
    const double s2 = 1.0 + a * a * c.variance;
    const double t = y - a * c.mean;
    logw.push_back(std::log(c.weight) - 0.5 * t * t / s2 - 0.5 * std::log(2.0 * std::numbers::pi * s2));
    peak = std::max(peak, logw.back());
  }
  double total = 0.0;
  for (double lw : logw) total += std::exp(lw - peak);
  post.log_density = peak + std::log(total);

  std::size_t idx = 0;
  for (const auto& at : atoms) {
    const double w = std::exp(logw[idx++] - peak) / total;
    if (w > 0.0) post.atoms.push_back({at.location, w});
  }
  for (const auto& c : comps) {
    const double w = std::exp(logw[idx++] - peak) / total;
    if (w <= 0.0) continue;
    const double s2 = 1.0 + a * a * c.variance;
    post.comps.push_back({(c.mean + a * c.variance * y) / s2, c.variance / s2, w});
  }
  double mean = 0.0;
  for (const auto& at : post.atoms) mean += at.weight * at.location;
  for (const auto& c : post.comps) mean += c.weight * c.mean;
  post.mean = mean;
  return post;
}

// Posterior mean and log h_0 without building the posterior law; the hot
// path of the Monte Carlo oracles.
struct MeanAndLogDensity {
  double mean;
  double log_density;
};

inline MeanAndLogDensity posterior_mean_fast(const InputDistribution& dist, double y, double a) {
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& at : dist.atoms())
    peak = std::max(peak, std::log(at.weight) + log_std_normal_pdf(y - a * at.location));
  for (const auto& c : dist.components()) {
    const double s2 = 1.0 + a * a * c.variance;
    const double t = y - a * c.mean;
    peak = std::max(peak, std::log(c.weight) - 0.5 * t * t / s2 - 0.5 * std::log(2.0 * std::numbers::pi * s2));
  }
  double total = 0.0;
  double first = 0.0;
  for (const auto& at : dist.atoms()) {
    const double w = std::exp(std::log(at.weight) + log_std_normal_pdf(y - a * at.location) - peak);
    total += w;
    first += w * at.location;
  }
  for (const auto& c : dist.components()) {
    const double s2 = 1.0 + a * a * c.variance;
    const double t = y - a * c.mean;
    const double w =
        std::exp(std::log(c.weight) - 0.5 * t * t / s2 - 0.5 * std::log(2.0 * std::numbers::pi * s2) - peak);
    total += w;
    first += w * (c.mean + a * c.variance * y) / s2;
  }
  return {first / total, peak + std::log(total)};
}

// h_i(y; a) = E[X^i phi(y - aX)].
inline double kernel_h(const InputDistribution& dist, double y, double a, int i) {
  if (i < 0 || i > kMaxKernelOrder) throw InputError("kernel_h: order must be in [0, 16]");
  const auto post = posterior(dist, y, a);
  return i == 0 ? post.density() : post.density() * post.raw_moment(i);
}

inline double output_density(const InputDistribution& dist, double y, double snr) {
  return kernel_h(dist, y, ChannelPoint::at(y, snr).a, 0);
}

// E[X | Y = y]; the prior mean at snr = 0.
inline double posterior_mean(const InputDistribution& dist, double y, double snr) {
  const auto pt = ChannelPoint::at(y, snr);
  detail::require_finite_y(y);
  if (snr == 0.0) return dist.mean();
  return posterior(dist, y, pt.a).mean;
}

inline PosteriorSummary summarize(const Posterior& post, const ChannelPoint& pt, int k_max) {
  PosteriorSummary s;
  s.point = pt;
  s.mean = post.mean;
  s.density = post.density();
  s.central.assign(k_max + 1, 0.0);
  s.central[0] = 1.0;
  for (int i = 2; i <= k_max; ++i) s.central[i] = post.central_moment(i);
  s.central[2] = std::max(0.0, s.central[2]);
  return s;
}

inline PosteriorSummary posterior_summary(const InputDistribution& dist, double y, double snr, int k_max) {
  if (k_max < 2 || k_max > kMaxPosteriorOrder) throw InputError("posterior_summary: k_max must be in [2, 8]");
  const auto pt = ChannelPoint::at(y, snr);
  if (snr == 0.0) {
    detail::require_finite_y(y);
    PosteriorSummary s;
    s.point = pt;
    s.mean = dist.mean();
    s.density = std_normal_pdf(y);
    s.central.assign(k_max + 1, 0.0);
    s.central[0] = 1.0;
    for (int i = 2; i <= k_max; ++i) s.central[i] = moment(dist, i, true);
    return s;
  }
  return summarize(posterior(dist, y, pt.a), pt, k_max);
}

// sqrt(2/pi) e^{y^2/2} / h_0(y;a) * e^{-a^2 x^2 / 4}, an upper bound on
// P(|X_y| >= x). Not capped at 1.
inline double posterior_tail_bound(const InputDistribution& dist, double y, double a, double x) {
  if (a == 0.0) throw InputError("posterior_tail_bound: a must be nonzero");
  if (!(x > 0.0)) throw InputError("posterior_tail_bound: x must be positive");
  const auto post = posterior(dist, y, a);
  return std::sqrt(2.0 / std::numbers::pi) * std::exp(0.5 * y * y - post.log_density - 0.25 * a * a * x * x);
}

// Exact P(|X_y| >= x).
inline double posterior_tail_probability(const InputDistribution& dist, double y, double a, double x) {
  const auto post = posterior(dist, y, a);
  double p = 0.0;
  for (const auto& at : post.atoms)
    if (std::abs(at.location) >= x) p += at.weight;
  for (const auto& c : post.comps) {
    const double sd = std::sqrt(c.variance);
    p += c.weight * (std_normal_tail((x - c.mean) / sd) + std_normal_tail((x + c.mean) / sd));
  }
  return std::min(1.0, p);
}

namespace detail {

// E|shift + sd Z|^n, exact via truncated Gaussian moments.
inline double abs_shifted_gaussian_moment(double shift, double sd, int n) {
  if (n % 2 == 0) return shifted_gaussian_moment(shift, sd, n);
  const double z0 = -shift / sd;
  // upper[j] = int_{z0}^inf z^j phi(z) dz
  std::vector<double> upper(n + 1);
  upper[0] = std_normal_tail(z0);
  if (n >= 1) upper[1] = std_normal_pdf(z0);
  for (int j = 2; j <= n; ++j) upper[j] = std::pow(z0, j - 1) * std_normal_pdf(z0) + (j - 1) * upper[j - 2];
  double above = 0.0;
  for (int j = 0; j <= n; ++j) above += binomial(n, j) * std::pow(shift, n - j) * std::pow(sd, j) * upper[j];
  return std::max(0.0, 2.0 * above - shifted_gaussian_moment(shift, sd, n));
}

}  // namespace detail

// E[|X_y - c|^n] with c = 0 (raw) or c = E[X_y] (central).
inline double posterior_abs_moment(const Posterior& post, int n, bool central) {
  const double c = central ? post.mean : 0.0;
  double sum = 0.0;
  for (const auto& at : post.atoms) sum += at.weight * std::pow(std::abs(at.location - c), n);
  for (const auto& g : post.comps)
    sum += g.weight * detail::abs_shifted_gaussian_moment(g.mean - c, std::sqrt(g.variance), n);
  return sum;
}

// n e^{y^2/2} / h_0(y;a) (sqrt(2)/|a|)^n sqrt((n-1)!), an upper bound on
// E|X_y|^n; E|X_y - E X_y|^n is further bounded by 2^n E|X_y|^n.
inline double posterior_moment_bound(const InputDistribution& dist, double y, double a, int n) {
  if (a == 0.0) throw InputError("posterior_moment_bound: a must be nonzero");
  if (n < 1) throw InputError("posterior_moment_bound: n must be positive");
  const auto post = posterior(dist, y, a);
  return std::exp(std::log(static_cast<double>(n)) + 0.5 * y * y - post.log_density +
                  n * std::log(std::numbers::sqrt2 / std::abs(a)) + 0.5 * std::lgamma(static_cast<double>(n)));
}

// Integration domain in y for integrals against h_0(y; a): the centres of the
// output components, midpoints between neighbouring centres, and 8 output
// standard deviations beyond the outermost ones.
inline std::vector<double> output_breakpoints(const InputDistribution& dist, double a) {
  struct Centre {
    double at;
    double sd;
  };
  std::vector<Centre> centres;
  for (const auto& at : dist.atoms()) centres.push_back({a * at.location, 1.0});
  for (const auto& c : dist.components()) centres.push_back({a * c.mean, std::sqrt(1.0 + a * a * c.variance)});
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : centres) {
    lo = std::min(lo, c.at - 8.0 * c.sd);
    hi = std::max(hi, c.at + 8.0 * c.sd);
  }
  std::vector<double> breaks{lo, hi};
  constexpr std::size_t kMaxSeededCentres = 256;
  if (centres.size() <= kMaxSeededCentres) {
    std::sort(centres.begin(), centres.end(), [](const Centre& p, const Centre& q) { return p.at < q.at; });
    for (std::size_t i = 0; i < centres.size(); ++i) {
      breaks.push_back(centres[i].at);
      if (i + 1 < centres.size()) breaks.push_back(0.5 * (centres[i].at + centres[i + 1].at));
    }
  } else {
    for (std::size_t i = 1; i < kMaxSeededCentres; ++i)
      breaks.push_back(lo + (hi - lo) * static_cast<double>(i) / kMaxSeededCentres);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(p)); }),
               breaks.end());
  return breaks;
}

// int h_0(y; a) g(posterior at y) dy, for a > 0.
template <class G>
QuadResult integrate_over_output(const InputDistribution& dist, double a, G&& g, const QuadOptions& opt = {}) {
  const auto breaks = output_breakpoints(dist, a);
  auto integrand = [&](double y) {
    const auto post = posterior(dist, y, a);
    const double dens = post.density();
    if (dens == 0.0) return 0.0;
    return dens * g(post);
  };
  return integrate_adaptive(integrand, std::span<const double>(breaks), opt);
}

}  // namespace mmse_lab
