#pragma once

// Seeded Monte Carlo estimators, independent of the quadrature engine: they
// sample (X, N) directly and use only the closed-form posterior mean or
// output density at each sample.
//
// Sample i draws its variates from counters 3i, 3i+1, 3i+2 of a counter-based
// generator, so an estimate depends on (seed, n) alone, not on how batches are
// scheduled across threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mmse_lab/channel.hpp"
#include "mmse_lab/distributions.hpp"
#include "mmse_lab/errors.hpp"
#include "mmse_lab/parallel.hpp"

namespace mmse_lab {

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  double standard_error() const { return stderr_; }
  // |value - reference| in units of the standard error (0 when both agree exactly).
  double z_score(double reference) const {
    const double d = std::abs(value - reference);
    if (d == 0.0) return 0.0;
    return stderr_ > 0.0 ? d / stderr_ : std::numeric_limits<double>::infinity();
  }
};

// Inverse standard normal CDF (Wichura, AS241 PPND16); relative accuracy about
// 1e-16 on (0, 1).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("inverse_normal_cdf: p must lie in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r +
                4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r +
                2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r +
               1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r +
               1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r +
               2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r +
               7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

// Stateless counter-based generator: variate k of stream `seed` is a fixed
// function of (seed, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + mix(counter + 0x9e3779b97f4a7c15ULL));
  }

  // Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t counter) const { return inverse_normal_cdf(uniform(counter)); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

// Draws X ~ dist from a uniform (part selection) and a standard normal.
class InputSampler {
 public:
  explicit InputSampler(const InputDistribution& dist) : dist_(dist) {
    double acc = 0.0;
    for (const auto& a : dist.atoms()) cdf_.push_back(acc += a.weight);
    for (const auto& c : dist.components()) cdf_.push_back(acc += c.weight);
    cdf_.back() = 1.0;
  }

  double operator()(double u, double z) const {
    const auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    const std::size_t i = std::min(idx, cdf_.size() - 1);
    const auto atoms = dist_.atoms();
    if (i < atoms.size()) return atoms[i].location;
    const auto& c = dist_.components()[i - atoms.size()];
    return c.mean + std::sqrt(c.variance) * z;
  }

 private:
  const InputDistribution& dist_;
  std::vector<double> cdf_;
};

namespace detail {

struct Moments2 {
  double sum = 0.0;
  double sum_sq = 0.0;
};

inline constexpr std::uint64_t kBatchSize = 1 << 16;

inline void require_samples(std::uint64_t n) {
  if (n < 1000) throw InputError("Monte Carlo estimators need at least 1000 samples");
}

// Mean and standard error of f(i) over i in [0, n), batched; the merge order
// is fixed, so the result is bit-identical for any worker count.
template <class F>
McEstimate batched_mean(std::uint64_t n, std::uint64_t seed, F&& f) {
  const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
  const auto partial = parallel_map<Moments2>(batches, [&](std::size_t b) {
    Moments2 m;
    const std::uint64_t lo = b * kBatchSize;
    const std::uint64_t hi = std::min<std::uint64_t>(n, lo + kBatchSize);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double v = f(i);
      m.sum += v;
      m.sum_sq += v * v;
    }
    return m;
  });
  Moments2 total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const double dn = static_cast<double>(n);
  const double mean = total.sum / dn;
  const double var = std::max(0.0, (total.sum_sq - dn * mean * mean) / (dn - 1.0));
  return {mean, std::sqrt(var / dn), n, seed};
}

}  // namespace detail

// E[(X - E[X|Y])^2] with the exact posterior mean as the estimator.
inline McEstimate mc_mmse(const InputDistribution& dist, double snr, std::uint64_t n, std::uint64_t seed) {
  detail::require_samples(n);
  if (!(snr >= 0.0)) throw InputError("snr must be nonnegative");
  const CounterRng rng(seed);
  const InputSampler sample(dist);
  const double a = std::sqrt(snr);
  return detail::batched_mean(n, seed, [&](std::uint64_t i) {
    const double x = sample(rng.uniform(3 * i), rng.normal(3 * i + 1));
    const double y = a * x + rng.normal(3 * i + 2);
    const double est = snr == 0.0 ? dist.mean() : posterior_mean_fast(dist, y, a).mean;
    return (x - est) * (x - est);
  });
}

// E[ln p(Y|X) - ln h_0(Y)].
inline McEstimate mc_mutual_information(const InputDistribution& dist, double snr, std::uint64_t n,
                                        std::uint64_t seed) {
  detail::require_samples(n);
  if (!(snr >= 0.0)) throw InputError("snr must be nonnegative");
  // Y independent of X: the log-ratio is identically zero.
  if (snr == 0.0 || dist.is_point_mass()) return {0.0, 0.0, n, seed};
  const CounterRng rng(seed);
  const InputSampler sample(dist);
  const double a = std::sqrt(snr);
  return detail::batched_mean(n, seed, [&](std::uint64_t i) {
    const double x = sample(rng.uniform(3 * i), rng.normal(3 * i + 1));
    const double noise = rng.normal(3 * i + 2);
    const double y = a * x + noise;
    return log_std_normal_pdf(noise) - posterior_mean_fast(dist, y, a).log_density;
  });
}

// E[(X - c)^k] with c = E[X] when central, else 0.
inline McEstimate mc_moment(const InputDistribution& dist, int k, bool central, std::uint64_t n,
                            std::uint64_t seed) {
  detail::require_samples(n);
  const CounterRng rng(seed);
  const InputSampler sample(dist);
  const double c = central ? dist.mean() : 0.0;
  return detail::batched_mean(n, seed, [&](std::uint64_t i) {
    return std::pow(sample(rng.uniform(3 * i), rng.normal(3 * i + 1)) - c, k);
  });
}

// E[Y^power (X - E[X|Y])]; zero by orthogonality of the MMSE error.
inline McEstimate mc_orthogonality(const InputDistribution& dist, double snr, int power, std::uint64_t n,
                                   std::uint64_t seed) {
  detail::require_samples(n);
  const CounterRng rng(seed);
  const InputSampler sample(dist);
  const double a = std::sqrt(snr);
  return detail::batched_mean(n, seed, [&](std::uint64_t i) {
    const double x = sample(rng.uniform(3 * i), rng.normal(3 * i + 1));
    const double y = a * x + rng.normal(3 * i + 2);
    return std::pow(y, power) * (x - posterior_mean_fast(dist, y, a).mean);
  });
}

struct PosteriorSliceEstimate {
  McEstimate mean;
  McEstimate m2;
  McEstimate m3;
  McEstimate m4;
  double effective_sample_size = 0.0;
};

// Self-normalized importance sampling of the posterior at Y = y: prior
// proposal, weights phi(y - sqrt(snr) x). Standard errors by the delta method.
inline PosteriorSliceEstimate mc_posterior_slice(const InputDistribution& dist, double y, double snr,
                                                 std::uint64_t n, std::uint64_t seed) {
  detail::require_samples(n);
  const CounterRng rng(seed);
  const InputSampler sample(dist);
  const double a = std::sqrt(snr);
  std::vector<double> xs(n), ws(n);
  double wmax = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < n; ++i) {
    xs[i] = sample(rng.uniform(3 * i), rng.normal(3 * i + 1));
    ws[i] = log_std_normal_pdf(y - a * xs[i]);
    wmax = std::max(wmax, ws[i]);
  }
  double sw = 0.0;
  double sw2 = 0.0;
  for (auto& w : ws) {
    w = std::exp(w - wmax);
    sw += w;
    sw2 += w * w;
  }
  auto weighted = [&](auto g) {
    double s = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) s += ws[i] * g(xs[i]);
    return s / sw;
  };
  auto stderr_of = [&](auto g, double est) {
    double s = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double d = g(xs[i]) - est;
      s += ws[i] * ws[i] * d * d;
    }
    return std::sqrt(s) / sw;
  };
  PosteriorSliceEstimate out;
  const double mean = weighted([](double x) { return x; });
  out.mean = {mean, stderr_of([](double x) { return x; }, mean), n, seed};
  auto central = [&](int k, McEstimate& dst) {
    auto g = [mean, k](double x) { return std::pow(x - mean, k); };
    const double v = weighted(g);
    dst = {v, stderr_of(g, v), n, seed};
  };
  central(2, out.m2);
  central(3, out.m3);
  central(4, out.m4);
  out.effective_sample_size = sw * sw / sw2;
  return out;
}

}  // namespace mmse_lab
