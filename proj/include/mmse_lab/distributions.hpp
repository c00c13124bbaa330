#pragma once

// Input laws for the scalar Gaussian channel: finite discrete atoms, Gaussian
// components, and hybrids of the two. Every value is canonical and immutable
// once constructed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <initializer_list>
#include <numeric>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "mmse_lab/errors.hpp"

namespace mmse_lab {

inline constexpr int kMaxMomentOrder = 16;
inline constexpr std::size_t kDefaultPartCap = 1'000'000;

struct Atom {
  double location;
  double weight;
};

struct GaussianComponent {
  double mean;
  double variance;
  double weight;
};

enum class DistKind { discrete, gaussian, gaussian_mixture };

// Raw and central moments indexed by order: raw[k] = E[X^k], central[k] = m_k,
// with raw[0] = central[0] = 1.
struct MomentVector {
  std::vector<double> raw;
  std::vector<double> central;
};

namespace detail {

inline double double_factorial_odd(int j) {  // (j-1)!! for even j >= 0
  double r = 1.0;
  for (int i = j - 1; i > 1; i -= 2) r *= i;
  return r;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// E[(shift + sd*Z)^k] for Z ~ N(0,1).
inline double shifted_gaussian_moment(double shift, double sd, int k) {
  if (sd == 0.0) return std::pow(shift, k);
  double sum = 0.0;
  double sd_pow = 1.0;
  for (int j = 0; j <= k; j += 2) {
    sum += binomial(k, j) * std::pow(shift, k - j) * sd_pow * double_factorial_odd(j);
    sd_pow *= sd * sd;
  }
  return sum;
}

inline bool nearly_equal(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Moments about `center` of a law given by parts; weights need not be
// normalized (the caller divides).
inline double moment_about(std::span<const Atom> atoms,
                           std::span<const GaussianComponent> comps, double center, int k) {
  double sum = 0.0;
  for (const auto& a : atoms) sum += a.weight * std::pow(a.location - center, k);
  for (const auto& c : comps)
    sum += c.weight * shifted_gaussian_moment(c.mean - center, std::sqrt(c.variance), k);
  return sum;
}

}  // namespace detail

class InputDistribution {
 public:
  InputDistribution() : InputDistribution(std::vector<Atom>{{0.0, 1.0}}, {}) {}

  // Canonicalizes: drops zero-weight parts, sorts, merges duplicates
  // (within 1e-12), renormalizes weights to sum to 1.
  InputDistribution(std::vector<Atom> atoms, std::vector<GaussianComponent> comps) {
    for (const auto& a : atoms) {
      if (!std::isfinite(a.location)) throw InputError("atom location must be finite");
      if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw InputError("atom weight must be nonnegative");
    }
    for (const auto& c : comps) {
      if (!std::isfinite(c.mean)) throw InputError("component mean must be finite");
      if (!(c.variance > 0.0) || !std::isfinite(c.variance))
        throw InputError("component variance must be positive and finite");
      if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw InputError("component weight must be nonnegative");
    }
    std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
    std::erase_if(comps, [](const GaussianComponent& c) { return c.weight == 0.0; });
    if (atoms.empty() && comps.empty()) throw InputError("distribution has no mass");

    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    for (const auto& a : atoms) {
      if (!atoms_.empty() && detail::nearly_equal(atoms_.back().location, a.location))
        atoms_.back().weight += a.weight;
      else
        atoms_.push_back(a);
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
      return a.mean != b.mean ? a.mean < b.mean : a.variance < b.variance;
    });
    for (const auto& c : comps) {
      if (!comps_.empty() && detail::nearly_equal(comps_.back().mean, c.mean) &&
          detail::nearly_equal(comps_.back().variance, c.variance))
        comps_.back().weight += c.weight;
      else
        comps_.push_back(c);
    }
    double total = 0.0;
    for (const auto& a : atoms_) total += a.weight;
    for (const auto& c : comps_) total += c.weight;
    for (auto& a : atoms_) a.weight /= total;
    for (auto& c : comps_) c.weight /= total;

    mean_ = detail::moment_about(atoms_, comps_, 0.0, 1);
    variance_ = std::max(0.0, detail::moment_about(atoms_, comps_, mean_, 2));
  }

  DistKind kind() const {
    if (comps_.empty()) return DistKind::discrete;
    if (atoms_.empty() && comps_.size() == 1) return DistKind::gaussian;
    return DistKind::gaussian_mixture;
  }

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const GaussianComponent> components() const { return comps_; }
  bool has_discrete_part() const { return !atoms_.empty(); }
  bool has_continuous_part() const { return !comps_.empty(); }
  bool is_point_mass() const { return comps_.empty() && atoms_.size() == 1; }
  std::size_t part_count() const { return atoms_.size() + comps_.size(); }

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double second_moment() const { return variance_ + mean_ * mean_; }

  bool operator==(const InputDistribution& other) const {
    auto same_atoms = std::equal(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
                                 [](const Atom& a, const Atom& b) {
                                   return detail::nearly_equal(a.location, b.location) &&
                                          detail::nearly_equal(a.weight, b.weight);
                                 });
    auto same_comps = std::equal(comps_.begin(), comps_.end(), other.comps_.begin(), other.comps_.end(),
                                 [](const GaussianComponent& a, const GaussianComponent& b) {
                                   return detail::nearly_equal(a.mean, b.mean) &&
                                          detail::nearly_equal(a.variance, b.variance) &&
                                          detail::nearly_equal(a.weight, b.weight);
                                 });
    return same_atoms && same_comps;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<GaussianComponent> comps_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

namespace detail {

inline void require_unit_sum(double total, const char* what) {
  if (std::abs(total - 1.0) > 1e-9) throw InputError(std::string(what) + ": weights must sum to 1");
}

}  // namespace detail

inline InputDistribution make_discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InputError("make_discrete: empty atom list");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0)) throw InputError("make_discrete: atom weights must be positive");
    if (!std::isfinite(a.location)) throw InputError("make_discrete: non-finite location");
    total += a.weight;
  }
  detail::require_unit_sum(total, "make_discrete");
  return InputDistribution(std::move(atoms), {});
}

inline InputDistribution make_point_mass(double location) { return make_discrete({{location, 1.0}}); }

inline InputDistribution make_gaussian(double mean, double variance) {
  if (!(variance > 0.0)) throw InputError("make_gaussian: variance must be positive");
  return InputDistribution({}, {{mean, variance, 1.0}});
}

// Flattened mixture; nested mixtures of any depth collapse to parts.
inline InputDistribution mix(std::span<const std::pair<InputDistribution, double>> parts) {
  if (parts.empty()) throw InputError("mix: no parts");
  double total = 0.0;
  std::vector<Atom> atoms;
  std::vector<GaussianComponent> comps;
  for (const auto& [dist, w] : parts) {
    if (!(w >= 0.0)) throw InputError("mix: weights must be nonnegative");
    total += w;
    for (const auto& a : dist.atoms()) atoms.push_back({a.location, a.weight * w});
    for (const auto& c : dist.components()) comps.push_back({c.mean, c.variance, c.weight * w});
  }
  detail::require_unit_sum(total, "mix");
  return InputDistribution(std::move(atoms), std::move(comps));
}

inline InputDistribution mix(std::initializer_list<std::pair<InputDistribution, double>> parts) {
  std::vector<std::pair<InputDistribution, double>> v(parts);
  return mix(std::span<const std::pair<InputDistribution, double>>(v));
}

// Law of a*X + b. a = 0 collapses to the point mass at b.
inline InputDistribution affine(const InputDistribution& dist, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("affine: non-finite coefficient");
  if (a == 0.0) return make_point_mass(b);
  std::vector<Atom> atoms;
  std::vector<GaussianComponent> comps;
  for (const auto& at : dist.atoms()) atoms.push_back({a * at.location + b, at.weight});
  for (const auto& c : dist.components()) comps.push_back({a * c.mean + b, a * a * c.variance, c.weight});
  return InputDistribution(std::move(atoms), std::move(comps));
}

inline double moment(const InputDistribution& dist, int k, bool central) {
  if (k < 1 || k > kMaxMomentOrder) throw InputError("moment: order must be in [1, 16]");
  return detail::moment_about(dist.atoms(), dist.components(), central ? dist.mean() : 0.0, k);
}

inline MomentVector moments(const InputDistribution& dist, int max_order) {
  if (max_order < 1 || max_order > kMaxMomentOrder) throw InputError("moments: order must be in [1, 16]");
  MomentVector mv;
  mv.raw.assign(max_order + 1, 1.0);
  mv.central.assign(max_order + 1, 1.0);
  for (int k = 1; k <= max_order; ++k) {
    mv.raw[k] = moment(dist, k, false);
    mv.central[k] = k == 1 ? 0.0 : moment(dist, k, true);
  }
  return mv;
}

// Law of X1 + X2 for independent X1 ~ d1, X2 ~ d2.
inline InputDistribution convolve(const InputDistribution& d1, const InputDistribution& d2,
                                  std::size_t part_cap = kDefaultPartCap) {
  if (d1.part_count() * d2.part_count() > part_cap)
    throw InputError("convolve: part count exceeds cap");
  std::vector<Atom> atoms;
  std::vector<GaussianComponent> comps;
  for (const auto& a : d1.atoms()) {
    for (const auto& b : d2.atoms()) atoms.push_back({a.location + b.location, a.weight * b.weight});
    for (const auto& c : d2.components()) comps.push_back({a.location + c.mean, c.variance, a.weight * c.weight});
  }
  for (const auto& c : d1.components()) {
    for (const auto& b : d2.atoms()) comps.push_back({c.mean + b.location, c.variance, c.weight * b.weight});
    for (const auto& e : d2.components())
      comps.push_back({c.mean + e.mean, c.variance + e.variance, c.weight * e.weight});
  }
  return InputDistribution(std::move(atoms), std::move(comps));
}

inline constexpr int kMaxIidSumTerms = 12;

// Exact law of (X_1 + ... + X_n)/sqrt(n) for i.i.d. X_i ~ dist.
inline InputDistribution normalized_iid_sum(const InputDistribution& dist, int n,
                                            std::size_t part_cap = kDefaultPartCap) {
  if (n < 1) throw InputError("normalized_iid_sum: n must be positive");
  if (dist.kind() == DistKind::gaussian) {
    const auto& c = dist.components()[0];
    return make_gaussian(std::sqrt(static_cast<double>(n)) * c.mean, c.variance);
  }
  if (dist.is_point_mass()) return make_point_mass(std::sqrt(static_cast<double>(n)) * dist.atoms()[0].location);
  if (n > kMaxIidSumTerms) throw InputError("normalized_iid_sum: n exceeds 12 for non-Gaussian input");
  InputDistribution sum = dist;
  for (int i = 1; i < n; ++i) sum = convolve(sum, dist, part_cap);
  return affine(sum, 1.0 / std::sqrt(static_cast<double>(n)), 0.0);
}

// Canonical inputs used across tests, the CLI, and the examples.
namespace inputs {

inline InputDistribution binary() { return make_discrete({{-1.0, 0.5}, {1.0, 0.5}}); }
inline InputDistribution binary_sqrt2() { return affine(binary(), std::sqrt(2.0), 0.0); }
inline InputDistribution skewed_binary() { return make_discrete({{-4.95, 0.01}, {0.05, 0.99}}); }
inline InputDistribution standard_gaussian() { return make_gaussian(0.0, 1.0); }
inline InputDistribution pam4() {
  const double s = 1.0 / std::sqrt(5.0);
  return make_discrete({{-3 * s, 0.25}, {-s, 0.25}, {s, 0.25}, {3 * s, 0.25}});
}
// X = Z + sqrt(var - 1) B with Z ~ N(0,1), B = +-1 equiprobable; var > 1.
inline InputDistribution gaussian_plus_binary(double var) {
  const double c = std::sqrt(var - 1.0);
  return mix({{make_gaussian(-c, 1.0), 0.5}, {make_gaussian(c, 1.0), 0.5}});
}

struct NamedInput {
  std::string name;
  InputDistribution dist;
};

// The default corpus: every kind of input the representation admits.
inline std::vector<NamedInput> corpus() {
  return {
      {"gaussian", standard_gaussian()},
      {"gaussian_quarter", make_gaussian(0.0, 0.25)},
      {"binary", binary()},
      {"binary_sqrt2", binary_sqrt2()},
      {"skewed_binary", skewed_binary()},
      {"pam4", pam4()},
      {"ternary", make_discrete({{-1.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}})},
      {"gaussian_mixture", mix({{make_gaussian(-1.0, 0.25), 0.5}, {make_gaussian(1.0, 0.25), 0.5}})},
      {"gaussian_plus_binary", gaussian_plus_binary(2.0)},
      {"hybrid", mix({{make_point_mass(0.0), 0.3}, {make_gaussian(0.5, 1.0), 0.7}})},
  };
}

}  // namespace inputs

}  // namespace mmse_lab
