#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mmse_lab/mmse_lab.hpp"
#include "support/oracles.hpp"

using namespace mmse_lab;

TEST(Wiretap, SecrecyCapacityExamples) {
  EXPECT_NEAR(secrecy_capacity(1.0, 0.0), 0.5 * std::numbers::ln2, 1e-15);
  EXPECT_EQ(secrecy_capacity(2.5, 2.5), 0.0);
  EXPECT_NEAR(secrecy_capacity(3.0, 1.0), 0.5 * std::numbers::ln2, 1e-15);
  EXPECT_THROW(secrecy_capacity(1.0, 2.0), InputError);
  EXPECT_THROW(secrecy_capacity(1.0, -0.5), InputError);
}

TEST(Wiretap, GapAttainedByGaussianOnly) {
  EXPECT_NEAR(secrecy_gap(inputs::standard_gaussian(), 3.0, 1.0), secrecy_capacity(3.0, 1.0), 1e-9);
  EXPECT_EQ(secrecy_gap(make_point_mass(0.0), 3.0, 1.0), 0.0);
  for (const auto& d : {inputs::binary(), inputs::pam4(), inputs::skewed_binary()})
    EXPECT_LT(secrecy_gap(d, 3.0, 1.0), secrecy_capacity(3.0, 1.0) - 1e-6);
  EXPECT_THROW(secrecy_gap(inputs::binary_sqrt2(), 3.0, 1.0), InputError);
}

TEST(BroadcastRegion, Examples) {
  const auto p0 = broadcast_point(2.0, 1.0, 0.0);
  EXPECT_EQ(p0.r1, 0.0);
  EXPECT_NEAR(p0.r2, 0.5 * std::numbers::ln2, 1e-15);
  const auto p1 = broadcast_point(2.0, 1.0, 1.0);
  EXPECT_NEAR(p1.r1, 0.5 * std::log(3.0), 1e-15);
  EXPECT_NEAR(p1.r2, 0.0, 1e-15);
  const auto ph = broadcast_point(2.0, 1.0, 0.5);
  EXPECT_NEAR(ph.r1, 0.5 * std::numbers::ln2, 1e-15);
  EXPECT_NEAR(ph.r2, 0.5 * std::log(4.0 / 3.0), 1e-15);
  const std::vector<double> alphas{0.0, 0.25, 0.5, 1.0};
  const auto region = broadcast_region(2.0, 1.0, alphas);
  ASSERT_EQ(region.size(), 4u);
  for (std::size_t i = 1; i < region.size(); ++i) {
    EXPECT_GT(region[i].r1, region[i - 1].r1);
    EXPECT_LT(region[i].r2, region[i - 1].r2);
  }
  EXPECT_THROW(broadcast_point(2.0, 1.0, 1.5), InputError);
}

// X = sqrt(1 - alpha) U + sqrt(alpha) V with U = +-1 and V ~ N(0,1): the
// conditional law is N(+-sqrt(1 - alpha), alpha), so alpha is recovered and R1
// sits on the boundary.
TEST(BroadcastConverse, GaussianSuperpositionRecoversAlpha) {
  const double alpha = 0.3;
  const double s = std::sqrt(1.0 - alpha);
  const Family fam{{make_gaussian(-s, alpha), 0.5}, {make_gaussian(s, alpha), 0.5}};
  const auto r = broadcast_converse_check(fam, 4.0, 1.0);
  EXPECT_NEAR(r.alpha, alpha, 1e-6);
  EXPECT_NEAR(r.r1, r.bound.r1, 1e-6);
  EXPECT_LE(r.r2, r.bound.r2 + 1e-8);
  EXPECT_LE(r.exug_max_violation, 1e-8);
  EXPECT_TRUE(r.inside_region);
}

TEST(BroadcastConverse, SingletonFamily) {
  // U constant: I(U;Z) = 0, alpha from I(X;Z).
  const auto r = broadcast_converse_check({{inputs::binary(), 1.0}}, 3.0, 1.0);
  EXPECT_NEAR(r.r2, 0.0, 1e-12);
  EXPECT_TRUE(r.inside_region);
  const auto g = broadcast_converse_check({{inputs::standard_gaussian(), 1.0}}, 3.0, 1.0);
  EXPECT_NEAR(g.alpha, 1.0, 1e-8);
  EXPECT_NEAR(g.r1, 0.5 * std::log(4.0), 1e-8);
}

TEST(BroadcastConverse, RandomFamiliesStayInside) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::uniform_real_distribution<double> snr(0.2, 6.0);
  for (int t = 0; t < 50; ++t) {
    // Two conditional binaries with total power <= 1.
    const double p = u(rng), q = u(rng);
    const double c1 = u(rng), c2 = u(rng);
    auto member = [](double shift, double amp) {
      return make_discrete({{shift - amp, 0.5}, {shift + amp, 0.5}});
    };
    const double scale = std::sqrt(0.95 / (p * (c1 * c1 + q * q) + (1 - p) * (c2 * c2 + q * q)));
    const Family fam{{member(q * scale, c1 * scale), p}, {member(-q * scale, c2 * scale), 1 - p}};
    const double s2 = snr(rng);
    const double s1 = s2 + snr(rng);
    BroadcastConverseReport r;
    ASSERT_NO_THROW(r = broadcast_converse_check(fam, s1, s2)) << t;
    EXPECT_TRUE(r.inside_region) << t;
    EXPECT_LE(r.exug_max_violation, 1e-8) << t;
    EXPECT_GE(r.snr0, 0.0);
    EXPECT_LE(r.snr0, s2);
  }
}

TEST(BroadcastConverse, Errors) {
  EXPECT_THROW(broadcast_converse_check({{inputs::binary(), 1.0}}, 1.0, 0.0), InputError);
  EXPECT_THROW(broadcast_converse_check({{inputs::binary_sqrt2(), 1.0}}, 3.0, 1.0), InputError);
}

TEST(Epi, GaussianIsTight) {
  const auto r = epi_gaussian_check(inputs::standard_gaussian(), 0.5);
  EXPECT_NEAR(r.relative_margin, 0.0, 2e-3);
  EXPECT_NEAR(r.a2, 1.0, 2e-3);
  for (double v : r.ha_values) EXPECT_NEAR(v, 0.0, 2e-3);
}

TEST(Epi, MixtureHasPositiveMargin) {
  const auto m = inputs::corpus()[7].dist;
  const auto r = epi_gaussian_check(m, 1.0);
  EXPECT_GT(r.margin, 0.0);
  // Independent entropies for both sides.
  const double hx = oracle::direct_entropy(m);
  const double hxz = oracle::direct_entropy(convolve(m, make_gaussian(0.0, 1.0)));
  EXPECT_NEAR(r.h_x, hx, 1e-3);
  EXPECT_NEAR(r.h_xz, hxz, 1e-3);
  EXPECT_GT(std::exp(2 * hxz) - std::exp(2 * hx) - 2 * std::numbers::pi * std::numbers::e, 0.0);
  EXPECT_GE(r.ha_min, -1e-7);
  ASSERT_EQ(r.ha_snr.size(), 25u);
}

TEST(Epi, SmallNoise) {
  const auto r = epi_gaussian_check(inputs::corpus()[7].dist, 1e-4);
  EXPECT_GE(r.margin, -1e-7);
  EXPECT_THROW(epi_gaussian_check(inputs::binary(), 1.0), InputError);
  EXPECT_THROW(epi_gaussian_check(inputs::standard_gaussian(), 0.0), InputError);
}
