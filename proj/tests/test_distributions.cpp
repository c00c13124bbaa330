#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmse_lab/json_io.hpp"
#include "mmse_lab/mmse_lab.hpp"

using namespace mmse_lab;

TEST(Distributions, DiscreteCanonicalForm) {
  // Zero weights drop, near-duplicates merge, locations sort.
  const InputDistribution d({{1.0, 0.25}, {-1.0, 0.5}, {1.0 + 1e-14, 0.25}, {3.0, 0.0}}, {});
  ASSERT_EQ(d.atoms().size(), 2u);
  EXPECT_DOUBLE_EQ(d.atoms()[0].location, -1.0);
  EXPECT_DOUBLE_EQ(d.atoms()[1].weight, 0.5);
  EXPECT_EQ(d.kind(), DistKind::discrete);
}

TEST(Distributions, RejectsMalformedInput) {
  EXPECT_THROW(make_discrete({{0.0, 0.5}}), InputError);
  EXPECT_THROW(make_discrete({{0.0, -0.5}, {1.0, 1.5}}), InputError);
  EXPECT_THROW(make_discrete({{NAN, 1.0}}), InputError);
  EXPECT_THROW(make_gaussian(0.0, 0.0), InputError);
  EXPECT_THROW(make_gaussian(0.0, -1.0), InputError);
  EXPECT_THROW(moment(inputs::binary(), 17, false), InputError);
  EXPECT_THROW(normalized_iid_sum(inputs::binary(), 13), InputError);
}

TEST(Distributions, GaussianMoments) {
  const auto g = make_gaussian(0.5, 2.0);
  EXPECT_DOUBLE_EQ(g.mean(), 0.5);
  EXPECT_DOUBLE_EQ(g.variance(), 2.0);
  EXPECT_NEAR(moment(g, 4, true), 3.0 * 4.0, 1e-12);
  EXPECT_NEAR(moment(g, 3, true), 0.0, 1e-12);
  // E X^2 = v + m^2, E X^3 = m^3 + 3 m v.
  EXPECT_NEAR(moment(g, 2, false), 2.25, 1e-12);
  EXPECT_NEAR(moment(g, 3, false), 0.125 + 3.0, 1e-12);
}

TEST(Distributions, DiscreteMomentsByDirectSum) {
  const auto d = make_discrete({{-2.0, 0.2}, {0.5, 0.5}, {3.0, 0.3}});
  for (int k = 1; k <= 8; ++k) {
    double raw = 0.0;
    for (const auto& a : d.atoms()) raw += a.weight * std::pow(a.location, k);
    EXPECT_NEAR(moment(d, k, false), raw, 1e-12 * std::max(1.0, std::abs(raw))) << k;
  }
}

TEST(Distributions, MixtureFlattensAndRenormalizes) {
  const auto inner = mix({{inputs::binary(), 0.5}, {make_gaussian(0.0, 1.0), 0.5}});
  const auto outer = mix({{inner, 0.5}, {make_point_mass(3.0), 0.5}});
  double total = 0.0;
  for (const auto& a : outer.atoms()) total += a.weight;
  for (const auto& c : outer.components()) total += c.weight;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_EQ(outer.kind(), DistKind::gaussian_mixture);
  EXPECT_EQ(outer.atoms().size(), 3u);
  EXPECT_NEAR(outer.mean(), 1.5, 1e-15);
}

TEST(Distributions, AffineFirstMomentProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto corpus = inputs::corpus();
  for (int trial = 0; trial < 200; ++trial) {
    const auto& d = corpus[trial % corpus.size()].dist;
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(moment(affine(d, a, b), 1, false), a * moment(d, 1, false) + b, 1e-12);
  }
  EXPECT_TRUE(affine(inputs::standard_gaussian(), 0.0, 2.0).is_point_mass());
}

TEST(Distributions, IidSumPreservesVariance) {
  for (const auto& d : {inputs::binary(), inputs::skewed_binary(), inputs::pam4(), inputs::standard_gaussian()}) {
    for (int n = 1; n <= kMaxIidSumTerms; ++n) {
      EXPECT_NEAR(moment(normalized_iid_sum(d, n), 2, true), d.variance(), 1e-10) << n;
    }
  }
  EXPECT_TRUE(normalized_iid_sum(make_point_mass(1.0), 4).is_point_mass());
}

TEST(Distributions, ConvolutionOfGaussiansIsGaussian) {
  const auto s = convolve(make_gaussian(1.0, 2.0), make_gaussian(-0.5, 0.5));
  ASSERT_EQ(s.kind(), DistKind::gaussian);
  EXPECT_DOUBLE_EQ(s.mean(), 0.5);
  EXPECT_DOUBLE_EQ(s.variance(), 2.5);
  EXPECT_THROW(convolve(inputs::pam4(), inputs::pam4(), 10), InputError);
}

TEST(Distributions, JsonRoundTrip) {
  for (const auto& [name, d] : inputs::corpus()) {
    const auto back = distribution_from_json(distribution_to_json(d));
    EXPECT_TRUE(back == d) << name;
  }
  EXPECT_THROW(parse_distribution(R"({"kind":"cauchy"})"), InputError);
  EXPECT_THROW(parse_distribution(R"({"kind":"discrete","atoms":[[1]]})"), InputError);
  EXPECT_THROW(parse_distribution("not json"), InputError);
}

TEST(Distributions, SampleFilesParse) {
  const std::string dir = std::string(MMSE_LAB_SOURCE_DIR) + "/data/dists/";
  EXPECT_TRUE(load_distribution(dir + "binary.json") == inputs::binary());
  EXPECT_TRUE(load_distribution(dir + "gauss01.json") == inputs::standard_gaussian());
  EXPECT_TRUE(load_distribution(dir + "pam4.json") == inputs::pam4());
  EXPECT_EQ(load_family(dir + "family_binary.json").size(), 2u);
}

// Second moment by closed form against the sampler, every corpus member.
TEST(Distributions, SecondMomentMatchesMonteCarlo) {
  for (const auto& [name, d] : inputs::corpus()) {
    const auto e = mc_moment(d, 2, true, 1'000'000, 19);
    EXPECT_LE(e.z_score(moment(d, 2, true)), 4.0) << name;
  }
}
