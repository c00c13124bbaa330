#include <gtest/gtest.h>

#include <cmath>

#include "mmse_lab/mmse_lab.hpp"

using namespace mmse_lab;

TEST(Hermite, LowOrders) {
  for (double x : {-1.7, 0.0, 0.4, 2.5}) {
    EXPECT_DOUBLE_EQ(hermite(0, x), 1.0);
    EXPECT_DOUBLE_EQ(hermite(1, x), x);
    EXPECT_NEAR(hermite(2, x), x * x - 1.0, 1e-14);
    EXPECT_NEAR(hermite(3, x), x * x * x - 3.0 * x, 1e-13);
    EXPECT_NEAR(hermite(4, x), std::pow(x, 4) - 6.0 * x * x + 3.0, 1e-12);
  }
  EXPECT_THROW(hermite(33, 0.0), InputError);
  EXPECT_THROW(hermite(-1, 0.0), InputError);
}

// E[He_m(Z) He_n(Z)] = n! [m == n].
TEST(Hermite, Orthogonality) {
  const auto rule = gauss_hermite_rule(65);
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) {
      double s = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        s += rule.weights[k] * hermite(m, rule.nodes[k]) * hermite(n, rule.nodes[k]);
      EXPECT_NEAR(s, m == n ? std::tgamma(n + 1.0) : 0.0, 1e-9 * std::tgamma(n + 1.0)) << m << "," << n;
    }
}

// He_n phi = (-1)^n phi^(n); checked against finite differences of phi.
TEST(Hermite, DerivativesOfPhi) {
  const auto phi = [](double t) { return std_normal_pdf(t); };
  for (double x : {-0.8, 0.3, 1.9})
    for (int n = 1; n <= 3; ++n) {
      const double h = 1e-3;
      double d = 0.0;
      if (n == 1) d = (phi(x + h) - phi(x - h)) / (2 * h);
      if (n == 2) d = (phi(x + h) - 2 * phi(x) + phi(x - h)) / (h * h);
      if (n == 3) d = (phi(x + 2 * h) - 2 * phi(x + h) + 2 * phi(x - h) - phi(x - 2 * h)) / (2 * h * h * h);
      EXPECT_NEAR(std::pow(-1.0, n) * d, hermite(n, x) * phi(x), 1e-5);
    }
}

TEST(Derivatives, GaussianClosedForms) {
  const auto g = inputs::standard_gaussian();
  for (double snr : {0.0, 0.1, 1.0, 10.0}) {
    const double s = 1.0 + snr;
    EXPECT_NEAR(mmse_derivative(g, snr, 1), -1.0 / (s * s), 1e-7 / (s * s));
    EXPECT_NEAR(mmse_derivative(g, snr, 2), 2.0 / (s * s * s), 1e-7 / (s * s * s));
    EXPECT_NEAR(mmse_derivative(g, snr, 3), -6.0 / std::pow(s, 4), 1e-7 / std::pow(s, 4));
  }
}

TEST(Derivatives, MatchFiniteDifferences) {
  for (const auto& [name, d] : inputs::corpus())
    for (double snr : {0.1, 1.0, 10.0})
      for (int order = 1; order <= 3; ++order) {
        const auto r = derivative_report(d, snr, order);
        EXPECT_LT(r.rel_gap, 1e-4) << name << " snr=" << snr << " order=" << order << " analytic=" << r.analytic
                                   << " fd=" << r.finite_diff;
      }
}

TEST(Derivatives, PointMassAndErrors) {
  EXPECT_EQ(mmse_derivative(make_point_mass(2.0), 1.0, 2), 0.0);
  EXPECT_THROW(mmse_derivative(inputs::binary(), 1.0, 4), InputError);
  EXPECT_THROW(mmse_derivative(inputs::binary(), -1.0, 1), InputError);
}

TEST(Derivatives, JensenGapNonnegative) {
  for (const auto& [name, d] : inputs::corpus())
    for (double snr : {0.3, 3.0}) {
      const double m = mmse_at(d, snr).value;
      EXPECT_GE(mean_squared_posterior_variance(d, snr), m * m * (1 - 1e-10)) << name;
    }
}

TEST(Taylor, Coefficients) {
  const auto c = taylor_zero(inputs::binary());
  ASSERT_EQ(c.size(), 4u);
  // m2 = 1, m3 = 0, m4 = 1, so c3 = (6 - 1 + 0 - 15)/6.
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], -1.0);
  EXPECT_DOUBLE_EQ(c[2], 1.0);
  EXPECT_NEAR(c[3], -10.0 / 6.0, 1e-15);
  const auto gc = taylor_zero(inputs::standard_gaussian());
  EXPECT_NEAR(gc[3], -1.0, 1e-15);  // 1/(1+s) = 1 - s + s^2 - s^3
  EXPECT_THROW(taylor_zero(inputs::binary(), 4), InputError);
}

TEST(Taylor, RemainderIsFourthOrder) {
  for (const auto& d : {inputs::binary(), inputs::standard_gaussian()}) {
    const auto c = taylor_zero(d);
    const std::vector<double> s{0.04, 0.02, 0.01};
    std::vector<double> err;
    for (double x : s) err.push_back(std::abs(mmse_at(d, x, {.rel_tol = 1e-13}).value - taylor_partial_sum(c, x)));
    const double slope = std::log(err[0] / err[2]) / std::log(s[0] / s[2]);
    EXPECT_NEAR(slope, 4.0, 0.3);
  }
}

TEST(FiniteDifference, KnownFunction) {
  for (double v : {0.25, 1.0, 4.0})
    for (double x : {0.2, 1.0, 7.0}) {
      auto f = [v](double s) { return v / (1.0 + v * s); };
      const double t = 1.0 + v * x;
      const double exact[] = {-v * v / (t * t), 2 * v * v * v / (t * t * t), -6 * std::pow(v, 4) / std::pow(t, 4)};
      // Third differences at h/4 carry roundoff near 1e-7 relative.
      for (int order = 1; order <= 3; ++order)
        EXPECT_LT(relative_gap(exact[order - 1], finite_difference(f, x, order).value), order < 3 ? 1e-8 : 1e-6);
    }
  EXPECT_THROW(finite_difference([](double s) { return s; }, 0.0, 1), InputError);
}

TEST(Derivatives, ConditionalIsAverage) {
  const Family fam{{inputs::binary(), 0.3}, {inputs::pam4(), 0.7}};
  const double expect = 0.3 * mmse_derivative(inputs::binary(), 1.5, 1) + 0.7 * mmse_derivative(inputs::pam4(), 1.5, 1);
  EXPECT_NEAR(conditional_mmse_derivative(fam, 1.5), expect, 1e-14);
  const auto fd = finite_difference([&](double s) { return conditional_mmse(fam, s, {.rel_tol = 1e-13}).value; }, 1.5, 1);
  EXPECT_LT(relative_gap(expect, fd.value), 1e-6);
}
