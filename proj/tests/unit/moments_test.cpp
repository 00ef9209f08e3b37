#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "hlab/errors.hpp"
#include "hlab/moments.hpp"
#include "oracles.hpp"

namespace {

// 5-point Gauss-Legendre on (0,1); exact for polynomials of degree <= 9.
constexpr std::array<double, 5> kGlNodes = {0.046910077030668, 0.230765344947158, 0.5,
                                            0.769234655052842, 0.953089922969332};
constexpr std::array<double, 5> kGlWeights = {0.118463442528095, 0.239314335249683,
                                              0.284444444444444, 0.239314335249683,
                                              0.118463442528095};

// Moment m_{2h} of the profile f^2 = (x+y)^2 computed from brute-force Kreweras labels.
double oracle_moment(int h) {
  double total = 0.0;
  for (const auto& pairs : oracle::noncrossing_matchings(h)) {
    auto k = oracle::kreweras_bruteforce(oracle::pairs_to_partition(pairs), 2 * h);
    std::sort(k.begin(), k.end(), [](const auto& a, const auto& b) { return a.back() < b.back(); });
    std::vector<int> t(static_cast<std::size_t>(2 * h));
    for (std::size_t b = 0; b < k.size(); ++b)
      for (int e : k[b]) t[static_cast<std::size_t>(e - 1)] = static_cast<int>(b);
    const int dims = h + 1;
    std::vector<int> idx(static_cast<std::size_t>(dims), 0);
    while (true) {
      double w = 1.0, l = 1.0;
      for (int d = 0; d < dims; ++d) w *= kGlWeights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
      for (const auto& [u, v] : pairs) {
        const double a = kGlNodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(t[static_cast<std::size_t>(u - 1)])])];
        const double b = kGlNodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(t[static_cast<std::size_t>(v - 1)])])];
        l *= (a + b) * (a + b);
      }
      total += w * l;
      int d = 0;
      while (d < dims && ++idx[static_cast<std::size_t>(d)] == 5) idx[static_cast<std::size_t>(d++)] = 0;
      if (d == dims) break;
    }
  }
  return total;
}

}  // namespace

TEST(MomentSequence, StorageAndAccess) {
  const auto s = hlab::MomentSequence::symmetric(4, {1.0, 2.0}, {0.1, 0.2});
  EXPECT_DOUBLE_EQ(s.moment(0), 1.0);
  EXPECT_DOUBLE_EQ(s.moment(3), 0.0);
  EXPECT_DOUBLE_EQ(s[4], 2.0);
  EXPECT_DOUBLE_EQ(s.std_error(2), 0.1);
  EXPECT_EQ(s.values(), (std::vector<double>{0, 1, 0, 2}));
  EXPECT_EQ(s.prefix(2).n_max(), 2);
  EXPECT_THROW(hlab::MomentSequence::symmetric(4, {1.0}), hlab::MalformedInputError);
  std::ostringstream csv;
  hlab::write_csv(csv, s);
  EXPECT_EQ(csv.str(), "order,value,std_error\n2,1,0.1\n4,2,0.2\n");
}

TEST(LimitingMoments, ConstantProfileIsSemicircle) {
  for (double alpha : {0.5, 1.0, 1.7}) {
    const auto ms = hlab::limiting_moments(hlab::Profile::constant(alpha), 16);
    for (int h = 1; h <= 8; ++h) {
      const double expected = std::pow(alpha, 2 * h) * static_cast<double>(oracle::catalan(h));
      EXPECT_NEAR(ms[2 * h], expected, 1e-12 * expected) << alpha << " " << h;
    }
  }
}

TEST(LimitingMoments, ConstantExpressionThroughQuadrature) {
  // A 1x1 grid profile is constant but does not take the closed-form path.
  hlab::IntegrationConfig cfg;
  cfg.samples = 1000;
  const auto ms = hlab::limiting_moments(hlab::Profile::grid(Eigen::MatrixXd::Constant(1, 1, 1.5)), 10, cfg);
  for (int h = 1; h <= 5; ++h) {
    const double expected = std::pow(1.5, 2 * h) * static_cast<double>(oracle::catalan(h));
    EXPECT_NEAR(ms[2 * h], expected, 1e-9 * expected) << h;
  }
}

TEST(LimitingMoments, LinearProfileAgainstOracle) {
  const auto f = hlab::parse_profile("x+y");
  const auto ms = hlab::limiting_moments(f, 6);
  EXPECT_NEAR(oracle_moment(1), 7.0 / 6.0, 1e-12);
  for (int h = 1; h <= 3; ++h) {
    const double exact = oracle_moment(h);
    EXPECT_NEAR(ms[2 * h], exact, 1e-3 * exact) << h;
    EXPECT_LE(std::abs(ms[2 * h] - exact), 3.0 * ms.std_error(2 * h) + 1e-12) << h;
  }
  EXPECT_TRUE(hlab::moment_growth_check(ms, 2.0));
  EXPECT_TRUE(hlab::hankel_check(ms).positive);
}

TEST(LimitingMoments, MonteCarloIsThreadIndependent) {
  hlab::IntegrationConfig cfg;
  cfg.method = hlab::IntegrationConfig::Method::monte_carlo;
  cfg.samples = 30000;
  cfg.seed = 9;
  const auto f = hlab::parse_profile("1+x*y");
  const auto one = hlab::limiting_moments(f, 6, cfg);
  cfg.threads = 3;
  const auto three = hlab::limiting_moments(f, 6, cfg);
  EXPECT_EQ(one.values(), three.values());
  EXPECT_EQ(one.errors(), three.errors());
  cfg.seed = 10;
  EXPECT_NE(hlab::limiting_moments(f, 6, cfg).values(), one.values());
}

TEST(LimitingMoments, Guards) {
  const auto f = hlab::Profile::constant(1.0);
  EXPECT_THROW(hlab::limiting_moments(f, 22), hlab::SizeLimitError);
  EXPECT_THROW(hlab::limiting_moments(hlab::parse_profile("1/(x*y*(1-x)*(1-y))"), 2),
               hlab::HypothesisViolation);
  hlab::IntegrationConfig cfg;
  cfg.method = hlab::IntegrationConfig::Method::midpoint;
  cfg.evaluation_budget = 1e3;
  EXPECT_THROW(hlab::limiting_moments(hlab::parse_profile("x+y"), 4, cfg), hlab::ResourceError);
}

TEST(Cumulants, RoundTrip) {
  const auto nu = hlab::MeasureSpec::parse("0.3*uniform:-1:2+0.7*delta:0.5");
  const auto ms = hlab::measure_moments(nu, 10);
  const auto back = hlab::cumulants_to_moments(hlab::moments_to_cumulants(ms));
  for (int n = 1; n <= 10; ++n) EXPECT_NEAR(back[n], ms[n], 1e-12 * std::max(1.0, std::abs(ms[n])));
}

TEST(Cumulants, SemicircleHasOnlySecondCumulant) {
  const auto k = hlab::moments_to_cumulants(hlab::semicircle_moments(1.5, 8));
  EXPECT_NEAR(k[2], 2.25, 1e-12);
  for (int n : {1, 3, 4, 5, 6, 7, 8}) EXPECT_NEAR(k[n], 0.0, 1e-10) << n;
  const auto back = hlab::cumulants_to_moments(k);
  EXPECT_TRUE(back.is_symmetric());
}

TEST(Convolutions, BoxplusOfSemicircles) {
  const auto sum = hlab::boxplus(hlab::semicircle_moments(0.6, 8), hlab::semicircle_moments(0.8, 8));
  const auto expected = hlab::semicircle_moments(1.0, 8);
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(sum[n], expected[n], 1e-12) << n;
  EXPECT_THROW(hlab::boxplus(hlab::semicircle_moments(1, 4), hlab::semicircle_moments(1, 6)),
               hlab::MalformedInputError);
  EXPECT_THROW(hlab::semicircle_moments(0.0, 4), hlab::DomainError);
}

TEST(Convolutions, BoxplusWithPointMassShifts) {
  // delta_c boxplus mu is mu translated by c.
  const auto sc = hlab::semicircle_moments(1.0, 4);
  const auto shifted = hlab::boxplus(hlab::measure_moments(hlab::MeasureSpec::delta(2.0), 4), sc);
  EXPECT_NEAR(shifted[1], 2.0, 1e-12);
  EXPECT_NEAR(shifted[2], 5.0, 1e-12);
  EXPECT_NEAR(shifted[3], 8.0 + 6.0, 1e-12);
  EXPECT_NEAR(shifted[4], 16.0 + 24.0 + 2.0, 1e-12);
}

TEST(Convolutions, BoxtimesPositiveSemicircle) {
  const auto u = hlab::boxtimes_positive_semicircle(
      hlab::measure_moments(hlab::MeasureSpec::uniform(1, 2), 3), 4);
  EXPECT_NEAR(u[2], 2.25, 1e-12);
  EXPECT_NEAR(u[4], 10.5, 1e-12);
  const auto d = hlab::boxtimes_positive_semicircle(
      hlab::measure_moments(hlab::MeasureSpec::delta(4.0), 7), 12);
  for (int h = 1; h <= 6; ++h)
    EXPECT_NEAR(d[2 * h], std::pow(4.0, 2 * h) * static_cast<double>(oracle::catalan(h)),
                1e-9 * std::pow(4.0, 2 * h));
  EXPECT_THROW(hlab::boxtimes_positive_semicircle(hlab::semicircle_moments(1, 2), 6),
               hlab::MalformedInputError);
}

TEST(Convolutions, BoxtimesMatchesRankOneProfile) {
  // nu boxtimes mu_1 is the limit of the profile r(x) r(y) with r^2(U) ~ nu.
  const auto nu = hlab::MeasureSpec::uniform(1, 2);
  const auto f = hlab::Profile::rank_one(hlab::quantile_radial(nu));
  const auto lim = hlab::limiting_moments(f, 6);
  const auto bt = hlab::boxtimes_positive_semicircle(hlab::measure_moments(nu, 4), 6);
  for (int h = 1; h <= 3; ++h) EXPECT_NEAR(lim[2 * h], bt[2 * h], 1e-3 * bt[2 * h]) << h;
}

TEST(Hankel, DetectsNonMomentSequence) {
  EXPECT_TRUE(hlab::hankel_check(hlab::semicircle_moments(2.0, 12)).positive);
  const auto bad = hlab::hankel_check(hlab::MomentSequence::symmetric(4, {1.0, 0.5}));
  EXPECT_FALSE(bad.positive);
  EXPECT_LT(bad.min_eigenvalue, 0.0);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(hlab::format_double(0.1), "0.1");
  EXPECT_EQ(hlab::format_double(2.0), "2");
  EXPECT_EQ(std::stod(hlab::format_double(1.0 / 3.0)), 1.0 / 3.0);
}
