#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hlab/errors.hpp"
#include "hlab/matrix.hpp"
#include "hlab/spectra.hpp"
#include "oracles.hpp"

namespace {

hlab::SymmetricMatrix diag(std::vector<double> d) {
  Eigen::MatrixXd m = Eigen::VectorXd::Map(d.data(), static_cast<Eigen::Index>(d.size())).asDiagonal();
  return hlab::SymmetricMatrix(m);
}

}  // namespace

TEST(Eigenvalues, SmallExamples) {
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  const auto s = hlab::eigenvalues(hlab::SymmetricMatrix(m));
  ASSERT_EQ(s.size(), 2);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues[1], 3.0, 1e-14);
  const auto z = hlab::eigenvalues(diag({0, 0, 5}));
  EXPECT_EQ(z.deflated, 2);
  EXPECT_EQ(hlab::exact_zero_count(z), 2);
  EXPECT_DOUBLE_EQ(hlab::near_zero_mass(z, 0.1), 2.0 / 3.0);
  EXPECT_EQ(hlab::eigenvalues(hlab::SymmetricMatrix::zero(4)).deflated, 4);
}

TEST(Eigenvalues, TraceIdentities) {
  const auto w = hlab::wigner(120, 5);
  const auto s = hlab::eigenvalues(w);
  EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  for (int n = 1; n <= 4; ++n)
    EXPECT_NEAR(hlab::spectral_moment(s, n), hlab::trace_moment(w, n), 1e-10) << n;
}

TEST(Kolmogorov, Examples) {
  const hlab::EmpiricalDistribution a({0.0, 1.0}), b({0.0});
  EXPECT_DOUBLE_EQ(hlab::ks_distance(a, b), 0.5);
  EXPECT_DOUBLE_EQ(hlab::ks_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(a.cdf(0.0), 0.5);
  EXPECT_DOUBLE_EQ(a.cdf(-1e-300), 0.0);
  const hlab::EmpiricalDistribution c({3.0, 1.0, 2.0});
  EXPECT_EQ(c.sorted(), (std::vector<double>{1, 2, 3}));
  const hlab::EmpiricalDistribution d({1.5, 2.5, 3.5});
  EXPECT_NEAR(hlab::ks_distance(c, d), 1.0 / 3.0, 1e-15);
  // Against a continuous CDF the supremum is attained just below a jump.
  const hlab::EmpiricalDistribution half({0.5});
  EXPECT_DOUBLE_EQ(hlab::ks_distance(half, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5);
}

TEST(Kolmogorov, MetricProperties) {
  const hlab::EmpiricalDistribution a(hlab::eigenvalues(hlab::wigner(40, 1)));
  const hlab::EmpiricalDistribution b(hlab::eigenvalues(hlab::wigner(40, 2)));
  const hlab::EmpiricalDistribution c(hlab::eigenvalues(hlab::wigner(40, 3)));
  EXPECT_DOUBLE_EQ(hlab::ks_distance(a, b), hlab::ks_distance(b, a));
  EXPECT_LE(hlab::ks_distance(a, c), hlab::ks_distance(a, b) + hlab::ks_distance(b, c) + 1e-15);
}

TEST(Semicircle, CdfMatchesQuadrature) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double r = 2.0 * alpha;
    const auto density = [&](double x) {
      return std::sqrt(std::max(r * r - x * x, 0.0)) / (2.0 * M_PI * alpha * alpha);
    };
    for (double x : {-0.9 * r, -0.3 * r, 0.0, 0.4 * r, 0.99 * r}) {
      const double q = oracle::adaptive_simpson(density, -r, x, 1e-12);
      EXPECT_NEAR(hlab::semicircle_cdf(alpha, x), q, 1e-7) << alpha << " " << x;
    }
    EXPECT_EQ(hlab::semicircle_cdf(alpha, -r - 1), 0.0);
    EXPECT_EQ(hlab::semicircle_cdf(alpha, r + 1), 1.0);
  }
  EXPECT_NEAR(hlab::normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(hlab::normal_cdf(1.96), 0.9750021048517795, 1e-12);
}

TEST(Semicircle, WignerSpectrumIsClose) {
  const hlab::EmpiricalDistribution e(hlab::eigenvalues(hlab::wigner(400, 1)));
  EXPECT_LT(hlab::ks_distance(e, [](double x) { return hlab::semicircle_cdf(1.0, x); }), 0.03);
}

TEST(Histogram, BinsAndCsv) {
  hlab::SpectralSample s{{-2.0, -0.5, 0.0, 0.5, 1.0, 3.0}, 0};
  const auto h = hlab::histogram(s, 2, -1.0, 1.0);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(h.underflow, 1u);
  EXPECT_EQ(h.overflow, 1u);
  EXPECT_EQ(h.total, 6u);
  EXPECT_DOUBLE_EQ(h.bin_width(), 1.0);
  EXPECT_DOUBLE_EQ(h.density(1), 0.5);
  std::ostringstream out;
  hlab::write_csv(out, h);
  EXPECT_EQ(out.str(), "bin_left,bin_right,count,density_estimate\n-1,0,1,0.16666666666666666\n0,1,3,0.5\n");
  EXPECT_THROW(hlab::histogram(s, 0, -1, 1), hlab::DomainError);
  EXPECT_THROW(hlab::histogram(s, 4, 1, 1), hlab::DomainError);
}

TEST(NearZero, OpenInterval) {
  hlab::SpectralSample s{{-0.1, -0.05, 0.0, 0.1}, 0};
  EXPECT_DOUBLE_EQ(hlab::near_zero_mass(s, 0.1), 0.5);
  EXPECT_EQ(hlab::exact_zero_count(s), 1);
}

TEST(Semicircle, KolmogorovDistanceShrinksWithN) {
  double previous = 1.0;
  for (int n : {250, 500, 1000, 2000}) {
    std::vector<double> ks;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const hlab::EmpiricalDistribution e(hlab::eigenvalues(hlab::wigner(n, seed)));
      ks.push_back(hlab::ks_distance(e, [](double x) { return hlab::semicircle_cdf(1.0, x); }));
    }
    std::sort(ks.begin(), ks.end());
    EXPECT_LT(ks[2], previous) << n;
    previous = ks[2];
  }
}
