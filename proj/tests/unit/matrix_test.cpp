#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "hlab/errors.hpp"
#include "hlab/matrix.hpp"
#include "hlab/rng.hpp"

TEST(SymmetricMatrix, Construction) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(hlab::SymmetricMatrix{m}, hlab::MalformedInputError);
  EXPECT_THROW(hlab::SymmetricMatrix{Eigen::MatrixXd(2, 3)}, hlab::MalformedInputError);
  const auto s = hlab::SymmetricMatrix::from_upper(m);
  EXPECT_EQ(s(1, 0), 2.0);
  EXPECT_EQ((s + s)(1, 1), 8.0);
  EXPECT_EQ(s.scaled(0.5)(0, 1), 1.0);
  EXPECT_THROW(hlab::check_dimension(0), hlab::MalformedInputError);
  EXPECT_THROW(hlab::check_dimension(4097), hlab::SizeLimitError);
  EXPECT_NO_THROW(hlab::check_dimension(4096));
}

TEST(ProfileMatrix, SamplesOnInteriorGrid) {
  const auto a = hlab::profile_matrix(hlab::parse_profile("x+y"), 2);
  EXPECT_NEAR(a(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(a(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(a(1, 1), 4.0 / 3.0, 1e-15);
  EXPECT_EQ(a(0, 1), a(1, 0));
  const auto r = hlab::profile_matrix(hlab::Profile::rank_one(hlab::RadialFunction::parse("x")), 5);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(r.entries());
  lu.setThreshold(1e-12);
  EXPECT_EQ(lu.rank(), 1);
}

TEST(Wigner, DeterministicAndIndependentStreams) {
  const auto a = hlab::wigner(50, 7);
  const auto b = hlab::wigner(50, 7);
  EXPECT_EQ(a.entries(), b.entries());
  EXPECT_NE(a.entries(), hlab::wigner(50, 8).entries());
  EXPECT_NE(a.entries(), hlab::wigner(50, 7, 1).entries());
  // Draws are row-major over the upper triangle.
  hlab::RandomStream s(hlab::stream_seed(7, hlab::StreamRole::wigner, 0));
  const double scale = 1.0 / std::sqrt(50.0);
  EXPECT_EQ(a(0, 0), s.normal() * scale);
  EXPECT_EQ(a(0, 1), s.normal() * scale);
  EXPECT_EQ(a(1, 0), a(0, 1));
}

TEST(Wigner, EntryStatistics) {
  const int n = 400;
  const auto w = hlab::wigner(n, 3);
  double sum = 0, sq = 0;
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      const double x = w(i, j) * std::sqrt(static_cast<double>(n));
      sum += x;
      sq += x * x;
      ++count;
    }
  EXPECT_NEAR(sum / count, 0.0, 5.0 / std::sqrt(count));
  EXPECT_NEAR(sq / count, 1.0, 5.0 * std::sqrt(2.0 / count));
}

TEST(Models, HadamardAndSandwichAgree) {
  const auto r = hlab::RadialFunction::parse("1+x");
  const hlab::EnsembleSpec sw{hlab::SandwichModel{r}, 60, 11};
  const hlab::EnsembleSpec hd{hlab::HadamardModel{hlab::Profile::rank_one(r)}, 60, 11};
  EXPECT_EQ(hlab::assemble(sw).primary.entries(), hlab::assemble(hd).primary.entries());
  const hlab::EnsembleSpec one{hlab::HadamardModel{hlab::Profile::constant(1.0)}, 60, 11};
  EXPECT_EQ(hlab::assemble(one).primary.entries(), hlab::wigner(60, 11).entries());
  Eigen::MatrixXd a(2, 2), b(3, 3);
  a.setOnes();
  b.setOnes();
  EXPECT_THROW(hlab::hadamard(hlab::SymmetricMatrix(a), hlab::SymmetricMatrix(b)),
               hlab::MalformedInputError);
}

TEST(Models, TruncationZeroesBoundary) {
  const int n = 40, k = 4;
  const auto m = hlab::assemble({hlab::TruncatedModel{hlab::Profile::constant(1.0), k}, n, 2}).primary;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const double x = i / (n + 1.0), y = j / (n + 1.0);
      const bool inside = x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75;
      if (!inside) EXPECT_EQ(m(i - 1, j - 1), 0.0);
    }
  EXPECT_THROW(hlab::assemble({hlab::TruncatedModel{hlab::Profile::constant(1.0), 1}, n, 2}),
               hlab::DomainError);
}

TEST(Models, ShiftedPairSharesWigner) {
  const int n = 30;
  const auto f = hlab::parse_profile("x*y");
  const auto e = hlab::assemble({hlab::ShiftedModel{f, 0.5}, n, 4});
  ASSERT_TRUE(e.companion.has_value());
  const auto w = hlab::wigner(n, 4);
  const auto y = hlab::wigner_from_stream(n, hlab::stream_seed(4, hlab::StreamRole::companion, 0));
  for (int i = 0; i < n; i += 7)
    for (int j = 0; j < n; j += 5) {
      const double fx = f((i + 1) / (n + 1.0), (j + 1) / (n + 1.0));
      EXPECT_NEAR(e.primary(i, j), (fx + 0.5) * w(i, j), 1e-15);
      EXPECT_NEAR((*e.companion)(i, j), std::sqrt(fx * fx + fx) * w(i, j) + 0.5 * y(i, j), 1e-15);
    }
  EXPECT_THROW(hlab::assemble({hlab::ShiftedModel{f, 0.0}, n, 4}), hlab::DomainError);
}

TEST(Models, GaussianProcessVariance) {
  // Constant density c: off-diagonal entries (G_ij + G_ji)/sqrt(N) have variance 2c/N.
  const int n = 64;
  const double c = 0.5;
  double sq = 0;
  int count = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto m = hlab::assemble({hlab::GaussianProcessModel{hlab::SpectralDensity::constant(c)}, n, seed}).primary;
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i) {
        sq += m(i, j) * m(i, j);
        ++count;
      }
  }
  const double expected = 2.0 * c / n;
  EXPECT_NEAR(sq / count / expected, 1.0, 0.05);
}

TEST(TraceMoment, Examples) {
  Eigen::MatrixXd d = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const hlab::SymmetricMatrix m(d);
  EXPECT_NEAR(hlab::trace_moment(m, 1), 2.0, 1e-15);
  EXPECT_NEAR(hlab::trace_moment(m, 2), 14.0 / 3.0, 1e-14);
  EXPECT_NEAR(hlab::trace_moment(m, 3), 12.0, 1e-13);
  const auto w = hlab::wigner(30, 1);
  EXPECT_NEAR(hlab::trace_moment(w, 2), w.entries().squaredNorm() / 30.0, 1e-13);
}

TEST(Csv, MatrixLayout) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.5, 0.5, 2;
  std::ostringstream out;
  hlab::write_csv(out, hlab::SymmetricMatrix(m));
  EXPECT_EQ(out.str(), "2\n1,0.5\n0.5,2\n");
}

TEST(Wigner, EntryVarianceAcrossSeeds) {
  const int n = 4, reps = 10000;
  double sum = 0.0, sq = 0.0;
  for (int s = 1; s <= reps; ++s) {
    const double x = hlab::wigner(n, static_cast<std::uint64_t>(s))(0, 1);
    sum += x;
    sq += n * x * x;
  }
  EXPECT_NEAR(sum / reps, 0.0, 3.0 / std::sqrt(n * static_cast<double>(reps)));
  EXPECT_NEAR(sq / reps, 1.0, 0.05);
}

TEST(Hadamard, Examples) {
  Eigen::MatrixXd a(2, 2), b(2, 2), want(2, 2);
  a << 1, 2, 2, 3;
  b << 5, 6, 6, 7;
  want << 5, 12, 12, 21;
  EXPECT_EQ(hlab::hadamard(hlab::SymmetricMatrix(a), hlab::SymmetricMatrix(b)).entries(), want);
  EXPECT_EQ(hlab::hadamard(hlab::SymmetricMatrix(a), hlab::SymmetricMatrix(Eigen::MatrixXd::Ones(2, 2))).entries(), a);
  const hlab::SymmetricMatrix id(Eigen::MatrixXd::Identity(5, 5));
  for (int k = 1; k <= 5; ++k) EXPECT_DOUBLE_EQ(hlab::trace_moment(id, k), 1.0);
}

TEST(Models, GaussianProcessVarianceAtDefaultGrid) {
  const int n = 500;
  const double c = 0.5;
  const auto m = hlab::assemble({hlab::GaussianProcessModel{hlab::SpectralDensity::constant(c)}, n, 3}).primary;
  double sq = 0;
  int count = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      sq += m(i, j) * m(i, j);
      ++count;
    }
  EXPECT_NEAR(sq / count / (2.0 * c / n), 1.0, 0.15);
}
