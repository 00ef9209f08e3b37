#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hlab/matrix.hpp"

namespace hlab {

/// Sorted eigenvalues of one matrix.
struct SpectralSample {
  std::vector<double> eigenvalues;
  /// Number of rows and columns that were exactly zero and deflated before the
  /// solve; their eigenvalues are exact zeros.
  int deflated = 0;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// All eigenvalues of m, ascending. Exactly zero rows are split off first so that
/// rank-deficient sandwich matrices report exact zeros. The trace and Frobenius
/// identities are verified to `identity_tol` (relative) and NumericError is thrown
/// when they fail or the solver does not converge.
SpectralSample eigenvalues(const SymmetricMatrix& m, double identity_tol = 1e-8);

/// (1/N) sum of lambda^n.
double spectral_moment(const SpectralSample& s, int n);

/// Right-continuous step CDF of a finite sample.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> sample);
  explicit EmpiricalDistribution(const SpectralSample& s) : EmpiricalDistribution(s.eigenvalues) {}

  /// #{x_i <= x} / n.
  double cdf(double x) const;
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_a(x) - F_b(x)|, exact on the union of jump points.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
/// sup_x |F_a(x) - F(x)| for a continuous CDF F, checked at both sides of every jump.
double ks_distance(const EmpiricalDistribution& a, const std::function<double(double)>& cdf);

/// CDF of the semicircle law with standard deviation alpha.
double semicircle_cdf(double alpha, double x);
/// Standard normal CDF.
double normal_cdf(double x);

struct Histogram {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;
  std::size_t total = 0;

  double bin_width() const { return (upper - lower) / static_cast<double>(counts.size()); }
  /// count / (total * width).
  double density(std::size_t bin) const;
};

/// Fixed-width bins on [lower, upper); the last bin also takes x == upper.
Histogram histogram(const SpectralSample& s, int bins, double lower, double upper);

/// bin_left,bin_right,count,density_estimate
void write_csv(std::ostream& out, const Histogram& h);
/// One eigenvalue per line.
void write_csv(std::ostream& out, const SpectralSample& s);

/// Fraction of eigenvalues in (-eps, eps).
double near_zero_mass(const SpectralSample& s, double eps);
/// Number of eigenvalues equal to 0.0.
int exact_zero_count(const SpectralSample& s);

}  // namespace hlab
