#include "hlab/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "hlab/errors.hpp"
#include "hlab/moments.hpp"

namespace hlab {

namespace {

bool close(double a, double b, double tol, double scale) {
  return std::abs(a - b) <= tol * std::max(scale, 1e-300);
}

}  // namespace

SpectralSample eigenvalues(const SymmetricMatrix& m, double identity_tol) {
  const auto& a = m.entries();
  const int n = m.size();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if ((a.row(i).array() != 0.0).any()) keep.push_back(i);
  SpectralSample s;
  s.deflated = n - static_cast<int>(keep.size());
  s.eigenvalues.assign(static_cast<std::size_t>(s.deflated), 0.0);
  if (!keep.empty()) {
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd reduced(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < k; ++i) reduced(i, j) = a(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericError("symmetric eigensolver did not converge for N = " + std::to_string(n),
                         static_cast<int>(Eigen::ComputationInfo::NoConvergence));
    const auto& ev = solver.eigenvalues();
    s.eigenvalues.insert(s.eigenvalues.end(), ev.data(), ev.data() + ev.size());
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());

  double sum = 0.0, sum_sq = 0.0, abs_sum = 0.0;
  for (double l : s.eigenvalues) {
    sum += l;
    sum_sq += l * l;
    abs_sum += std::abs(l);
  }
  const double trace = a.trace();
  const double frob = a.squaredNorm();
  if (!close(sum, trace, identity_tol, std::max(abs_sum, a.diagonal().cwiseAbs().sum())))
    throw NumericError("eigenvalue sum " + format_double(sum) + " differs from trace " +
                           format_double(trace),
                       0);
  if (!close(sum_sq, frob, identity_tol, frob))
    throw NumericError("eigenvalue square sum " + format_double(sum_sq) +
                           " differs from squared Frobenius norm " + format_double(frob),
                       0);
  return s;
}

double spectral_moment(const SpectralSample& s, int n) {
  if (s.eigenvalues.empty()) throw MalformedInputError("empty spectral sample");
  double total = 0.0;
  for (double l : s.eigenvalues) total += std::pow(l, n);
  return total / static_cast<double>(s.eigenvalues.size());
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw MalformedInputError("empirical distribution needs a nonempty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& xa = a.sorted();
  const auto& xb = b.sorted();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < xa.size() || j < xb.size()) {
    double x;
    if (j == xb.size() || (i < xa.size() && xa[i] <= xb[j]))
      x = xa[i];
    else
      x = xb[j];
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_distance(const EmpiricalDistribution& a, const std::function<double(double)>& cdf) {
  const auto& x = a.sorted();
  const double n = static_cast<double>(x.size());
  double best = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    const double v = x[i];
    const double f = cdf(v);
    best = std::max(best, std::abs(f - static_cast<double>(i) / n));
    while (i < x.size() && x[i] == v) ++i;
    best = std::max(best, std::abs(static_cast<double>(i) / n - f));
  }
  return best;
}

double semicircle_cdf(double alpha, double x) {
  if (!(alpha > 0.0)) throw DomainError("semicircle standard deviation must be positive");
  const double t = std::clamp(x / alpha, -2.0, 2.0);
  if (t <= -2.0) return 0.0;
  if (t >= 2.0) return 1.0;
  return 0.5 + t * std::sqrt(4.0 - t * t) / (4.0 * std::numbers::pi) + std::asin(t / 2.0) / std::numbers::pi;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double Histogram::density(std::size_t bin) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts.at(bin)) / (static_cast<double>(total) * bin_width());
}

Histogram histogram(const SpectralSample& s, int bins, double lower, double upper) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw DomainError("histogram range must satisfy lower < upper");
  Histogram h{lower, upper, std::vector<std::size_t>(static_cast<std::size_t>(bins), 0), 0, 0,
              s.eigenvalues.size()};
  const double width = h.bin_width();
  for (double l : s.eigenvalues) {
    if (l < lower) {
      ++h.underflow;
    } else if (l > upper) {
      ++h.overflow;
    } else {
      auto b = static_cast<std::size_t>((l - lower) / width);
      if (b >= h.counts.size()) b = h.counts.size() - 1;
      ++h.counts[b];
    }
  }
  return h;
}

void write_csv(std::ostream& out, const Histogram& h) {
  out << "bin_left,bin_right,count,density_estimate\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double left = h.lower + h.bin_width() * static_cast<double>(b);
    const double right = b + 1 == h.counts.size() ? h.upper : left + h.bin_width();
    out << format_double(left) << ',' << format_double(right) << ',' << h.counts[b] << ','
        << format_double(h.density(b)) << '\n';
  }
}

void write_csv(std::ostream& out, const SpectralSample& s) {
  for (double l : s.eigenvalues) out << format_double(l) << '\n';
}

double near_zero_mass(const SpectralSample& s, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (s.eigenvalues.empty()) throw MalformedInputError("empty spectral sample");
  const auto lo = std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), -eps);
  const auto hi = std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), eps);
  return static_cast<double>(std::max<std::ptrdiff_t>(hi - lo, 0)) /
         static_cast<double>(s.eigenvalues.size());
}

int exact_zero_count(const SpectralSample& s) {
  return static_cast<int>(std::count(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0));
}

}  // namespace hlab
