#include <fftw3.h>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "hlab/errors.hpp"
#include "hlab/matrix.hpp"
#include "hlab/rng.hpp"

namespace hlab {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_field_args(int n, int grid) {
  check_dimension(n);
  if (grid < 8) throw DomainError("spectral grid K must be >= 8, got " + std::to_string(grid));
  if (grid > 8192) throw SizeLimitError("spectral grid K = " + std::to_string(grid), 8192);
}

double midpoint(int k, int grid) { return (k + 0.5) / grid; }

// exp(i pi t / K) for the integer t reduced modulo 2K.
std::complex<double> half_turn(std::int64_t t, int grid) {
  const std::int64_t period = 2 * static_cast<std::int64_t>(grid);
  t %= period;
  if (t < 0) t += period;
  const double angle = std::numbers::pi * static_cast<double>(t) / grid;
  return {std::cos(angle), std::sin(angle)};
}

// Amplitudes sqrt(g)/K (xi - i eta), row-major in (k, l).
std::vector<std::complex<double>> amplitudes(const SpectralDensity& g, int grid, std::uint64_t seed,
                                             std::uint64_t replicate) {
  RandomStream rng(stream_seed(seed, StreamRole::field, replicate));
  const auto k2 = static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
  std::vector<std::complex<double>> a(k2);
  for (int k = 0; k < grid; ++k)
    for (int l = 0; l < grid; ++l) {
      const double weight = std::sqrt(g(midpoint(k, grid), midpoint(l, grid))) / grid;
      const double xi = rng.normal();
      const double eta = rng.normal();
      a[static_cast<std::size_t>(k) * static_cast<std::size_t>(grid) + static_cast<std::size_t>(l)] =
          {weight * xi, -weight * eta};
    }
  return a;
}

}  // namespace

int default_field_grid(int n) {
  check_dimension(n);
  return std::max(64, static_cast<int>(std::bit_ceil(static_cast<unsigned>(n))));
}

GaussianField synth_gaussian_field(const SpectralDensity& g, int n, int grid, std::uint64_t seed,
                                   std::uint64_t replicate) {
  check_field_args(n, grid);
  auto a = amplitudes(g, grid, seed, replicate);
  auto* data = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(grid, grid, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericError("FFTW could not plan a " + std::to_string(grid) + "^2 transform", 0);
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  GaussianField field{n, grid, seed, replicate, Eigen::MatrixXd(n, n)};
  const auto kk = static_cast<std::size_t>(grid);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const auto p = static_cast<std::size_t>(i % grid);
      const auto q = static_cast<std::size_t>(j % grid);
      field.values(i - 1, j - 1) = (half_turn(i + j, grid) * a[p * kk + q]).real();
    }
  return field;
}

GaussianField synth_gaussian_field_direct(const SpectralDensity& g, int n, int grid,
                                          std::uint64_t seed, std::uint64_t replicate) {
  check_field_args(n, grid);
  RandomStream rng(stream_seed(seed, StreamRole::field, replicate));
  std::vector<double> weight, xi, eta;
  for (int k = 0; k < grid; ++k)
    for (int l = 0; l < grid; ++l) {
      weight.push_back(std::sqrt(g(midpoint(k, grid), midpoint(l, grid)) / (grid * static_cast<double>(grid))));
      xi.push_back(rng.normal());
      eta.push_back(rng.normal());
    }
  GaussianField field{n, grid, seed, replicate, Eigen::MatrixXd::Zero(n, n)};
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      double sum = 0.0;
      std::size_t idx = 0;
      for (int k = 0; k < grid; ++k)
        for (int l = 0; l < grid; ++l, ++idx) {
          // 2 pi (i x_k + j y_l) = pi (i (2k+1) + j (2l+1)) / K
          const auto e = half_turn(static_cast<std::int64_t>(i) * (2 * k + 1) +
                                       static_cast<std::int64_t>(j) * (2 * l + 1),
                                   grid);
          sum += weight[idx] * (xi[idx] * e.real() + eta[idx] * e.imag());
        }
      field.values(i - 1, j - 1) = sum;
    }
  return field;
}

double field_covariance(const SpectralDensity& g, int grid, int m, int n) {
  if (grid < 1) throw DomainError("spectral grid K must be positive");
  double sum = 0.0;
  for (int k = 0; k < grid; ++k)
    for (int l = 0; l < grid; ++l) {
      const auto e = half_turn(static_cast<std::int64_t>(m) * (2 * k + 1) +
                                   static_cast<std::int64_t>(n) * (2 * l + 1),
                               grid);
      sum += g(midpoint(k, grid), midpoint(l, grid)) * e.real();
    }
  return sum / (static_cast<double>(grid) * grid);
}

}  // namespace hlab
