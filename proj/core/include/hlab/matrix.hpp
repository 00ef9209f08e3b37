#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>

#include "hlab/profile.hpp"

namespace hlab {

/// Dense symmetric matrix with entries(i,j) == entries(j,i) bit for bit.
class SymmetricMatrix {
 public:
  static constexpr int max_dimension = 4096;

  /// Throws MalformedInputError unless the matrix is square and exactly symmetric,
  /// SizeLimitError above max_dimension.
  explicit SymmetricMatrix(Eigen::MatrixXd entries);
  static SymmetricMatrix zero(int n);
  /// Copies the upper triangle onto the lower one.
  static SymmetricMatrix from_upper(Eigen::MatrixXd entries);

  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  /// 0-based.
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

  SymmetricMatrix operator+(const SymmetricMatrix& other) const;
  SymmetricMatrix scaled(double c) const;

 private:
  struct Trusted {};
  SymmetricMatrix(Eigen::MatrixXd entries, Trusted) : entries_(std::move(entries)) {}

  Eigen::MatrixXd entries_;
};

/// Checks 1 <= n <= SymmetricMatrix::max_dimension.
void check_dimension(int n);

/// A(i,j) = f(i/(N+1), j/(N+1)), 1 <= i,j <= N.
SymmetricMatrix profile_matrix(const Profile& f, int n);

/// W(i,j) = X_{min,max} / sqrt(N), X i.i.d. standard normal drawn in row-major
/// upper-triangle order (diagonal included) from stream (seed, wigner, replicate).
SymmetricMatrix wigner(int n, std::uint64_t seed, std::uint64_t replicate = 0);
/// Same construction on an explicit stream seed.
SymmetricMatrix wigner_from_stream(int n, std::uint64_t stream);

SymmetricMatrix hadamard(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// (1/N) Tr(M^n).
double trace_moment(const SymmetricMatrix& m, int n);

/// "N" header line then one comma-separated row per line.
void write_csv(std::ostream& out, const SymmetricMatrix& m);

/// Field G(i,j), 1 <= i,j <= N, synthesised from a spectral density on a K x K
/// midpoint grid.
struct GaussianField {
  int n = 0;
  int grid = 0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  Eigen::MatrixXd values;  // values(i-1, j-1) = G(i,j)

  double operator()(int i, int j) const { return values(i - 1, j - 1); }
};

/// G(i,j) = sum_{k,l} sqrt(g(x_k,y_l)/K^2) [xi_kl cos(2 pi (i x_k + j y_l)) +
/// eta_kl sin(2 pi (i x_k + j y_l))] with x_k = (k - 1/2)/K. The pairs (xi, eta)
/// are drawn in row-major (k, l) order from stream (seed, field, replicate).
/// Evaluated with one K x K inverse FFT. Requires K >= 8.
GaussianField synth_gaussian_field(const SpectralDensity& g, int n, int grid, std::uint64_t seed,
                                   std::uint64_t replicate = 0);

/// Same sum evaluated term by term; O(N^2 K^2), for testing.
GaussianField synth_gaussian_field_direct(const SpectralDensity& g, int n, int grid,
                                          std::uint64_t seed, std::uint64_t replicate = 0);

/// Exact covariance of the synthesised field at lag (m, n):
/// sum_{k,l} g(x_k, y_l)/K^2 cos(2 pi (m x_k + n y_l)).
double field_covariance(const SpectralDensity& g, int grid, int m, int n);

/// Grid used when none is given: the field is antiperiodic with period K, so K
/// must be at least N for the N x N block to avoid repeating itself.
int default_field_grid(int n);

struct HadamardModel {
  Profile f;
};
struct TruncatedModel {
  Profile f;
  int k;
};
struct SandwichModel {
  RadialFunction r;
};
struct GaussianProcessModel {
  SpectralDensity g;
  int grid = 0;  // 0 picks default_field_grid(N)
};
/// The pair U_N = A_{f+alpha} o W and V_N + alpha Y with V_N = A_{sqrt(f^2+2 alpha f)} o W
/// on the same W and Y independent.
struct ShiftedModel {
  Profile f;
  double alpha;
};

using EnsembleModel =
    std::variant<HadamardModel, TruncatedModel, SandwichModel, GaussianProcessModel, ShiftedModel>;

struct EnsembleSpec {
  EnsembleModel model;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  /// Throws on N outside the guard or invalid model parameters.
  void validate() const;
};

struct Ensemble {
  SymmetricMatrix primary;
  /// V_N + alpha Y for the shifted model.
  std::optional<SymmetricMatrix> companion;
};

Ensemble assemble(const EnsembleSpec& spec);

}  // namespace hlab
