#include "hlab/matrix.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "hlab/errors.hpp"
#include "hlab/moments.hpp"
#include "hlab/rng.hpp"

namespace hlab {

void check_dimension(int n) {
  if (n < 1) throw MalformedInputError("matrix dimension must be >= 1, got " + std::to_string(n));
  if (n > SymmetricMatrix::max_dimension)
    throw SizeLimitError("matrix dimension " + std::to_string(n),
                         static_cast<std::size_t>(SymmetricMatrix::max_dimension));
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw MalformedInputError("matrix is not square (" + std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()) + ")");
  check_dimension(static_cast<int>(entries_.rows()));
  for (Eigen::Index j = 0; j < entries_.cols(); ++j)
    for (Eigen::Index i = j + 1; i < entries_.rows(); ++i)
      if (entries_(i, j) != entries_(j, i))
        throw MalformedInputError("matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
}

SymmetricMatrix SymmetricMatrix::zero(int n) {
  check_dimension(n);
  return SymmetricMatrix(Eigen::MatrixXd::Zero(n, n), Trusted{});
}

SymmetricMatrix SymmetricMatrix::from_upper(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) throw MalformedInputError("matrix is not square");
  check_dimension(static_cast<int>(entries.rows()));
  entries.triangularView<Eigen::StrictlyLower>() = entries.transpose();
  return SymmetricMatrix(std::move(entries), Trusted{});
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& other) const {
  if (size() != other.size()) throw MalformedInputError("matrix dimensions differ");
  return SymmetricMatrix(entries_ + other.entries_, Trusted{});
}

SymmetricMatrix SymmetricMatrix::scaled(double c) const {
  return SymmetricMatrix(entries_ * c, Trusted{});
}

SymmetricMatrix profile_matrix(const Profile& f, int n) {
  check_dimension(n);
  Eigen::MatrixXd a(n, n);
  const double denom = n + 1.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) a(i, j) = f((i + 1) / denom, (j + 1) / denom);
  return SymmetricMatrix::from_upper(std::move(a));
}

SymmetricMatrix wigner_from_stream(int n, std::uint64_t stream) {
  check_dimension(n);
  RandomStream rng(stream);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) w(i, j) = rng.normal() * scale;
  return SymmetricMatrix::from_upper(std::move(w));
}

SymmetricMatrix wigner(int n, std::uint64_t seed, std::uint64_t replicate) {
  return wigner_from_stream(n, stream_seed(seed, StreamRole::wigner, replicate));
}

SymmetricMatrix hadamard(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.size() != b.size())
    throw MalformedInputError("Hadamard product of " + std::to_string(a.size()) + "x" +
                              std::to_string(a.size()) + " and " + std::to_string(b.size()) + "x" +
                              std::to_string(b.size()) + " matrices");
  return SymmetricMatrix::from_upper(a.entries().cwiseProduct(b.entries()));
}

double trace_moment(const SymmetricMatrix& m, int n) {
  if (n < 1) throw MalformedInputError("trace_moment needs n >= 1");
  const auto& a = m.entries();
  const double dim = m.size();
  if (n == 1) return a.trace() / dim;
  // Tr(M^n) = <M^p, M^q> with p + q = n, both powers symmetric.
  const int p = n / 2;
  Eigen::MatrixXd half = a;
  for (int i = 1; i < p; ++i) half = half * a;
  if (n % 2 == 0) return half.squaredNorm() / dim;
  const Eigen::MatrixXd other = half * a;
  return half.cwiseProduct(other).sum() / dim;
}

void write_csv(std::ostream& out, const SymmetricMatrix& m) {
  out << m.size() << '\n';
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

void EnsembleSpec::validate() const {
  check_dimension(n);
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TruncatedModel>) {
          if (m.k < 2) throw DomainError("truncation level k must be >= 2");
        } else if constexpr (std::is_same_v<T, GaussianProcessModel>) {
          if (m.grid != 0 && m.grid < 8) throw DomainError("spectral grid K must be >= 8");
        } else if constexpr (std::is_same_v<T, ShiftedModel>) {
          if (!(m.alpha > 0.0) || !std::isfinite(m.alpha))
            throw DomainError("shift alpha must be positive");
        }
      },
      model);
}

namespace {

SymmetricMatrix weighted_wigner(const Profile& f, int n, std::uint64_t stream) {
  auto a = profile_matrix(f, n);
  return hadamard(a, wigner_from_stream(n, stream));
}

}  // namespace

Ensemble assemble(const EnsembleSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const auto w_stream = stream_seed(spec.seed, StreamRole::wigner, spec.replicate);
  return std::visit(
      [&](const auto& m) -> Ensemble {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HadamardModel>) {
          return {weighted_wigner(m.f, n, w_stream), std::nullopt};
        } else if constexpr (std::is_same_v<T, TruncatedModel>) {
          return {weighted_wigner(truncate(m.f, m.k), n, w_stream), std::nullopt};
        } else if constexpr (std::is_same_v<T, SandwichModel>) {
          std::vector<double> r(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = m.r((i + 1) / (n + 1.0));
          auto w = wigner_from_stream(n, w_stream).entries();
          for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i)
              w(i, j) = (r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(j)]) * w(i, j);
          return {SymmetricMatrix::from_upper(std::move(w)), std::nullopt};
        } else if constexpr (std::is_same_v<T, GaussianProcessModel>) {
          const int grid = m.grid ? m.grid : default_field_grid(n);
          const auto field = synth_gaussian_field(m.g, n, grid, spec.seed, spec.replicate);
          const double scale = 1.0 / std::sqrt(static_cast<double>(n));
          Eigen::MatrixXd t(n, n);
          for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i) t(i, j) = (field.values(i, j) + field.values(j, i)) * scale;
          return {SymmetricMatrix::from_upper(std::move(t)), std::nullopt};
        } else {
          const auto w = wigner_from_stream(n, w_stream);
          auto u = hadamard(profile_matrix(shift(m.f, m.alpha), n), w);
          auto v = hadamard(profile_matrix(semicircle_remainder(m.f, m.alpha), n), w);
          const auto y = wigner_from_stream(n, stream_seed(spec.seed, StreamRole::companion, spec.replicate));
          return {std::move(u), v + y.scaled(m.alpha)};
        }
      },
      spec.model);
}

}  // namespace hlab
