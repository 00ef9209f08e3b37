#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <cstdint>

#include "hlab/expression.hpp"
#include "hlab/measure.hpp"

namespace hlab {

namespace detail {
struct RadialNode;
struct ProfileNode;
}  // namespace detail

class SpectralDensity;

/// Nonnegative function r on (0,1); f(x,y) = r(x) r(y) is a rank-one profile.
class RadialFunction {
 public:
  enum class Kind { constant, expression, quantile };

  static RadialFunction constant(double c);
  /// Expression in x only.
  static RadialFunction expression(Expression e);
  static RadialFunction parse(std::string_view text);

  double operator()(double x) const;
  Kind kind() const noexcept;
  /// Supremum on (0,1) when known.
  std::optional<double> bound() const;
  std::string describe() const;

 private:
  friend RadialFunction quantile_radial(const MeasureSpec& nu, double required_lower_bound);
  explicit RadialFunction(std::shared_ptr<const detail::RadialNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::RadialNode> node_;
};

/// r(x) = sqrt(inf{y : x <= nu(-inf, y]}), so that r^2(U) has law nu for U uniform.
/// With required_lower_bound = a > 0 the measure must satisfy nu([a, inf)) = 1;
/// otherwise HypothesisViolation is thrown. a = 0 only asks for nu([0, inf)) = 1.
RadialFunction quantile_radial(const MeasureSpec& nu, double required_lower_bound = 0.0);

enum class ProfileKind {
  constant,
  rank_one,
  grid,
  expression,
  truncated,
  shifted,
  semicircle_remainder,
  floor_remainder,
  density,
};

/// A symmetric nonnegative function f on (0,1)^2, the variance profile of Z_N = A_f o W_N.
///
/// Profiles are immutable handles; copies share the underlying node. Every kind is
/// bounded on compact subsquares and has a null discontinuity set by construction.
class Profile {
 public:
  static Profile constant(double alpha);
  static Profile rank_one(RadialFunction r);
  /// K x K symmetric nonnegative samples; f is constant on each cell [i/K,(i+1)/K) x [j/K,(j+1)/K).
  static Profile grid(Eigen::MatrixXd samples);
  /// Validates symmetry on 256 Halton points (tolerance 1e-12, relative above 1).
  static Profile expression(Expression e);

  /// Throws DomainError outside (0,1)^2, ProfileValidityError on negative or non-finite values.
  double operator()(double x, double y) const;

  ProfileKind kind() const noexcept;
  /// Known supremum (structural or declared); empty when not known.
  std::optional<double> bound() const;
  /// Attaches a declared essential bound M.
  Profile with_bound(double bound) const;
  /// Value of a constant profile.
  std::optional<double> constant_value() const;
  std::string describe() const;

 private:
  friend Profile truncate(const Profile&, int);
  friend Profile shift(const Profile&, double);
  friend Profile semicircle_remainder(const Profile&, double);
  friend Profile floor_remainder(const Profile&, double);
  friend class SpectralDensity;
  friend Profile profile_from_density(const SpectralDensity&);

  explicit Profile(std::shared_ptr<const detail::ProfileNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::ProfileNode> node_;
};

/// parse_profile: expression text in x and y, validated for symmetry.
Profile parse_profile(std::string_view text);

/// f * 1_{[1/k, 1-1/k]^2}, k >= 2.
Profile truncate(const Profile& f, int k);
/// f + alpha.
Profile shift(const Profile& f, double alpha);
/// sqrt(f^2 + 2 alpha f).
Profile semicircle_remainder(const Profile& f, double alpha);
/// sqrt((f - alpha)^2 + 2 alpha (f - alpha)); requires f >= alpha pointwise.
Profile floor_remainder(const Profile& f, double alpha);

/// Supremum of f over [lo, hi]^2 sampled on an n x n grid that includes the edges.
double grid_sup(const Profile& f, double lo, double hi, int n = 257);

/// bound() when known; otherwise probes f on shrinking squares and adopts the sampled
/// supremum if it is stable towards the boundary. Throws HypothesisViolation when f
/// looks unbounded, in which case callers should truncate or declare a bound.
double effective_bound(const Profile& f);

/// Spectral density g >= 0 on (0,1)^2 with g(1-x, 1-y) = g(x, y).
class SpectralDensity {
 public:
  static SpectralDensity constant(double c);
  /// Validated; asymmetric g throws HypothesisViolation.
  static SpectralDensity expression(Expression e);
  static SpectralDensity parse(std::string_view text);
  /// K x K samples with the same midpoint-cell semantics as Profile::grid.
  static SpectralDensity grid(Eigen::MatrixXd samples);
  /// (g(x,y) + g(1-x,1-y)) / 2. The cosine synthesis of a real field only sees this
  /// part of g, so it has the same covariance as g's real part.
  static SpectralDensity symmetrized(Expression e);

  double operator()(double x, double y) const;
  std::optional<double> bound() const;
  std::optional<double> constant_value() const;
  std::string describe() const;

 private:
  struct Impl;
  explicit SpectralDensity(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// f(x,y) = sqrt(g(x, 1-y) + g(1-y, x)).
Profile profile_from_density(const SpectralDensity& g);

/// i-th point (i >= 0) of the 2-D Halton sequence in bases 2 and 3.
std::pair<double, double> halton2(std::uint64_t i) noexcept;

}  // namespace hlab
