#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hlab {

struct PointMass {
  double location;
  double weight;
};

struct UniformPiece {
  double lower;
  double upper;
  double weight;
};

/// Finite mixture of point masses and uniform laws; weights sum to 1 within 1e-12.
class MeasureSpec {
 public:
  using Component = std::variant<PointMass, UniformPiece>;

  explicit MeasureSpec(std::vector<Component> components);

  static MeasureSpec delta(double location) { return MeasureSpec({PointMass{location, 1.0}}); }
  static MeasureSpec uniform(double a, double b) { return MeasureSpec({UniformPiece{a, b, 1.0}}); }

  /// Parses "delta:c", "uniform:a:b", and mixtures such as "0.5*delta:1+0.5*delta:4".
  static MeasureSpec parse(std::string_view text);

  const std::vector<Component>& components() const noexcept { return components_; }

  double cdf(double y) const noexcept;
  /// Generalised inverse inf{y : cdf(y) >= u} for u in (0,1).
  double quantile(double u) const;
  /// Exact n-th raw moment.
  double moment(int n) const;
  double support_min() const noexcept;
  double support_max() const noexcept;
  /// nu((-inf, a)).
  double mass_below(double a) const noexcept;
  /// nu({a}).
  double atom_at(double a) const noexcept;

  /// Canonical literal that parse() maps back to an equal measure.
  std::string to_string() const;

 private:
  std::vector<Component> components_;
};

}  // namespace hlab
