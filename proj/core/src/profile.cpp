#include "hlab/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

void check_unit_square(double x, double y) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0))
    throw DomainError("profile evaluated outside (0,1)^2 at (" + num(x) + ", " + num(y) + ")");
}

double checked(double v, const std::string& what, double x, double y) {
  if (!std::isfinite(v) || v < 0.0)
    throw ProfileValidityError(what + " has value " + num(v) + " at (" + num(x) + ", " + num(y) +
                               "); profiles must be finite and nonnegative");
  return v;
}

int cell_of(double x, Eigen::Index k) {
  const auto c = static_cast<Eigen::Index>(std::floor(x * static_cast<double>(k)));
  return static_cast<int>(std::clamp<Eigen::Index>(c, 0, k - 1));
}

constexpr int kSymmetrySamples = 256;
constexpr double kSymmetryTolerance = 1e-12;

}  // namespace

std::pair<double, double> halton2(std::uint64_t i) noexcept {
  return {radical_inverse(i + 1, 2), radical_inverse(i + 1, 3)};
}

// ---------------------------------------------------------------------------
// Radial functions

namespace detail {

struct RadialNode {
  virtual ~RadialNode() = default;
  virtual double value(double x) const = 0;
  virtual RadialFunction::Kind kind() const = 0;
  virtual std::optional<double> bound() const = 0;
  virtual std::string describe() const = 0;
};

namespace {

struct ConstantRadial final : RadialNode {
  double c;
  explicit ConstantRadial(double v) : c(v) {}
  double value(double) const override { return c; }
  RadialFunction::Kind kind() const override { return RadialFunction::Kind::constant; }
  std::optional<double> bound() const override { return c; }
  std::string describe() const override { return num(c); }
};

struct ExpressionRadial final : RadialNode {
  Expression e;
  explicit ExpressionRadial(Expression ex) : e(std::move(ex)) {}
  double value(double x) const override { return e(x); }
  RadialFunction::Kind kind() const override { return RadialFunction::Kind::expression; }
  std::optional<double> bound() const override { return std::nullopt; }
  std::string describe() const override { return e.source(); }
};

struct QuantileRadial final : RadialNode {
  MeasureSpec nu;
  explicit QuantileRadial(MeasureSpec m) : nu(std::move(m)) {}
  double value(double x) const override { return std::sqrt(nu.quantile(x)); }
  RadialFunction::Kind kind() const override { return RadialFunction::Kind::quantile; }
  std::optional<double> bound() const override { return std::sqrt(nu.support_max()); }
  std::string describe() const override { return "quantile(" + nu.to_string() + ")"; }
};

}  // namespace
}  // namespace detail

RadialFunction RadialFunction::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ProfileValidityError("constant radial function must be finite and nonnegative");
  return RadialFunction(std::make_shared<detail::ConstantRadial>(c));
}

RadialFunction RadialFunction::expression(Expression e) {
  if (e.uses_y()) throw ProfileValidityError("radial function may only depend on x");
  return RadialFunction(std::make_shared<detail::ExpressionRadial>(std::move(e)));
}

RadialFunction RadialFunction::parse(std::string_view text) {
  return expression(Expression::parse(text, Expression::Variables::x_only));
}

double RadialFunction::operator()(double x) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("radial function evaluated outside (0,1) at " + num(x));
  const double v = node_->value(x);
  if (!std::isfinite(v) || v < 0.0)
    throw ProfileValidityError("radial function " + node_->describe() + " has value " + num(v) +
                               " at " + num(x));
  return v;
}

RadialFunction::Kind RadialFunction::kind() const noexcept { return node_->kind(); }
std::optional<double> RadialFunction::bound() const { return node_->bound(); }
std::string RadialFunction::describe() const { return node_->describe(); }

RadialFunction quantile_radial(const MeasureSpec& nu, double required_lower_bound) {
  const double floor = std::max(required_lower_bound, 0.0);
  const double below = nu.mass_below(floor);
  if (below > 0.0) {
    if (required_lower_bound > 0.0)
      throw HypothesisViolation("measure " + nu.to_string() + " charges (-inf, " + num(floor) +
                                ") with mass " + num(below) + "; alpha = " + num(required_lower_bound) +
                                " requires nu([alpha, inf)) = 1");
    throw HypothesisViolation("measure " + nu.to_string() + " charges the negative half-line");
  }
  return RadialFunction(std::make_shared<detail::QuantileRadial>(nu));
}

// ---------------------------------------------------------------------------
// Profiles

namespace detail {

struct ProfileNode {
  std::optional<double> declared_bound;
  virtual ~ProfileNode() = default;
  /// Unchecked value; callers validate.
  virtual double value(double x, double y) const = 0;
  virtual ProfileKind kind() const = 0;
  virtual std::optional<double> structural_bound() const = 0;
  virtual std::string describe() const = 0;
  virtual std::shared_ptr<ProfileNode> clone() const = 0;
};

namespace {

template <typename Derived>
struct Cloneable : ProfileNode {
  std::shared_ptr<ProfileNode> clone() const override {
    return std::make_shared<Derived>(static_cast<const Derived&>(*this));
  }
};

struct ConstantNode final : Cloneable<ConstantNode> {
  double alpha;
  explicit ConstantNode(double a) : alpha(a) {}
  double value(double, double) const override { return alpha; }
  ProfileKind kind() const override { return ProfileKind::constant; }
  std::optional<double> structural_bound() const override { return alpha; }
  std::string describe() const override { return "constant(" + num(alpha) + ")"; }
};

struct RankOneNode final : Cloneable<RankOneNode> {
  RadialFunction r;
  explicit RankOneNode(RadialFunction rf) : r(std::move(rf)) {}
  double value(double x, double y) const override { return r(x) * r(y); }
  ProfileKind kind() const override { return ProfileKind::rank_one; }
  std::optional<double> structural_bound() const override {
    if (auto b = r.bound()) return *b * *b;
    return std::nullopt;
  }
  std::string describe() const override { return "rank_one(" + r.describe() + ")"; }
};

struct GridNode final : Cloneable<GridNode> {
  Eigen::MatrixXd samples;
  explicit GridNode(Eigen::MatrixXd s) : samples(std::move(s)) {}
  double value(double x, double y) const override {
    const auto k = samples.rows();
    return samples(cell_of(x, k), cell_of(y, k));
  }
  ProfileKind kind() const override { return ProfileKind::grid; }
  std::optional<double> structural_bound() const override { return samples.maxCoeff(); }
  std::string describe() const override {
    return "grid(" + std::to_string(samples.rows()) + "x" + std::to_string(samples.cols()) + ")";
  }
};

struct ExpressionNode final : Cloneable<ExpressionNode> {
  Expression e;
  explicit ExpressionNode(Expression ex) : e(std::move(ex)) {}
  double value(double x, double y) const override { return e(x, y); }
  ProfileKind kind() const override { return ProfileKind::expression; }
  std::optional<double> structural_bound() const override { return std::nullopt; }
  std::string describe() const override { return "expr(" + e.source() + ")"; }
};

struct TruncatedNode final : Cloneable<TruncatedNode> {
  Profile base;
  int k;
  double lo, hi;
  double sup;
  TruncatedNode(Profile b, int level, double s)
      : base(std::move(b)), k(level), lo(1.0 / level), hi(1.0 - 1.0 / level), sup(s) {}
  double value(double x, double y) const override {
    if (x < lo || x > hi || y < lo || y > hi) return 0.0;
    return base(x, y);
  }
  ProfileKind kind() const override { return ProfileKind::truncated; }
  std::optional<double> structural_bound() const override { return sup; }
  std::string describe() const override {
    return "truncate(" + base.describe() + "," + std::to_string(k) + ")";
  }
};

struct ShiftNode final : Cloneable<ShiftNode> {
  Profile base;
  double alpha;
  ShiftNode(Profile b, double a) : base(std::move(b)), alpha(a) {}
  double value(double x, double y) const override { return base(x, y) + alpha; }
  ProfileKind kind() const override { return ProfileKind::shifted; }
  std::optional<double> structural_bound() const override {
    if (auto b = base.bound()) return *b + alpha;
    return std::nullopt;
  }
  std::string describe() const override { return "shift(" + base.describe() + "," + num(alpha) + ")"; }
};

struct SemicircleRemainderNode final : Cloneable<SemicircleRemainderNode> {
  Profile base;
  double alpha;
  SemicircleRemainderNode(Profile b, double a) : base(std::move(b)), alpha(a) {}
  double value(double x, double y) const override {
    const double f = base(x, y);
    return std::sqrt(f * f + 2.0 * alpha * f);
  }
  ProfileKind kind() const override { return ProfileKind::semicircle_remainder; }
  std::optional<double> structural_bound() const override {
    if (auto b = base.bound()) return std::sqrt(*b * *b + 2.0 * alpha * *b);
    return std::nullopt;
  }
  std::string describe() const override {
    return "sqrt_f2_plus_2af(" + base.describe() + "," + num(alpha) + ")";
  }
};

struct FloorRemainderNode final : Cloneable<FloorRemainderNode> {
  Profile base;
  double alpha;
  FloorRemainderNode(Profile b, double a) : base(std::move(b)), alpha(a) {}
  double value(double x, double y) const override {
    double d = base(x, y) - alpha;
    // r(x) r(y) with r >= sqrt(alpha) can round a few ulps below alpha.
    if (d < 0.0 && d >= -1e-12 * std::max(1.0, alpha)) d = 0.0;
    const double v = d * d + 2.0 * alpha * d;
    return d < 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(v);
  }
  ProfileKind kind() const override { return ProfileKind::floor_remainder; }
  std::optional<double> structural_bound() const override {
    if (auto b = base.bound()) {
      const double d = std::max(*b - alpha, 0.0);
      return std::sqrt(d * d + 2.0 * alpha * d);
    }
    return std::nullopt;
  }
  std::string describe() const override {
    return "floor_remainder(" + base.describe() + "," + num(alpha) + ")";
  }
};

}  // namespace
}  // namespace detail

Profile Profile::constant(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ProfileValidityError("constant profile must be finite and nonnegative, got " + num(alpha));
  return Profile(std::make_shared<detail::ConstantNode>(alpha));
}

Profile Profile::rank_one(RadialFunction r) {
  return Profile(std::make_shared<detail::RankOneNode>(std::move(r)));
}

Profile Profile::grid(Eigen::MatrixXd samples) {
  if (samples.rows() < 1 || samples.rows() != samples.cols())
    throw MalformedInputError("grid profile needs a nonempty square sample matrix");
  for (Eigen::Index i = 0; i < samples.rows(); ++i)
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      const double v = samples(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw ProfileValidityError("grid sample (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") is negative or non-finite");
      if (v != samples(j, i))
        throw ProfileValidityError("grid samples are not symmetric at (" + std::to_string(i + 1) +
                                   "," + std::to_string(j + 1) + ")");
    }
  return Profile(std::make_shared<detail::GridNode>(std::move(samples)));
}

Profile Profile::expression(Expression e) {
  for (int i = 0; i < kSymmetrySamples; ++i) {
    const auto [x, y] = halton2(static_cast<std::uint64_t>(i));
    const double a = checked(e(x, y), "expression " + e.source(), x, y);
    const double b = checked(e(y, x), "expression " + e.source(), y, x);
    if (std::abs(a - b) > kSymmetryTolerance * std::max(1.0, std::abs(a)))
      throw ProfileValidityError("expression " + e.source() + " is not symmetric: f(" + num(x) + "," +
                                 num(y) + ")=" + num(a) + " but f(" + num(y) + "," + num(x) +
                                 ")=" + num(b));
  }
  return Profile(std::make_shared<detail::ExpressionNode>(std::move(e)));
}

Profile parse_profile(std::string_view text) {
  auto e = Expression::parse(text);
  if (e.is_constant()) return Profile::constant(e(0.5, 0.5));
  return Profile::expression(std::move(e));
}

double Profile::operator()(double x, double y) const {
  check_unit_square(x, y);
  const double v = node_->value(x, y);
  if (!std::isfinite(v) || v < 0.0) return checked(v, node_->describe(), x, y);
  return v;
}

ProfileKind Profile::kind() const noexcept { return node_->kind(); }

std::optional<double> Profile::bound() const {
  if (node_->declared_bound) return node_->declared_bound;
  return node_->structural_bound();
}

Profile Profile::with_bound(double bound) const {
  if (!(bound >= 0.0) || !std::isfinite(bound))
    throw DomainError("declared profile bound must be finite and nonnegative");
  auto copy = node_->clone();
  copy->declared_bound = bound;
  return Profile(std::move(copy));
}

std::optional<double> Profile::constant_value() const {
  if (const auto* c = dynamic_cast<const detail::ConstantNode*>(node_.get())) return c->alpha;
  return std::nullopt;
}

std::string Profile::describe() const { return node_->describe(); }

double grid_sup(const Profile& f, double lo, double hi, int n) {
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = lo + (hi - lo) * j / (n - 1);
      sup = std::max(sup, f(x, y));
    }
  }
  return sup;
}

Profile truncate(const Profile& f, int k) {
  if (k < 2) throw DomainError("truncation level must be >= 2");
  const double lo = 1.0 / k;
  const double hi = 1.0 - 1.0 / k;
  const double sup = f.bound() ? *f.bound() : grid_sup(f, lo, hi);
  return Profile(std::make_shared<detail::TruncatedNode>(f, k, sup));
}

Profile shift(const Profile& f, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("shift must be nonnegative");
  return Profile(std::make_shared<detail::ShiftNode>(f, alpha));
}

Profile semicircle_remainder(const Profile& f, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  return Profile(std::make_shared<detail::SemicircleRemainderNode>(f, alpha));
}

Profile floor_remainder(const Profile& f, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  return Profile(std::make_shared<detail::FloorRemainderNode>(f, alpha));
}

double effective_bound(const Profile& f) {
  if (auto b = f.bound()) return *b;
  const double inner = grid_sup(f, 1e-3, 1.0 - 1e-3, 129);
  const double outer = grid_sup(f, 1e-9, 1.0 - 1e-9, 129);
  if (!std::isfinite(outer) || outer > 2.0 * inner + 1.0)
    throw HypothesisViolation("profile " + f.describe() +
                              " appears unbounded near the boundary of (0,1)^2; truncate it or "
                              "declare a bound");
  return outer;
}

// ---------------------------------------------------------------------------
// Spectral densities

struct SpectralDensity::Impl {
  enum class Kind { constant, expression, grid } kind;
  double c = 0.0;
  std::optional<Expression> e;
  Eigen::MatrixXd samples;
  bool symmetrize = false;

  double raw(double x, double y) const {
    switch (kind) {
      case Kind::constant: return c;
      case Kind::expression: return (*e)(x, y);
      case Kind::grid: {
        const auto k = samples.rows();
        return samples(cell_of(x, k), cell_of(y, k));
      }
    }
    return 0.0;
  }
  double value(double x, double y) const {
    if (symmetrize) return 0.5 * (raw(x, y) + raw(1.0 - x, 1.0 - y));
    return raw(x, y);
  }
};

namespace {

void validate_density(const SpectralDensity& g, const std::string& what) {
  for (int i = 0; i < kSymmetrySamples; ++i) {
    const auto [x, y] = halton2(static_cast<std::uint64_t>(i));
    const double a = g(x, y);
    const double b = g(1.0 - x, 1.0 - y);
    if (std::abs(a - b) > kSymmetryTolerance * std::max(1.0, std::abs(a)))
      throw HypothesisViolation("spectral density " + what + " violates g(1-x,1-y) = g(x,y): g(" +
                                num(x) + "," + num(y) + ")=" + num(a) + " but g(" + num(1.0 - x) +
                                "," + num(1.0 - y) + ")=" + num(b));
  }
}

}  // namespace

SpectralDensity SpectralDensity::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ProfileValidityError("constant spectral density must be finite and nonnegative");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::constant;
  impl->c = c;
  return SpectralDensity(std::move(impl));
}

SpectralDensity SpectralDensity::expression(Expression e) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::expression;
  impl->e = std::move(e);
  SpectralDensity g(std::move(impl));
  validate_density(g, g.describe());
  return g;
}

SpectralDensity SpectralDensity::parse(std::string_view text) {
  auto e = Expression::parse(text);
  if (e.is_constant()) return constant(e(0.5, 0.5));
  return expression(std::move(e));
}

SpectralDensity SpectralDensity::grid(Eigen::MatrixXd samples) {
  if (samples.rows() < 1 || samples.rows() != samples.cols())
    throw MalformedInputError("grid density needs a nonempty square sample matrix");
  const auto k = samples.rows();
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!std::isfinite(samples(i, j)) || samples(i, j) < 0.0)
        throw ProfileValidityError("grid density sample is negative or non-finite");
      if (samples(i, j) != samples(k - 1 - i, k - 1 - j))
        throw HypothesisViolation("grid density violates g(1-x,1-y) = g(x,y)");
    }
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::grid;
  impl->samples = std::move(samples);
  return SpectralDensity(std::move(impl));
}

SpectralDensity SpectralDensity::symmetrized(Expression e) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::expression;
  impl->e = std::move(e);
  impl->symmetrize = true;
  return SpectralDensity(std::move(impl));
}

double SpectralDensity::operator()(double x, double y) const {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0))
    throw DomainError("spectral density evaluated outside (0,1)^2");
  const double v = impl_->value(x, y);
  if (!std::isfinite(v) || v < 0.0)
    throw ProfileValidityError("spectral density " + describe() + " has value " + num(v) + " at (" +
                               num(x) + ", " + num(y) + ")");
  return v;
}

std::optional<double> SpectralDensity::bound() const {
  switch (impl_->kind) {
    case Impl::Kind::constant: return impl_->c;
    case Impl::Kind::grid: return impl_->samples.maxCoeff();
    case Impl::Kind::expression: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> SpectralDensity::constant_value() const {
  if (impl_->kind == Impl::Kind::constant) return impl_->c;
  return std::nullopt;
}

std::string SpectralDensity::describe() const {
  switch (impl_->kind) {
    case Impl::Kind::constant: return "constant(" + num(impl_->c) + ")";
    case Impl::Kind::grid:
      return "grid(" + std::to_string(impl_->samples.rows()) + "x" +
             std::to_string(impl_->samples.cols()) + ")";
    case Impl::Kind::expression:
      return (impl_->symmetrize ? "symmetrized(" : "expr(") + impl_->e->source() + ")";
  }
  return {};
}

namespace detail {
namespace {

struct DensityNode final : Cloneable<DensityNode> {
  SpectralDensity g;
  explicit DensityNode(SpectralDensity d) : g(std::move(d)) {}
  double value(double x, double y) const override { return std::sqrt(g(x, 1.0 - y) + g(1.0 - y, x)); }
  ProfileKind kind() const override { return ProfileKind::density; }
  std::optional<double> structural_bound() const override {
    if (auto b = g.bound()) return std::sqrt(2.0 * *b);
    return std::nullopt;
  }
  std::string describe() const override { return "from_density(" + g.describe() + ")"; }
};

}  // namespace
}  // namespace detail

Profile profile_from_density(const SpectralDensity& g) {
  return Profile(std::make_shared<detail::DensityNode>(g));
}

}  // namespace hlab
