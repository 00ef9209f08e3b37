#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hlab/measure.hpp"
#include "hlab/nc.hpp"
#include "hlab/profile.hpp"

namespace hlab {

/// Prefix m_1..m_{n_max} of the moments of a probability law, with per-entry
/// standard errors (zero for exact entries).
///
/// Symmetric sequences store only even orders; odd moments read as exactly 0.
class MomentSequence {
 public:
  enum class Parity { symmetric, general };

  /// even_values[h-1] = m_{2h} for 2h <= n_max.
  static MomentSequence symmetric(int n_max, std::vector<double> even_values,
                                  std::vector<double> even_errors = {});
  /// values[n-1] = m_n.
  static MomentSequence general(std::vector<double> values, std::vector<double> errors = {});

  int n_max() const noexcept { return n_max_; }
  Parity parity() const noexcept { return parity_; }
  bool is_symmetric() const noexcept { return parity_ == Parity::symmetric; }

  /// m_order; m_0 = 1.
  double moment(int order) const;
  double std_error(int order) const;
  double operator[](int order) const { return moment(order); }

  /// m_1..m_{n_max} including odd zeros.
  std::vector<double> values() const;
  std::vector<double> errors() const;

  MomentSequence prefix(int n_max) const;

 private:
  MomentSequence(int n_max, Parity parity, std::vector<double> stored, std::vector<double> errors);

  int n_max_ = 0;
  Parity parity_ = Parity::general;
  std::vector<double> stored_;
  std::vector<double> errors_;
};

/// Free cumulants kappa_1..kappa_n.
struct CumulantSequence {
  std::vector<double> values;
  double operator[](int order) const { return values.at(static_cast<std::size_t>(order - 1)); }
  int size() const noexcept { return static_cast<int>(values.size()); }
};

struct IntegrationConfig {
  enum class Method { automatic, midpoint, monte_carlo };

  /// automatic: tensor midpoint while the integral has at most max_midpoint_dimension
  /// variables, Monte Carlo above that.
  Method method = Method::automatic;
  int grid_points = 64;
  int max_midpoint_dimension = 4;
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  /// Relative standard-error target for Monte Carlo entries; 0 disables refinement.
  double tolerance = 0.0;
  /// Cap on elementary operations per moment order.
  double evaluation_budget = 5e10;
  int threads = 1;
  NcLimits limits{};
};

/// L_{sigma,f}(x) = prod over pairs (u,v) of f^2(x_{T(u)}, x_{T(v)}), x of length m+1.
double eval_L(const PairPartition& sigma, const KrewerasLabeling& labeling, const Profile& f,
              std::span<const double> x);

/// m_{2h} = sum over sigma in NC_2(2h) of the integral of L_{sigma,f} over (0,1)^{h+1},
/// for 2h <= n_max. Requires a finite bound on f (see effective_bound).
///
/// Midpoint entries report |I_G - I_{G/2}| as their error bar; Monte Carlo entries
/// report the standard error of the shared-sample estimator. Results are identical
/// for every thread count.
MomentSequence limiting_moments(const Profile& f, int n_max, const IntegrationConfig& cfg = {});

/// m_{2h} <= bound^{2h} Catalan(h) (1 + tol) for every stored even order.
bool moment_growth_check(const MomentSequence& ms, double bound, double tol = 1e-9);

/// Semicircle law with standard deviation alpha: m_{2h} = alpha^{2h} Catalan(h).
MomentSequence semicircle_moments(double alpha, int n_max);

MomentSequence measure_moments(const MeasureSpec& nu, int n_max);

/// kappa_n = m_n - sum over pi in NC(n), pi != 1_n, of prod over blocks of kappa_{|B|}.
CumulantSequence moments_to_cumulants(const MomentSequence& ms, const NcLimits& limits = {});
/// m_n = sum over pi in NC(n) of prod over blocks of kappa_{|B|}.
MomentSequence cumulants_to_moments(const CumulantSequence& cs, const NcLimits& limits = {});

/// Free additive convolution at the moment level (cumulants add). Standard errors
/// are propagated to first order.
MomentSequence boxplus(const MomentSequence& a, const MomentSequence& b, const NcLimits& limits = {});

/// Moments of nu boxtimes mu_1 for a law nu on [0, inf):
///   m_{2h} = sum over sigma in NC_2(2h) of prod_i m_{|V_i|}(nu),
/// V_1..V_{h+1} the Kreweras blocks of sigma. Needs nu's moments up to order n_max/2 + 1.
MomentSequence boxtimes_positive_semicircle(const MomentSequence& nu, int n_max,
                                            const NcLimits& limits = {});

struct HankelCheck {
  double min_eigenvalue = 0.0;
  double threshold = 0.0;
  bool positive = true;
};

/// Positive semidefiniteness of [m_{i+j}], 0 <= i,j <= n_max/2, after rescaling by
/// sqrt(m_2). Allows rel_tol times the largest entry plus three standard errors
/// (Frobenius norm of the rescaled error matrix).
HankelCheck hankel_check(const MomentSequence& ms, double rel_tol = 1e-8);

/// "order,value,std_error" rows. Symmetric sequences list even orders only.
void write_csv(std::ostream& out, const MomentSequence& ms);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

}  // namespace hlab
