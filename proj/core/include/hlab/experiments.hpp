#pragma once

#include <cstdint>
#include <vector>

#include "hlab/matrix.hpp"
#include "hlab/measure.hpp"
#include "hlab/moments.hpp"
#include "hlab/profile.hpp"
#include "hlab/report.hpp"

namespace hlab {

struct ExperimentOptions {
  int n = 1000;
  int n_max = 6;
  /// One replicate per seed; an empty list skips every simulation oracle.
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  IntegrationConfig integration{};
  int threads = 1;
  /// Moment checks pass within this many combined standard errors.
  double sigmas = 3.0;
  /// Median Kolmogorov distance allowed between simulated and reference ESDs.
  double ks_tolerance = 0.05;
  /// Near-zero window half-width.
  double eps = 0.05;
  /// Spectral grid for the Gaussian-process ensemble; 0 picks default_field_grid(N).
  int grid = 0;
  /// Grids compared in the Gaussian-process refinement sweep.
  std::vector<int> grid_sweep{16, 32, 64};
  /// Compare the across-seed variance at N with the one at N/4.
  bool variance_check = true;
};

nlohmann::json to_json(const ExperimentOptions& opts);

/// Seed-averaged trace moments of Z_N = A_f o W against the combinatorial limit,
/// plus the vanishing-variance check and, for constant f, the Kolmogorov distance
/// to the semicircle law.
ExperimentReport check_theorem1(const Profile& f, const ExperimentOptions& opts);

/// KS(ESD(Z_{N,k}), ESD(Z_N)) <= (4/k)(N+1)/N for each seed, with the rank of the
/// difference bounded by 4 ceil(N/k).
ExperimentReport check_truncation_bound(const Profile& f, int k, const ExperimentOptions& opts);

/// mu_{f+alpha} = mu_{sqrt(f^2+2 alpha f)} boxplus mu_alpha through limits, convolution
/// and the coupled (U_N, V_N + alpha Y_N) simulation.
ExperimentReport check_lemma_additive(const Profile& f, double alpha, const ExperimentOptions& opts);

/// mu_{r (x) r} = nu boxtimes mu_1 with r the quantile radial function of nu.
ExperimentReport check_lemma_multiplicative(const MeasureSpec& nu, const ExperimentOptions& opts);

/// nu boxtimes mu_1 = eta boxplus mu_alpha with eta = mu_{sqrt(f^2 - alpha^2)}.
/// Throws HypothesisViolation before any computation when nu charges (-inf, alpha).
ExperimentReport check_theorem2(const MeasureSpec& nu, double alpha, const ExperimentOptions& opts);

/// Sandwich ensemble for nu with an atom at 0: exact zeros from the rank of R_N and
/// near-zero mass close to nu({0}).
ExperimentReport check_atom(const MeasureSpec& nu, const ExperimentOptions& opts);

/// T_N = (G + G^T)/sqrt(N) against the limit for f(x,y) = sqrt(g(x,1-y) + g(1-y,x)).
ExperimentReport check_theorem3(const SpectralDensity& g, const ExperimentOptions& opts);

enum class Counterexample { prime, dyadic };

/// Lattice profiles outside the admissible class, evaluated along two subsequences
/// of sizes (at most max_n). Informational: the report has no pass/fail checks.
ExperimentReport demo_counterexamples(Counterexample which, int max_n, std::uint64_t seed);

/// Matrix of the lattice profile on i/(N+1), 1 <= i <= N.
SymmetricMatrix counterexample_profile_matrix(Counterexample which, int n);

}  // namespace hlab
