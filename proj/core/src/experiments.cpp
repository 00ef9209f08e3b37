#include "hlab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "hlab/errors.hpp"
#include "hlab/parallel.hpp"
#include "hlab/rng.hpp"
#include "hlab/spectra.hpp"

namespace hlab {

nlohmann::json to_json(const ExperimentOptions& opts) {
  const auto& ic = opts.integration;
  const char* method = ic.method == IntegrationConfig::Method::automatic ? "automatic"
                       : ic.method == IntegrationConfig::Method::midpoint ? "midpoint"
                                                                           : "monte_carlo";
  return {{"N", opts.n},
          {"nmax", opts.n_max},
          {"seeds", opts.seeds},
          {"sigmas", opts.sigmas},
          {"ks_tolerance", opts.ks_tolerance},
          {"eps", opts.eps},
          {"K", opts.grid},
          {"K_sweep", opts.grid_sweep},
          {"variance_check", opts.variance_check},
          {"integration",
           {{"method", method},
            {"grid", ic.grid_points},
            {"max_midpoint_dimension", ic.max_midpoint_dimension},
            {"mc_samples", ic.samples},
            {"seed", ic.seed},
            {"tolerance", ic.tolerance}}}};
}

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string order_name(int n) { return "m" + std::to_string(n); }

std::vector<double> power_moments(const SpectralSample& s, int n_max) {
  std::vector<double> m(static_cast<std::size_t>(n_max), 0.0);
  for (double l : s.eigenvalues) {
    double p = 1.0;
    for (int n = 0; n < n_max; ++n) {
      p *= l;
      m[static_cast<std::size_t>(n)] += p;
    }
  }
  for (auto& v : m) v /= static_cast<double>(s.size());
  return m;
}

struct SeedStats {
  MomentSequence mean;
  std::vector<double> variance;
};

SeedStats summarize_seeds(const std::vector<std::vector<double>>& per_seed) {
  const std::size_t n = per_seed.front().size();
  const auto s = static_cast<double>(per_seed.size());
  std::vector<double> mean(n, 0.0), var(n, 0.0), se(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& row : per_seed) mean[k] += row[k];
    mean[k] /= s;
    if (per_seed.size() > 1) {
      for (const auto& row : per_seed) var[k] += (row[k] - mean[k]) * (row[k] - mean[k]);
      var[k] /= s - 1.0;
      se[k] = std::sqrt(var[k] / s);
    }
  }
  return {MomentSequence::general(mean, se), var};
}

/// spectra[seed index][matrix index]
template <typename Build>
std::vector<std::vector<SpectralSample>> simulate(const std::vector<std::uint64_t>& seeds, int threads,
                                                  Build build) {
  std::vector<std::vector<SpectralSample>> out(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    for (const auto& m : build(seeds[i])) out[i].push_back(eigenvalues(m));
  });
  return out;
}

SeedStats moment_stats(const std::vector<std::vector<SpectralSample>>& sims, std::size_t which,
                       int n_max) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : sims) rows.push_back(power_moments(s[which], n_max));
  return summarize_seeds(rows);
}

void compare(ExperimentReport& rep, const std::string& a_name, const MomentSequence& a,
             const std::string& b_name, const MomentSequence& b, int n_max, double sigmas) {
  for (int n = 1; n <= n_max; ++n) {
    if (n % 2 && a.is_symmetric() && b.is_symmetric()) continue;
    const double va = a.moment(n);
    const double vb = b.moment(n);
    const double tol = sigmas * std::hypot(a.std_error(n), b.std_error(n)) +
                       1e-10 * std::max({1.0, std::abs(va), std::abs(vb)});
    rep.within(order_name(n) + " " + a_name + " vs " + b_name, va, vb, tol);
  }
}

void hankel(ExperimentReport& rep, const std::string& name, const MomentSequence& ms) {
  const auto h = hankel_check(ms);
  rep.holds("hankel " + name, h.positive);
  rep.metrics()["hankel"][name] = {{"min_eigenvalue", h.min_eigenvalue}, {"threshold", h.threshold}};
}

nlohmann::json moments_json(const MomentSequence& ms) {
  return {{"values", ms.values()}, {"std_errors", ms.errors()}};
}

void record(ExperimentReport& rep, const std::string& name, const MomentSequence& ms) {
  rep.metrics()["moments"][name] = moments_json(ms);
  hankel(rep, name, ms);
}

std::string moments_csv(const std::vector<std::pair<std::string, const MomentSequence*>>& cols,
                        int n_max) {
  std::ostringstream out;
  out << "order";
  for (const auto& [name, _] : cols) out << ',' << name << ',' << name << "_std_error";
  out << '\n';
  for (int n = 1; n <= n_max; ++n) {
    out << n;
    for (const auto& [_, ms] : cols)
      out << ',' << format_double(ms->moment(n)) << ',' << format_double(ms->std_error(n));
    out << '\n';
  }
  return out.str();
}

std::string histogram_csv(const SpectralSample& s) {
  double lo = s.eigenvalues.front();
  double hi = s.eigenvalues.back();
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.01 * (hi - lo);
  std::ostringstream out;
  write_csv(out, histogram(s, 50, lo - pad, hi + pad));
  return out.str();
}

std::vector<double> ks_to(const std::vector<std::vector<SpectralSample>>& sims, std::size_t which,
                          const std::function<double(double)>& cdf) {
  std::vector<double> out;
  for (const auto& s : sims) out.push_back(ks_distance(EmpiricalDistribution(s[which]), cdf));
  return out;
}

void require_seeds(const ExperimentOptions& opts) {
  if (opts.n_max < 1) throw MalformedInputError("nmax must be >= 1");
  if (!opts.seeds.empty()) check_dimension(opts.n);
}

std::vector<SymmetricMatrix> single(SymmetricMatrix m) {
  std::vector<SymmetricMatrix> v;
  v.push_back(std::move(m));
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentReport check_theorem1(const Profile& f, const ExperimentOptions& opts) {
  Timer timer;
  require_seeds(opts);
  ExperimentReport rep("theorem1");
  rep.inputs() = {{"profile", f.describe()}, {"options", to_json(opts)}};
  const int n_max = opts.n_max;
  const auto limit = limiting_moments(f, n_max, opts.integration);
  record(rep, "limit", limit);
  std::vector<std::pair<std::string, const MomentSequence*>> cols{{"limit", &limit}};
  std::optional<SeedStats> stats;
  if (!opts.seeds.empty()) {
    auto build = [&](int n) {
      return [&f, n](std::uint64_t seed) {
        return single(assemble({HadamardModel{f}, n, seed}).primary);
      };
    };
    const auto sims = simulate(opts.seeds, opts.threads, build(opts.n));
    stats = moment_stats(sims, 0, n_max);
    record(rep, "simulation", stats->mean);
    rep.metrics()["variance"]["N"] = stats->variance;
    compare(rep, "limit", limit, "simulation", stats->mean, n_max, opts.sigmas);
    if (opts.variance_check && opts.seeds.size() >= 2) {
      const int quarter = std::max(opts.n / 4, 2);
      const auto small = moment_stats(simulate(opts.seeds, opts.threads, build(quarter)), 0, n_max);
      rep.metrics()["variance"]["N/4"] = small.variance;
      for (int n = 1; n <= n_max; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        rep.at_most("var " + order_name(n) + " N vs N/4", stats->variance[k], small.variance[k]);
      }
    }
    if (auto c = f.constant_value(); c && *c > 0.0) {
      const double alpha = *c;
      const auto ks = ks_to(sims, 0, [alpha](double x) { return semicircle_cdf(alpha, x); });
      rep.metrics()["ks_semicircle"] = ks;
      rep.at_most("ks semicircle median", median(ks), opts.ks_tolerance);
    }
    rep.attach("histogram", histogram_csv(sims.front().front()));
    cols.emplace_back("simulation", &stats->mean);
  }
  rep.attach("moments", moments_csv(cols, n_max));
  rep.set_runtime(timer.seconds());
  return rep;
}

ExperimentReport check_truncation_bound(const Profile& f, int k, const ExperimentOptions& opts) {
  Timer timer;
  if (k < 2) throw DomainError("truncation level k must be >= 2");
  check_dimension(opts.n);
  ExperimentReport rep("truncation");
  rep.inputs() = {{"profile", f.describe()}, {"k", k}, {"options", to_json(opts)}};
  const int n = opts.n;
  const double bound = 4.0 / k * (n + 1.0) / n;
  const int rank_bound = 4 * ((n + k - 1) / k);
  // Indices whose lattice point leaves [1/k, 1 - 1/k]; the difference lives on these rows and columns.
  std::vector<int> boundary;
  for (int i = 1; i <= n; ++i) {
    const double x = i / (n + 1.0);
    if (x < 1.0 / k || x > 1.0 - 1.0 / k) boundary.push_back(i - 1);
  }
  std::vector<char> on_boundary(static_cast<std::size_t>(n), 0);
  for (int i : boundary) on_boundary[static_cast<std::size_t>(i)] = 1;
  struct Row {
    double ks = 0.0;
    int rank = 0;
    bool supported = true;
  };
  std::vector<Row> rows(opts.seeds.size());
  parallel_for(opts.seeds.size(), opts.threads, [&](std::size_t s) {
    const auto z = assemble({HadamardModel{f}, n, opts.seeds[s]}).primary;
    const auto zk = assemble({TruncatedModel{f, k}, n, opts.seeds[s]}).primary;
    rows[s].ks = ks_distance(EmpiricalDistribution(eigenvalues(z)), EmpiricalDistribution(eigenvalues(zk)));
    const SymmetricMatrix diff(zk.entries() - z.entries());
    for (int j = 0; j < n && rows[s].supported; ++j)
      for (int i = 0; i < n; ++i)
        if (!on_boundary[static_cast<std::size_t>(i)] && !on_boundary[static_cast<std::size_t>(j)] &&
            diff(i, j) != 0.0) {
          rows[s].supported = false;
          break;
        }
    const auto ev = eigenvalues(diff);
    double top = 0.0;
    for (double l : ev.eigenvalues) top = std::max(top, std::abs(l));
    for (double l : ev.eigenvalues)
      if (std::abs(l) > 1e-10 * top * n) ++rows[s].rank;
  });
  rep.at_most("boundary rank bound", 2.0 * static_cast<double>(boundary.size()), rank_bound);
  std::vector<double> ks;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto tag = " seed " + std::to_string(opts.seeds[s]);
    rep.at_most("ks" + tag, rows[s].ks, bound);
    rep.at_most("rank" + tag, rows[s].rank, rank_bound);
    rep.holds("difference on boundary" + tag, rows[s].supported);
    ks.push_back(rows[s].ks);
  }
  rep.metrics()["ks"] = ks;
  rep.metrics()["ks_bound"] = bound;
  rep.metrics()["boundary_size"] = boundary.size();
  rep.set_runtime(timer.seconds());
  return rep;
}

ExperimentReport check_lemma_additive(const Profile& f, double alpha, const ExperimentOptions& opts) {
  Timer timer;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  require_seeds(opts);
  effective_bound(f);
  ExperimentReport rep("lemma-add");
  rep.inputs() = {{"profile", f.describe()}, {"alpha", alpha}, {"options", to_json(opts)}};
  const int n_max = opts.n_max;
  const auto left = limiting_moments(shift(f, alpha), n_max, opts.integration);
  const auto remainder = limiting_moments(semicircle_remainder(f, alpha), n_max, opts.integration);
  const auto right = boxplus(remainder, semicircle_moments(alpha, n_max), opts.integration.limits);
  record(rep, "limit", left);
  record(rep, "boxplus", right);
  compare(rep, "limit", left, "boxplus", right, n_max, opts.sigmas);
  std::optional<MomentSequence> exact;
  if (auto c = f.constant_value()) {
    exact = semicircle_moments(*c + alpha, n_max);
    compare(rep, "semicircle", *exact, "boxplus", right, n_max, opts.sigmas);
    compare(rep, "semicircle", *exact, "limit", left, n_max, opts.sigmas);
  }
  std::vector<std::pair<std::string, const MomentSequence*>> cols{{"limit", &left},
                                                                  {"boxplus", &right}};
  std::optional<SeedStats> u, v;
  if (!opts.seeds.empty()) {
    const int n = opts.n;
    const auto sims = simulate(opts.seeds, opts.threads, [&](std::uint64_t seed) {
      auto e = assemble({ShiftedModel{f, alpha}, n, seed});
      std::vector<SymmetricMatrix> out;
      out.push_back(std::move(e.primary));
      out.push_back(std::move(*e.companion));
      return out;
    });
    u = moment_stats(sims, 0, n_max);
    v = moment_stats(sims, 1, n_max);
    record(rep, "U", u->mean);
    record(rep, "V+aY", v->mean);
    compare(rep, "limit", left, "U", u->mean, n_max, opts.sigmas);
    compare(rep, "limit", left, "V+aY", v->mean, n_max, opts.sigmas);
    compare(rep, "boxplus", right, "U", u->mean, n_max, opts.sigmas);
    compare(rep, "boxplus", right, "V+aY", v->mean, n_max, opts.sigmas);
    compare(rep, "U", u->mean, "V+aY", v->mean, n_max, opts.sigmas);
    std::vector<double> ks;
    for (const auto& s : sims) ks.push_back(ks_distance(EmpiricalDistribution(s[0]), EmpiricalDistribution(s[1])));
    rep.metrics()["ks_U_vs_V+aY"] = ks;
    cols.emplace_back("U", &u->mean);
    cols.emplace_back("V+aY", &v->mean);
  }
  rep.attach("moments", moments_csv(cols, n_max));
  rep.set_runtime(timer.seconds());
  return rep;
}

ExperimentReport check_lemma_multiplicative(const MeasureSpec& nu, const ExperimentOptions& opts) {
  Timer timer;
  require_seeds(opts);
  const auto r = quantile_radial(nu);
  const auto f = Profile::rank_one(r);
  ExperimentReport rep("lemma-mult");
  rep.inputs() = {{"nu", nu.to_string()}, {"options", to_json(opts)}};
  const int n_max = opts.n_max;
  const auto blockwise =
      boxtimes_positive_semicircle(measure_moments(nu, n_max / 2 + 1), n_max, opts.integration.limits);
  const auto limit = limiting_moments(f, n_max, opts.integration);
  record(rep, "boxtimes", blockwise);
  record(rep, "limit", limit);
  compare(rep, "boxtimes", blockwise, "limit", limit, n_max, opts.sigmas);
  std::vector<std::pair<std::string, const MomentSequence*>> cols{{"boxtimes", &blockwise},
                                                                  {"limit", &limit}};
  std::optional<SeedStats> sim;
  if (!opts.seeds.empty()) {
    const int n = opts.n;
    const auto sims = simulate(opts.seeds, opts.threads, [&](std::uint64_t seed) {
      return single(assemble({SandwichModel{r}, n, seed}).primary);
    });
    sim = moment_stats(sims, 0, n_max);
    record(rep, "sandwich", sim->mean);
    compare(rep, "boxtimes", blockwise, "sandwich", sim->mean, n_max, opts.sigmas);
    compare(rep, "limit", limit, "sandwich", sim->mean, n_max, opts.sigmas);
    const int small = std::min(n, 100);
    const auto a = assemble({SandwichModel{r}, small, opts.seeds.front()}).primary;
    const auto b = assemble({HadamardModel{f}, small, opts.seeds.front()}).primary;
    rep.holds("sandwich equals hadamard", a.entries() == b.entries());
    rep.attach("histogram", histogram_csv(sims.front().front()));
    cols.emplace_back("sandwich", &sim->mean);
  }
  rep.attach("moments", moments_csv(cols, n_max));
  rep.set_runtime(timer.seconds());
  return rep;
}

ExperimentReport check_theorem2(const MeasureSpec& nu, double alpha, const ExperimentOptions& opts) {
  Timer timer;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  const auto r = quantile_radial(nu, alpha);
  require_seeds(opts);
  const auto f = Profile::rank_one(r);
  ExperimentReport rep("theorem2");
  rep.inputs() = {{"nu", nu.to_string()}, {"alpha", alpha}, {"options", to_json(opts)}};
  const int n_max = opts.n_max;

  constexpr int kGrid = 256;
  double f_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) f_min = std::min(f_min, f((i + 0.5) / kGrid, (j + 0.5) / kGrid));
  rep.holds("f >= alpha on grid", f_min >= alpha * (1.0 - 1e-12));
  rep.metrics()["f_min_on_grid"] = f_min;

  const auto eta_profile = floor_remainder(f, alpha);
  const auto lhs =
      boxtimes_positive_semicircle(measure_moments(nu, n_max / 2 + 1), n_max, opts.integration.limits);
  const auto eta = limiting_moments(eta_profile, n_max, opts.integration);
  const auto rhs = boxplus(eta, semicircle_moments(alpha, n_max), opts.integration.limits);
  record(rep, "boxtimes", lhs);
  record(rep, "eta", eta);
  record(rep, "boxplus", rhs);
  compare(rep, "boxtimes", lhs, "boxplus", rhs, n_max, opts.sigmas);
  std::vector<std::pair<std::string, const MomentSequence*>> cols{
      {"boxtimes", &lhs}, {"eta", &eta}, {"boxplus", &rhs}};
  std::optional<SeedStats> sandwich, split;
  if (!opts.seeds.empty()) {
    const int n = opts.n;
    const auto sims = simulate(opts.seeds, opts.threads, [&](std::uint64_t seed) {
      std::vector<SymmetricMatrix> out;
      out.push_back(assemble({SandwichModel{r}, n, seed}).primary);
      // Independent streams (replicate 1) for the second construction.
      auto w = wigner_from_stream(n, stream_seed(seed, StreamRole::wigner, 1));
      auto y = wigner_from_stream(n, stream_seed(seed, StreamRole::companion, 1));
      out.push_back(hadamard(profile_matrix(eta_profile, n), w) + y.scaled(alpha));
      return out;
    });
    sandwich = moment_stats(sims, 0, n_max);
    split = moment_stats(sims, 1, n_max);
    record(rep, "sandwich", sandwich->mean);
    record(rep, "eta_plus_aY", split->mean);
    compare(rep, "boxtimes", lhs, "sandwich", sandwich->mean, n_max, opts.sigmas);
    compare(rep, "boxplus", rhs, "sandwich", sandwich->mean, n_max, opts.sigmas);
    compare(rep, "boxtimes", lhs, "eta_plus_aY", split->mean, n_max, opts.sigmas);
    compare(rep, "boxplus", rhs, "eta_plus_aY", split->mean, n_max, opts.sigmas);
    compare(rep, "sandwich", sandwich->mean, "eta_plus_aY", split->mean, n_max, opts.sigmas);
    std::vector<double> ks;
    for (const auto& s : sims) ks.push_back(ks_distance(EmpiricalDistribution(s[0]), EmpiricalDistribution(s[1])));
    rep.metrics()["ks_pairs"] = ks;
    rep.at_most("ks pairs median", median(ks), opts.ks_tolerance);
    if (nu.atom_at(0.0) == 0.0) {
      std::vector<double> mass;
      for (const auto& s : sims) mass.push_back(near_zero_mass(s[0], 0.01));
      rep.metrics()["near_zero_mass_0.01"] = mass;
      rep.at_most("near-zero mass median eps=0.01", median(mass), 0.02);
    }
    rep.attach("histogram", histogram_csv(sims.front().front()));
    cols.emplace_back("sandwich", &sandwich->mean);
    cols.emplace_back("eta_plus_aY", &split->mean);
  }
  rep.attach("moments", moments_csv(cols, n_max));
  rep.set_runtime(timer.seconds());
  return rep;
}

ExperimentReport check_atom(const MeasureSpec& nu, const ExperimentOptions& opts) {
  Timer timer;
  const double p = nu.atom_at(0.0);
  if (!(p > 0.0)) throw DomainError("check_atom needs a measure with an atom at 0, got " + nu.to_string());
  if (!(opts.eps > 0.0)) throw DomainError("eps must be positive");
  const auto r = quantile_radial(nu);
  check_dimension(opts.n);
  ExperimentReport rep("atom");
  rep.inputs() = {{"nu", nu.to_string()}, {"options", to_json(opts)}};
  const int n = opts.n;
  const auto sims = simulate(opts.seeds, opts.threads, [&](std::uint64_t seed) {
    return single(assemble({SandwichModel{r}, n, seed}).primary);
  });
  const double required = std::ceil(p * n) - 1.0;
  for (std::size_t s = 0; s < sims.size(); ++s)
    rep.at_least("exact zeros seed " + std::to_string(opts.seeds[s]), exact_zero_count(sims[s][0]),
                 required);
  std::vector<double> sweep{0.01, 0.05, 0.1};
  if (std::find(sweep.begin(), sweep.end(), opts.eps) == sweep.end()) sweep.push_back(opts.eps);
  std::sort(sweep.begin(), sweep.end());
  for (double eps : sweep) {
    std::vector<double> mass;
    for (const auto& s : sims) mass.push_back(near_zero_mass(s[0], eps));
    const double med = median(mass);
    const std::string tag = "near-zero mass median eps=" + format_double(eps);
    rep.metrics()["near_zero_mass"][format_double(eps)] = mass;
    rep.at_least(tag + " lower", med, p - 0.02);
    rep.at_most(tag + " upper", med, p + 1.2 * eps);
  }
  if (!sims.empty()) rep.attach("histogram", histogram_csv(sims.front().front()));
  rep.set_runtime(timer.seconds());
  return rep;
}

ExperimentReport check_theorem3(const SpectralDensity& g, const ExperimentOptions& opts) {
  Timer timer;
  require_seeds(opts);
  const auto f = profile_from_density(g);
  ExperimentReport rep("theorem3");
  rep.inputs() = {{"density", g.describe()}, {"options", to_json(opts)}};
  const int n_max = opts.n_max;
  const auto limit = limiting_moments(f, n_max, opts.integration);
  record(rep, "limit", limit);
  std::vector<std::pair<std::string, const MomentSequence*>> cols{{"limit", &limit}};
  std::optional<SeedStats> sim;
  if (!opts.seeds.empty()) {
    const int n = opts.n;
    const int grid = opts.grid ? opts.grid : default_field_grid(n);
    auto run = [&](int k) {
      return simulate(opts.seeds, opts.threads, [&g, n, k](std::uint64_t seed) {
        return single(assemble({GaussianProcessModel{g, k}, n, seed}).primary);
      });
    };
    const auto sims = run(grid);
    sim = moment_stats(sims, 0, n_max);
    record(rep, "simulation", sim->mean);
    compare(rep, "limit", limit, "simulation", sim->mean, n_max, opts.sigmas);
    rep.metrics()["K"] = grid;
    rep.metrics()["field_covariance"] = {{"lag_0_0", field_covariance(g, grid, 0, 0)},
                                         {"lag_1_0", field_covariance(g, grid, 1, 0)}};
    if (!opts.grid_sweep.empty()) {
      const int order = n_max >= 4 ? 4 : 2;
      const double target = limit.moment(order);
      std::vector<double> gaps;
      for (int k : opts.grid_sweep) {
        const auto swept = run(k);
        std::vector<double> gap;
        for (const auto& s : swept) gap.push_back(std::abs(power_moments(s[0], order).back() - target));
        gaps.push_back(median(gap));
      }
      rep.metrics()["K_sweep"] = {{"K", opts.grid_sweep}, {"order", order}, {"median_gap", gaps}};
      for (std::size_t i = 1; i < gaps.size(); ++i)
        rep.at_most("gap " + order_name(order) + " K=" + std::to_string(opts.grid_sweep[i]) +
                        " vs K=" + std::to_string(opts.grid_sweep[i - 1]),
                    gaps[i], gaps[i - 1]);
    }
    rep.attach("histogram", histogram_csv(sims.front().front()));
    cols.emplace_back("simulation", &sim->mean);
  }
  rep.attach("moments", moments_csv(cols, n_max));
  rep.set_runtime(timer.seconds());
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Denominator of i/(n+1) in lowest terms.
int reduced_denominator(int i, int n) { return (n + 1) / std::gcd(i, n + 1); }

}  // namespace

SymmetricMatrix counterexample_profile_matrix(Counterexample which, int n) {
  check_dimension(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  if (which == Counterexample::prime) {
    for (int i = 1; i <= n; ++i) {
      const int d = reduced_denominator(i, n);
      if (is_prime(d)) a(i - 1, i - 1) = std::sqrt(static_cast<double>(d));
    }
  } else {
    std::vector<char> dyadic(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
      dyadic[static_cast<std::size_t>(i - 1)] =
          std::has_single_bit(static_cast<unsigned>(reduced_denominator(i, n)));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (dyadic[static_cast<std::size_t>(i)] && dyadic[static_cast<std::size_t>(j)]) a(i, j) = 1.0;
  }
  return SymmetricMatrix(std::move(a));
}

ExperimentReport demo_counterexamples(Counterexample which, int max_n, std::uint64_t seed) {
  Timer timer;
  if (max_n < 2 || max_n > 2003) throw DomainError("demo sizes must lie in [2, 2003]");
  const bool prime = which == Counterexample::prime;
  ExperimentReport rep(prime ? "demo-prime" : "demo-dyadic");
  rep.inputs() = {{"which", prime ? "prime" : "dyadic"}, {"max_N", max_n}, {"seed", seed}};
  // Each subsequence is listed by N + 1, the denominator of the lattice.
  std::vector<std::pair<std::string, std::vector<int>>> sequences;
  if (prime) {
    std::vector<int> primes, powers;
    for (int p : {11, 101, 211, 503, 1009, 2003})
      if (p - 1 <= max_n) primes.push_back(p);
    for (int q = 16; q - 1 <= max_n; q *= 4) powers.push_back(q);
    sequences = {{"N+1 prime", primes}, {"N+1 power of 2", powers}};
  } else {
    std::vector<int> twos, threes;
    for (int q = 16; q - 1 <= max_n; q *= 4) twos.push_back(q);
    for (int q = 9; q - 1 <= max_n; q *= 3) threes.push_back(q);
    sequences = {{"N+1 power of 2", twos}, {"N+1 power of 3", threes}};
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [label, denominators] : sequences)
    for (int d : denominators) {
      const int n = d - 1;
      const auto a = counterexample_profile_matrix(which, n);
      const auto z = hadamard(a, wigner(n, seed));
      const auto s = eigenvalues(z);
      const EmpiricalDistribution esd(s);
      rows.push_back({{"subsequence", label},
                      {"N", n},
                      {"nonzero_profile_entries", (a.entries().array() != 0.0).count()},
                      {"ks_standard_normal", ks_distance(esd, [](double x) { return normal_cdf(x); })},
                      {"ks_semicircle", ks_distance(esd, [](double x) { return semicircle_cdf(1.0, x); })},
                      {"exact_zero_fraction", exact_zero_count(s) / static_cast<double>(n)},
                      {"near_zero_mass_0.05", near_zero_mass(s, 0.05)}});
    }
  rep.metrics()["sizes"] = rows;
  rep.metrics()["informational"] = true;
  rep.set_runtime(timer.seconds());
  return rep;
}

}  // namespace hlab
