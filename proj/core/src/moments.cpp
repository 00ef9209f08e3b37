#include "hlab/moments.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>

#include "hlab/errors.hpp"
#include "hlab/parallel.hpp"
#include "hlab/rng.hpp"

namespace hlab {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// MomentSequence

MomentSequence::MomentSequence(int n_max, Parity parity, std::vector<double> stored,
                               std::vector<double> errors)
    : n_max_(n_max), parity_(parity), stored_(std::move(stored)), errors_(std::move(errors)) {
  if (n_max_ < 1) throw MalformedInputError("moment sequence needs n_max >= 1");
  if (errors_.empty()) errors_.assign(stored_.size(), 0.0);
  if (errors_.size() != stored_.size())
    throw MalformedInputError("moment values and standard errors differ in length");
  for (double e : errors_)
    if (!(e >= 0.0)) throw MalformedInputError("standard errors must be nonnegative");
}

MomentSequence MomentSequence::symmetric(int n_max, std::vector<double> even_values,
                                         std::vector<double> even_errors) {
  if (n_max < 1) throw MalformedInputError("moment sequence needs n_max >= 1");
  if (even_values.size() != static_cast<std::size_t>(n_max / 2))
    throw MalformedInputError("symmetric sequence with n_max = " + std::to_string(n_max) +
                              " stores " + std::to_string(n_max / 2) + " even moments");
  return MomentSequence(n_max, Parity::symmetric, std::move(even_values), std::move(even_errors));
}

MomentSequence MomentSequence::general(std::vector<double> values, std::vector<double> errors) {
  const int n = static_cast<int>(values.size());
  return MomentSequence(n, Parity::general, std::move(values), std::move(errors));
}

double MomentSequence::moment(int order) const {
  if (order == 0) return 1.0;
  if (order < 0 || order > n_max_)
    throw MalformedInputError("moment order " + std::to_string(order) + " outside 0.." +
                              std::to_string(n_max_));
  if (parity_ == Parity::symmetric)
    return order % 2 ? 0.0 : stored_[static_cast<std::size_t>(order / 2 - 1)];
  return stored_[static_cast<std::size_t>(order - 1)];
}

double MomentSequence::std_error(int order) const {
  if (order == 0) return 0.0;
  if (order < 0 || order > n_max_)
    throw MalformedInputError("moment order " + std::to_string(order) + " out of range");
  if (parity_ == Parity::symmetric)
    return order % 2 ? 0.0 : errors_[static_cast<std::size_t>(order / 2 - 1)];
  return errors_[static_cast<std::size_t>(order - 1)];
}

std::vector<double> MomentSequence::values() const {
  std::vector<double> out;
  for (int n = 1; n <= n_max_; ++n) out.push_back(moment(n));
  return out;
}

std::vector<double> MomentSequence::errors() const {
  std::vector<double> out;
  for (int n = 1; n <= n_max_; ++n) out.push_back(std_error(n));
  return out;
}

MomentSequence MomentSequence::prefix(int n_max) const {
  if (n_max < 1 || n_max > n_max_) throw MalformedInputError("prefix length out of range");
  if (parity_ == Parity::symmetric) {
    const auto k = static_cast<std::size_t>(n_max / 2);
    return symmetric(n_max, {stored_.begin(), stored_.begin() + static_cast<long>(k)},
                     {errors_.begin(), errors_.begin() + static_cast<long>(k)});
  }
  const auto k = static_cast<std::size_t>(n_max);
  return general({stored_.begin(), stored_.begin() + static_cast<long>(k)},
                 {errors_.begin(), errors_.begin() + static_cast<long>(k)});
}

// ---------------------------------------------------------------------------
// Helpers

namespace {

using Factors = std::vector<std::pair<int, int>>;  // 0-based Kreweras labels per pair

std::vector<Factors> factor_lists(const std::vector<LabeledPairing>& pairings) {
  std::vector<Factors> out;
  out.reserve(pairings.size());
  for (const auto& p : pairings) {
    Factors f;
    for (auto [u, v] : p.sigma.pairs()) {
      const int a = p.labeling.tsigma[static_cast<std::size_t>(u - 1)] - 1;
      const int b = p.labeling.tsigma[static_cast<std::size_t>(v - 1)] - 1;
      if (a == b) throw NumericError("Kreweras labelling puts a pair inside one block");
      f.emplace_back(std::min(a, b), std::max(a, b));
    }
    out.push_back(std::move(f));
  }
  return out;
}

double midpoint_integral(const Profile& f, const std::vector<Factors>& factors, int dim, int grid,
                         int threads) {
  const auto g = static_cast<std::size_t>(grid);
  std::vector<double> table(g * g);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a; b < g; ++b) {
      const double x = (static_cast<double>(a) + 0.5) / grid;
      const double y = (static_cast<double>(b) + 0.5) / grid;
      const double v = f(x, y);
      table[a * g + b] = table[b * g + a] = v * v;
    }
  std::vector<double> partial(g, 0.0);
  parallel_for(g, threads, [&](std::size_t first) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    idx[0] = first;
    double acc = 0.0;
    for (;;) {
      double s = 0.0;
      for (const auto& fac : factors) {
        double prod = 1.0;
        for (auto [a, b] : fac) prod *= table[idx[static_cast<std::size_t>(a)] * g + idx[static_cast<std::size_t>(b)]];
        s += prod;
      }
      acc += s;
      int k = dim - 1;
      while (k >= 1) {
        if (++idx[static_cast<std::size_t>(k)] < g) break;
        idx[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k == 0) break;
    }
    partial[first] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total / std::pow(static_cast<double>(grid), dim);
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

constexpr std::size_t kChunk = 8192;

void monte_carlo_chunks(const Profile& f, const std::vector<Factors>& factors, int dim, int half,
                        std::uint64_t seed, std::size_t first_chunk, std::size_t last_chunk,
                        std::size_t samples, std::vector<double>& values, int threads) {
  values.resize(samples);
  parallel_for(last_chunk - first_chunk, threads, [&](std::size_t c_rel) {
    const std::size_t c = first_chunk + c_rel;
    RandomStream rng(stream_seed(seed, StreamRole::monte_carlo,
                                 (static_cast<std::uint64_t>(half) << 32) | c));
    const auto d = static_cast<std::size_t>(dim);
    std::vector<double> x(d);
    std::vector<double> f2(d * d, 0.0);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(samples, begin + kChunk);
    for (std::size_t s = begin; s < end; ++s) {
      for (auto& xi : x) xi = rng.uniform();
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
          const double v = f(x[a], x[b]);
          f2[a * d + b] = v * v;
        }
      double total = 0.0;
      for (const auto& fac : factors) {
        double prod = 1.0;
        for (auto [a, b] : fac) prod *= f2[static_cast<std::size_t>(a) * d + static_cast<std::size_t>(b)];
        total += prod;
      }
      values[s] = total;
    }
  });
}

MonteCarloEstimate summarize(const std::vector<double>& values) {
  MonteCarloEstimate est;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  est.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return est;
}

struct TypeCount {
  std::vector<int> sizes;
  double count;
};

// Block-size multisets of NC(n) with multiplicities.
const std::vector<TypeCount>& nc_types(int n, const NcLimits& limits) {
  static std::mutex mutex;
  static std::map<int, std::vector<TypeCount>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::map<std::vector<int>, double> counts;
  for (const auto& pi : enumerate_nc(n, limits)) {
    std::vector<int> sizes;
    for (const auto& b : pi.blocks()) sizes.push_back(static_cast<int>(b.size()));
    std::sort(sizes.begin(), sizes.end());
    counts[sizes] += 1.0;
  }
  std::vector<TypeCount> types;
  for (auto& [sizes, c] : counts) types.push_back({sizes, c});
  return cache.emplace(n, std::move(types)).first->second;
}

std::vector<double> cumulants_of(const std::vector<double>& m, const NcLimits& limits) {
  const int n_max = static_cast<int>(m.size());
  std::vector<double> kappa(m.size(), 0.0);
  for (int n = 1; n <= n_max; ++n) {
    double rest = 0.0;
    for (const auto& t : nc_types(n, limits)) {
      if (t.sizes.size() == 1) continue;
      double prod = t.count;
      for (int s : t.sizes) prod *= kappa[static_cast<std::size_t>(s - 1)];
      rest += prod;
    }
    kappa[static_cast<std::size_t>(n - 1)] = m[static_cast<std::size_t>(n - 1)] - rest;
  }
  return kappa;
}

std::vector<double> moments_of(const std::vector<double>& kappa, const NcLimits& limits) {
  const int n_max = static_cast<int>(kappa.size());
  std::vector<double> m(kappa.size(), 0.0);
  for (int n = 1; n <= n_max; ++n) {
    double total = 0.0;
    for (const auto& t : nc_types(n, limits)) {
      double prod = t.count;
      for (int s : t.sizes) prod *= kappa[static_cast<std::size_t>(s - 1)];
      total += prod;
    }
    m[static_cast<std::size_t>(n - 1)] = total;
  }
  return m;
}

MomentSequence pack(const std::vector<double>& values, const std::vector<double>& errors,
                    bool symmetric) {
  if (!symmetric) return MomentSequence::general(values, errors);
  std::vector<double> ev, ee;
  for (std::size_t i = 1; i < values.size(); i += 2) {
    ev.push_back(values[i]);
    ee.push_back(errors[i]);
  }
  return MomentSequence::symmetric(static_cast<int>(values.size()), ev, ee);
}

// First-order propagation of independent per-entry errors through a smooth map.
std::vector<double> propagate(const std::function<std::vector<double>(const std::vector<double>&)>& fn,
                              const std::vector<double>& input, const std::vector<double>& errors,
                              std::size_t out_size) {
  std::vector<double> var(out_size, 0.0);
  for (std::size_t j = 0; j < input.size(); ++j) {
    if (errors[j] <= 0.0) continue;
    const double step = std::max(errors[j], 1e-8 * std::max(1.0, std::abs(input[j])));
    auto up = input;
    auto down = input;
    up[j] += step;
    down[j] -= step;
    const auto fu = fn(up);
    const auto fd = fn(down);
    for (std::size_t n = 0; n < out_size; ++n) {
      const double dv = (fu[n] - fd[n]) / (2.0 * step) * errors[j];
      var[n] += dv * dv;
    }
  }
  for (auto& v : var) v = std::sqrt(v);
  return var;
}

}  // namespace

// ---------------------------------------------------------------------------

double eval_L(const PairPartition& sigma, const KrewerasLabeling& labeling, const Profile& f,
              std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(sigma.half_size() + 1))
    throw MalformedInputError("eval_L needs m+1 = " + std::to_string(sigma.half_size() + 1) +
                              " coordinates, got " + std::to_string(x.size()));
  if (labeling.source != sigma) throw MalformedInputError("labelling does not belong to sigma");
  double prod = 1.0;
  for (auto [u, v] : sigma.pairs()) {
    const double a = x[static_cast<std::size_t>(labeling.tsigma[static_cast<std::size_t>(u - 1)] - 1)];
    const double b = x[static_cast<std::size_t>(labeling.tsigma[static_cast<std::size_t>(v - 1)] - 1)];
    const double value = f(a, b);
    prod *= value * value;
  }
  return prod;
}

MomentSequence limiting_moments(const Profile& f, int n_max, const IntegrationConfig& cfg) {
  if (n_max < 1) throw MalformedInputError("limiting_moments needs n_max >= 1");
  if (cfg.grid_points < 2 || cfg.samples < 2) throw MalformedInputError("integration sizes must be >= 2");
  effective_bound(f);
  const int h_max = n_max / 2;
  if (h_max > cfg.limits.max_pair_half)
    throw SizeLimitError("moment order " + std::to_string(n_max) + " needs NC_2(" +
                             std::to_string(2 * h_max) + ")",
                         static_cast<std::size_t>(cfg.limits.max_pair_half));
  std::vector<double> values, errors;
  // Constant f: every L_sigma equals c^{2h}.
  if (const auto c = f.constant_value()) {
    double power = 1.0;
    for (int h = 1; h <= h_max; ++h) {
      power *= *c * *c;
      values.push_back(power * static_cast<double>(catalan(h)));
    }
    return MomentSequence::symmetric(n_max, std::move(values));
  }
  for (int h = 1; h <= h_max; ++h) {
    const auto pairings = labeled_nc2(h, cfg.limits);
    const auto factors = factor_lists(pairings);
    const int dim = h + 1;
    const double per_point = static_cast<double>(factors.size()) * h;
    const double midpoint_cost = std::pow(static_cast<double>(cfg.grid_points), dim) * per_point;
    bool midpoint = cfg.method == IntegrationConfig::Method::midpoint ||
                    (cfg.method == IntegrationConfig::Method::automatic &&
                     dim <= cfg.max_midpoint_dimension);
    if (midpoint && midpoint_cost > cfg.evaluation_budget) {
      if (cfg.method == IntegrationConfig::Method::midpoint)
        throw ResourceError("midpoint integration of order " + std::to_string(2 * h) + " needs " +
                            format_double(midpoint_cost) + " operations, budget " +
                            format_double(cfg.evaluation_budget));
      midpoint = false;
    }
    if (midpoint) {
      const double fine = midpoint_integral(f, factors, dim, cfg.grid_points, cfg.threads);
      const double coarse = midpoint_integral(f, factors, dim, cfg.grid_points / 2, cfg.threads);
      values.push_back(fine);
      errors.push_back(std::abs(fine - coarse));
      continue;
    }
    const double per_sample = per_point + dim * (dim - 1) / 2.0;
    std::size_t samples = cfg.samples;
    if (static_cast<double>(samples) * per_sample > cfg.evaluation_budget)
      throw ResourceError("Monte Carlo integration of order " + std::to_string(2 * h) +
                          " exceeds the evaluation budget");
    std::vector<double> draws;
    std::size_t done_chunks = 0;
    MonteCarloEstimate est;
    for (;;) {
      const std::size_t chunks = (samples + kChunk - 1) / kChunk;
      monte_carlo_chunks(f, factors, dim, h, cfg.seed, done_chunks, chunks, samples, draws,
                         cfg.threads);
      done_chunks = chunks;
      est = summarize(draws);
      if (cfg.tolerance <= 0.0 || est.std_error <= cfg.tolerance * std::abs(est.mean)) break;
      // Grow by whole chunks so earlier draws are reused unchanged.
      samples = done_chunks * kChunk * 2;
      if (static_cast<double>(samples) * per_sample > cfg.evaluation_budget)
        throw ResourceError("Monte Carlo tolerance " + format_double(cfg.tolerance) +
                            " not reached within the evaluation budget at order " +
                            std::to_string(2 * h));
    }
    values.push_back(est.mean);
    errors.push_back(est.std_error);
  }
  return MomentSequence::symmetric(n_max, std::move(values), std::move(errors));
}

bool moment_growth_check(const MomentSequence& ms, double bound, double tol) {
  for (int order = 2; order <= ms.n_max(); order += 2) {
    const int h = order / 2;
    const double cap = std::pow(bound, order) * static_cast<double>(catalan(h)) * (1.0 + tol);
    if (ms.moment(order) > cap) return false;
  }
  return true;
}

MomentSequence semicircle_moments(double alpha, int n_max) {
  if (!(alpha > 0.0)) throw DomainError("semicircle standard deviation must be positive");
  std::vector<double> even;
  double power = 1.0;
  for (int h = 1; h <= n_max / 2; ++h) {
    power *= alpha * alpha;
    even.push_back(power * static_cast<double>(catalan(h)));
  }
  return MomentSequence::symmetric(n_max, std::move(even));
}

MomentSequence measure_moments(const MeasureSpec& nu, int n_max) {
  if (n_max < 1) throw MalformedInputError("measure_moments needs n_max >= 1");
  std::vector<double> values;
  for (int n = 1; n <= n_max; ++n) values.push_back(nu.moment(n));
  return MomentSequence::general(std::move(values));
}

CumulantSequence moments_to_cumulants(const MomentSequence& ms, const NcLimits& limits) {
  if (ms.n_max() > limits.max_partition)
    throw SizeLimitError("moment-cumulant transform of length " + std::to_string(ms.n_max()),
                         static_cast<std::size_t>(limits.max_partition));
  return CumulantSequence{cumulants_of(ms.values(), limits)};
}

MomentSequence cumulants_to_moments(const CumulantSequence& cs, const NcLimits& limits) {
  if (cs.values.empty()) throw MalformedInputError("empty cumulant sequence");
  if (cs.size() > limits.max_partition)
    throw SizeLimitError("moment-cumulant transform of length " + std::to_string(cs.size()),
                         static_cast<std::size_t>(limits.max_partition));
  bool odd_zero = true;
  for (std::size_t i = 0; i < cs.values.size(); i += 2) odd_zero = odd_zero && cs.values[i] == 0.0;
  const auto m = moments_of(cs.values, limits);
  return pack(m, std::vector<double>(m.size(), 0.0), odd_zero);
}

MomentSequence boxplus(const MomentSequence& a, const MomentSequence& b, const NcLimits& limits) {
  if (a.n_max() != b.n_max())
    throw MalformedInputError("boxplus needs sequences of equal length (" +
                              std::to_string(a.n_max()) + " vs " + std::to_string(b.n_max()) + ")");
  if (a.n_max() > limits.max_partition)
    throw SizeLimitError("boxplus of length " + std::to_string(a.n_max()),
                         static_cast<std::size_t>(limits.max_partition));
  const std::size_t n = static_cast<std::size_t>(a.n_max());
  auto fn = [&](const std::vector<double>& joint) {
    std::vector<double> ma(joint.begin(), joint.begin() + static_cast<long>(n));
    std::vector<double> mb(joint.begin() + static_cast<long>(n), joint.end());
    auto ka = cumulants_of(ma, limits);
    const auto kb = cumulants_of(mb, limits);
    for (std::size_t i = 0; i < n; ++i) ka[i] += kb[i];
    return moments_of(ka, limits);
  };
  auto joint = a.values();
  auto jb = b.values();
  joint.insert(joint.end(), jb.begin(), jb.end());
  auto jerr = a.errors();
  auto eb = b.errors();
  jerr.insert(jerr.end(), eb.begin(), eb.end());
  const auto values = fn(joint);
  const auto errors = propagate(fn, joint, jerr, n);
  return pack(values, errors, a.is_symmetric() && b.is_symmetric());
}

MomentSequence boxtimes_positive_semicircle(const MomentSequence& nu, int n_max,
                                            const NcLimits& limits) {
  if (n_max < 1) throw MalformedInputError("boxtimes needs n_max >= 1");
  const int h_max = n_max / 2;
  if (nu.n_max() < h_max + 1)
    throw MalformedInputError("boxtimes up to order " + std::to_string(n_max) + " needs moments of nu up to order " +
                              std::to_string(h_max + 1) + ", got " + std::to_string(nu.n_max()));
  std::vector<std::vector<std::vector<int>>> block_sizes;  // per h, per sigma
  for (int h = 1; h <= h_max; ++h) {
    std::vector<std::vector<int>> per_sigma;
    for (const auto& p : labeled_nc2(h, limits)) {
      std::vector<int> sizes;
      for (const auto& b : p.labeling.blocks) sizes.push_back(static_cast<int>(b.size()));
      per_sigma.push_back(std::move(sizes));
    }
    block_sizes.push_back(std::move(per_sigma));
  }
  auto fn = [&](const std::vector<double>& m) {
    std::vector<double> out;
    for (const auto& per_sigma : block_sizes) {
      double total = 0.0;
      for (const auto& sizes : per_sigma) {
        double prod = 1.0;
        for (int s : sizes) prod *= m[static_cast<std::size_t>(s - 1)];
        total += prod;
      }
      out.push_back(total);
    }
    return out;
  };
  const auto input = nu.values();
  const auto values = fn(input);
  const auto errors = propagate(fn, input, nu.errors(), values.size());
  return MomentSequence::symmetric(n_max, values, errors);
}

HankelCheck hankel_check(const MomentSequence& ms, double rel_tol) {
  const int k = ms.n_max() / 2;
  HankelCheck result;
  if (k < 1) return result;
  const double m2 = ms.moment(2);
  const double scale = m2 > 0.0 ? std::sqrt(m2) : 1.0;
  Eigen::MatrixXd h(k + 1, k + 1);
  Eigen::MatrixXd e(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      const double s = std::pow(scale, i + j);
      h(i, j) = ms.moment(i + j) / s;
      e(i, j) = ms.std_error(i + j) / s;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  result.min_eigenvalue = solver.eigenvalues()(0);
  result.threshold = rel_tol * h.cwiseAbs().maxCoeff() + 3.0 * e.norm();
  result.positive = result.min_eigenvalue >= -result.threshold;
  return result;
}

void write_csv(std::ostream& out, const MomentSequence& ms) {
  out << "order,value,std_error\n";
  for (int n = 1; n <= ms.n_max(); ++n) {
    if (ms.is_symmetric() && n % 2) continue;
    out << n << ',' << format_double(ms.moment(n)) << ',' << format_double(ms.std_error(n)) << '\n';
  }
}

}  // namespace hlab
