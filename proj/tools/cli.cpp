#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hlab/errors.hpp"
#include "hlab/nc.hpp"
#include "hlab/parallel.hpp"
#include "hlab/spectra.hpp"

namespace hlab::cli {

namespace {

const std::vector<std::string> kCommands{"nc", "moments", "simulate", "check", "demo"};
const std::vector<std::string> kChecks{"theorem1", "theorem2", "theorem3", "lemma-add",
                                       "lemma-mult", "atom", "truncation"};
const std::vector<std::string> kDemos{"prime", "dyadic"};
const std::vector<std::string> kModels{"hadamard", "truncated", "sandwich", "gaussian", "shifted"};

bool member(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// "@path" reads the expression from a file.
std::string resolve_text(const std::string& text) {
  if (text.empty() || text.front() != '@') return text;
  std::ifstream in(text.substr(1));
  if (!in) throw ConfigError("cannot read " + text.substr(1));
  std::stringstream buf;
  buf << in.rdbuf();
  auto s = buf.str();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

template <typename T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!member(kCommands, command)) throw ConfigError("unknown command '" + command + "'");
  if (command == "check" && !member(kChecks, target))
    throw ConfigError("unknown check '" + target + "'");
  if (command == "demo" && !member(kDemos, target)) throw ConfigError("unknown demo '" + target + "'");
  if (!member(kModels, model)) throw ConfigError("unknown model '" + model + "'");
  if (n < 1 || n > SymmetricMatrix::max_dimension)
    throw ConfigError("N must lie in [1, " + std::to_string(SymmetricMatrix::max_dimension) + "]");
  if (n_max < 1 || n_max > 8) throw ConfigError("nmax must lie in [1, 8]");
  if (grid != 0 && grid < 8) throw ConfigError("K must be 0 (default) or >= 8");
  if (m < 1 || m > NcLimits{}.max_pair_half) throw ConfigError("m must lie in [1, 10]");
  if (k < 2) throw ConfigError("k must be >= 2");
  if (truncate && *truncate < 2) throw ConfigError("truncate must be >= 2");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (mc_samples < 2) throw ConfigError("mc-samples must be >= 2");
  if (integration_grid < 2) throw ConfigError("grid must be >= 2");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha must be positive");
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j{{"command", cfg.command},
                   {"target", cfg.target},
                   {"symmetrize", cfg.symmetrize},
                   {"model", cfg.model},
                   {"N", cfg.n},
                   {"K", cfg.grid},
                   {"nmax", cfg.n_max},
                   {"m", cfg.m},
                   {"k", cfg.k},
                   {"master_seed", cfg.master_seed},
                   {"seeds", cfg.seeds},
                   {"mc_samples", cfg.mc_samples},
                   {"grid", cfg.integration_grid},
                   {"out", cfg.out},
                   {"threads", cfg.threads},
                   {"eps", cfg.eps}};
  if (cfg.profile) j["profile"] = *cfg.profile;
  if (cfg.truncate) j["truncate"] = *cfg.truncate;
  if (cfg.nu) j["nu"] = *cfg.nu;
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig cfg) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "command") cfg.command = get<std::string>(j, k);
    else if (key == "target") cfg.target = get<std::string>(j, k);
    else if (key == "profile") cfg.profile = get<std::string>(j, k);
    else if (key == "truncate") cfg.truncate = get<int>(j, k);
    else if (key == "symmetrize") cfg.symmetrize = get<bool>(j, k);
    else if (key == "nu") cfg.nu = get<std::string>(j, k);
    else if (key == "alpha") cfg.alpha = get<double>(j, k);
    else if (key == "model") cfg.model = get<std::string>(j, k);
    else if (key == "N") cfg.n = get<int>(j, k);
    else if (key == "K") cfg.grid = get<int>(j, k);
    else if (key == "nmax") cfg.n_max = get<int>(j, k);
    else if (key == "m") cfg.m = get<int>(j, k);
    else if (key == "k") cfg.k = get<int>(j, k);
    else if (key == "master_seed") cfg.master_seed = get<std::uint64_t>(j, k);
    else if (key == "seeds") {
      if (value.is_number_unsigned()) {
        const auto count = value.get<std::uint64_t>();
        cfg.seeds.clear();
        for (std::uint64_t i = 0; i < count; ++i) cfg.seeds.push_back(cfg.master_seed + i);
      } else {
        cfg.seeds = get<std::vector<std::uint64_t>>(j, k);
      }
    }
    else if (key == "mc_samples") cfg.mc_samples = get<std::size_t>(j, k);
    else if (key == "grid") cfg.integration_grid = get<int>(j, k);
    else if (key == "out") cfg.out = get<std::string>(j, k);
    else if (key == "threads") cfg.threads = get<int>(j, k);
    else if (key == "eps") cfg.eps = get<double>(j, k);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return cfg;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text, std::uint64_t master) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](const std::string& item) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || item.front() == '-')
      throw ConfigError("seeds must be a count or a comma-separated list of integers, got '" + text + "'");
    return v;
  };
  if (text.find(',') == std::string::npos) {
    const auto count = number(text);
    if (count == 0 || count > 10000) throw ConfigError("seed count must lie in [1, 10000]");
    for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(master + i);
    return seeds;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) seeds.push_back(number(item));
  return seeds;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Variance-profile random matrices: limits, free convolutions and simulations", "hlab"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::optional<std::string> config_path, profile, nu, seeds, out_dir, model;
  std::optional<double> alpha, eps;
  std::optional<int> n, grid, n_max, integration_grid, threads, m, k, truncate;
  std::optional<std::size_t> mc_samples;
  std::optional<std::uint64_t> master_seed;
  bool symmetrize = false;

  app.add_option("--config", config_path, "JSON run configuration; flags override it");
  app.add_option("--profile", profile, "profile f(x,y) (or density g for theorem3), EXPR or @FILE");
  app.add_option("--truncate", truncate, "replace the profile by f 1_[1/k,1-1/k]^2");
  app.add_flag("--symmetrize", symmetrize, "use (g(x,y) + g(1-x,1-y))/2 as the spectral density");
  app.add_option("--nu", nu, "measure, e.g. uniform:1:2 or 0.5*delta:0+0.5*delta:1");
  app.add_option("--alpha", alpha, "shift / floor alpha > 0");
  app.add_option("--N", n, "matrix dimension");
  app.add_option("--K", grid, "spectral grid of the Gaussian field (0 = default)");
  app.add_option("--nmax", n_max, "largest moment order");
  app.add_option("--seeds", seeds, "seed count or comma-separated list");
  app.add_option("--master-seed", master_seed, "first seed when --seeds is a count; Monte Carlo seed");
  app.add_option("--mc-samples", mc_samples, "Monte Carlo samples per moment order");
  app.add_option("--grid", integration_grid, "midpoint grid per axis");
  app.add_option("--out", out_dir, "report directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--eps", eps, "near-zero window half-width");
  app.add_option("--k", k, "truncation level for the truncation check");
  app.add_option("--model", model, "simulate: hadamard|truncated|sandwich|gaussian|shifted");

  auto* nc = app.add_subcommand("nc", "list NC_2(2m) with Kreweras complements");
  nc->add_option("--m", m, "half size m");
  app.add_subcommand("moments", "limiting moments of mu_f as CSV");
  app.add_subcommand("simulate", "simulate an ensemble and report its ESD");
  std::string target;
  auto* check = app.add_subcommand("check", "run one identity check");
  check->add_option("target", target, "theorem1|theorem2|theorem3|lemma-add|lemma-mult|atom|truncation")
      ->required();
  auto* demo = app.add_subcommand("demo", "counterexample profiles");
  demo->add_option("target", target, "prime|dyadic")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw ConfigError("cannot read config " + *config_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config " + *config_path + ": " + e.what());
    }
    cfg = config_from_json(j);
  }
  if (!app.get_subcommands().empty()) cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command.empty()) throw ConfigError("a subcommand is required (nc, moments, simulate, check or demo)");
  if (!target.empty()) cfg.target = target;
  if (profile) cfg.profile = resolve_text(*profile);
  if (truncate) cfg.truncate = truncate;
  if (symmetrize) cfg.symmetrize = true;
  if (nu) cfg.nu = resolve_text(*nu);
  if (alpha) cfg.alpha = alpha;
  if (model) cfg.model = *model;
  if (n) cfg.n = *n;
  if (grid) cfg.grid = *grid;
  if (n_max) cfg.n_max = *n_max;
  if (m) cfg.m = *m;
  if (k) cfg.k = *k;
  if (master_seed) cfg.master_seed = *master_seed;
  if (seeds) cfg.seeds = parse_seeds(*seeds, cfg.master_seed);
  if (mc_samples) cfg.mc_samples = *mc_samples;
  if (integration_grid) cfg.integration_grid = *integration_grid;
  if (out_dir) cfg.out = *out_dir;
  if (threads) cfg.threads = *threads;
  if (eps) cfg.eps = *eps;
  cfg.validate();
  return cfg;
}

ExperimentOptions experiment_options(const RunConfig& cfg) {
  ExperimentOptions opts;
  opts.n = cfg.n;
  opts.n_max = cfg.n_max;
  opts.seeds = cfg.seeds;
  opts.threads = cfg.threads;
  opts.eps = cfg.eps;
  opts.grid = cfg.grid;
  opts.integration.samples = cfg.mc_samples;
  opts.integration.grid_points = cfg.integration_grid;
  opts.integration.seed = cfg.master_seed;
  opts.integration.threads = cfg.threads;
  return opts;
}

namespace {

const std::string& require(const std::optional<std::string>& v, const char* flag, const RunConfig& cfg) {
  if (!v) throw ConfigError(cfg.command + " " + cfg.target + " needs --" + flag);
  return *v;
}

double require(const std::optional<double>& v, const char* flag, const RunConfig& cfg) {
  if (!v) throw ConfigError(cfg.command + " " + cfg.target + " needs --" + flag);
  return *v;
}

Profile profile_of(const RunConfig& cfg) {
  auto f = parse_profile(require(cfg.profile, "profile", cfg));
  return cfg.truncate ? truncate(f, *cfg.truncate) : f;
}

SpectralDensity density_of(const RunConfig& cfg) {
  const auto& text = require(cfg.profile, "profile", cfg);
  if (cfg.symmetrize) {
    auto e = Expression::parse(text);
    if (e.is_constant()) return SpectralDensity::constant(e(0.5, 0.5));
    return SpectralDensity::symmetrized(std::move(e));
  }
  return SpectralDensity::parse(text);
}

MeasureSpec measure_of(const RunConfig& cfg) { return MeasureSpec::parse(require(cfg.nu, "nu", cfg)); }

int finish(const RunConfig& cfg, ExperimentReport& rep, std::ostream& out) {
  rep.inputs()["config"] = to_json(cfg);
  const auto path = write_report(rep, cfg.out, cfg.master_seed);
  std::size_t failed = 0;
  for (const auto& c : rep.checks())
    if (!c.pass) {
      ++failed;
      out << "FAIL " << c.quantity << ": value " << format_double(c.value) << ", oracle "
          << format_double(c.oracle) << ", tolerance " << format_double(c.tolerance) << '\n';
    }
  out << rep.id() << ": " << (rep.verdict() ? "pass" : "fail") << " (" << rep.checks().size() - failed
      << "/" << rep.checks().size() << " checks) -> " << path.string() << '\n';
  return rep.verdict() ? ExitCode::pass : ExitCode::check_failed;
}

int run_nc(const RunConfig& cfg, std::ostream& out) {
  for (const auto& p : labeled_nc2(cfg.m)) {
    out << format_pairs(p.sigma) << " | K: " << format_blocks(p.labeling.blocks) << " | T:";
    for (int t : p.labeling.tsigma) out << ' ' << t;
    out << '\n';
  }
  return ExitCode::pass;
}

int run_moments(const RunConfig& cfg, std::ostream& out) {
  const auto opts = experiment_options(cfg);
  write_csv(out, limiting_moments(profile_of(cfg), cfg.n_max, opts.integration));
  return ExitCode::pass;
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  EnsembleModel model = HadamardModel{Profile::constant(1.0)};
  if (cfg.model == "hadamard") {
    model = HadamardModel{profile_of(cfg)};
  } else if (cfg.model == "truncated") {
    model = TruncatedModel{parse_profile(require(cfg.profile, "profile", cfg)), cfg.k};
  } else if (cfg.model == "sandwich") {
    model = SandwichModel{quantile_radial(measure_of(cfg))};
  } else if (cfg.model == "gaussian") {
    model = GaussianProcessModel{density_of(cfg), cfg.grid};
  } else {
    model = ShiftedModel{profile_of(cfg), require(cfg.alpha, "alpha", cfg)};
  }
  ExperimentReport rep("simulate");
  std::vector<SpectralSample> spectra(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
    spectra[i] = eigenvalues(assemble({model, cfg.n, cfg.seeds[i]}).primary);
  });
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    std::vector<double> moments;
    for (int order = 1; order <= cfg.n_max; ++order) moments.push_back(spectral_moment(spectra[i], order));
    rows.push_back({{"seed", cfg.seeds[i]},
                    {"trace_moments", moments},
                    {"near_zero_mass", near_zero_mass(spectra[i], cfg.eps)},
                    {"exact_zeros", exact_zero_count(spectra[i])},
                    {"min", spectra[i].eigenvalues.front()},
                    {"max", spectra[i].eigenvalues.back()}});
  }
  rep.metrics()["replicates"] = rows;
  const auto& first = spectra.front();
  const double lo = first.eigenvalues.front();
  const double hi = first.eigenvalues.back();
  std::ostringstream hist, eig;
  write_csv(hist, histogram(first, 50, lo - 0.01 - 0.01 * (hi - lo), hi + 0.01 + 0.01 * (hi - lo)));
  write_csv(eig, first);
  rep.attach("histogram", hist.str());
  rep.attach("eigenvalues", eig.str());
  return finish(cfg, rep, out);
}

int run_check(const RunConfig& cfg, std::ostream& out) {
  const auto opts = experiment_options(cfg);
  const auto& t = cfg.target;
  ExperimentReport rep = [&] {
    if (t == "theorem1") return check_theorem1(profile_of(cfg), opts);
    if (t == "truncation") return check_truncation_bound(profile_of(cfg), cfg.k, opts);
    if (t == "lemma-add") return check_lemma_additive(profile_of(cfg), require(cfg.alpha, "alpha", cfg), opts);
    if (t == "lemma-mult") return check_lemma_multiplicative(measure_of(cfg), opts);
    if (t == "theorem2") return check_theorem2(measure_of(cfg), require(cfg.alpha, "alpha", cfg), opts);
    if (t == "atom") return check_atom(measure_of(cfg), opts);
    return check_theorem3(density_of(cfg), opts);
  }();
  return finish(cfg, rep, out);
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  if (cfg.command == "nc") return run_nc(cfg, out);
  if (cfg.command == "moments") return run_moments(cfg, out);
  if (cfg.command == "simulate") return run_simulate(cfg, out);
  if (cfg.command == "check") return run_check(cfg, out);
  auto rep = demo_counterexamples(cfg.target == "prime" ? Counterexample::prime : Counterexample::dyadic,
                                  std::min(cfg.n, 2003), cfg.master_seed);
  finish(cfg, rep, out);
  return ExitCode::pass;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_command_line(argc, argv, out);
    if (!cfg) return ExitCode::pass;
    return execute(*cfg, out, err);
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return ExitCode::numeric_error;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return ExitCode::numeric_error;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return ExitCode::usage_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::usage_error;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return ExitCode::numeric_error;
  }
}

}  // namespace hlab::cli
