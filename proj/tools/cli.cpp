#include "cli.hpp"

#include "lstft/campaign.hpp"
#include "lstft/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

namespace lstft::cli {

namespace {

using io::json;

// Options that may also come from a JSON config: flags > file > defaults.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& flag, const std::string& key, T& var, const std::string& help) {
    CLI::Option* o = app_->add_option(flag, var, help)->capture_default_str();
    keys_[key] = {o, [&var, key](const json& j) {
                    try {
                      var = j.get<T>();
                    } catch (const json::exception&) {
                      throw InputError("config." + key + ": wrong type");
                    }
                  }};
    all_keys().insert(key);
    return o;
  }

  CLI::Option* add_list(const std::string& flag, const std::string& key, std::vector<std::string>& var,
                        const std::string& help) {
    CLI::Option* o = app_->add_option(flag, var, help)->delimiter(',');
    keys_[key] = {o, [&var, key](const json& j) {
                    var.clear();
                    if (j.is_string()) {
                      std::stringstream ss(j.get<std::string>());
                      for (std::string s; std::getline(ss, s, ',');) var.push_back(s);
                    } else if (j.is_array()) {
                      for (const auto& s : j) {
                        if (!s.is_string()) throw InputError("config." + key + ": expected strings");
                        var.push_back(s.get<std::string>());
                      }
                    } else {
                      throw InputError("config." + key + ": expected an array of strings");
                    }
                  }};
    all_keys().insert(key);
    return o;
  }

  /// Fills every option not given on the command line from the file.
  void apply(const std::string& path) {
    if (path.empty()) return;
    const json cfg = io::read_json_file(path);
    if (!cfg.is_object()) throw InputError(path + ": config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      auto it = keys_.find(key);
      if (it == keys_.end()) {
        if (all_keys().count(key)) continue;  // belongs to another subcommand
        throw InputError("config." + key + ": unknown key");
      }
      if (it->second.first->count() == 0) it->second.second(value);
    }
  }

  bool given(const std::string& key) const { return keys_.at(key).first->count() > 0; }

 private:
  static std::set<std::string>& all_keys() {
    static std::set<std::string> keys;
    return keys;
  }
  CLI::App* app_;
  std::map<std::string, std::pair<CLI::Option*, std::function<void(const json&)>>> keys_;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("LSTFT_SEED");
  if (env == nullptr || *env == '\0') return 0x5eed;
  try {
    std::size_t used = 0;
    const std::uint64_t s = std::stoull(env, &used, 0);
    if (env[used] != '\0') throw std::invalid_argument(env);
    return s;
  } catch (const std::exception&) {
    throw InputError(std::string("LSTFT_SEED: not an unsigned integer: ") + env);
  }
}

CLI::Validator checker_validator() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        if (is_checker(s)) return {};
        std::string all;
        for (const auto& v : checker_names()) all += (all.empty() ? "" : ", ") + v;
        return "unknown checker '" + s + "'; valid: " + all;
      },
      "CHECKER");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------

struct StftArgs {
  std::string config, signal = "delta", window = "delta", csv = "-", svg;
  int dimension = 1, half_width = 3, window_half_width = -1, grid = 0;
  std::uint64_t seed = 0;
};

int cmd_stft(const StftArgs& a) {
  Rng rng(a.seed);
  const auto f = make_signal(parse_signal_spec(a.signal), rng, a.dimension, a.half_width);
  const auto g = make_signal(parse_signal_spec(a.window), rng, a.dimension,
                             a.window_half_width >= 0 ? a.window_half_width : a.half_width);
  const StftPlan plan(a.dimension, f.box().half_width(), g.box().half_width(), a.grid);
  const auto V = stft(f, g, plan);
  std::stringstream ss;
  io::write_field_csv(ss, V);
  write_text(a.csv, ss.str());
  if (!a.svg.empty()) {
    std::stringstream svg;
    io::write_field_svg(svg, V);
    write_text(a.svg, svg.str());
  }
  return kOk;
}

struct InvertArgs {
  std::string field, window, gamma, output = "-";
  int half_width = -1;
  std::uint64_t seed = 0;
};

int cmd_invert(const InvertArgs& a) {
  std::ifstream in(a.field);
  if (!in) throw InputError("cannot open " + a.field);
  const auto F = io::read_field_csv(in);
  const int n = F.dimension();
  Rng rng(a.seed);
  const auto g = make_signal(parse_signal_spec(a.window), rng, n, 0);
  const auto gamma = a.gamma.empty() ? g : make_signal(parse_signal_spec(a.gamma), rng, n, g.box().half_width());
  const int Ng = std::max(g.box().half_width(), gamma.box().half_width());
  const int Nf = a.half_width >= 0 ? a.half_width : F.box().half_width() - Ng;
  if (Nf < 0 || Nf + Ng != F.box().half_width())
    throw InputError("field box does not match signal and window half-widths");
  const StftPlan plan(n, Nf, Ng, F.grid().points_per_axis());
  const auto f = invert(F, g.embedded(Ng), gamma.embedded(Ng), plan);
  write_text(a.output, io::to_json(f).dump(2) + "\n");
  return kOk;
}

struct VerifyArgs {
  std::string config, output, csv, witness_dir = "witnesses", replay;
  bool full_witness = false, quiet = false;
  CampaignConfig c;
};

void dump_witness(const InequalityReport& r, int trial, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = dir + "/" + r.name + "_" + std::to_string(trial);
  io::write_json_file(stem + ".json", io::to_json(r, true));
  for (const auto& [k, s] : r.witness.signals) io::write_json_file(stem + "_" + k + ".json", io::to_json(s));
  if (r.witness.sigma) io::write_json_file(stem + "_sigma.json", io::to_json(*r.witness.sigma));
  std::cerr << "witness: " << stem << ".json\n";
}

int cmd_replay(const std::string& path) {
  json j = io::read_json_file(path);
  if (j.is_array()) {
    if (j.empty()) throw InputError(path + ": empty report array");
    j = j.front();
  }
  const InequalityReport recorded = io::report_from_json(j);
  const InequalityReport again = replay(recorded);
  const double diff = std::abs(again.slack - recorded.slack);
  std::cout << "replayed " << again.name << ": slack=" << io::format_double(again.slack)
            << " recorded=" << io::format_double(recorded.slack) << " status=" << to_string(again.status) << '\n';
  if (!(diff <= 1e-12)) {
    std::cerr << "replay mismatch: |slack difference| = " << io::format_double(diff) << '\n';
    return kInequalityFailure;
  }
  return again.failed() ? kInequalityFailure : kOk;
}

int cmd_verify(const VerifyArgs& a) {
  if (!a.replay.empty()) return cmd_replay(a.replay);
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult res = run_campaign(a.c);
  json reports = json::array();
  for (const auto& r : res.reports) reports.push_back(io::to_json(r, a.full_witness));
  if (!a.output.empty()) io::write_json_file(a.output, reports);
  if (!a.csv.empty()) {
    std::stringstream ss;
    io::write_reports_csv(ss, res.reports);
    write_text(a.csv, ss.str());
  }
  for (std::size_t i = 0; i < res.reports.size(); ++i)
    if (res.reports[i].failed()) dump_witness(res.reports[i], int(i % std::size_t(a.c.trials)), a.witness_dir);
  for (const auto& s : res.summaries)
    std::cout << s.name << ": trials=" << s.trials << " failures=" << s.failures
              << " not_applicable=" << s.not_applicable << " min_slack=" << io::format_double(s.min_slack)
              << " seconds=" << std::fixed << std::setprecision(2) << s.seconds << std::defaultfloat << '\n';
  if (!a.quiet)
    std::cout << "total: " << std::fixed << std::setprecision(2)
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s"
              << std::defaultfloat << '\n';
  return res.failed() ? kInequalityFailure : kOk;
}

struct OperatorArgs {
  std::string config, window = "delta", sigma = "fiber(0.5)", output;
  int dimension = 1, half_width = 1, window_half_width = -1, grid = 0, max_iter = 100000;
  double tol = 1e-12;
  bool dense = false;
  std::uint64_t seed = 0;
};

int cmd_operator(const OperatorArgs& a) {
  Rng rng(a.seed);
  const auto g = make_signal(parse_signal_spec(a.window), rng, a.dimension,
                             a.window_half_width >= 0 ? a.window_half_width : a.half_width);
  const TileSet sigma = make_sigma(parse_sigma_spec(a.sigma), rng, a.dimension, a.half_width);
  const ConcentrationOperator op(g, sigma, StftPlan(a.dimension, a.half_width, g.box().half_width(), a.grid));
  const OpNormResult norm = op_norm(op, a.tol, a.max_iter, a.seed);
  json out = {{"hs_norm", std::sqrt(hs_norm_sq(op))},
              {"op_norm", norm.value},
              {"measure_sigma", sigma.measure()},
              {"grid_measure_sigma", op.grid_measure()},
              {"iterations", norm.iterations},
              {"residual", norm.residual},
              {"grid", op.plan().grid().points_per_axis()},
              {"seed", a.seed}};
  out["benedicks_constant"] = norm.value < 1 - 1e-9 ? json(benedicks_constant(norm.value)) : json(nullptr);
  if (a.dense) out["op_norm_dense"] = op_norm_dense(op);
  std::cout << out.dump(2) << '\n';
  if (!a.output.empty()) io::write_json_file(a.output, out);
  return kOk;
}

struct ConstantsArgs {
  std::vector<double> s = {0.5, 1, 2};
  std::vector<int> n = {1, 2};
  std::string output;
};

int cmd_constants(const ConstantsArgs& a) {
  json rows = json::array();
  std::cout << "n,s,eps0,c,c_local,c_s,r_star\n";
  for (int n : a.n)
    for (double s : a.s) {
      if (n < 1) throw InputError("dimension must be >= 1");
      const HeisenbergConstant h = heisenberg_constant(s, n);
      const CorollaryConstant cc = local_uncertainty_corollary_constant(s, n);
      const double cl = local_uncertainty_constant(s, n);
      std::cout << n << ',' << io::format_double(s) << ',' << io::format_double(h.eps0) << ','
                << io::format_double(h.c) << ',' << io::format_double(cl) << ',' << io::format_double(cc.c_s) << ','
                << io::format_double(cc.r_star) << '\n';
      rows.push_back({{"n", n}, {"s", s}, {"eps0", h.eps0}, {"c", h.c}, {"c_local", cl}, {"c_s", cc.c_s},
                      {"r_star", cc.r_star}});
    }
  if (!a.output.empty()) io::write_json_file(a.output, rows);
  return kOk;
}

struct CountArgs {
  double r = 1;
  int n = 1, quad_points = 32;
};

int cmd_count(const CountArgs& a) {
  if (a.n < 1) throw InputError("dimension must be >= 1");
  if (!(a.r >= 0)) throw InputError("radius must be >= 0");
  std::cout << "lattice_count=" << lattice_count(a.r, a.n)
            << " ball_measure=" << io::format_double(ball_measure(a.r, a.n, a.quad_points)) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"STFT on Z^n x T^n and numerical checks of its uncertainty inequalities"};
  app.require_subcommand(1);
  const std::uint64_t env_seed = [] {
    try {
      return default_seed();
    } catch (const InputError& e) {
      std::cerr << "error: " << e.what() << '\n';
      std::exit(kInputError);
    }
  }();

  StftArgs sa;
  sa.seed = env_seed;
  auto* stft_cmd = app.add_subcommand("stft", "write V_g f as CSV (and an SVG heatmap for n = 1)");
  Binder sb(stft_cmd);
  stft_cmd->add_option("--config", sa.config, "JSON config; flags override it");
  sb.add("--signal", "signal", sa.signal, "signal spec");
  sb.add("--window", "window", sa.window, "window spec");
  sb.add("-n,--dimension", "dimension", sa.dimension, "lattice dimension");
  sb.add("-N,--half-width", "half_width", sa.half_width, "half-width for generated signals");
  sb.add("--window-half-width", "window_half_width", sa.window_half_width, "half-width for generated windows");
  sb.add("-M,--grid", "grid", sa.grid, "torus points per axis (0 = auto)");
  sb.add("--seed", "seed", sa.seed, "seed for random signals");
  sb.add("--csv", "csv", sa.csv, "CSV output ('-' for stdout)");
  sb.add("--svg", "svg", sa.svg, "SVG heatmap output");

  InvertArgs ia;
  ia.seed = env_seed;
  auto* invert_cmd = app.add_subcommand("invert", "recover a signal from a field CSV");
  invert_cmd->add_option("--field", ia.field, "field CSV from stft")->required();
  invert_cmd->add_option("--window", ia.window, "analysis window spec")->required();
  invert_cmd->add_option("--gamma", ia.gamma, "synthesis window spec (default: the analysis window)");
  invert_cmd->add_option("-N,--half-width", ia.half_width, "signal half-width (default: field box minus window)");
  invert_cmd->add_option("--output", ia.output, "signal JSON output ('-' for stdout)")->capture_default_str();
  invert_cmd->add_option("--seed", ia.seed, "seed for random windows");

  VerifyArgs va;
  va.c.seed = env_seed;
  va.c.checks = {"plancherel", "orthogonality"};
  auto* verify_cmd = app.add_subcommand("verify", "run randomized checker campaigns");
  Binder vb(verify_cmd);
  verify_cmd->add_option("--config", va.config, "JSON config; flags override it");
  vb.add("-n,--dimension", "dimension", va.c.dimension, "lattice dimension");
  vb.add("-N,--half-width", "half_width", va.c.half_width, "largest signal half-width");
  vb.add("--window-half-width", "window_half_width", va.c.window_half_width, "largest window half-width (-1: same)");
  vb.add("-M,--grid", "grid", va.c.grid, "torus points per axis (0 = auto)");
  vb.add("--seed", "seed", va.c.seed, "root seed (default from LSTFT_SEED)");
  vb.add("--trials", "trials", va.c.trials, "trials per checker");
  vb.add_list("--checks", "checks", va.c.checks, "comma-separated checker names")->check(checker_validator());
  vb.add("--signal", "signal", va.c.signal, "signal spec");
  vb.add("--window", "window", va.c.window, "window spec");
  vb.add("--sigma", "sigma", va.c.sigma, "sigma spec");
  vb.add("--s", "s", va.c.s, "moment order (-1: random)");
  vb.add("--p", "p", va.c.p, "L^p exponent (-1: random)");
  vb.add("--eps", "eps", va.c.eps, "concentration level (-1: from data or random)");
  vb.add("--r", "r", va.c.r, "ball radius (-1: random)");
  vb.add("--A", "A", va.c.A, "dispersion cap (-1: random)");
  vb.add("--family", "family", va.c.family, "orthonormal family size");
  vb.add("--resolution", "resolution", va.c.resolution, "ball tile resolution");
  vb.add("-j,--jobs", "jobs", va.c.jobs, "worker threads");
  vb.add("--inject-fault", "inject_fault", va.c.fault, "scale the field (self-test; plancherel, kernel)");
  vb.add("--output", "output", va.output, "JSON report array");
  vb.add("--csv", "csv", va.csv, "CSV report ('-' for stdout)");
  vb.add("--witness-dir", "witness_dir", va.witness_dir, "where failing witnesses go");
  verify_cmd->add_flag("--full-witness", va.full_witness, "keep witnesses of passing trials too");
  verify_cmd->add_flag("--quiet", va.quiet, "omit the total timing line");
  verify_cmd->add_option("--replay", va.replay, "re-evaluate a dumped witness report");

  OperatorArgs oa;
  oa.seed = env_seed;
  auto* operator_cmd = app.add_subcommand("operator", "norms of the concentration operator P_Sigma P_g");
  Binder ob(operator_cmd);
  operator_cmd->add_option("--config", oa.config, "JSON config; flags override it");
  ob.add("--window", "window", oa.window, "window spec");
  ob.add("--sigma", "sigma", oa.sigma, "sigma spec");
  ob.add("-n,--dimension", "dimension", oa.dimension, "lattice dimension");
  ob.add("-N,--half-width", "half_width", oa.half_width, "signal half-width and sigma extent");
  ob.add("--window-half-width", "window_half_width", oa.window_half_width, "half-width for generated windows");
  ob.add("-M,--grid", "grid", oa.grid, "torus points per axis (0 = auto)");
  ob.add("--tol", "tol", oa.tol, "power iteration tolerance");
  ob.add("--max-iter", "max_iter", oa.max_iter, "power iteration cap");
  ob.add("--seed", "seed", oa.seed, "seed");
  ob.add("--output", "output", oa.output, "JSON output");
  operator_cmd->add_flag("--dense", oa.dense, "also run the dense eigensolver");

  ConstantsArgs ca;
  auto* constants_cmd = app.add_subcommand("constants", "tables of eps0, c(s), c_local(s) and c_s");
  constants_cmd->add_option("--s", ca.s, "moment orders")->delimiter(',')->capture_default_str();
  constants_cmd->add_option("-n,--dimension", ca.n, "dimensions")->delimiter(',')->capture_default_str();
  constants_cmd->add_option("--output", ca.output, "JSON output");

  CountArgs cnt;
  auto* count_cmd = app.add_subcommand("count", "lattice points and phase-space measure of B_r");
  count_cmd->add_option("-r,--radius", cnt.r, "radius")->required();
  count_cmd->add_option("-n,--dimension", cnt.n, "dimension")->capture_default_str();
  count_cmd->add_option("--quad-points", cnt.quad_points, "quadrature points per axis")->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (stft_cmd->parsed()) {
      sb.apply(sa.config);
      return cmd_stft(sa);
    }
    if (invert_cmd->parsed()) return cmd_invert(ia);
    if (verify_cmd->parsed()) {
      vb.apply(va.config);
      return cmd_verify(va);
    }
    if (operator_cmd->parsed()) {
      ob.apply(oa.config);
      return cmd_operator(oa);
    }
    if (constants_cmd->parsed()) return cmd_constants(ca);
    if (count_cmd->parsed()) return cmd_count(cnt);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (residual " << io::format_double(e.residual()) << ", last value "
              << io::format_double(e.last_value()) << ")\n";
    return kNonConvergence;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace lstft::cli
