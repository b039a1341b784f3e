#include "lstft/campaign.hpp"

#include "lstft/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <limits>
#include <numeric>
#include <regex>
#include <thread>

namespace lstft {

const std::vector<std::string>& checker_names() {
  static const std::vector<std::string> names = {
      "plancherel",       "orthogonality",   "inversion",         "kernel",
      "lp_bound",         "convolution",     "hs_identity",       "op_norm_bound",
      "benedicks",        "orthonormal_sum", "donoho_stark",      "small_set",
      "support_bound",    "support_bound_p", "joint_concentration", "cardinality",
      "dispersion_cardinality", "heisenberg", "local_uncertainty", "local_corollary",
      "entropy"};
  return names;
}

bool is_checker(const std::string& name) {
  const auto& n = checker_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

// name(x) or name(x,y) with numeric arguments.
bool call_form(const std::string& text, const std::string& name, std::vector<double>& args) {
  static const std::regex re(R"(^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re) || m[1] != name) return false;
  args.clear();
  if (!m[2].matched) return true;
  const std::string inside = m[2];
  std::size_t pos = 0;
  while (pos <= inside.size()) {
    const std::size_t comma = std::min(inside.find(',', pos), inside.size());
    const std::string tok = inside.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      args.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("bad argument '" + tok + "' in " + text);
    }
    pos = comma + 1;
  }
  return true;
}

bool looks_like_path(const std::string& text) {
  return text.find('/') != std::string::npos || text.find(".json") != std::string::npos;
}

}  // namespace

SignalSpec parse_signal_spec(const std::string& text) {
  SignalSpec spec;
  std::vector<double> args;
  if (call_form(text, "random_complex", args) || call_form(text, "random", args)) {
    spec.kind = SignalSpec::Kind::Random;
    if (args.size() > 1) throw InputError("random_complex takes at most one argument (density)");
    spec.param = args.empty() ? 1 : args[0];
    if (!(spec.param > 0 && spec.param <= 1)) throw InputError("random_complex density must lie in (0, 1]");
  } else if (call_form(text, "delta", args)) {
    if (!args.empty()) throw InputError("delta takes no arguments");
    spec.kind = SignalSpec::Kind::Delta;
  } else if (call_form(text, "gaussian_sampled", args)) {
    if (args.size() != 1 || !(args[0] > 0)) throw InputError("gaussian_sampled needs one positive width");
    spec.kind = SignalSpec::Kind::Gaussian;
    spec.param = args[0];
  } else if (looks_like_path(text)) {
    spec.kind = SignalSpec::Kind::File;
    spec.path = text;
    spec.loaded = io::signal_from_json(io::read_json_file(text), text);
  } else {
    throw InputError("unknown signal spec '" + text +
                     "'; valid: random_complex[(density)], delta, gaussian_sampled(sigma), <file>.json");
  }
  return spec;
}

LatticeSignal<double> make_signal(const SignalSpec& spec, Rng& rng, int n, int N) {
  switch (spec.kind) {
    case SignalSpec::Kind::Random: return random_complex(rng, n, N, spec.param);
    case SignalSpec::Kind::Delta: return delta_signal(n, MultiIndex::Zero(n));
    case SignalSpec::Kind::Gaussian: return gaussian_sampled(n, N, spec.param);
    case SignalSpec::Kind::File:
      if (spec.loaded.dimension() != n) throw InputError(spec.path + ": dimension mismatch");
      return spec.loaded;
  }
  return {};
}

SigmaSpec parse_sigma_spec(const std::string& text) {
  SigmaSpec spec;
  std::vector<double> args;
  if (call_form(text, "random", args)) {
    if (!args.empty()) throw InputError("random takes no arguments");
    spec.kind = SigmaSpec::Kind::Random;
  } else if (call_form(text, "empty", args)) {
    spec.kind = SigmaSpec::Kind::Empty;
  } else if (call_form(text, "fiber", args)) {
    spec.kind = SigmaSpec::Kind::Fiber;
    if (args.size() > 1) throw InputError("fiber takes at most one argument (q)");
    spec.a = args.empty() ? 1 : args[0];
    if (!(spec.a >= 0 && spec.a <= 1)) throw InputError("fiber(q) needs q in [0, 1]");
  } else if (call_form(text, "box", args)) {
    spec.kind = SigmaSpec::Kind::Box;
    if (args.size() != 2) throw InputError("box needs two arguments (a, b)");
    spec.a = args[0];
    spec.b = args[1];
    if (!(spec.b >= spec.a && spec.b - spec.a <= 1)) throw InputError("box(a, b) needs 0 <= b - a <= 1");
  } else if (call_form(text, "ball", args)) {
    spec.kind = SigmaSpec::Kind::Ball;
    if (args.size() != 2 || !(args[0] > 0) || !(args[1] >= 1)) throw InputError("ball needs (r > 0, resolution >= 1)");
    spec.a = args[0];
    spec.b = args[1];
  } else if (looks_like_path(text)) {
    spec.kind = SigmaSpec::Kind::File;
    spec.path = text;
    spec.loaded = io::tileset_from_json(io::read_json_file(text), text);
  } else {
    throw InputError("unknown sigma spec '" + text +
                     "'; valid: random, empty, fiber[(q)], box(a,b), ball(r,resolution), <file>.json");
  }
  return spec;
}

TileSet make_sigma(const SigmaSpec& spec, Rng& rng, int n, int extent) {
  switch (spec.kind) {
    case SigmaSpec::Kind::Random: {
      std::uniform_int_distribution<int> count(1, 6);
      return random_tileset(rng, n, extent, count(rng));
    }
    case SigmaSpec::Kind::Empty: return TileSet(n);
    case SigmaSpec::Kind::Fiber:
      return TileSet(n, {{MultiIndex::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, spec.a)}});
    case SigmaSpec::Kind::Box: {
      std::vector<Tile> tiles;
      const SupportBox box(n, extent);
      for (Eigen::Index i = 0; i < box.size(); ++i)
        tiles.push_back({box.point(i), Eigen::VectorXd::Constant(n, spec.a), Eigen::VectorXd::Constant(n, spec.b)});
      return TileSet(n, tiles);
    }
    case SigmaSpec::Kind::Ball: return ball_tileset(spec.a, n, int(spec.b));
    case SigmaSpec::Kind::File:
      if (spec.loaded.dimension() != n) throw InputError(spec.path + ": dimension mismatch");
      return spec.loaded;
  }
  return TileSet(n);
}

void validate(const CampaignConfig& c) {
  if (c.dimension < 1) throw InputError("dimension must be >= 1");
  if (c.half_width < 0) throw InputError("half_width must be >= 0");
  if (c.trials < 0) throw InputError("trials must be >= 0");
  if (c.jobs < 1) throw InputError("jobs must be >= 1");
  if (c.family < 0) throw InputError("family must be >= 0");
  if (c.checks.empty()) throw InputError("no checks requested");
  for (const auto& name : c.checks)
    if (!is_checker(name)) {
      std::string all;
      for (const auto& v : checker_names()) all += (all.empty() ? "" : ", ") + v;
      throw InputError("unknown checker '" + name + "'; valid: " + all);
    }
  if (c.fault != 1)
    for (const auto& name : c.checks)
      if (name != "plancherel" && name != "kernel")
        throw InputError("fault injection applies to plancherel and kernel only");
  parse_signal_spec(c.signal);
  parse_signal_spec(c.window);
  parse_sigma_spec(c.sigma);
}

std::uint64_t trial_seed(std::uint64_t root, const std::string& checker, int trial) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : checker) h = (h ^ ch) * 1099511628211ull;
  std::uint64_t z = root ^ h;
  z += 0x9e3779b97f4a7c15ull * (std::uint64_t(trial) + 1);
  // splitmix64 finalizer
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
template <typename T>
T pick(Rng& rng, std::initializer_list<T> xs) {
  return *(xs.begin() + uniform_int(rng, 0, int(xs.size()) - 1));
}

double param(const Witness& w, const char* key) {
  auto it = w.params.find(key);
  if (it == w.params.end()) throw InputError(std::string("witness.params.") + key + ": missing");
  return it->second;
}

const LatticeSignal<double>& signal(const Witness& w, const char* key) {
  auto it = w.signals.find(key);
  if (it == w.signals.end()) throw InputError(std::string("witness.signals.") + key + ": missing");
  return it->second;
}

StftPlan plan_of(const Witness& w) {
  return StftPlan(int(param(w, "n")), int(param(w, "N_f")), int(param(w, "N_g")), int(param(w, "M")));
}

TileSet sigma_of(const Witness& w) {
  if (!w.sigma) throw InputError("witness.sigma: missing");
  return *w.sigma;
}

void record_plan(Witness& w, int n, int Nf, int Ng, int M) {
  const StftPlan plan(n, Nf, Ng, M);
  w.params["n"] = n;
  w.params["N_f"] = Nf;
  w.params["N_g"] = Ng;
  w.params["M"] = plan.grid().points_per_axis();
}

LatticeSignal<double> unit(LatticeSignal<double> s) {
  s *= 1 / s.norm_l2();
  return s;
}

PhasePoint<double> random_point(Rng& rng, int n, int extent) {
  PhasePoint<double> z{MultiIndex(n), Eigen::VectorXd(n)};
  for (int a = 0; a < n; ++a) {
    z.m[a] = uniform_int(rng, -extent, extent);
    z.w[a] = uniform(rng, -0.5, 0.5);
  }
  return z;
}

// Orthonormal members supported near the origin so that some are concentrated.
std::vector<LatticeSignal<double>> family_for(Rng& rng, int n, int N, int K) {
  const int inner = uniform_int(rng, 0, N);
  const int k = int(std::min<std::int64_t>(K, SupportBox(n, inner).size()));
  std::vector<LatticeSignal<double>> fam = random_orthonormal(rng, n, inner, k);
  for (auto& s : fam) s = s.embedded(N);
  return fam;
}

Witness generate(const std::string& name, const CampaignConfig& c, Rng& rng) {
  const int n = c.dimension;
  const int Ngmax = c.window_half_width >= 0 ? c.window_half_width : c.half_width;
  const SignalSpec fs = parse_signal_spec(c.signal), gs = parse_signal_spec(c.window);
  const SigmaSpec ss = parse_sigma_spec(c.sigma);
  Witness w;
  const LatticeSignal<double> f = make_signal(fs, rng, n, uniform_int(rng, 0, c.half_width));
  const LatticeSignal<double> g = make_signal(gs, rng, n, uniform_int(rng, 0, Ngmax));
  int Nf = f.box().half_width();
  const int Ng = g.box().half_width();
  const int extent = Nf + Ng;
  const double s = c.s > 0 ? c.s : pick(rng, {0.5, 1.0, 2.0});
  const double p = c.p > 0 ? c.p : pick(rng, {3.0, 4.0, 8.0});

  if (name == "plancherel" || name == "entropy" || name == "heisenberg" || name == "local_corollary") {
    w.signals = {{"f", f}, {"g", g}};
    if (name != "plancherel" && name != "entropy") w.params["s"] = s;
    if (name == "plancherel") w.params["fault"] = c.fault;
  } else if (name == "orthogonality") {
    w.signals = {{"f1", f},
                 {"f2", make_signal(fs, rng, n, Nf).embedded(Nf)},
                 {"g1", g},
                 {"g2", make_signal(gs, rng, n, Ng).embedded(Ng)}};
  } else if (name == "inversion") {
    LatticeSignal<double> gamma = uniform_int(rng, 0, 2) == 0 ? g : make_signal(gs, rng, n, Ng).embedded(Ng);
    if (std::abs(inner(gamma, g)) < 1e-3 * gamma.norm_l2() * g.norm_l2()) gamma = g;
    w.signals = {{"f", f}, {"g", g}, {"gamma", gamma}};
  } else if (name == "kernel") {
    w.signals = {{"f", f}, {"g", g}};
    for (int i = 0; i < 200; ++i) w.points.push_back(random_point(rng, n, extent));
    w.params["fault"] = c.fault;
  } else if (name == "lp_bound") {
    w.signals = {{"f", f}, {"g", g}};
    w.params["p"] = c.p > 0 ? c.p : pick(rng, {2.0, 3.0, 4.0, 8.0, -1.0});
  } else if (name == "convolution") {
    w.signals = {{"f", f}, {"g", g}};
    for (int i = 0; i < 20; ++i) w.points.push_back(random_point(rng, n, extent));
  } else if (name == "hs_identity" || name == "op_norm_bound" || name == "benedicks") {
    w.signals = {{"g", g}};
    w.sigma = make_sigma(ss, rng, n, std::max(1, c.half_width));
    w.params["power_seed"] = double(rng() >> 12);
    if (name == "benedicks") w.signals.emplace("f", f);
  } else if (name == "orthonormal_sum") {
    w.signals = {{"g", g}};
    w.family = family_for(rng, n, Nf, c.family);
    w.sigma = make_sigma(ss, rng, n, extent);
  } else if (name == "donoho_stark") {
    w.signals = {{"f", f}, {"g", g}};
    w.sigma = ss.kind == SigmaSpec::Kind::Random
                  ? random_product_tileset(rng, n, extent, uniform_int(rng, 1, 4), uniform_int(rng, 1, 2))
                  : make_sigma(ss, rng, n, extent);
    double eps = c.eps;
    if (eps < 0) {
      const StftPlan plan(n, Nf, Ng, c.grid);
      const double ratio = mass_on(stft(f, g, plan), *w.sigma) / (f.squared_norm() * g.squared_norm());
      eps = std::clamp(1 - ratio, 0.0, 1 - 1e-12);
    }
    w.params["eps"] = eps;
  } else if (name == "small_set") {
    w.signals = {{"f", f}, {"g", g}};
    w.sigma = ss.kind == SigmaSpec::Kind::Random ? random_tileset(rng, n, extent, uniform_int(rng, 1, 3), 0.3)
                                                 : make_sigma(ss, rng, n, extent);
  } else if (name == "support_bound" || name == "support_bound_p" || name == "local_uncertainty") {
    w.signals = {{"f", f}, {"g", g}};
    w.sigma = make_sigma(ss, rng, n, extent);
    if (name == "support_bound_p") w.params["p"] = p;
    if (name == "local_uncertainty") w.params["s"] = s;
  } else if (name == "joint_concentration") {
    LatticeSignal<double> sparse = fs.kind == SignalSpec::Kind::Random ? random_complex(rng, n, Nf, 0.5) : f;
    w.signals = {{"f", sparse}, {"g", g}};
    const SupportBox& box = sparse.box();
    for (Eigen::Index i = 0; i < box.size(); ++i)
      if (uniform_int(rng, 0, 1) == 1) w.lattice_set.push_back(box.point(i));
    if (w.lattice_set.empty()) w.lattice_set.push_back(MultiIndex::Zero(n));
    w.sigma = make_sigma(ss, rng, n, extent);
  } else if (name == "cardinality" || name == "dispersion_cardinality") {
    w.signals = {{"g", unit(g)}};
    w.family = family_for(rng, n, Nf, c.family);
    if (name == "cardinality") {
      w.params["r"] = c.r > 0 ? c.r : uniform(rng, 0.3, Nf + 1.5);
      w.params["eps"] = c.eps > 0 ? c.eps : uniform(rng, 0.2, 0.95);
      w.params["resolution"] = c.resolution;
    } else {
      w.params["s"] = s;
      w.params["A"] = c.A > 0 ? c.A : uniform(rng, 0.3, 3.0);
    }
  }
  record_plan(w, n, Nf, Ng, c.grid);
  return w;
}

InequalityReport evaluate(const std::string& name, const Witness& w) {
  const StftPlan plan = plan_of(w);
  if (name == "plancherel") {
    InequalityReport r = check_plancherel(signal(w, "f"), signal(w, "g"), plan);
    const double fault = param(w, "fault");
    if (fault != 1) {
      r.lhs *= fault * fault;
      r.slack = -std::abs(r.lhs - r.rhs);
      r.notes.push_back("fault injected: field scaled by " + io::format_double(fault));
      r.judge();
    }
    return r;
  }
  if (name == "orthogonality")
    return check_orthogonality(signal(w, "f1"), signal(w, "f2"), signal(w, "g1"), signal(w, "g2"), plan);
  if (name == "inversion") return check_inversion(signal(w, "f"), signal(w, "g"), signal(w, "gamma"), plan);
  if (name == "kernel") {
    std::vector<std::pair<PhasePoint<double>, PhasePoint<double>>> pairs;
    for (std::size_t i = 0; i + 1 < w.points.size(); i += 2) pairs.emplace_back(w.points[i], w.points[i + 1]);
    InequalityReport r = check_kernel(signal(w, "g"), pairs, &signal(w, "f"));
    const double fault = param(w, "fault");
    if (fault != 1) {
      r.lhs *= fault;
      r.slack = std::min(r.slack, r.rhs - r.lhs);
      r.notes.push_back("fault injected: kernel scaled by " + io::format_double(fault));
      r.judge();
    }
    return r;
  }
  if (name == "lp_bound") {
    const double p = param(w, "p");
    return check_lp_bound(signal(w, "f"), signal(w, "g"), p < 0 ? std::numeric_limits<double>::infinity() : p, plan);
  }
  if (name == "convolution") return check_convolution(signal(w, "f"), signal(w, "g"), w.points);
  if (name == "hs_identity" || name == "op_norm_bound" || name == "benedicks") {
    const ConcentrationOperator op(signal(w, "g"), sigma_of(w), plan);
    const auto seed = std::uint64_t(param(w, "power_seed"));
    if (name == "hs_identity") return check_hs_identity(op);
    if (name == "op_norm_bound") return check_op_norm_bound(op, seed);
    const double norm = op_norm(op, 1e-12, 100000, seed).value;
    if (norm >= 1 - 1e-9) {
      InequalityReport r;
      r.name = "benedicks";
      r.lhs = norm;
      r.rhs = 1;
      r.status = Status::NotApplicable;
      r.notes.push_back("operator norm too close to 1; bound vacuous");
      return r;
    }
    return check_benedicks(signal(w, "f"), op, benedicks_constant(norm));
  }
  if (name == "orthonormal_sum") return check_orthonormal_sum(w.family, signal(w, "g"), sigma_of(w), plan);
  if (name == "donoho_stark")
    return check_donoho_stark(signal(w, "f"), signal(w, "g"), sigma_of(w), param(w, "eps"), plan);
  if (name == "small_set") return check_small_set(signal(w, "f"), signal(w, "g"), sigma_of(w), plan);
  if (name == "support_bound") return check_support_bound(signal(w, "f"), signal(w, "g"), sigma_of(w), plan);
  if (name == "support_bound_p")
    return check_support_bound_p(signal(w, "f"), signal(w, "g"), sigma_of(w), param(w, "p"), plan);
  if (name == "joint_concentration")
    return check_joint_concentration(signal(w, "f"), signal(w, "g"), w.lattice_set, sigma_of(w), plan);
  if (name == "cardinality")
    return check_cardinality_bound(w.family, signal(w, "g"), param(w, "r"), param(w, "eps"), plan,
                                   int(param(w, "resolution")));
  if (name == "dispersion_cardinality")
    return check_dispersion_cardinality(w.family, signal(w, "g"), param(w, "s"), param(w, "A"), plan);
  if (name == "heisenberg") return check_heisenberg(signal(w, "f"), signal(w, "g"), param(w, "s"), plan);
  if (name == "local_uncertainty")
    return check_local_uncertainty(signal(w, "f"), signal(w, "g"), param(w, "s"), sigma_of(w), plan);
  if (name == "local_corollary") return check_local_corollary(signal(w, "f"), signal(w, "g"), param(w, "s"), plan);
  if (name == "entropy") return check_entropy(signal(w, "f"), signal(w, "g"), plan);
  throw InputError("unknown checker '" + name + "'");
}

}  // namespace

InequalityReport run_trial(const std::string& checker, const CampaignConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  Witness w = generate(checker, config, rng);
  InequalityReport r = evaluate(checker, w);
  r.name = checker;
  r.seed = seed;
  r.witness = std::move(w);
  return r;
}

InequalityReport replay(const InequalityReport& report) {
  InequalityReport r = evaluate(report.name, report.witness);
  r.name = report.name;
  r.seed = report.seed;
  r.witness = report.witness;
  return r;
}

bool CampaignResult::failed() const {
  return std::any_of(summaries.begin(), summaries.end(), [](const CheckerSummary& s) { return s.failures > 0; });
}

CampaignResult run_campaign(const CampaignConfig& config) {
  validate(config);
  const int K = int(config.checks.size()), T = config.trials;
  const std::size_t total = std::size_t(K) * std::size_t(T);
  CampaignResult out;
  out.reports.resize(total);
  std::vector<double> seconds(total, 0);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < total;) {
      const std::string& name = config.checks[i / std::size_t(T)];
      const int trial = int(i % std::size_t(T));
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out.reports[i] = run_trial(name, config, trial_seed(config.seed, name, trial));
      } catch (...) {
        errors[i] = std::current_exception();
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min<std::size_t>(std::size_t(config.jobs), std::max<std::size_t>(total, 1)); ++j)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (int k = 0; k < K; ++k) {
    CheckerSummary s;
    s.name = config.checks[k];
    s.trials = T;
    s.min_slack = std::numeric_limits<double>::infinity();
    for (int t = 0; t < T; ++t) {
      const std::size_t i = std::size_t(k) * std::size_t(T) + std::size_t(t);
      const InequalityReport& r = out.reports[i];
      s.seconds += seconds[i];
      if (r.status == Status::NotApplicable) {
        ++s.not_applicable;
        continue;
      }
      s.failures += r.failed();
      s.min_slack = std::min(s.min_slack, r.slack);
    }
    out.summaries.push_back(s);
  }
  return out;
}

}  // namespace lstft
