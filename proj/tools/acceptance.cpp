// Acceptance run: one pass/fail line per criterion, exit status 1 if any fails.

#include "cli.hpp"
#include "lstft/campaign.hpp"
#include "lstft/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

using namespace lstft;

namespace {

int jobs() { return int(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass;
  std::string detail;
};

CampaignResult campaign(const std::vector<std::string>& checks, int n, int N, int trials, std::uint64_t seed) {
  CampaignConfig c;
  c.dimension = n;
  c.half_width = N;
  c.trials = trials;
  c.checks = checks;
  c.seed = seed;
  c.jobs = jobs();
  return run_campaign(c);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Worst |slack| / tolerance over a run; below 1 means every trial passed.
double worst_ratio(const CampaignResult& r) {
  double w = 0;
  for (const auto& rep : r.reports)
    if (rep.status != Status::NotApplicable && rep.tolerance > 0) w = std::max(w, -rep.slack / rep.tolerance);
  return w;
}

int failures(const CampaignResult& r) {
  int f = 0;
  for (const auto& s : r.summaries) f += s.failures;
  return f;
}

Outcome split_campaign(const std::string& checker, int total, int N1, int N2, double budget, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = campaign({checker}, 1, N1, total / 2, 101);
  const auto b = campaign({checker}, 2, N2, total - total / 2, 202);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int fails = failures(a) + failures(b);
  const double worst = std::max(worst_ratio(a), worst_ratio(b));
  return {fails == 0 && (budget <= 0 || seconds < budget),
          std::to_string(total) + " trials, " + std::to_string(fails) + " failures, worst error/tolerance " +
              fmt(worst) + (budget > 0 ? ", budget " + fmt(budget) + " s" : "")};
}

Outcome ac1(double& s) { return split_campaign("plancherel", 500, 6, 6, 30, s); }
Outcome ac2(double& s) { return split_campaign("orthogonality", 500, 6, 6, 0, s); }

Outcome ac3(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = campaign({"inversion"}, 1, 6, 100, 303);
  const auto b = campaign({"inversion"}, 2, 3, 100, 304);
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int distinct = 0;
  for (const auto* r : {&a, &b})
    for (const auto& rep : r->reports)
      distinct += (rep.witness.signals.at("gamma").values() - rep.witness.signals.at("g").values()).norm() > 0;
  const int fails = failures(a) + failures(b);
  return {fails == 0 && distinct > 0, "200 trials (" + std::to_string(distinct) + " with gamma != g), " +
                                          std::to_string(fails) + " failures, worst error/tolerance " +
                                          fmt(std::max(worst_ratio(a), worst_ratio(b)))};
}

Outcome ac4(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = campaign({"kernel"}, 1, 6, 50, 401);
  const auto b = campaign({"kernel"}, 2, 3, 50, 402);
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double kmax = 0, repro = 0;
  for (const auto* r : {&a, &b})
    for (const auto& rep : r->reports) {
      kmax = std::max(kmax, rep.lhs);
      repro = std::max(repro, rep.extras.at("reproducing_error"));
    }
  const int fails = failures(a) + failures(b);
  return {fails == 0 && kmax <= 1 + 1e-12,
          "100 windows x 100 pairs, max |K| = " + io::format_double(kmax) + ", worst reproducing error " + fmt(repro)};
}

Outcome ac5(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(505);
  int fails = 0;
  double worst_hs = 0, worst_gap = -1;
  for (int t = 0; t < 50; ++t) {
    const int n = t < 30 ? 1 : 2;
    const int N = n == 1 ? 3 : 1;
    const auto g = random_complex(rng, n, N);
    const TileSet sigma = random_tileset(rng, n, N, 1 + int(rng() % 5));
    const ConcentrationOperator op(g, sigma, StftPlan(n, N, N));
    const auto hs = check_hs_identity(op);
    const auto bound = check_op_norm_bound(op, rng());
    fails += hs.failed() + bound.failed();
    worst_hs = std::max(worst_hs, -hs.slack);
    worst_gap = std::max(worst_gap, -bound.slack);
  }
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {fails == 0, "50 tile sets, max |hs^2 - grid measure| " + fmt(worst_hs) + ", max (op - hs) " + fmt(worst_gap + 0.0)};
}

Outcome ac6(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const TileSet half(1, {{MultiIndex::Zero(1), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.5)}});
  double worst = 0;
  for (int N = 1; N <= 4; ++N) {
    LatticeSignal<double> box(SupportBox(1, N));
    box.values().setOnes();
    for (const auto& g : {delta_signal(1, MultiIndex::Zero(1)), box}) {
      const ConcentrationOperator op(g, half, StftPlan(1, N, g.box().half_width()));
      worst = std::max(worst, std::abs(op_norm(op).value - op_norm_dense(op)));
    }
  }
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-8, "N = 1..4, delta and box windows, max |power - dense| = " + fmt(worst)};
}

Outcome ac7(double& s) {
  const std::vector<std::string> checks = {"orthonormal_sum", "donoho_stark",   "small_set",
                                           "support_bound",   "support_bound_p", "joint_concentration",
                                           "cardinality",     "dispersion_cardinality", "heisenberg",
                                           "local_uncertainty", "local_corollary", "entropy"};
  auto t0 = std::chrono::steady_clock::now();
  const auto one = campaign(checks, 1, 6, 500, 701);
  const double s1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t0 = std::chrono::steady_clock::now();
  const auto two = campaign(checks, 2, 3, 500, 702);
  const double s2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s = s1 + s2;
  std::string worst_name;
  double worst = -1;
  int na = 0;
  for (const auto* r : {&one, &two}) {
    for (const auto& sum : r->summaries) na += sum.not_applicable;
    for (const auto& rep : r->reports)
      if (rep.status != Status::NotApplicable && rep.tolerance > 0 && -rep.slack / rep.tolerance > worst) {
        worst = -rep.slack / rep.tolerance;
        worst_name = rep.name;
      }
  }
  const int fails = failures(one) + failures(two);
  return {fails == 0 && s1 < 600 && s2 < 1800,
          "12 checkers x 500 trials x n in {1,2}, " + std::to_string(fails) + " failures, " + std::to_string(na) +
              " not applicable, worst error/tolerance " + fmt(worst) + " (" + worst_name + "), n=1 " + fmt(s1) +
              " s, n=2 " + fmt(s2) + " s"};
}

Outcome ac8(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = delta_signal(1, MultiIndex::Zero(1));
  const StftPlan plan(1, 0, 0);
  auto fiber = [](double q) {
    return TileSet(1, {{MultiIndex::Zero(1), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, q)}});
  };
  double worst = 0;
  worst = std::max(worst, std::abs(check_small_set(d, d, fiber(0.25), plan).slack));
  for (double q : {0.1, 0.25, 0.5, 0.75, 1.0}) worst = std::max(worst, std::abs(check_support_bound(d, d, fiber(q), plan).slack));
  worst = std::max(worst, std::abs(check_joint_concentration(d, d, {MultiIndex::Zero(1)}, fiber(1), plan).slack));
  worst = std::max(worst, std::abs(check_entropy(d, d, plan).slack));
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-9, "small-set, support-bound (5 q), joint, entropy; max |slack| = " + fmt(worst)};
}

Outcome ac9(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const HeisenbergConstant h = heisenberg_constant(1, 1);
  const StftPlan plan(1, 0, 0);
  const auto d = delta_signal(1, MultiIndex::Zero(1));
  const double rho = dispersion(stft(d, d, plan), 2);
  const auto count = lattice_count(2, 2);
  const double bm = ball_measure(1.5, 1);
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = std::abs(h.c - 1.0 / 54) <= 1e-8 && std::abs(h.eps0 - 1.0 / 3) <= 1e-6 &&
                  std::abs(rho - std::sqrt(1.0 / 12)) <= 1e-6 && count == 13 && bm == 3.0;
  return {ok, "c(1) = " + io::format_double(h.c) + ", eps0 = " + io::format_double(h.eps0) +
                  ", rho_2 = " + io::format_double(rho) + ", count = " + std::to_string(count) +
                  ", ball_measure(1.5) = " + io::format_double(bm)};
}

Outcome ac10(double& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = std::filesystem::temp_directory_path() / "lstft_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> texts;
  for (const char* name : {"a.json", "b.json"}) {
    const std::string path = (dir / name).string();
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int code = cli::run({"verify", "--checks", "plancherel,support_bound,heisenberg,entropy", "--trials", "25",
                               "--seed", "1234", "--jobs", std::to_string(jobs()), "--output", path});
    std::cout.rdbuf(old);
    if (code != 0) return {false, "verify exited " + std::to_string(code)};
    std::ifstream in(path, std::ios::binary);
    texts.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {!texts[0].empty() && texts[0] == texts[1],
          "two verify runs, seed 1234, " + std::to_string(texts[0].size()) + " bytes each, " +
              (texts[0] == texts[1] ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome(double&)>>> criteria = {
      {"AC1 plancherel", ac1},         {"AC2 orthogonality", ac2}, {"AC3 inversion", ac3},
      {"AC4 kernel bound", ac4},       {"AC5 hs identity", ac5},   {"AC6 prolate oracle", ac6},
      {"AC7 uncertainty checkers", ac7}, {"AC8 tight cases", ac8}, {"AC9 closed-form constants", ac9},
      {"AC10 reproducibility", ac10}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    double seconds = 0;
    Outcome o;
    try {
      o = run(seconds);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt(seconds) << " s]"
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
