#pragma once

// Randomized verification campaigns: generate inputs per trial from a seed,
// run one checker, collect reports in trial order.

#include "lstft/checks.hpp"
#include "lstft/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lstft {

/// Every checker name the campaign knows, in a fixed order.
const std::vector<std::string>& checker_names();
bool is_checker(const std::string& name);

/// "random_complex", "random_complex(density)", "delta", "gaussian_sampled(sigma)" or a JSON file path.
struct SignalSpec {
  enum class Kind { Random, Delta, Gaussian, File } kind = Kind::Random;
  double param = 1;
  std::string path;
  LatticeSignal<double> loaded;
};
SignalSpec parse_signal_spec(const std::string& text);
LatticeSignal<double> make_signal(const SignalSpec& spec, Rng& rng, int n, int N);

/// "random", "empty", "fiber", "fiber(q)", "box(a,b)", "ball(r,resolution)" or a JSON file path.
struct SigmaSpec {
  enum class Kind { Random, Empty, Fiber, Box, Ball, File } kind = Kind::Random;
  double a = 1, b = 0;
  std::string path;
  TileSet loaded;
};
SigmaSpec parse_sigma_spec(const std::string& text);
/// extent is the lattice half-width random sets and boxes live in.
TileSet make_sigma(const SigmaSpec& spec, Rng& rng, int n, int extent);

struct CampaignConfig {
  int dimension = 1;
  int half_width = 3;         // N_f upper bound
  int window_half_width = -1; // N_g upper bound; -1 follows half_width
  int grid = 0;               // 0 picks the plan default per trial
  std::uint64_t seed = 0x5eed;
  int trials = 100;
  std::vector<std::string> checks;
  std::string signal = "random_complex";
  std::string window = "random_complex";
  std::string sigma = "random";
  double s = -1;    // -1 draws from {0.5, 1, 2}
  double p = -1;    // -1 draws from {3, 4, 8}
  double eps = -1;  // -1 uses the data-driven level
  double r = -1;    // -1 draws a radius
  double A = -1;    // -1 draws a dispersion cap
  int family = 3;
  int resolution = 64;
  int jobs = 1;
  double fault = 1;  // != 1 scales the field seen by plancherel and kernel
};

/// Validates names and specs; throws InputError.
void validate(const CampaignConfig& config);

/// Per-trial seed from the root seed, the checker name and the trial index.
std::uint64_t trial_seed(std::uint64_t root, const std::string& checker, int trial);

/// One trial. The report's witness holds every input needed by replay().
InequalityReport run_trial(const std::string& checker, const CampaignConfig& config, std::uint64_t seed);

/// Re-evaluates a report from its witness alone.
InequalityReport replay(const InequalityReport& report);

struct CheckerSummary {
  std::string name;
  int trials = 0;
  int failures = 0;
  int not_applicable = 0;
  double min_slack = 0;
  double seconds = 0;
};

struct CampaignResult {
  std::vector<InequalityReport> reports;  // checker order, then trial order
  std::vector<CheckerSummary> summaries;
  bool failed() const;
};

/// Runs config.trials trials of every requested checker on config.jobs
/// threads. The first trial exception (by order) is rethrown after joining.
CampaignResult run_campaign(const CampaignConfig& config);

}  // namespace lstft
