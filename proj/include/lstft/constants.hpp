#pragma once

// Explicit constants of the Heisenberg-type and local uncertainty bounds.
// Every bound below holds for any eps0 in (0, 1/2] (resp. any r > 0); the
// optimization only picks the strongest one.

#include "lstft/functionals.hpp"
#include "lstft/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace lstft {

struct HeisenbergConstant {
  double c;     // eps0^{2s} 2^{-s} (1 - |B_eps0|)
  double eps0;  // maximizer of eps^{2s} (1 - |B_eps|) on (0, 1/2]
  double core;  // eps0^{2s} (1 - |B_eps0|), the bound on || |(m,w)|^s V ||^2
};

inline HeisenbergConstant heisenberg_constant(double s, int n) {
  if (!(s > 0)) throw InputError("moment order s must be positive");
  static std::mutex mu;
  static std::map<std::pair<double, int>, HeisenbergConstant> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find({s, n}); it != cache.end()) return it->second;
  auto core = [&](double eps) { return std::pow(eps, 2 * s) * (1 - ball_measure(eps, n)); };
  const Extremum best = golden_section_maximize(core, 0.0, 0.5, 1e-8);
  const HeisenbergConstant h{best.value * std::pow(2.0, -s), best.argument, best.value};
  if (!(h.c > 0)) throw Error("ball around the origin fills the torus; no Heisenberg constant");
  return cache.emplace(std::make_pair(s, n), h).first->second;
}

/// c(s) = eps0^{-s} (1 - |B_eps0|)^{-1/2}, at the same eps0.
inline double local_uncertainty_constant(double s, int n) {
  return 1 / std::sqrt(heisenberg_constant(s, n).core);
}

struct CorollaryConstant {
  double c_s;     // h(r*)^{-1/2}
  double r_star;  // golden-section minimizer
  double h_min;
  double r_scan;  // best node of the log-grid scan
};

/// c_s with || |(m,w)|^s V_g f || >= c_s ||f|| ||g||, from minimizing
/// h(r) = c(s)^2 |B_r| + r^{-2s} over r in [1e-3, 10].
inline CorollaryConstant local_uncertainty_corollary_constant(double s, int n) {
  if (!(s > 0)) throw InputError("moment order s must be positive");
  static std::mutex mu;
  static std::map<std::pair<double, int>, CorollaryConstant> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({s, n}); it != cache.end()) return it->second;
  }
  const double c2 = 1 / heisenberg_constant(s, n).core;
  auto h = [&](double r) { return c2 * ball_measure(r, n) + std::pow(r, -2 * s); };
  constexpr int kScan = 400;
  const double lo = std::log(1e-3), hi = std::log(10.0);
  auto node = [&](int i) { return std::exp(lo + (hi - lo) * i / kScan); };
  int best = 0;
  double best_h = h(node(0));
  for (int i = 1; i <= kScan; ++i) {
    const double v = h(node(i));
    if (v < best_h) {
      best_h = v;
      best = i;
    }
  }
  const Extremum e = golden_section_minimize(h, node(std::max(0, best - 1)), node(std::min(kScan, best + 1)), 1e-10);
  CorollaryConstant out{0, node(best), best_h, node(best)};
  if (e.value <= best_h) {
    out.r_star = e.argument;
    out.h_min = e.value;
  }
  out.c_s = 1 / std::sqrt(out.h_min);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(s, n), out).first->second;
}

}  // namespace lstft
