#pragma once

// One-dimensional numerics shared by the functionals: Gauss-Legendre rules,
// a graded composite rule on [0, 1/2], and golden-section search.

#include "lstft/error.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace lstft {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n, long double).
inline const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  if (n < 1) throw InputError("Gauss-Legendre rule needs n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1;
    dp = n * (x * p1 - p0) / (x * x - 1);
    const long double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = double(-x);
    rule.nodes[n - 1 - i] = double(x);
    rule.weights[i] = rule.weights[n - 1 - i] = double(w);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
inline double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
  const auto& gl = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(c + h * gl.nodes[i]);
  return s * h;
}

/// Composite rule on [0, 1/2]: geometric panels toward 0 (down to 2^-24), then
/// uniform panels of width h = 2^-k <= 1/32 with h * max_frequency <= 1/4.
/// Integrates |w|^s-type endpoint singularities times cos(2 pi d w),
/// |d| <= max_frequency, to near machine precision.
inline const QuadratureRule& half_axis_rule(int max_frequency = 0) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  int k = 5;
  while (std::ldexp(double(max_frequency), -k) > 0.25) ++k;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(k); it != cache.end()) return it->second;
  constexpr int kPoints = 12;
  std::vector<double> cuts{0.0};
  for (int e = 24; e >= k; --e) cuts.push_back(std::ldexp(1.0, -e));
  for (int j = 2; j <= (1 << (k - 1)); ++j) cuts.push_back(std::ldexp(double(j), -k));
  const auto& gl = gauss_legendre(kPoints);
  QuadratureRule r;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double c = 0.5 * (cuts[p] + cuts[p + 1]), h = 0.5 * (cuts[p + 1] - cuts[p]);
    for (int i = 0; i < kPoints; ++i) {
      r.nodes.push_back(c + h * gl.nodes[i]);
      r.weights.push_back(h * gl.weights[i]);
    }
  }
  return cache.emplace(k, std::move(r)).first->second;
}

struct Extremum {
  double argument;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
inline Extremum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                        double bracket = 1e-8) {
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > bracket) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Extremum best{c, fc};
  for (double x : {a, d, b}) {
    const double fx = f(x);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

inline Extremum golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                        double bracket = 1e-8) {
  Extremum e = golden_section_maximize([&](double x) { return -f(x); }, a, b, bracket);
  return {e.argument, -e.value};
}

}  // namespace lstft
