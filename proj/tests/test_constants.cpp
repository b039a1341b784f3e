#include "lstft/constants.hpp"
#include "lstft/functionals.hpp"

#include <doctest.h>

#include <cmath>

using namespace lstft;

TEST_CASE("heisenberg constant for s = 1, n = 1") {
  const HeisenbergConstant h = heisenberg_constant(1, 1);
  CHECK(std::abs(h.c - 1.0 / 54) < 1e-8);
  CHECK(std::abs(h.eps0 - 1.0 / 3) < 1e-6);
  CHECK(std::abs(local_uncertainty_constant(1, 1) - 3 * std::sqrt(3.0)) < 1e-6);
}

TEST_CASE("heisenberg maximizer moves to the boundary for large s") {
  // eps^{2s}(1 - 2 eps) peaks at s / (2s + 1).
  for (double s : {0.5, 2.0, 20.0, 200.0}) CHECK(std::abs(heisenberg_constant(s, 1).eps0 - s / (2 * s + 1)) < 1e-6);
  CHECK(heisenberg_constant(200, 1).eps0 > 0.498);
  for (double s : {0.25, 0.5, 1.0, 2.0, 5.0})
    for (int n : {1, 2}) CHECK(heisenberg_constant(s, n).c > 0);
  CHECK_THROWS_AS(heisenberg_constant(0, 1), InputError);
}

TEST_CASE("heisenberg constant in two dimensions beats a coarse scan") {
  // eps^{2}(1 - pi eps^2) for eps <= 1/2: stationary at eps^2 = 1/(2 pi).
  const HeisenbergConstant h = heisenberg_constant(1, 2);
  const double e2 = 1 / (2 * M_PI);
  CHECK(std::abs(h.core - e2 * (1 - M_PI * e2)) < 1e-7);
  CHECK(std::abs(h.eps0 - std::sqrt(e2)) < 1e-4);
}

TEST_CASE("corollary constant for s = 1, n = 1") {
  // h(r) = 27 * 2r + r^-2 below r = 1/2, minimized at r = 1/3 with h = 27.
  const CorollaryConstant c = local_uncertainty_corollary_constant(1, 1);
  CHECK(std::abs(c.r_star - 1.0 / 3) < 1e-6);
  CHECK(std::abs(c.h_min - 27) < 1e-8);
  CHECK(std::abs(c.r_scan - c.r_star) < 0.03);
  CHECK(std::abs(c.c_s - 1 / std::sqrt(27.0)) < 1e-9);
  for (double s : {0.5, 2.0}) CHECK(local_uncertainty_corollary_constant(s, 1).c_s > 0);
}
