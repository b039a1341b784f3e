#include "lstft/checks.hpp"
#include "lstft/random.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace lstft;
using test::idx;
using test::pt;

namespace {

LatticeSignal<double> delta0() { return delta_signal(1, idx({0})); }

TileSet fiber_part(double q) { return TileSet(1, {{idx({0}), pt({0}), pt({q})}}); }

const StftPlan& delta_plan() {
  static const StftPlan plan(1, 0, 0);
  return plan;
}

}  // namespace

TEST_CASE("orthonormal sum") {
  SUBCASE("deltas inside full fibers are tight") {
    const int N = 4;
    std::vector<LatticeSignal<double>> phis;
    std::vector<Tile> tiles;
    for (int k = 0; k < N; ++k) {
      phis.push_back(delta_signal(1, idx({k})).embedded(N));
      tiles.push_back({idx({k}), pt({0}), pt({1})});
    }
    const auto r = check_orthonormal_sum(phis, delta0(), TileSet(1, tiles), StftPlan(1, N, 0));
    CHECK(std::abs(r.lhs - N) < 1e-12);
    CHECK(std::abs(r.slack) < 1e-9);
    CHECK(r.status == Status::Pass);
  }
  SUBCASE("empty set") {
    const auto r = check_orthonormal_sum({delta0()}, delta0(), TileSet(1), delta_plan());
    CHECK(r.lhs <= 1e-15);
    CHECK(r.rhs == 0.0);
    CHECK(r.status == Status::Pass);
  }
  SUBCASE("random families") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
      const int n = 1 + t % 2, N = n == 1 ? 4 : 2;
      const auto phis = random_orthonormal(rng, n, N, 3);
      const auto g = random_complex(rng, n, 2);
      const auto r = check_orthonormal_sum(phis, g, random_tileset(rng, n, N + 2, 6), StftPlan(n, N, 2));
      CHECK(r.slack >= -r.tolerance);
    }
  }
  SUBCASE("non-orthonormal input names the entry") {
    auto f = delta0();
    f *= 2;
    CHECK_THROWS_WITH_AS(check_orthonormal_sum({f}, delta0(), TileSet(1), delta_plan()),
                         doctest::Contains("<phi_0, phi_0>"), InputError);
  }
}

TEST_CASE("donoho-stark") {
  const TileSet full(1, {{idx({0}), pt({0}), pt({1})}});
  auto r = check_donoho_stark(delta0(), delta0(), full, 0, delta_plan());
  CHECK(r.status == Status::Pass);
  CHECK(std::abs(r.slack) < 1e-12);
  r = check_donoho_stark(delta0(), delta0(), fiber_part(0.5), 0.5, delta_plan());
  CHECK(r.status == Status::Pass);
  CHECK(std::abs(r.slack) < 1e-12);
  r = check_donoho_stark(delta0(), delta0(), fiber_part(0.5), 0.2, delta_plan());
  CHECK(r.status == Status::NotApplicable);

  const TileSet mixed(1, {{idx({0}), pt({0}), pt({0.5})}, {idx({1}), pt({0}), pt({0.25})}});
  CHECK_THROWS_WITH_AS(check_donoho_stark(delta0(), delta0(), mixed, 0.1, delta_plan()),
                       "theorem requires product-form Σ", InputError);

  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_complex(rng, 1, 3), g = random_complex(rng, 1, 2);
    const TileSet sigma = random_product_tileset(rng, 1, 4, 3, 2);
    const StftPlan plan(1, 3, 2);
    const double ratio = mass_on(stft(f, g, plan), sigma) / (f.squared_norm() * g.squared_norm());
    const auto rep = check_donoho_stark(f, g, sigma, std::clamp(1 - ratio, 0.0, 1 - 1e-12), plan);
    CHECK(rep.status == Status::Pass);
  }
}

TEST_CASE("small set") {
  Rng rng(13);
  const auto f = random_complex(rng, 1, 3), g = random_complex(rng, 1, 2);
  auto r = check_small_set(f, g, TileSet(1), StftPlan(1, 3, 2));
  CHECK(std::abs(r.slack) < 1e-9 * r.rhs);

  r = check_small_set(delta0(), delta0(), fiber_part(0.25), delta_plan());
  CHECK(std::abs(r.lhs - std::sqrt(0.75)) < 1e-12);
  CHECK(std::abs(r.rhs - std::sqrt(0.75)) < 1e-12);
  CHECK(std::abs(r.slack) < 1e-9);

  CHECK_THROWS_WITH_AS(check_small_set(delta0(), delta0(), fiber_part(1), delta_plan()),
                       "proposition requires (ν⊗μ)(Σ) < 1", InputError);

  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const auto a = random_complex(rng, n, 2), b = random_complex(rng, n, 1);
    const auto rep = check_small_set(a, b, random_tileset(rng, n, 3, 2, 0.5), StftPlan(n, 2, 1));
    CHECK(rep.status == Status::Pass);
  }
}

TEST_CASE("support bounds") {
  for (double q : {0.1, 0.3, 0.5, 0.9}) {
    const auto r = check_support_bound(delta0(), delta0(), fiber_part(q), delta_plan());
    CHECK(std::abs(r.extras.at("eps_sigma") * r.extras.at("eps_sigma") - (1 - q)) < 1e-12);
    CHECK(std::abs(r.slack) < 1e-9);
    const auto p4 = check_support_bound_p(delta0(), delta0(), fiber_part(q), 4, delta_plan());
    CHECK(std::abs(p4.slack - (q - q * q)) < 1e-12);
  }
  const TileSet full(1, {{idx({0}), pt({0}), pt({1})}, {idx({1}), pt({0}), pt({0.5})}});
  CHECK(std::abs(check_support_bound(delta0(), delta0(), full, delta_plan()).slack - 0.5) < 1e-12);

  LatticeSignal<double> zero(SupportBox(1, 0));
  CHECK_THROWS_AS(check_support_bound(zero, delta0(), full, delta_plan()), InputError);
  CHECK_THROWS_AS(check_support_bound_p(delta0(), delta0(), full, 2, delta_plan()), InputError);

  Rng rng(14);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_complex(rng, 1, 3), g = random_complex(rng, 1, 2);
    const TileSet sigma = random_tileset(rng, 1, 5, 8);
    const StftPlan plan(1, 3, 2);
    const auto b = check_support_bound(f, g, sigma, plan);
    const auto limit = check_support_bound_p(f, g, sigma, 1e6, plan);
    CHECK(std::abs(b.slack - limit.slack) < 1e-6);
    for (double p : {3.0, 4.0, 8.0}) CHECK(check_support_bound_p(f, g, sigma, p, plan).status == Status::Pass);
  }
}

TEST_CASE("joint concentration") {
  const TileSet full(1, {{idx({0}), pt({0}), pt({1})}});
  auto r = check_joint_concentration(delta0(), delta0(), {idx({0})}, full, delta_plan());
  CHECK(std::abs(r.slack) < 1e-9);

  Rng rng(15);
  const auto f = random_complex(rng, 1, 2), g = random_complex(rng, 1, 1);
  std::vector<MultiIndex> E;
  std::vector<Tile> tiles;
  for (int k = -2; k <= 2; ++k) E.push_back(idx({k}));
  for (int m = -3; m <= 3; ++m) tiles.push_back({idx({m}), pt({0}), pt({1})});
  const TileSet cover(1, tiles);
  r = check_joint_concentration(f, g, E, cover, StftPlan(1, 2, 1));
  CHECK(std::abs(r.slack - (5 * 7 - 1)) < 1e-9);
  CHECK(r.extras.at("eps_E") == 0.0);
  CHECK(r.extras.at("eps_sigma") < 1e-7);

  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const auto a = random_complex(rng, n, 2, 0.6), b = random_complex(rng, n, 1);
    std::vector<MultiIndex> e;
    for (int i = 0; i < 3; ++i) {
      MultiIndex k(n);
      for (int c = 0; c < n; ++c) k[c] = int(rng() % 5) - 2;
      e.push_back(k);
    }
    const auto rep = check_joint_concentration(a, b, e, random_tileset(rng, n, 3, 3, 0.4), StftPlan(n, 2, 1));
    CHECK(rep.status == Status::Pass);
  }
}

TEST_CASE("cardinality bounds") {
  auto r = check_cardinality_bound({delta0()}, delta0(), 1.5, 0.5, delta_plan());
  CHECK(r.lhs == 1.0);
  CHECK(std::abs(r.slack - 5) < 1e-12);
  CHECK_THROWS_AS(check_cardinality_bound({delta0()}, delta0(), 1.5, 1, delta_plan()), InputError);
  r = check_cardinality_bound({}, delta0(), 1.5, 0.5, delta_plan());
  CHECK(r.slack == r.rhs);

  for (int K = 1; K <= 6; ++K) {
    std::vector<LatticeSignal<double>> phis;
    for (int k = 0; k < K; ++k) phis.push_back(delta_signal(1, idx({k})).embedded(K));
    const auto rep = check_cardinality_bound(phis, delta0(), 2.5, 0.3, StftPlan(1, K, 0));
    CHECK(rep.status == Status::Pass);
    CHECK(rep.lhs == std::min(K, 3));
  }

  r = check_dispersion_cardinality({delta0()}, delta0(), 2, 0.3, delta_plan());
  CHECK(r.lhs == 1.0);
  CHECK(std::abs(r.slack - (2 * ball_measure(0.6, 1) - 1)) < 1e-12);
  r = check_dispersion_cardinality({delta0()}, delta0(), 2, 0.2, delta_plan());
  CHECK(r.lhs == 0.0);
  CHECK(r.slack == r.rhs);
  CHECK(r.notes.size() == 1);

  Rng rng(16);
  for (int t = 0; t < 10; ++t) {
    const auto phis = random_orthonormal(rng, 1, 3, 4);
    auto g = random_complex(rng, 1, 1);
    g *= 1 / g.norm_l2();
    CHECK(check_dispersion_cardinality(phis, g, 1 + t % 3, 2.0, StftPlan(1, 3, 1)).status == Status::Pass);
    CHECK(check_cardinality_bound(phis, g, 2.5, 0.6, StftPlan(1, 3, 1)).status == Status::Pass);
  }
}

TEST_CASE("heisenberg and local uncertainty on deltas") {
  const auto h = check_heisenberg(delta0(), delta0(), 1, delta_plan());
  CHECK(std::abs(h.lhs - 1.0 / 12) < 1e-9);
  CHECK(std::abs(h.slack - (1.0 / 12 - 1.0 / 54)) < 1e-8);
  CHECK(h.extras.at("radial_slack") >= 0);

  for (double q : {0.2, 0.6}) {
    const auto l = check_local_uncertainty(delta0(), delta0(), 1, fiber_part(q), delta_plan());
    CHECK(std::abs(l.lhs - std::sqrt(q)) < 1e-12);
    CHECK(std::abs(l.slack - std::sqrt(q) * (3 * std::sqrt(3.0) / std::sqrt(12.0) - 1)) < 1e-6);
  }
  const auto e = check_local_uncertainty(delta0(), delta0(), 1, TileSet(1), delta_plan());
  CHECK(e.lhs == 0.0);
  CHECK(e.rhs == 0.0);

  const auto c = check_local_corollary(delta0(), delta0(), 1, delta_plan());
  CHECK(std::abs(c.lhs - std::sqrt(1.0 / 12)) < 1e-9);
  CHECK(c.status == Status::Pass);

  Rng rng(17);
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + t % 2;
    const double s = std::array{0.5, 1.0, 2.0}[t % 3];
    const auto f = random_complex(rng, n, 2), g = random_complex(rng, n, 1);
    const StftPlan plan(n, 2, 1);
    CHECK(check_heisenberg(f, g, s, plan).status == Status::Pass);
    CHECK(check_local_uncertainty(f, g, s, random_tileset(rng, n, 3, 4), plan).status == Status::Pass);
    CHECK(check_local_corollary(f, g, s, plan).status == Status::Pass);
  }
}

TEST_CASE("entropy") {
  const auto r = check_entropy(delta0(), delta0(), delta_plan());
  CHECK(std::abs(r.slack) < 1e-9);
  auto f = delta0();
  f *= 2;
  const auto big = check_entropy(f, delta0(), delta_plan());
  CHECK(big.rhs < 0);
  CHECK(big.slack > 0);
  LatticeSignal<double> zero(SupportBox(1, 0));
  CHECK_THROWS_AS(check_entropy(zero, delta0(), delta_plan()), InputError);

  Rng rng(18);
  for (int t = 0; t < 10; ++t) {
    auto a = random_complex(rng, 1, 3), b = random_complex(rng, 1, 2);
    a *= 1 / a.norm_l2();
    b *= 1 / b.norm_l2();
    CHECK(check_entropy(a, b, StftPlan(1, 3, 2)).status == Status::Pass);
  }
}

TEST_CASE("identity checkers") {
  Rng rng(19);
  const auto f = random_complex(rng, 1, 3), g = random_complex(rng, 1, 2), h = random_complex(rng, 1, 2);
  const StftPlan plan(1, 3, 2);
  CHECK(check_plancherel(f, g, plan).status == Status::Pass);
  CHECK(check_orthogonality(f, random_complex(rng, 1, 3), g, h, plan).status == Status::Pass);
  CHECK(check_inversion(f, g, h, plan).status == Status::Pass);
  CHECK(check_lp_bound(f, g, 4, plan).status == Status::Pass);
  CHECK(check_lp_bound(f, g, 3, plan).status == Status::Pass);
  CHECK(check_lp_bound(f, g, std::numeric_limits<double>::infinity(), plan).status == Status::Pass);

  std::vector<std::pair<PhasePoint<double>, PhasePoint<double>>> pairs;
  std::vector<PhasePoint<double>> points;
  for (int i = 0; i < 10; ++i) {
    PhasePoint<double> a{idx({int(rng() % 5) - 2}), pt({double(rng() % 1000) / 1000})};
    PhasePoint<double> b{idx({int(rng() % 5) - 2}), pt({double(rng() % 1000) / 1000})};
    pairs.emplace_back(a, b);
    points.push_back(a);
  }
  CHECK(check_kernel(g, pairs, &f).status == Status::Pass);
  const auto conv = check_convolution(f, g, points);
  CHECK(conv.status == Status::Pass);
  CHECK(conv.extras.at("unreflected_error") > 1e-6);
  CHECK(conv.notes.size() == 2);
}

TEST_CASE("operator checkers") {
  Rng rng(20);
  const auto g = random_complex(rng, 1, 1);
  const ConcentrationOperator op(g, random_tileset(rng, 1, 2, 3), StftPlan(1, 2, 1));
  CHECK(check_hs_identity(op).status == Status::Pass);
  CHECK(check_op_norm_bound(op).status == Status::Pass);
  const double c = benedicks_constant(op);
  const auto f = random_complex(rng, 1, 2);
  CHECK(check_benedicks(f, op, c).status == Status::Pass);
}
