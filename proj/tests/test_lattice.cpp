#include "lstft/lattice.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace lstft;
using test::idx;

TEST_CASE("support box enumerates row-major") {
  SupportBox box(2, 1);
  CHECK(box.size() == 9);
  CHECK(box.point(0) == idx({-1, -1}));
  CHECK(box.point(1) == idx({-1, 0}));
  for (Eigen::Index i = 0; i < box.size(); ++i) CHECK(box.index(box.point(i)) == i);
  CHECK_THROWS_AS(SupportBox(0, 1), InputError);
}

TEST_CASE("signal norms and embedding") {
  SupportBox box(1, 2);
  LatticeSignal<double> f(box);
  f.at(idx({-1})) = {3, 0};
  f.at(idx({2})) = {0, 4};
  CHECK(f.squared_norm() == doctest::Approx(25));
  CHECK(f.norm_l1() == doctest::Approx(7));
  CHECK(f.support_half_width() == 2);
  auto big = f.embedded(5);
  CHECK(big(idx({2})) == std::complex<double>(0, 4));
  CHECK(big(idx({7})) == std::complex<double>(0));
  CHECK_THROWS_AS(f.embedded(1), InputError);
}

TEST_CASE("torus grid nodes and weights") {
  TorusGrid grid(1, 8);
  CHECK(grid.weight() * grid.size() == doctest::Approx(1.0));
  CHECK(grid.node(3)[0] == doctest::Approx(0.375));
  CHECK(grid.node(4)[0] == doctest::Approx(-0.5));
  CHECK(grid.unit_node(4)[0] == doctest::Approx(0.5));
}

TEST_CASE("tile set measure") {
  CHECK(TileSet(1).measure() == 0.0);
  CHECK(TileSet(2, {{idx({0, 0}), test::pt({0, 0}), test::pt({1, 1})}}).measure() == doctest::Approx(1.0));
  TileSet s(1, {{idx({0}), test::pt({0}), test::pt({0.5})}, {idx({3}), test::pt({0.25}), test::pt({0.5})}});
  CHECK(measure(s) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("overlapping tiles are normalized to their union") {
  TileSet s(1, {{idx({0}), test::pt({0}), test::pt({0.5})}, {idx({0}), test::pt({0.25}), test::pt({0.75})}});
  CHECK(measure(s) == doctest::Approx(0.75).epsilon(1e-12));
  TileSet wrapped(1, {{idx({1}), test::pt({-0.25}), test::pt({0.25})}, {idx({1}), test::pt({0.1}), test::pt({0.3})}});
  CHECK(measure(wrapped) == doctest::Approx(0.55).epsilon(1e-12));
  TileSet sq(2, {{idx({0, 0}), test::pt({0, 0}), test::pt({0.5, 0.5})},
                 {idx({0, 0}), test::pt({0.25, 0.25}), test::pt({0.75, 0.75})}});
  CHECK(measure(sq) == doctest::Approx(0.4375).epsilon(1e-12));
  CHECK_THROWS_AS(TileSet(1, {{idx({0}), test::pt({0}), test::pt({1.5})}}), InputError);
}

TEST_CASE("random overlapping unions match a fine membership count") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1), wd(0, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Tile> tiles;
    for (int t = 0; t < 4; ++t) {
      const double a = u(rng), b = u(rng);
      tiles.push_back({idx({0, 0}), test::pt({a, b}), test::pt({a + wd(rng), b + wd(rng)})});
    }
    TileSet s(2, tiles);
    // Oracle: count cell centres on a 512^2 grid covered by any raw tile.
    const int R = 512;
    long hits = 0;
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < R; ++j) {
        const double x = (i + 0.5) / R, y = (j + 0.5) / R;
        bool in = false;
        for (const Tile& t : tiles) {
          auto inside = [](double v, double lo, double hi) {
            const double d = v - lo;
            return d - std::floor(d) < hi - lo;
          };
          in = in || (inside(x, t.lo[0], t.hi[0]) && inside(y, t.lo[1], t.hi[1]));
        }
        hits += in;
      }
    CHECK(measure(s) == doctest::Approx(double(hits) / (R * R)).epsilon(0.02));
  }
}

TEST_CASE("product form detection") {
  std::vector<Tile> t{{idx({0}), test::pt({0.1}), test::pt({0.4})}, {idx({2}), test::pt({0.1}), test::pt({0.4})}};
  CHECK(TileSet(1, t).is_product_form());
  t[1].hi[0] = 0.5;
  CHECK_FALSE(TileSet(1, t).is_product_form());
}

TEST_CASE("indicator on grid uses half-open membership") {
  TileSet s(1, {{idx({0}), test::pt({0}), test::pt({0.5})}});
  auto chi = indicator_on_grid(s, SupportBox(1, 1), TorusGrid(1, 4));
  CHECK(chi.values()(1, 0) == 1.0);
  CHECK(chi.values()(1, 1) == 1.0);
  CHECK(chi.values()(1, 2) == 0.0);
  CHECK(chi.values()(1, 3) == 0.0);
  CHECK(chi.values().row(0).norm() == 0.0);
  CHECK(grid_measure(s, TorusGrid(1, 4)) == 0.5);

  TileSet full(1, {{idx({1}), test::pt({0}), test::pt({1})}});
  auto f = indicator_on_grid(full, SupportBox(1, 1), TorusGrid(1, 4));
  CHECK(f.values().row(2).real().sum() == 4.0);
  CHECK(indicator_on_grid(TileSet(1), SupportBox(1, 1), TorusGrid(1, 4)).values().norm() == 0.0);

  TileSet far(1, {{idx({5}), test::pt({0}), test::pt({1})}});
  CHECK_THROWS_WITH(indicator_on_grid(far, SupportBox(1, 1), TorusGrid(1, 4)), "tile outside truncation box");
}

TEST_CASE("grid measure converges to the measure") {
  TileSet s(1, {{idx({0}), test::pt({0.1}), test::pt({0.45})}});
  double prev = 1;
  for (int M = 8; M <= 4096; M *= 2) {
    const double err = std::abs(grid_measure(s, TorusGrid(1, M)) - 0.35);
    CHECK(err <= 1.0 / M + 1e-15);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("ball tile sets") {
  CHECK(ball_tileset(0.25, 1, 1).measure() == doctest::Approx(0.5));
  CHECK(ball_tileset(1.5, 1, 1).measure() == doctest::Approx(3.0));
  CHECK(ball_tileset(1.5, 1, 1).lattice_points().size() == 3);
  const double disk = M_PI * 0.01;
  double prev = 0;
  for (int res = 1; res <= 1024; res *= 2) {
    const double mu = ball_tileset(0.1, 2, res).measure();
    CHECK(mu >= prev - 1e-15);
    CHECK(mu <= disk + 1e-15);
    prev = mu;
  }
  CHECK(prev == doctest::Approx(disk).epsilon(1e-2));
  CHECK_THROWS_AS(ball_tileset(0, 1, 4), InputError);
}
