#include "lstft/functionals.hpp"
#include "lstft/stft.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace lstft;
using test::idx;
using test::pt;

namespace {

// Area of the disk of radius rho intersected with [-1/2, 1/2]^2.
double disk_in_square(double rho) {
  if (rho <= 0.5) return M_PI * rho * rho;
  if (rho * rho >= 0.5) return 1;
  return M_PI * rho * rho - 4 * (rho * rho * std::acos(0.5 / rho) - 0.5 * std::sqrt(rho * rho - 0.25));
}

// Tensor Gauss-Legendre over a box of a smooth function of w.
template <typename Fn>
double box_integral(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, Fn&& fn, int pts = 40) {
  const auto& gl = gauss_legendre(pts);
  const int n = int(lo.size());
  double s = 0;
  std::vector<int> c(n, 0);
  Eigen::VectorXd w(n);
  while (true) {
    double weight = 1;
    for (int a = 0; a < n; ++a) {
      const double h = 0.5 * (hi[a] - lo[a]);
      w[a] = lo[a] + h * (1 + gl.nodes[c[a]]);
      weight *= h * gl.weights[c[a]];
    }
    s += weight * fn(w);
    int a = n - 1;
    while (a >= 0 && ++c[a] == pts) c[a--] = 0;
    if (a < 0) break;
  }
  return s;
}

LatticeSignal<double> delta(int n = 1) { return LatticeSignal<double>::delta(SupportBox(n, 0), MultiIndex::Zero(n)); }

}  // namespace

TEST_CASE("lattice counting") {
  CHECK(lattice_count(0, 1) == 1);
  CHECK(lattice_count(0, 3) == 1);
  CHECK(lattice_count(2, 2) == 13);
  CHECK(lattice_count(3.5, 1) == 7);
  CHECK(lattice_count(1, 3) == 7);
  std::int64_t prev = 0;
  for (double r = 0; r < 6; r += 0.05) {
    const auto c = lattice_count(r, 2);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("ball measure closed forms") {
  CHECK(ball_measure(0.25, 1) == 0.5);
  CHECK(ball_measure(1.5, 1) == 3.0);
  CHECK(ball_measure(0.1, 2) == doctest::Approx(M_PI * 0.01).epsilon(1e-12));
  for (double rho : {0.05, 0.3, 0.5, 0.55, 0.6, 0.65, 0.7, 0.71, 0.9})
    CHECK(ball_measure(rho, 2) == doctest::Approx(disk_in_square(rho)).epsilon(1e-10));
  // Fibers at |m| = 1 in the plane.
  const double r = 1.2;
  const double expect = disk_in_square(r) + 4 * disk_in_square(std::sqrt(r * r - 1));
  CHECK(ball_measure(r, 2) == doctest::Approx(expect).epsilon(1e-10));
  CHECK(ball_measure(0.3, 3) == doctest::Approx(4.0 / 3 * M_PI * 0.027).epsilon(1e-10));
  CHECK(ball_measure(0.9, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ball measure in three dimensions matches a cell count") {
  const double rho = 0.62;
  const int R = 200;
  long hits = 0;
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j)
      for (int k = 0; k < R; ++k) {
        const double x = (i + 0.5) / R - 0.5, y = (j + 0.5) / R - 0.5, z = (k + 0.5) / R - 0.5;
        hits += x * x + y * y + z * z <= rho * rho;
      }
  CHECK(ball_measure(rho, 3) == doctest::Approx(double(hits) / (R * R * R)).epsilon(2e-3));
}

TEST_CASE("ball measure is monotone and bounded by the n = 1 display") {
  double prev = 0;
  for (double r = 0.01; r < 5; r += 0.01) {
    const double b = ball_measure(r, 1);
    CHECK(b >= prev);
    CHECK(b <= 2 * r * double(lattice_count(r, 1)) + 1e-12);
    prev = b;
  }
  for (int res = 1; res <= 64; res *= 2) CHECK(ball_tileset(1.3, 2, res).measure() <= ball_measure(1.3, 2) + 1e-12);
}

TEST_CASE("masses on tiles match direct integration") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1), wd(0, 1);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 2;
    auto f = test::random_signal(rng, n, 2);
    auto g = test::random_signal(rng, n, 1);
    StftPlan plan(n, 2, 1);
    auto V = stft(f, g, plan);
    std::vector<Tile> tiles;
    for (int t = 0; t < 3; ++t) {
      Tile tile{MultiIndex(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
      for (int a = 0; a < n; ++a) {
        tile.m[a] = int(rng() % 5) - 2;
        tile.lo[a] = u(rng);
        tile.hi[a] = tile.lo[a] + wd(rng);
      }
      tiles.push_back(tile);
    }
    TileSet sigma(n, tiles);
    double oracle = 0;
    for (const Tile& t : sigma.tiles())
      oracle += box_integral(t.lo, t.hi, [&](const Eigen::VectorXd& w) {
        return std::norm(test::stft_oracle(f, g, t.m, w));
      });
    CHECK(mass_on(V, sigma) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(mass_off(V, sigma) == doctest::Approx(V.squared_norm() - oracle).epsilon(1e-9));
  }
}

TEST_CASE("grid mass uses node membership") {
  StftPlan plan(1, 0, 0, 4);
  auto V = stft(delta(), delta(), plan);
  TileSet half(1, {{idx({0}), pt({0}), pt({0.5})}});
  CHECK(grid_mass_on(V, half) == doctest::Approx(0.5));
  TileSet offgrid(1, {{idx({0}), pt({0.1}), pt({0.3})}});
  CHECK(grid_mass_on(V, offgrid) == doctest::Approx(0.25));
  CHECK(mass_on(V, offgrid) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("delta dispersion closed forms") {
  StftPlan plan(1, 0, 0);
  auto V = stft(delta(), delta(), plan);
  CHECK(dispersion(V, 2) == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-10));
  CHECK(dispersion(V, 1) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(dispersion(V, 0.5) == doctest::Approx(std::pow(4.0 / 3 * std::pow(0.5, 1.5), 2)).epsilon(1e-10));
  CHECK(dispersion(PhaseSpaceField<double>(SupportBox(1, 1), TorusGrid(1, 8)), 2) == 0.0);
  auto V2 = stft(delta(2), delta(2), StftPlan(2, 0, 0));
  // int over [-1/2,1/2]^2 of x^2 + y^2 = 1/6.
  CHECK(moment(V2, MomentKind::Torus, 2) == doctest::Approx(1.0 / 6).epsilon(1e-10));
  CHECK_THROWS_AS(dispersion(V, 0), InputError);
}

TEST_CASE("moments match direct integration") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + trial % 2;
    auto f = test::random_signal(rng, n, 2);
    auto g = test::random_signal(rng, n, 1);
    StftPlan plan(n, 2, 1);
    auto V = stft(f, g, plan);
    for (double e : {0.5, 1.0, 2.0, 3.0}) {
      double radial = 0, torus = 0, lattice = 0;
      for (Eigen::Index r = 0; r < plan.output_box().size(); ++r) {
        const MultiIndex m = plan.output_box().point(r);
        const double m2 = double(norm_sq(m));
        // Split the cell at 0 so the weight's kink sits on panel edges.
        std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> cells;
        if (n == 1) {
          cells = {{pt({-0.5}), pt({0})}, {pt({0}), pt({0.5})}};
        } else {
          for (double a : {-0.5, 0.0})
            for (double b : {-0.5, 0.0}) cells.push_back({pt({a, b}), pt({a + 0.5, b + 0.5})});
        }
        for (auto& [lo, hi] : cells) {
          radial += box_integral(lo, hi, [&](const Eigen::VectorXd& w) {
            return std::pow(m2 + w.squaredNorm(), e / 2) * std::norm(test::stft_oracle(f, g, m, w));
          });
          torus += box_integral(lo, hi, [&](const Eigen::VectorXd& w) {
            return std::pow(w.squaredNorm(), e / 2) * std::norm(test::stft_oracle(f, g, m, w));
          });
          lattice += box_integral(lo, hi, [&](const Eigen::VectorXd& w) {
            return std::pow(m2, e / 2) * std::norm(test::stft_oracle(f, g, m, w));
          });
        }
      }
      // The oracle's own error dominates near the |w|^e corner for small e.
      const double tol = e < 1 ? 1e-5 : 1e-8;
      CHECK(moment(V, MomentKind::Radial, e) == doctest::Approx(radial).epsilon(tol));
      CHECK(moment(V, MomentKind::Torus, e) == doctest::Approx(torus).epsilon(tol));
      CHECK(moment(V, MomentKind::Lattice, e) == doctest::Approx(lattice).epsilon(1e-10));
    }
  }
}

TEST_CASE("even moments are polynomial and agree with a fine grid") {
  std::mt19937_64 rng(23);
  auto f = test::random_signal(rng, 1, 3);
  auto g = test::random_signal(rng, 1, 2);
  auto V = stft(f, g, StftPlan(1, 3, 2));
  auto fine = stft(f, g, StftPlan(1, 3, 2, 4096));
  fine.set_bandwidth(-1);
  CHECK(moment(V, MomentKind::Torus, 2) == doctest::Approx(moment(fine, MomentKind::Torus, 2)).epsilon(1e-6));
}

TEST_CASE("lp norms") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 2;
    auto f = test::random_signal(rng, n, 2);
    auto g = test::random_signal(rng, n, 2);
    auto V = stft(f, g, StftPlan(n, 2, 2));
    const double bound = f.norm_l2() * g.norm_l2();
    CHECK(lp_norm(V, 2) == doctest::Approx(bound).epsilon(1e-12));
    for (double p : {3.0, 4.0, 8.0}) CHECK(lp_norm(V, p) <= bound * (1 + 1e-12));
    CHECK(lp_norm(V, std::numeric_limits<double>::infinity()) <= bound * (1 + 1e-12));
    if (n == 1) {
      // Oracle: |V|^4 integrated on a much finer grid of directly evaluated samples.
      auto fine = stft(f, g, StftPlan(1, 2, 2, 2048));
      fine.set_bandwidth(-1);
      double s = 0;
      for (Eigen::Index i = 0; i < fine.values().size(); ++i) s += std::pow(std::abs(fine.values()(i)), 4);
      CHECK(lp_norm(V, 4) == doctest::Approx(std::pow(s / 2048, 0.25)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(lp_norm(PhaseSpaceField<double>(SupportBox(1, 0), TorusGrid(1, 2)), 0.5), InputError);
}

TEST_CASE("entropy") {
  CHECK(entropy_k(stft(delta(), delta(), StftPlan(1, 0, 0))) == doctest::Approx(0.0));
  SupportBox box(1, 1);
  LatticeSignal<double> h(box);
  h.at(idx({0})) = h.at(idx({1})) = 1 / std::sqrt(2.0);
  const double value = entropy_k(stft(h, h, StftPlan(1, 1, 1)));
  CHECK(value == doctest::Approx(0.886294361119890).epsilon(1e-8));

  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> scale(0.5, 4);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = test::random_signal(rng, 1, 2);
    auto g = test::random_signal(rng, 1, 1);
    f *= 1 / f.norm_l2();
    g *= 1 / g.norm_l2();
    StftPlan plan(1, 2, 1);
    const double base = entropy_k(stft(f, g, plan));
    const double a = scale(rng), b = scale(rng);
    const double scaled = entropy_k(stft(a * f, b * g, plan));
    // E(|V_{bg} af|^2) = a^2 b^2 (E(|V_g f|^2) - 2 ln(ab)) for unit f, g.
    CHECK(scaled / (a * a * b * b) + 2 * std::log(a * b) == doctest::Approx(base).epsilon(1e-6));
  }
}
