#include "lstft/fourier.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace lstft;
using test::idx;

TEST_CASE("delta transforms") {
  TorusGrid grid(1, 8);
  auto one = fourier_lattice_to_torus(LatticeSignal<double>::delta(SupportBox(1, 1), idx({0})), grid);
  for (Eigen::Index j = 0; j < grid.size(); ++j) CHECK(std::abs(one.values[j] - 1.0) < 1e-15);
  auto d1 = fourier_lattice_to_torus(LatticeSignal<double>::delta(SupportBox(1, 1), idx({1})), grid);
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const double w = grid.node(j)[0];
    CHECK(std::abs(d1.values[j] - std::exp(std::complex<double>(0, -2 * M_PI * w))) < 1e-14);
  }
}

TEST_CASE("under-resolved grid is rejected") {
  std::mt19937_64 rng(1);
  auto f = test::random_signal(rng, 1, 3);
  CHECK_THROWS_WITH(fourier_lattice_to_torus(f, TorusGrid(1, 6)), "grid under-resolves signal bandwidth");
  CHECK_NOTHROW(fourier_lattice_to_torus(f, TorusGrid(1, 7)));
  CHECK_THROWS_AS(plancherel_lattice(f, TorusGrid(1, 12)), InputError);
}

TEST_CASE("fft path matches direct sums") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2;
    const int N = int(rng() % 9);
    const int M = n == 1 ? default_grid_size(N) : 2 * N + 1 + int(rng() % 3);
    auto f = test::random_signal(rng, n, N);
    TorusGrid grid(n, M);
    auto a = fourier_lattice_to_torus(f, grid, FourierMethod::Fft);
    auto b = fourier_lattice_to_torus(f, grid, FourierMethod::Direct);
    CHECK((a.values - b.values).norm() <= 1e-12 * b.values.norm());
    // Oracle: the defining sum with floating phases.
    for (int s = 0; s < 3; ++s) {
      const Eigen::Index j = Eigen::Index(rng() % grid.size());
      std::complex<double> v = 0;
      for (Eigen::Index i = 0; i < f.box().size(); ++i) {
        const double phase = f.box().point(i).cast<double>().dot(grid.node(j));
        v += std::exp(std::complex<double>(0, -2 * M_PI * phase)) * f.values()[i];
      }
      CHECK(std::abs(a.values[j] - v) <= 1e-12 * (1 + std::abs(v)) * f.box().size());
    }
  }
}

TEST_CASE("torus to lattice inverts the lattice transform") {
  std::mt19937_64 rng(3);
  TorusGrid grid(1, 16);
  TorusFunctionSamples<double> ones{grid, Eigen::VectorXcd::Ones(16)};
  CHECK(std::abs(fourier_torus_to_lattice(ones, idx({0})) - 1.0) < 1e-15);
  CHECK(std::abs(fourier_torus_to_lattice(ones, idx({3}))) < 1e-15);
  auto f = test::random_signal(rng, 1, 3);
  auto h = fourier_lattice_to_torus(f, grid);
  for (int k = -3; k <= 3; ++k) CHECK(std::abs(fourier_torus_to_lattice(h, idx({k})) - f(idx({k}))) < 1e-12);

  auto f2 = test::random_signal(rng, 2, 2);
  TorusGrid g2(2, 8);
  auto h2 = fourier_lattice_to_torus(f2, g2);
  for (Eigen::Index i = 0; i < f2.box().size(); ++i)
    CHECK(std::abs(fourier_torus_to_lattice(h2, f2.box().point(i)) - f2.values()[i]) < 1e-12);
}

TEST_CASE("plancherel on the lattice") {
  auto p = plancherel_lattice(LatticeSignal<double>::delta(SupportBox(1, 0), idx({0})), TorusGrid(1, 2));
  CHECK(p.lhs == doctest::Approx(1.0));
  CHECK(p.rhs == doctest::Approx(1.0));
  auto z = plancherel_lattice(LatticeSignal<double>(SupportBox(2, 1)), TorusGrid(2, 8));
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);

  SupportBox box(1, 1);
  LatticeSignal<double> f(box);
  f.at(idx({-1})) = {1, 0};
  f.at(idx({1})) = {0, 2};
  auto five = plancherel_lattice(f, TorusGrid(1, default_grid_size(1)));
  CHECK(std::abs(five.lhs - 5.0) <= 5e-12);
  CHECK(std::abs(five.rhs - 5.0) <= 5e-12);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 2, N = int(rng() % 5);
    auto g = test::random_signal(rng, n, N);
    auto r = plancherel_lattice(g, TorusGrid(n, default_grid_size(N)));
    CHECK(std::abs(r.lhs - r.rhs) <= 1e-12 * r.rhs);
  }
}

TEST_CASE("default grid size") {
  CHECK(default_grid_size(0) == 2);
  CHECK(default_grid_size(1) == 8);
  CHECK(default_grid_size(3) == 16);
  CHECK(default_grid_size(4) == 32);
}
