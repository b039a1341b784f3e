#pragma once

// Signal and tile-set generators for randomized verification.

#include "lstft/lattice.hpp"

#include <Eigen/Core>
#include <Eigen/QR>

#include <cmath>
#include <random>
#include <vector>

namespace lstft {

using Rng = std::mt19937_64;

inline LatticeSignal<double> delta_signal(int n, const MultiIndex& at) {
  return LatticeSignal<double>::delta(SupportBox(n, max_abs(at)), at);
}

/// exp(-|k|^2 / (2 sigma^2)) on [-N, N]^n.
inline LatticeSignal<double> gaussian_sampled(int n, int N, double sigma) {
  if (!(sigma > 0)) throw InputError("gaussian width must be positive");
  SupportBox box(n, N);
  LatticeSignal<double> g(box);
  for (Eigen::Index i = 0; i < box.size(); ++i)
    g.values()[i] = std::exp(-double(norm_sq(box.point(i))) / (2 * sigma * sigma));
  return g;
}

/// Independent standard complex normal entries; with density < 1 each entry
/// is kept with that probability (at least one survives).
inline LatticeSignal<double> random_complex(Rng& rng, int n, int N, double density = 1) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0, 1);
  SupportBox box(n, N);
  LatticeSignal<double> f(box);
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    const std::complex<double> v(gauss(rng), gauss(rng));
    if (density >= 1 || u(rng) < density) f.values()[i] = v;
  }
  if (f.is_zero()) f.values()[Eigen::Index(rng() % std::uint64_t(box.size()))] = 1;
  return f;
}

/// K orthonormal signals on [-N, N]^n from the QR factorization of a complex
/// Gaussian matrix.
inline std::vector<LatticeSignal<double>> random_orthonormal(Rng& rng, int n, int N, int K) {
  SupportBox box(n, N);
  if (K > box.size()) throw InputError("more orthonormal signals requested than the box holds");
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd A(box.size(), K);
  for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = {gauss(rng), gauss(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(box.size(), K);
  std::vector<LatticeSignal<double>> out;
  for (int k = 0; k < K; ++k) out.emplace_back(box, Q.col(k));
  return out;
}

/// count tiles on lattice points with |m_i| <= extent, widths up to max_width.
inline TileSet random_tileset(Rng& rng, int n, int extent, int count, double max_width = 0.6) {
  std::uniform_real_distribution<double> u(0, 1), w(0, max_width);
  std::vector<Tile> tiles;
  for (int t = 0; t < count; ++t) {
    Tile tile{MultiIndex(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (int a = 0; a < n; ++a) {
      tile.m[a] = int(rng() % std::uint64_t(2 * extent + 1)) - extent;
      tile.lo[a] = u(rng);
      tile.hi[a] = tile.lo[a] + w(rng);
    }
    tiles.push_back(std::move(tile));
  }
  return TileSet(n, tiles);
}

/// E x T: the same torus boxes on `points` random lattice points.
inline TileSet random_product_tileset(Rng& rng, int n, int extent, int points, int boxes, double max_width = 0.6) {
  std::uniform_real_distribution<double> u(0, 1), w(0, max_width);
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> torus;
  for (int b = 0; b < boxes; ++b) {
    Eigen::VectorXd lo(n), hi(n);
    for (int a = 0; a < n; ++a) {
      lo[a] = u(rng);
      hi[a] = lo[a] + w(rng);
    }
    torus.emplace_back(lo, hi);
  }
  std::vector<Tile> tiles;
  for (int p = 0; p < points; ++p) {
    MultiIndex m(n);
    for (int a = 0; a < n; ++a) m[a] = int(rng() % std::uint64_t(2 * extent + 1)) - extent;
    for (const auto& [lo, hi] : torus) tiles.push_back({m, lo, hi});
  }
  return TileSet(n, tiles);
}

}  // namespace lstft
