#pragma once

// Fourier transforms between finitely supported sequences on Z^n and samples
// of trigonometric polynomials on the torus grid.
//
//   (F_Z F)(w) = sum_k exp(-2 pi i k.w) F(k)
//   (F_T h)(k) = int exp(2 pi i k.w) h(w) dw  ~  M^-n sum_j exp(2 pi i k.w_j) h(w_j)
//
// The equispaced rule with weight M^-n integrates every trigonometric
// polynomial with per-axis frequencies in (-M, M) exactly, which makes all L^2
// identities below exact up to rounding.

#include "lstft/lattice.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace lstft {

enum class FourierMethod { Fft, Direct };

/// Smallest power of two >= 4N + 2, so products of two bandwidth-2N
/// polynomials are integrated exactly.
inline int default_grid_size(int half_width) {
  int M = 1;
  while (M < 4 * half_width + 2) M *= 2;
  return M;
}

template <typename Real>
struct TorusFunctionSamples {
  TorusGrid grid;
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> values;
};

namespace detail {

/// exp(sign * 2 pi i r / M) for r = 0..M-1.
template <typename Real>
std::vector<std::complex<Real>> unit_roots(int M, int sign) {
  std::vector<std::complex<Real>> roots(M);
  for (int r = 0; r < M; ++r) {
    const long double a = sign * 2 * std::numbers::pi_v<long double> * r / M;
    roots[r] = std::complex<Real>(Real(std::cos(a)), Real(std::sin(a)));
  }
  return roots;
}

inline int mod(long long a, int M) {
  long long r = a % M;
  return int(r < 0 ? r + M : r);
}

/// In-place unnormalized n-dimensional DFT on an M^n row-major array.
/// Forward uses exp(-2 pi i), inverse exp(+2 pi i); neither scales.
template <typename Real>
void fft_nd(std::complex<Real>* data, int dim, int M, bool inverse) {
  if (M == 1) return;  // kissfft cannot plan a length-1 transform
  thread_local Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::Unscaled);
  thread_local std::vector<std::complex<Real>> line_in, line_out;
  line_in.resize(M);
  line_out.resize(M);
  const long long total = int_pow(M, dim);
  long long stride = total;
  for (int axis = 0; axis < dim; ++axis) {
    stride /= M;
    const long long block = stride * M;
    for (long long base = 0; base < total; base += block) {
      for (long long off = 0; off < stride; ++off) {
        std::complex<Real>* p = data + base + off;
        for (int j = 0; j < M; ++j) line_in[j] = p[j * stride];
        if (inverse)
          fft.inv(line_out.data(), line_in.data(), M);
        else
          fft.fwd(line_out.data(), line_in.data(), M);
        for (int j = 0; j < M; ++j) p[j * stride] = line_out[j];
      }
    }
  }
}

/// Array index of lattice frequency k on an M^n grid (k reduced mod M).
inline Eigen::Index alias_index(const MultiIndex& k, int M) {
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < k.size(); ++i) j = j * M + mod(k[i], M);
  return j;
}

/// exp(sign 2 pi i k.w_j) evaluated with exact integer phase reduction.
template <typename Real>
std::complex<Real> character(const MultiIndex& k, const Eigen::VectorXi& node, int M,
                             const std::vector<std::complex<Real>>& roots) {
  long long phase = 0;
  for (Eigen::Index i = 0; i < k.size(); ++i) phase += (long long)(k[i]) * node[i];
  return roots[mod(phase, M)];
}

}  // namespace detail

/// Samples of F_Z f on the grid. Requires M >= 2N + 1 so no two frequencies
/// of f alias onto the same node pattern.
template <typename Real>
TorusFunctionSamples<Real> fourier_lattice_to_torus(const LatticeSignal<Real>& f, const TorusGrid& grid,
                                                    FourierMethod method = FourierMethod::Fft) {
  if (f.dimension() != grid.dimension()) throw InputError("signal and grid dimensions differ");
  const int M = grid.points_per_axis();
  if (M < 2 * f.box().half_width() + 1) throw InputError("grid under-resolves signal bandwidth");
  TorusFunctionSamples<Real> out{grid, Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>::Zero(grid.size())};
  const auto& box = f.box();
  if (method == FourierMethod::Fft) {
    for (Eigen::Index i = 0; i < box.size(); ++i)
      out.values[detail::alias_index(box.point(i), M)] += f.values()[i];
    detail::fft_nd(out.values.data(), grid.dimension(), M, false);
    return out;
  }
  const auto roots = detail::unit_roots<Real>(M, -1);
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Eigen::VectorXi node = grid.node_index(j);
    std::complex<Real> s(0);
    for (Eigen::Index i = 0; i < box.size(); ++i) {
      if (f.values()[i] == std::complex<Real>(0)) continue;
      s += f.values()[i] * detail::character(box.point(i), node, M, roots);
    }
    out.values[j] = s;
  }
  return out;
}

/// Quadrature value of F_T h at k; exact whenever k + (frequencies of h) stay
/// inside (-M, M) per axis.
template <typename Real>
std::complex<Real> fourier_torus_to_lattice(const TorusFunctionSamples<Real>& h, const MultiIndex& k) {
  const TorusGrid& grid = h.grid;
  if (k.size() != grid.dimension()) throw InputError("frequency dimension mismatch");
  const int M = grid.points_per_axis();
  const auto roots = detail::unit_roots<Real>(M, +1);
  std::complex<Real> s(0);
  for (Eigen::Index j = 0; j < grid.size(); ++j)
    s += h.values[j] * detail::character(k, grid.node_index(j), M, roots);
  return s * grid.weight<Real>();
}

template <typename Real>
struct NormPair {
  Real lhs;
  Real rhs;
};

/// (||F_Z f||_{L^2(T^n)}^2, ||f||_2^2). |F_Z f|^2 has bandwidth 2N, so the
/// grid must have M >= 4N + 1 for the left side to be exact.
template <typename Real>
NormPair<Real> plancherel_lattice(const LatticeSignal<Real>& f, const TorusGrid& grid) {
  if (grid.points_per_axis() < 4 * f.box().half_width() + 1)
    throw InputError("grid under-resolves signal bandwidth");
  const auto F = fourier_lattice_to_torus(f, grid);
  return {F.values.squaredNorm() * grid.weight<Real>(), f.squared_norm()};
}

}  // namespace lstft
