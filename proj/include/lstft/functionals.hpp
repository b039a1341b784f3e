#pragma once

// Functionals of phase-space fields: masses on tile sets, weighted moments,
// L^p norms and the k-entropy, plus the geometry of phase-space balls.
//
// When a field records its row bandwidth B and the grid has M >= 4B + 1, the
// samples of |F(m, .)|^2 determine its Fourier coefficients exactly. Masses on
// tiles and moments against even weights are then integrated in closed form
// (tile integrals of characters) or against precomputed moment weights, so
// they carry no discretization error. Other fields fall back to the grid rule.

#include "lstft/fourier.hpp"
#include "lstft/lattice.hpp"
#include "lstft/quadrature.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

namespace lstft {

/// Card{m in Z^n : |m| <= r}, by enumeration.
inline std::int64_t lattice_count(double r, int n) {
  if (r < 0) return 0;
  if (n < 1) throw InputError("dimension must be >= 1");
  const int R = int(std::floor(r));
  const double r2 = r * r;
  SupportBox box(n, R);
  std::int64_t count = 0;
  for (Eigen::Index i = 0; i < box.size(); ++i) count += double(norm_sq(box.point(i))) <= r2;
  return count;
}

namespace detail {

// vol{w in [-1/2, 1/2)^n : |w|^2 <= t}. The fiber integrand in x has kinks
// where t - x^2 = k/4; x = sqrt(t) sin(theta) removes the endpoint root.
inline double fiber_volume(double t, int n, int quad_points) {
  if (t <= 0) return 0;
  if (n == 1) return std::min(2 * std::sqrt(t), 1.0);
  if (t >= 0.25 * n) return 1;
  const double rho = std::sqrt(t);
  const double theta_max = std::asin(std::min(1.0, 0.5 / rho));
  std::vector<double> cuts{0.0, theta_max};
  for (int k = 1; k < n; ++k) {
    const double rest = t - 0.25 * k;
    if (rest <= 0) continue;
    const double th = std::asin(std::sqrt(rest) / rho);
    if (th > 0 && th < theta_max) cuts.push_back(th);
  }
  std::sort(cuts.begin(), cuts.end());
  double s = 0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
    s += integrate_gl(
        [&](double th) {
          const double c = std::cos(th);
          return fiber_volume(t * c * c, n - 1, quad_points) * rho * c;
        },
        cuts[p], cuts[p + 1], quad_points);
  return 2 * s;
}

}  // namespace detail

/// (nu x mu)(B_r) = sum over |m| <= r of the torus volume of |w|^2 <= r^2 - |m|^2,
/// with |w| taken on [-1/2, 1/2)^n so every fiber is capped at 1.
inline double ball_measure(double r, int n, int quad_points = 32) {
  if (!(r > 0)) return 0;
  const int R = int(std::floor(r));
  SupportBox box(n, R);
  double s = 0;
  for (Eigen::Index i = 0; i < box.size(); ++i)
    s += detail::fiber_volume(r * r - double(norm_sq(box.point(i))), n, quad_points);
  return s;
}

namespace detail {

template <typename Real>
bool spectral_ok(const PhaseSpaceField<Real>& F) {
  return F.bandwidth() >= 0 && F.grid().points_per_axis() >= 4 * F.bandwidth() + 1 && F.dimension() <= 2;
}

// int_a^b exp(2 pi i d w) dw.
inline std::complex<double> character_integral(int d, double a, double b) {
  if (d == 0) return b - a;
  const double k = 2 * std::numbers::pi * d;
  return (std::polar(1.0, k * b) - std::polar(1.0, k * a)) / std::complex<double>(0, k);
}

}  // namespace detail

/// Fourier coefficients rho^(d), d in [-2B, 2B]^n (row-major), of |F(m, .)|^2
/// for row r. Requires a known bandwidth and M >= 4B + 1.
template <typename Real>
Eigen::VectorXcd row_power_spectrum(const PhaseSpaceField<Real>& F, Eigen::Index row) {
  if (F.bandwidth() < 0 || F.grid().points_per_axis() < 4 * F.bandwidth() + 1)
    throw InputError("field bandwidth unknown or under-resolved");
  const TorusGrid& grid = F.grid();
  const int n = grid.dimension(), M = grid.points_per_axis(), D = 2 * F.bandwidth();
  std::vector<std::complex<double>> buf(grid.size());
  for (Eigen::Index c = 0; c < grid.size(); ++c) buf[c] = double(std::norm(F.values()(row, c)));
  detail::fft_nd(buf.data(), n, M, false);
  SupportBox dbox(n, D);
  Eigen::VectorXcd rho(dbox.size());
  const double w = grid.weight();
  for (Eigen::Index i = 0; i < dbox.size(); ++i) rho[i] = buf[detail::alias_index(dbox.point(i), M)] * w;
  return rho;
}

/// Grid quadrature of |F|^2 over Sigma (half-open node membership). Tiles on
/// lattice points outside the field's box carry no mass.
template <typename Real>
double grid_mass_on(const PhaseSpaceField<Real>& F, const TileSet& sigma) {
  const SupportBox& box = F.box();
  const TorusGrid& grid = F.grid();
  const int n = box.dimension(), M = grid.points_per_axis();
  double s = 0;
  for (const Tile& t : sigma.tiles()) {
    if (!box.contains(t.m)) continue;
    const Eigen::Index row = box.index(t.m);
    std::vector<std::vector<int>> axis(n);
    bool any = true;
    for (int i = 0; i < n; ++i) {
      axis[i] = detail::nodes_in(t.lo[i], t.hi[i], M);
      any = any && !axis[i].empty();
    }
    if (!any) continue;
    std::vector<std::size_t> c(n, 0);
    Eigen::VectorXi idx(n);
    while (true) {
      for (int i = 0; i < n; ++i) idx[i] = axis[i][c[i]];
      s += double(std::norm(F.values()(row, grid.linear_index(idx))));
      int a = n - 1;
      while (a >= 0 && ++c[a] == axis[a].size()) c[a--] = 0;
      if (a < 0) break;
    }
  }
  return s * grid.weight();
}

/// sum_m int_{Sigma_m} |F(m, w)|^2 dw. Exact for fields with a resolved
/// bandwidth; grid quadrature otherwise.
template <typename Real>
double mass_on(const PhaseSpaceField<Real>& F, const TileSet& sigma) {
  if (sigma.empty()) return 0;
  if (sigma.dimension() != F.dimension()) throw InputError("tile set dimension mismatch");
  if (!detail::spectral_ok(F)) return grid_mass_on(F, sigma);
  const int n = F.dimension(), D = 2 * F.bandwidth();
  const SupportBox dbox(n, D);
  std::map<MultiIndex, Eigen::VectorXcd, MultiIndexLess> spectra;
  double s = 0;
  for (const Tile& t : sigma.tiles()) {
    if (!F.box().contains(t.m)) continue;
    auto it = spectra.find(t.m);
    if (it == spectra.end()) it = spectra.emplace(t.m, row_power_spectrum(F, F.box().index(t.m))).first;
    const Eigen::VectorXcd& rho = it->second;
    std::vector<std::vector<std::complex<double>>> I(n, std::vector<std::complex<double>>(2 * D + 1));
    for (int a = 0; a < n; ++a)
      for (int d = -D; d <= D; ++d) I[a][d + D] = detail::character_integral(d, t.lo[a], t.hi[a]);
    std::complex<double> acc = 0;
    for (Eigen::Index i = 0; i < dbox.size(); ++i) {
      const MultiIndex d = dbox.point(i);
      std::complex<double> w = rho[i];
      for (int a = 0; a < n; ++a) w *= I[a][d[a] + D];
      acc += w;
    }
    s += acc.real();
  }
  return std::max(0.0, s);
}

/// ||chi_{Sigma^c} F||^2 = ||F||^2 - mass_on(F, Sigma), clamped at 0.
template <typename Real>
double mass_off(const PhaseSpaceField<Real>& F, const TileSet& sigma) {
  return std::max(0.0, double(F.squared_norm()) - mass_on(F, sigma));
}

/// Weight functions for moments: |(m, w)|^e, |w|^e or |m|^e.
enum class MomentKind { Radial, Torus, Lattice };

namespace detail {

inline double moment_weight(MomentKind kind, double e, double m2, double w2) {
  switch (kind) {
    case MomentKind::Radial: return e == 0 ? 1.0 : std::pow(m2 + w2, 0.5 * e);
    case MomentKind::Torus: return e == 0 ? 1.0 : std::pow(w2, 0.5 * e);
    case MomentKind::Lattice: return e == 0 ? 1.0 : std::pow(m2, 0.5 * e);
  }
  return 0;
}

// W(d) = int phi(|m|^2, w) exp(2 pi i d.w) dw for d in [-D, D]^n, n in {1, 2}.
// phi is even in every coordinate, so W is real and a cosine transform over
// the positive orthant.
inline const Eigen::VectorXd& moment_weights(int n, int D, MomentKind kind, double e, std::int64_t m2) {
  using Key = std::tuple<int, int, int, double, std::int64_t>;
  static std::mutex mu;
  static std::map<Key, Eigen::VectorXd> cache;
  const Key key{n, D, int(kind), e, kind == MomentKind::Radial ? m2 : 0};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const QuadratureRule& rule = half_axis_rule(D);
  const Eigen::Index q = Eigen::Index(rule.nodes.size());
  Eigen::MatrixXd C(q, 2 * D + 1);
  for (Eigen::Index i = 0; i < q; ++i)
    for (int d = -D; d <= D; ++d)
      C(i, d + D) = rule.weights[i] * std::cos(2 * std::numbers::pi * d * rule.nodes[i]);
  Eigen::VectorXd W;
  if (n == 1) {
    Eigen::VectorXd phi(q);
    for (Eigen::Index i = 0; i < q; ++i) phi[i] = moment_weight(kind, e, double(m2), rule.nodes[i] * rule.nodes[i]);
    W = 2 * C.transpose() * phi;
  } else {
    Eigen::MatrixXd phi(q, q);
    for (Eigen::Index i = 0; i < q; ++i)
      for (Eigen::Index j = 0; j < q; ++j)
        phi(i, j) = moment_weight(kind, e, double(m2),
                                  rule.nodes[i] * rule.nodes[i] + rule.nodes[j] * rule.nodes[j]);
    const Eigen::MatrixXd full = 4 * C.transpose() * phi * C;
    W.resize(full.size());
    for (int a = 0; a <= 2 * D; ++a)
      for (int b = 0; b <= 2 * D; ++b) W[a * (2 * D + 1) + b] = full(a, b);
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(W)).first->second;
}

}  // namespace detail

/// sum_m int phi(m, w) |F(m, w)|^2 dw with phi = |(m, w)|^e, |w|^e or |m|^e.
template <typename Real>
double moment(const PhaseSpaceField<Real>& F, MomentKind kind, double exponent) {
  const SupportBox& box = F.box();
  const TorusGrid& grid = F.grid();
  double s = 0;
  if (kind == MomentKind::Lattice) {
    for (Eigen::Index r = 0; r < box.size(); ++r) {
      const double row = double(F.values().row(r).squaredNorm()) * grid.weight();
      if (row > 0) s += detail::moment_weight(kind, exponent, double(norm_sq(box.point(r))), 0) * row;
    }
    return s;
  }
  if (!detail::spectral_ok(F)) {
    std::vector<double> w2(grid.size());
    for (Eigen::Index c = 0; c < grid.size(); ++c) w2[c] = grid.node(c).squaredNorm();
    for (Eigen::Index r = 0; r < box.size(); ++r) {
      const double m2 = double(norm_sq(box.point(r)));
      for (Eigen::Index c = 0; c < grid.size(); ++c)
        s += detail::moment_weight(kind, exponent, m2, w2[c]) * double(std::norm(F.values()(r, c)));
    }
    return s * grid.weight();
  }
  const int n = F.dimension(), D = 2 * F.bandwidth();
  for (Eigen::Index r = 0; r < box.size(); ++r) {
    if (F.values().row(r).cwiseAbs().maxCoeff() == Real(0)) continue;
    const Eigen::VectorXcd rho = row_power_spectrum(F, r);
    const Eigen::VectorXd& W = detail::moment_weights(n, D, kind, exponent, norm_sq(box.point(r)));
    s += (rho.real().dot(W));
  }
  return s;
}

/// rho_s(F) = (sum_m int |(m, w)|^s |F|^2 dw)^(1/s).
template <typename Real>
double dispersion(const PhaseSpaceField<Real>& F, double s) {
  if (!(s > 0)) throw InputError("dispersion order s must be positive");
  const double mom = moment(F, MomentKind::Radial, s);
  return mom <= 0 ? 0.0 : std::pow(mom, 1 / s);
}

namespace detail {

// Rows resampled on a finer grid by trigonometric interpolation (zero-padded
// FFT), so non-polynomial integrands see more nodes. Fields without a known
// bandwidth are returned unchanged.
template <typename Real>
PhaseSpaceField<double> refined(const PhaseSpaceField<Real>& F, int min_points = 0) {
  const int n = F.dimension(), M = F.grid().points_per_axis();
  if (F.bandwidth() < 0 || n > 2 || M < 2 * F.bandwidth() + 1) {
    return PhaseSpaceField<double>(F.box(), F.grid(), F.values().template cast<std::complex<double>>(),
                                   F.bandwidth());
  }
  int L = n == 1 ? std::max(16 * M, 1024) : std::max(4 * M, 128);
  while (L < min_points) L *= 2;
  const TorusGrid fine(n, L);
  const SupportBox fbox(n, F.bandwidth());
  PhaseSpaceField<double> out(F.box(), fine, F.bandwidth());
  std::vector<std::complex<double>> buf(F.grid().size()), big(fine.size());
  for (Eigen::Index r = 0; r < F.box().size(); ++r) {
    if (F.values().row(r).cwiseAbs().maxCoeff() == Real(0)) continue;
    for (Eigen::Index c = 0; c < F.grid().size(); ++c) buf[c] = std::complex<double>(F.values()(r, c));
    fft_nd(buf.data(), n, M, false);
    std::fill(big.begin(), big.end(), std::complex<double>(0));
    const double scale = F.grid().weight();
    for (Eigen::Index i = 0; i < fbox.size(); ++i) {
      const MultiIndex k = fbox.point(i);
      big[alias_index(k, L)] = buf[alias_index(k, M)] * scale;
    }
    fft_nd(big.data(), n, L, true);
    for (Eigen::Index c = 0; c < fine.size(); ++c) out.values()(r, c) = big[c];
  }
  return out;
}

}  // namespace detail

/// ||F||_{L^p}; p = infinity gives the largest sample on the refined grid.
/// Even integer p is exact for resolved-bandwidth fields.
template <typename Real>
double lp_norm(const PhaseSpaceField<Real>& F, double p) {
  if (!(p >= 1)) throw InputError("L^p norm needs p >= 1");
  if (p == 2) return F.norm();
  const int min_points = std::isfinite(p) && F.bandwidth() >= 0 ? int(std::ceil(p)) * F.bandwidth() + 1 : 0;
  const PhaseSpaceField<double> G = detail::refined(F, min_points);
  if (std::isinf(p)) return G.sup_norm();
  double s = 0;
  for (Eigen::Index i = 0; i < G.values().size(); ++i) s += std::pow(std::abs(G.values()(i)), p);
  return std::pow(s * G.grid().weight(), 1 / p);
}

/// E_k(|F|^2) = -sum_m int rho ln rho dw with rho = |F|^2 and 0 ln 0 = 0.
template <typename Real>
double entropy_k(const PhaseSpaceField<Real>& F) {
  const PhaseSpaceField<double> G = detail::refined(F);
  double s = 0;
  for (Eigen::Index i = 0; i < G.values().size(); ++i) {
    const double rho = std::norm(G.values()(i));
    if (rho > 1e-300) s -= rho * std::log(rho);
  }
  return s * G.grid().weight();
}

}  // namespace lstft
