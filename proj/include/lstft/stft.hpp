#pragma once

// The short-time Fourier transform on Z^n x T^n,
//
//   V_g f(m, w) = <f, M_w T_m g> = sum_k f(k) conj(g(k - m)) exp(-2 pi i w.k),
//
// its adjoint, the inversion formula and the reproducing kernel.

#include "lstft/fourier.hpp"
#include "lstft/lattice.hpp"

#include <Eigen/Core>

#include <complex>
#include <numbers>
#include <vector>

namespace lstft {

/// Truncation bookkeeping for one STFT: f lives in [-N_f, N_f]^n, the window
/// in [-N_g, N_g]^n, and V_g f vanishes outside [-(N_f + N_g), N_f + N_g]^n.
/// Rows of V_g f have w-bandwidth N_f, so M >= 4 N_f + 2 makes |V_g f|^2 and
/// every product of two such rows exactly integrable on the grid.
class StftPlan {
 public:
  StftPlan(int dimension, int signal_half_width, int window_half_width, int grid_points = 0)
      : signal_(dimension, signal_half_width),
        window_(dimension, window_half_width),
        output_(dimension, signal_half_width + window_half_width),
        grid_(dimension, grid_points > 0 ? grid_points : default_grid_size(signal_half_width)) {
    if (grid_.points_per_axis() < 4 * signal_half_width + 2)
      throw InputError("grid under-resolves signal bandwidth: need M >= 4 N_f + 2");
  }

  int dimension() const { return signal_.dimension(); }
  const SupportBox& signal_box() const { return signal_; }
  const SupportBox& window_box() const { return window_; }
  const SupportBox& output_box() const { return output_; }
  const TorusGrid& grid() const { return grid_; }

 private:
  SupportBox signal_;
  SupportBox window_;
  SupportBox output_;
  TorusGrid grid_;
};

template <typename Real>
struct PhasePoint {
  MultiIndex m;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> w;
};

/// T_k f(m) = f(m - k). The box grows by max|k_i|.
template <typename Real>
LatticeSignal<Real> translate(const LatticeSignal<Real>& f, const MultiIndex& k) {
  if (k.size() != f.dimension()) throw InputError("shift dimension mismatch");
  SupportBox box(f.dimension(), f.box().half_width() + max_abs(k));
  LatticeSignal<Real> out(box);
  for (Eigen::Index i = 0; i < f.values().size(); ++i)
    out.values()[box.index(f.box().point(i) + k)] = f.values()[i];
  return out;
}

/// M_w f(m) = exp(2 pi i w.m) f(m).
template <typename Real>
LatticeSignal<Real> modulate(const LatticeSignal<Real>& f, const Eigen::Matrix<Real, Eigen::Dynamic, 1>& w) {
  if (w.size() != f.dimension()) throw InputError("frequency dimension mismatch");
  LatticeSignal<Real> out = f;
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    const Real phase = 2 * std::numbers::pi_v<Real> * w.dot(f.box().point(i).template cast<Real>());
    out.values()[i] *= std::polar(Real(1), phase);
  }
  return out;
}

namespace detail {

template <typename Real>
LatticeSignal<Real> fit_into(const LatticeSignal<Real>& s, const SupportBox& box, const char* what) {
  if (s.dimension() != box.dimension()) throw InputError(std::string(what) + " dimension does not match the plan");
  if (s.box() == box) return s;
  if (s.support_half_width() > box.half_width())
    throw InputError(std::string(what) + " support exceeds the plan box");
  return s.embedded(box.half_width());
}

}  // namespace detail

/// V_g f on the plan's output box and grid, one FFT per lattice row.
template <typename Real>
PhaseSpaceField<Real> stft(const LatticeSignal<Real>& f, const LatticeSignal<Real>& g, const StftPlan& plan) {
  if (g.is_zero()) throw InputError("window must be non-zero");
  const LatticeSignal<Real> fs = detail::fit_into(f, plan.signal_box(), "signal");
  const LatticeSignal<Real> gs = detail::fit_into(g, plan.window_box(), "window");
  const SupportBox& sbox = plan.signal_box();
  const SupportBox& wbox = plan.window_box();
  const SupportBox& obox = plan.output_box();
  const TorusGrid& grid = plan.grid();
  const int M = grid.points_per_axis();

  std::vector<Eigen::Index> nz;
  std::vector<Eigen::Index> alias;
  for (Eigen::Index i = 0; i < sbox.size(); ++i)
    if (fs.values()[i] != std::complex<Real>(0)) {
      nz.push_back(i);
      alias.push_back(detail::alias_index(sbox.point(i), M));
    }

  PhaseSpaceField<Real> V(obox, grid, sbox.half_width());
  std::vector<std::complex<Real>> buf(grid.size());
  for (Eigen::Index r = 0; r < obox.size(); ++r) {
    const MultiIndex m = obox.point(r);
    std::fill(buf.begin(), buf.end(), std::complex<Real>(0));
    bool any = false;
    for (std::size_t t = 0; t < nz.size(); ++t) {
      const MultiIndex j = sbox.point(nz[t]) - m;
      if (!wbox.contains(j)) continue;
      const std::complex<Real> gj = gs.values()[wbox.index(j)];
      if (gj == std::complex<Real>(0)) continue;
      buf[alias[t]] += fs.values()[nz[t]] * std::conj(gj);
      any = true;
    }
    if (!any) continue;
    detail::fft_nd(buf.data(), grid.dimension(), M, false);
    for (Eigen::Index c = 0; c < grid.size(); ++c) V.values()(r, c) = buf[c];
  }
  return V;
}

/// V_g f at an arbitrary phase-space point by direct summation.
template <typename Real>
std::complex<Real> stft_at(const LatticeSignal<Real>& f, const LatticeSignal<Real>& g, const PhasePoint<Real>& z) {
  std::complex<Real> s(0);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    if (f.values()[i] == std::complex<Real>(0)) continue;
    const MultiIndex k = f.box().point(i);
    const std::complex<Real> gk = g(k - z.m);
    if (gk == std::complex<Real>(0)) continue;
    const Real phase = -2 * std::numbers::pi_v<Real> * z.w.dot(k.template cast<Real>());
    s += f.values()[i] * std::conj(gk) * std::polar(Real(1), phase);
  }
  return s;
}

/// exp(-2 pi i w.m) (f * M_w g~)(m) with g~(j) = conj(g(-j)); equals V_g f(m, w).
template <typename Real>
std::complex<Real> stft_convolution_form(const LatticeSignal<Real>& f, const LatticeSignal<Real>& g,
                                         const PhasePoint<Real>& z) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  std::complex<Real> conv(0);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    const MultiIndex k = f.box().point(i);
    const MultiIndex j = z.m - k;
    const std::complex<Real> g_tilde = std::conj(g(MultiIndex(-j)));
    conv += f.values()[i] * std::polar(Real(1), two_pi * z.w.dot(j.template cast<Real>())) * g_tilde;
  }
  return std::polar(Real(1), -two_pi * z.w.dot(z.m.template cast<Real>())) * conv;
}

/// exp(-2 pi i w.m) (f * conj(M_w g))(m), the convolution form without the
/// window reflection. Agrees with V_g f only in special cases; kept so the
/// discrepancy can be measured.
template <typename Real>
std::complex<Real> stft_unreflected_convolution_form(const LatticeSignal<Real>& f, const LatticeSignal<Real>& g,
                                                     const PhasePoint<Real>& z) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  std::complex<Real> conv(0);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    const MultiIndex k = f.box().point(i);
    const MultiIndex j = z.m - k;
    conv += f.values()[i] * std::conj(std::polar(Real(1), two_pi * z.w.dot(j.template cast<Real>())) * g(j));
  }
  return std::polar(Real(1), -two_pi * z.w.dot(z.m.template cast<Real>())) * conv;
}

/// conj((M_w conj(f) * g)(m)), the conjugated convolution form. Also lacks
/// the reflection of g.
template <typename Real>
std::complex<Real> stft_conjugated_convolution_form(const LatticeSignal<Real>& f, const LatticeSignal<Real>& g,
                                                    const PhasePoint<Real>& z) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  std::complex<Real> conv(0);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    const MultiIndex k = f.box().point(i);
    conv += std::polar(Real(1), two_pi * z.w.dot(k.template cast<Real>())) * std::conj(f.values()[i]) * g(z.m - k);
  }
  return std::conj(conv);
}

/// <F, G> = sum_m M^-n sum_j F(m, w_j) conj(G(m, w_j)).
template <typename Real>
std::complex<Real> phase_space_inner(const PhaseSpaceField<Real>& F, const PhaseSpaceField<Real>& G) {
  if (!F.same_shape(G)) throw InputError("phase-space fields have different shapes");
  return (F.values().array() * G.values().array().conjugate()).sum() * F.grid().template weight<Real>();
}

/// k -> sum_m M^-n sum_j F(m, w_j) exp(2 pi i w_j.k) gamma(k - m) on the
/// plan's signal box: the adjoint of f -> V_gamma f.
template <typename Real>
LatticeSignal<Real> stft_adjoint(const PhaseSpaceField<Real>& F, const LatticeSignal<Real>& gamma,
                                 const StftPlan& plan) {
  if (F.box() != plan.output_box() || F.grid() != plan.grid())
    throw InputError("field shape does not match the plan");
  const SupportBox& sbox = plan.signal_box();
  const SupportBox& obox = plan.output_box();
  const TorusGrid& grid = plan.grid();
  const int M = grid.points_per_axis();
  const Real weight = grid.template weight<Real>();
  LatticeSignal<Real> out(sbox);
  std::vector<std::complex<Real>> buf(grid.size());
  std::vector<Eigen::Index> alias(sbox.size());
  for (Eigen::Index i = 0; i < sbox.size(); ++i) alias[i] = detail::alias_index(sbox.point(i), M);
  for (Eigen::Index r = 0; r < obox.size(); ++r) {
    if (F.values().row(r).cwiseAbs().maxCoeff() == Real(0)) continue;
    const MultiIndex m = obox.point(r);
    for (Eigen::Index c = 0; c < grid.size(); ++c) buf[c] = F.values()(r, c);
    detail::fft_nd(buf.data(), grid.dimension(), M, true);
    for (Eigen::Index i = 0; i < sbox.size(); ++i) {
      const std::complex<Real> gk = gamma(sbox.point(i) - m);
      if (gk == std::complex<Real>(0)) continue;
      out.values()[i] += buf[alias[i]] * weight * gk;
    }
  }
  return out;
}

/// f = stft_adjoint(V_g f, gamma) / <gamma, g>.
template <typename Real>
LatticeSignal<Real> invert(const PhaseSpaceField<Real>& F, const LatticeSignal<Real>& g,
                           const LatticeSignal<Real>& gamma, const StftPlan& plan) {
  const std::complex<Real> pairing = inner(gamma, g);
  if (!(std::abs(pairing) > Real(1e-10) * g.norm_l2() * gamma.norm_l2()))
    throw InputError("⟨γ, g⟩ too small for stable inversion");
  LatticeSignal<Real> f = stft_adjoint(F, gamma, plan);
  f.values() /= pairing;
  return f;
}

template <typename Real>
LatticeSignal<Real> invert(const PhaseSpaceField<Real>& F, const LatticeSignal<Real>& g, const StftPlan& plan) {
  return invert(F, g, g, plan);
}

/// K_g((m', w'); (m, w)) = <M_w T_m g, M_w' T_m' g> / ||g||^2, evaluated directly.
template <typename Real>
std::complex<Real> reproducing_kernel(const LatticeSignal<Real>& g, const PhasePoint<Real>& at,
                                      const PhasePoint<Real>& eval_at) {
  if (g.is_zero()) throw InputError("window must be non-zero");
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  std::complex<Real> s(0);
  for (Eigen::Index i = 0; i < g.values().size(); ++i) {
    if (g.values()[i] == std::complex<Real>(0)) continue;
    const MultiIndex k = g.box().point(i) + at.m;
    const std::complex<Real> other = g(k - eval_at.m);
    if (other == std::complex<Real>(0)) continue;
    const Real phase = two_pi * (at.w - eval_at.w).dot(k.template cast<Real>());
    s += g.values()[i] * std::conj(other) * std::polar(Real(1), phase);
  }
  return s / g.squared_norm();
}

/// The kernel slice K_g((., .); (m, w)) = V_g(M_w T_m g) / ||g||^2 sampled on
/// the plan. The plan's signal box must contain m + supp g.
template <typename Real>
PhaseSpaceField<Real> kernel_field(const LatticeSignal<Real>& g, const PhasePoint<Real>& at, const StftPlan& plan) {
  if (g.is_zero()) throw InputError("window must be non-zero");
  LatticeSignal<Real> shifted = modulate(translate(g, at.m), at.w);
  PhaseSpaceField<Real> K = stft(shifted, g, plan);
  K *= std::complex<Real>(Real(1) / g.squared_norm());
  return K;
}

}  // namespace lstft
