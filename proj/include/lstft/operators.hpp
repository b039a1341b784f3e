#pragma once

// The projections P_Sigma (multiplication by chi_Sigma) and P_g (onto the
// range of V_g), and the concentration operator P_Sigma P_g.
//
// Sigma is discretized by its grid indicator. The operator's lattice domain
// is widened to every k that some T_m g with m in Sigma can reach, which makes
// its norms those of the untruncated operator for the grid-snapped set.

#include "lstft/functionals.hpp"
#include "lstft/stft.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <random>

namespace lstft {

/// chi_Sigma F on the field's own box and grid.
template <typename Real>
PhaseSpaceField<Real> project_sigma(const PhaseSpaceField<Real>& F, const TileSet& sigma) {
  const PhaseSpaceField<Real> chi = indicator_on_grid<Real>(sigma, F.box(), F.grid());
  PhaseSpaceField<Real> out(F.box(), F.grid(), F.values().cwiseProduct(chi.values()));
  return out;
}

/// V_g V_g^* F / ||g||^2: the orthogonal projection onto V_g(l^2) restricted
/// to signals on the plan's signal box.
template <typename Real>
PhaseSpaceField<Real> project_g(const PhaseSpaceField<Real>& F, const LatticeSignal<Real>& g, const StftPlan& plan) {
  if (g.is_zero()) throw InputError("window must be non-zero");
  LatticeSignal<Real> h = stft_adjoint(F, g, plan);
  h *= std::complex<Real>(Real(1) / g.squared_norm());
  return stft(h, g, plan);
}

struct OpNormResult {
  double value = 0;
  int iterations = 0;
  double residual = 0;
};

class ConcentrationOperator {
 public:
  /// The plan's grid is kept when it resolves the widened domain, otherwise
  /// the default grid for that domain is used.
  ConcentrationOperator(LatticeSignal<double> g, TileSet sigma, const StftPlan& plan)
      : g_(std::move(g)), sigma_(std::move(sigma)), plan_(widened(g_, sigma_, plan)) {
    if (g_.is_zero()) throw InputError("window must be non-zero");
    if (!sigma_.empty() && sigma_.dimension() != plan.dimension())
      throw InputError("tile set dimension mismatch");
    chi_ = indicator_on_grid<double>(sigma_, plan_.output_box(), plan_.grid()).values().real();
  }

  const LatticeSignal<double>& window() const { return g_; }
  const TileSet& sigma() const { return sigma_; }
  const StftPlan& plan() const { return plan_; }

  /// Measure of the grid-snapped Sigma the operator actually sees.
  double grid_measure() const { return lstft::grid_measure(sigma_, plan_.grid()); }

  /// chi_Sigma F.
  PhaseSpaceField<double> mask(const PhaseSpaceField<double>& F) const {
    return PhaseSpaceField<double>(F.box(), F.grid(), F.values().cwiseProduct(chi_.cast<std::complex<double>>()),
                                   -1);
  }

  /// P_g P_Sigma P_g applied to a field in the range of V_g.
  PhaseSpaceField<double> apply(const PhaseSpaceField<double>& F) const {
    return project_g(mask(F), g_, plan_);
  }

  /// V_g^* chi_Sigma V_g / ||g||^2 on signals; same spectrum as P_g P_Sigma P_g.
  LatticeSignal<double> apply_signal(const LatticeSignal<double>& x) const {
    LatticeSignal<double> y = stft_adjoint(mask(stft(x, g_, plan_)), g_, plan_);
    y *= 1 / g_.squared_norm();
    return y;
  }

 private:
  static StftPlan widened(const LatticeSignal<double>& g, const TileSet& sigma, const StftPlan& plan) {
    const int Ng = std::max(plan.window_box().half_width(), g.support_half_width());
    const int reach = sigma.empty() ? 0 : sigma.lattice_extent() + Ng;
    const int N = std::max(plan.signal_box().half_width(), reach);
    const int M = plan.grid().points_per_axis() >= 4 * N + 2 ? plan.grid().points_per_axis() : default_grid_size(N);
    return StftPlan(plan.dimension(), N, Ng, M);
  }

  LatticeSignal<double> g_;
  TileSet sigma_;
  StftPlan plan_;
  Eigen::MatrixXd chi_;
};

/// ||P_Sigma P_g||_HS^2 = sum over grid nodes (m, w_j) in Sigma of
/// M^-n ||K_g(.; (m, w_j))||^2. Modulation only shifts |K| along the grid, so
/// one kernel slice per lattice point suffices.
inline double hs_norm_sq(const ConcentrationOperator& op) {
  const TileSet& sigma = op.sigma();
  if (sigma.empty()) return 0;
  const StftPlan& plan = op.plan();
  const LatticeSignal<double>& g = op.window();
  double s = 0;
  for (const MultiIndex& m : sigma.lattice_points()) {
    const TileSet row(sigma.dimension(), sigma.fiber(m));
    const double nodes = lstft::grid_measure(row, plan.grid());
    if (nodes == 0) continue;
    PhaseSpaceField<double> K = stft(translate(g, m), g, plan);
    s += nodes * K.squared_norm() / (g.squared_norm() * g.squared_norm());
  }
  return s;
}

/// sqrt of the top eigenvalue of P_g P_Sigma P_g by power iteration on
/// phase-space fields. Stops when the Rayleigh quotient changes by less than
/// tol relative; throws NonConvergence after max_iter steps.
inline OpNormResult op_norm(const ConcentrationOperator& op, double tol = 1e-12, int max_iter = 100000,
                            std::uint64_t seed = 0x5eed) {
  if (!(tol > 0)) throw InputError("tolerance must be positive");
  OpNormResult result;
  if (op.sigma().empty() || op.grid_measure() == 0) return result;
  const StftPlan& plan = op.plan();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  LatticeSignal<double> x(plan.signal_box());
  for (Eigen::Index i = 0; i < x.values().size(); ++i) x.values()[i] = {gauss(rng), gauss(rng)};
  PhaseSpaceField<double> F = stft(x, op.window(), plan);
  double lambda = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const double norm = F.norm();
    if (norm == 0) return result;
    F *= std::complex<double>(1 / norm);
    const PhaseSpaceField<double> G = op.apply(F);
    // For F in the range, <P_g chi F, F> = ||chi F||^2.
    const double next = std::real(phase_space_inner(G, F));
    PhaseSpaceField<double> R = G;
    R.values() -= next * F.values();
    result.residual = R.norm();
    result.iterations = it;
    if (next == 0) return result;
    const bool done = it > 1 && std::abs(next - lambda) <= tol * next;
    lambda = next;
    F = G;
    if (done) {
      result.value = std::sqrt(std::max(0.0, lambda));
      return result;
    }
  }
  throw NonConvergence("power iteration did not converge", std::sqrt(std::max(0.0, lambda)), result.residual,
                       max_iter, F.values());
}

/// The same norm from a dense eigensolve of V^* chi V / ||g||^2 on the domain.
inline double op_norm_dense(const ConcentrationOperator& op) {
  const StftPlan& plan = op.plan();
  const SupportBox& box = plan.signal_box();
  if (box.size() > 4096) throw InputError("dense path limited to 4096 lattice points");
  Eigen::MatrixXcd H(box.size(), box.size());
  for (Eigen::Index j = 0; j < box.size(); ++j) {
    const auto e = LatticeSignal<double>::delta(box, box.point(j));
    H.col(j) = op.apply_signal(e).values();
  }
  H = (0.5 * (H + H.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

/// c(Sigma, g) = 1 / sqrt(1 - ||P_Sigma P_g||^2).
inline double benedicks_constant(double op_norm_value) {
  if (!(op_norm_value < 1 - 1e-9)) throw InputError("operator norm too close to 1; bound vacuous");
  return 1 / std::sqrt(1 - op_norm_value * op_norm_value);
}

inline double benedicks_constant(const ConcentrationOperator& op, double tol = 1e-12, int max_iter = 100000,
                                 std::uint64_t seed = 0x5eed) {
  return benedicks_constant(op_norm(op, tol, max_iter, seed).value);
}

}  // namespace lstft
