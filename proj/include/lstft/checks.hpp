#pragma once

// One checker per inequality or identity. Each evaluates both sides on the
// given data and returns a judged InequalityReport; slack >= 0 means the
// statement holds. Absolute tolerances are the relative levels below times
// the natural scale of the compared quantities.

#include "lstft/constants.hpp"
#include "lstft/functionals.hpp"
#include "lstft/operators.hpp"
#include "lstft/report.hpp"
#include "lstft/stft.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace lstft {

namespace tolerance {
inline constexpr double identity = 1e-12;
inline constexpr double inversion = 1e-10;
inline constexpr double trig = 1e-8;
inline constexpr double quadrature = 1e-6;
}  // namespace tolerance

namespace detail {

inline void require_nonzero(const LatticeSignal<double>& s, const char* what) {
  if (s.is_zero()) throw InputError(std::string(what) + " must be non-zero");
}

inline void require_orthonormal(const std::vector<LatticeSignal<double>>& phis) {
  for (std::size_t i = 0; i < phis.size(); ++i)
    for (std::size_t j = i; j < phis.size(); ++j) {
      const std::complex<double> v = inner(phis[i], phis[j]);
      if (std::abs(v - (i == j ? 1.0 : 0.0)) > 1e-10)
        throw InputError("family is not orthonormal: <phi_" + std::to_string(i) + ", phi_" + std::to_string(j) +
                         "> = " + std::to_string(v.real()) + (v.imag() < 0 ? "" : "+") + std::to_string(v.imag()) +
                         "i");
    }
}

inline void require_unit(const LatticeSignal<double>& g) {
  if (std::abs(g.norm_l2() - 1) > 1e-10) throw InputError("window must have unit norm");
}

inline InequalityReport base(const char* name, double lhs, double rhs, double slack, double tol) {
  InequalityReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  r.tolerance = tol;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Identities on the STFT.

/// ||V_g f||^2 = ||f||^2 ||g||^2.
inline InequalityReport check_plancherel(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                         const StftPlan& plan) {
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const double lhs = V.squared_norm(), rhs = f.squared_norm() * g.squared_norm();
  auto r = detail::base("plancherel", lhs, rhs, -std::abs(lhs - rhs), tolerance::identity * std::max(rhs, 1e-300));
  r.witness.signals = {{"f", f}, {"g", g}};
  return r.judge();
}

/// <V_g1 f1, V_g2 f2> = <f1, f2> conj(<g1, g2>).
inline InequalityReport check_orthogonality(const LatticeSignal<double>& f1, const LatticeSignal<double>& f2,
                                            const LatticeSignal<double>& g1, const LatticeSignal<double>& g2,
                                            const StftPlan& plan) {
  const std::complex<double> lhs = phase_space_inner(stft(f1, g1, plan), stft(f2, g2, plan));
  const std::complex<double> rhs = inner(f1, f2) * inner(g2, g1);
  const double scale = f1.norm_l2() * f2.norm_l2() * g1.norm_l2() * g2.norm_l2();
  auto r = detail::base("orthogonality", std::abs(lhs), std::abs(rhs), -std::abs(lhs - rhs),
                        tolerance::identity * std::max(scale, 1e-300));
  r.extras = {{"lhs_re", lhs.real()}, {"lhs_im", lhs.imag()}, {"rhs_re", rhs.real()}, {"rhs_im", rhs.imag()}};
  r.witness.signals = {{"f1", f1}, {"f2", f2}, {"g1", g1}, {"g2", g2}};
  return r.judge();
}

/// ||invert(V_g f, g, gamma) - f|| against ||f||.
inline InequalityReport check_inversion(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                        const LatticeSignal<double>& gamma, const StftPlan& plan) {
  const LatticeSignal<double> back = invert(stft(f, g, plan), g, gamma, plan);
  const LatticeSignal<double> fs = f.embedded(plan.signal_box().half_width());
  const double err = (back.values() - fs.values()).norm();
  auto r = detail::base("inversion", err, 0, -err, tolerance::inversion * std::max(f.norm_l2(), 1e-300));
  r.witness.signals = {{"f", f}, {"g", g}, {"gamma", gamma}};
  return r.judge();
}

/// max |K_g(z'; z)| <= 1 over the given pairs, plus the reproducing identity
/// V_g f(z) = <V_g f, K_g(.; z)> at the first point when f is given.
inline InequalityReport check_kernel(const LatticeSignal<double>& g,
                                     const std::vector<std::pair<PhasePoint<double>, PhasePoint<double>>>& pairs,
                                     const LatticeSignal<double>* f = nullptr) {
  double worst = 0;
  for (const auto& [a, b] : pairs) worst = std::max(worst, std::abs(reproducing_kernel(g, a, b)));
  auto r = detail::base("kernel", worst, 1, 1 - worst, tolerance::identity);
  r.witness.signals = {{"g", g}};
  for (const auto& [a, b] : pairs) {
    r.witness.points.push_back(a);
    r.witness.points.push_back(b);
  }
  if (f != nullptr && !pairs.empty()) {
    const PhasePoint<double>& z = pairs.front().first;
    const int Nf = std::max(f->box().half_width(), max_abs(z.m) + g.box().half_width());
    const StftPlan plan(g.dimension(), Nf, g.box().half_width());
    const double err = std::abs(phase_space_inner(stft(*f, g, plan), kernel_field(g, z, plan)) - stft_at(*f, g, z));
    r.extras["reproducing_error"] = err;
    r.witness.signals.emplace("f", *f);
    if (err > tolerance::inversion * f->norm_l2() * g.norm_l2()) {
      r.notes.push_back("reproducing identity off by " + std::to_string(err));
      r.slack = std::min(r.slack, -err);
      r.tolerance = std::min(r.tolerance, tolerance::inversion * f->norm_l2() * g.norm_l2());
    }
  }
  return r.judge();
}

/// ||V_g f||_{L^p} <= ||f|| ||g||, p in [2, infinity].
inline InequalityReport check_lp_bound(const LatticeSignal<double>& f, const LatticeSignal<double>& g, double p,
                                       const StftPlan& plan) {
  if (!(p >= 2)) throw InputError("L^p bound needs p >= 2");
  const double lhs = lp_norm(stft(f, g, plan), p), rhs = f.norm_l2() * g.norm_l2();
  const bool exact = std::isinf(p) || (p == std::floor(p) && int(p) % 2 == 0);
  auto r = detail::base("lp_bound", lhs, rhs, rhs - lhs, (exact ? tolerance::identity : tolerance::trig) * rhs);
  r.witness.params["p"] = std::isinf(p) ? -1 : p;
  r.witness.signals = {{"f", f}, {"g", g}};
  if (std::isinf(p)) r.notes.push_back("p = infinity recorded as p = -1");
  return r.judge();
}

/// V_g f(m, w) = exp(-2 pi i w.m)(f * M_w g~)(m), g~(j) = conj(g(-j)), at the
/// given points. The unreflected and conjugated variants are measured too.
inline InequalityReport check_convolution(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                          const std::vector<PhasePoint<double>>& points) {
  double worst = 0, unreflected = 0, conjugated = 0;
  for (const auto& z : points) {
    const std::complex<double> v = stft_at(f, g, z);
    worst = std::max(worst, std::abs(stft_convolution_form(f, g, z) - v));
    unreflected = std::max(unreflected, std::abs(stft_unreflected_convolution_form(f, g, z) - v));
    conjugated = std::max(conjugated, std::abs(stft_conjugated_convolution_form(f, g, z) - v));
  }
  const double scale = f.norm_l1() * g.values().cwiseAbs().maxCoeff();
  auto r = detail::base("convolution", worst, 0, -worst, tolerance::identity * std::max(scale, 1e-300));
  r.extras = {{"unreflected_error", unreflected}, {"conjugated_error", conjugated}};
  if (unreflected > r.tolerance)
    r.notes.push_back("exp(-2 pi i w.m)(f * conj(M_w g))(m) differs from V_g f; the window must be reflected");
  if (conjugated > r.tolerance)
    r.notes.push_back("conj((M_w conj(f) * g)(m)) differs from V_g f; the window must be reflected");
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.points = points;
  return r.judge();
}

// ---------------------------------------------------------------------------
// Operator statements.

/// ||P_Sigma P_g||_HS^2 equals the grid measure of Sigma.
inline InequalityReport check_hs_identity(const ConcentrationOperator& op) {
  const double hs = hs_norm_sq(op), gm = op.grid_measure();
  auto r = detail::base("hs_identity", hs, gm, -std::abs(hs - gm), tolerance::trig * std::max(1.0, gm));
  r.extras = {{"measure", op.sigma().measure()}, {"grid_points", double(op.plan().grid().points_per_axis())}};
  r.witness.signals = {{"g", op.window()}};
  r.witness.sigma = op.sigma();
  return r.judge();
}

/// ||P_Sigma P_g||_op <= ||P_Sigma P_g||_HS.
inline InequalityReport check_op_norm_bound(const ConcentrationOperator& op, std::uint64_t seed = 0x5eed) {
  const OpNormResult res = op_norm(op, 1e-12, 100000, seed);
  const double hs = std::sqrt(hs_norm_sq(op));
  auto r = detail::base("op_norm_bound", res.value, hs, hs - res.value, tolerance::quadrature);
  r.extras = {{"iterations", double(res.iterations)}, {"residual", res.residual}};
  r.witness.signals = {{"g", op.window()}};
  r.witness.sigma = op.sigma();
  return r.judge();
}

/// ||f|| ||g|| <= c(Sigma, g) ||chi_{Sigma^c} V_g f|| with c from the operator
/// norm. Masses use the operator's grid-snapped Sigma.
inline InequalityReport check_benedicks(const LatticeSignal<double>& f, const ConcentrationOperator& op, double c) {
  detail::require_nonzero(f, "signal");
  const PhaseSpaceField<double> V = stft(f, op.window(), op.plan());
  const double outside = std::sqrt(std::max(0.0, V.squared_norm() - grid_mass_on(V, op.sigma())));
  const double rhs = f.norm_l2() * op.window().norm_l2();
  auto r = detail::base("benedicks", c * outside, rhs, c * outside - rhs, 1e-9 * rhs);
  r.extras = {{"constant", c}};
  r.witness.signals = {{"f", f}, {"g", op.window()}};
  r.witness.sigma = op.sigma();
  return r.judge();
}

// ---------------------------------------------------------------------------
// Concentration inequalities.

/// sum_n (1 - ||chi_{Sigma^c} V_g phi_n||) <= (nu x mu)(Sigma) for an
/// orthonormal family; g is normalized first.
inline InequalityReport check_orthonormal_sum(const std::vector<LatticeSignal<double>>& phis,
                                              const LatticeSignal<double>& g, const TileSet& sigma,
                                              const StftPlan& plan) {
  detail::require_nonzero(g, "window");
  detail::require_orthonormal(phis);
  LatticeSignal<double> gn = g;
  gn *= 1 / g.norm_l2();
  double lhs = 0;
  for (const auto& phi : phis) lhs += 1 - std::sqrt(mass_off(stft(phi, gn, plan), sigma));
  const double rhs = measure(sigma);
  auto r = detail::base("orthonormal_sum", lhs, rhs, rhs - lhs,
                        tolerance::trig * std::max<double>(1, double(phis.size())));
  r.witness.signals = {{"g", g}};
  r.witness.family = phis;
  r.witness.sigma = sigma;
  return r.judge();
}

/// If sum_{Sigma} |V_g f|^2 >= (1 - eps)||f||^2||g||^2 then (nu x mu)(Sigma) >= 1 - eps.
inline InequalityReport check_donoho_stark(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                           const TileSet& sigma, double eps, const StftPlan& plan) {
  if (!sigma.is_product_form()) throw InputError("theorem requires product-form Σ");
  if (!(eps >= 0 && eps < 1)) throw InputError("eps must lie in [0, 1)");
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const double scale = f.squared_norm() * g.squared_norm();
  const double mass = mass_on(V, sigma);
  const double mu = measure(sigma);
  auto r = detail::base("donoho_stark", mu, 1 - eps, mu - (1 - eps), tolerance::trig);
  r.extras = {{"mass_on_sigma", mass}, {"hypothesis_rhs", (1 - eps) * scale}};
  r.witness.params["eps"] = eps;
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.sigma = sigma;
  r.judge();
  if (mass < (1 - eps) * scale - 1e-10 * std::max(scale, 1.0)) {
    r.status = Status::NotApplicable;
    r.notes.push_back("hypothesis fails: mass on Sigma below (1 - eps)||f||^2||g||^2");
  }
  return r;
}

/// ||chi_{Sigma^c} V_g f|| >= sqrt(1 - (nu x mu)(Sigma)) ||f|| ||g||.
inline InequalityReport check_small_set(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                        const TileSet& sigma, const StftPlan& plan) {
  const double mu = measure(sigma);
  if (!(mu < 1)) throw InputError("proposition requires (ν⊗μ)(Σ) < 1");
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const double lhs = std::sqrt(mass_off(V, sigma));
  const double rhs = std::sqrt(1 - mu) * f.norm_l2() * g.norm_l2();
  auto r = detail::base("small_set", lhs, rhs, lhs - rhs, tolerance::trig * std::max(1.0, f.norm_l2() * g.norm_l2()));
  r.extras = {{"measure", mu}};
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.sigma = sigma;
  return r.judge();
}

namespace detail {

// eps_Sigma^2 = ||chi_{Sigma^c} V||^2 / ||V||^2.
inline double eps_sigma_sq(const PhaseSpaceField<double>& V, const TileSet& sigma) {
  const double total = V.squared_norm();
  return std::min(1.0, mass_off(V, sigma) / total);
}

}  // namespace detail

/// (nu x mu)(Sigma) >= 1 - eps_Sigma^2 with eps_Sigma the smallest valid level.
inline InequalityReport check_support_bound(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                            const TileSet& sigma, const StftPlan& plan) {
  detail::require_nonzero(f, "signal");
  detail::require_nonzero(g, "window");
  const double e2 = detail::eps_sigma_sq(stft(f, g, plan), sigma);
  const double mu = measure(sigma);
  auto r = detail::base("support_bound", mu, 1 - e2, mu - (1 - e2), tolerance::trig);
  r.extras = {{"eps_sigma", std::sqrt(e2)}};
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.sigma = sigma;
  return r.judge();
}

/// (nu x mu)(Sigma) >= (1 - eps_Sigma^2)^{p/(p-2)}, p > 2.
inline InequalityReport check_support_bound_p(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                              const TileSet& sigma, double p, const StftPlan& plan) {
  if (!(p > 2)) throw InputError("support bound needs p > 2");
  detail::require_nonzero(f, "signal");
  detail::require_nonzero(g, "window");
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const double e2 = detail::eps_sigma_sq(V, sigma);
  const double mu = measure(sigma);
  const double rhs = std::pow(1 - e2, p / (p - 2));
  auto r = detail::base("support_bound_p", mu, rhs, mu - rhs, tolerance::quadrature);
  r.extras = {{"eps_sigma", std::sqrt(e2)}};
  if (std::isfinite(p) && p <= 64) r.extras["lp_norm"] = lp_norm(V, p);
  r.witness.params["p"] = p;
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.sigma = sigma;
  return r.judge();
}

/// nu(E) (nu x mu)(Sigma) >= (1 - eps_E)^2 (1 - eps_Sigma^2) with g rescaled
/// so that ||V_g f|| = 1 and eps_E measured in l^1.
inline InequalityReport check_joint_concentration(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                                  const std::vector<MultiIndex>& E, const TileSet& sigma,
                                                  const StftPlan& plan) {
  detail::require_nonzero(f, "signal");
  detail::require_nonzero(g, "window");
  LatticeSignal<double> gs = g;
  gs *= 1 / (f.norm_l2() * g.norm_l2());
  const std::set<MultiIndex, MultiIndexLess> e_set(E.begin(), E.end());
  double inside = 0;
  for (const MultiIndex& k : e_set) inside += std::abs(f(k));
  const double l1 = f.norm_l1();
  const double eps_e = std::max(0.0, 1 - inside / l1);
  const double e2 = detail::eps_sigma_sq(stft(f, gs, plan), sigma);
  const double nu = double(e_set.size()), mu = measure(sigma);
  const double lhs = nu * mu, rhs = (1 - eps_e) * (1 - eps_e) * (1 - e2);
  auto r = detail::base("joint_concentration", lhs, rhs, lhs - rhs, tolerance::trig);
  r.extras = {{"nu_E", nu},
              {"eps_E", eps_e},
              {"bound_E", (1 - eps_e) * (1 - eps_e) * l1 * l1 * gs.squared_norm()},
              {"measure", mu},
              {"eps_sigma", std::sqrt(e2)},
              {"bound_sigma", 1 - e2}};
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.sigma = sigma;
  r.witness.lattice_set.assign(e_set.begin(), e_set.end());
  return r.judge();
}

/// Card(K) <= (nu x mu)(B_r) / (1 - eps) for the members of an orthonormal
/// family that are eps-concentrated on B_r (unit window). Concentration uses
/// the inner tile approximation of B_r, which can only exclude members.
inline InequalityReport check_cardinality_bound(const std::vector<LatticeSignal<double>>& phis,
                                                const LatticeSignal<double>& g, double r, double eps,
                                                const StftPlan& plan, int resolution = 64) {
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0, 1)");
  detail::require_unit(g);
  detail::require_orthonormal(phis);
  const int n = plan.dimension();
  const TileSet ball = ball_tileset(r, n, resolution);
  int qualifying = 0;
  std::vector<std::string> excluded;
  for (std::size_t k = 0; k < phis.size(); ++k) {
    if (std::sqrt(mass_off(stft(phis[k], g, plan), ball)) <= eps)
      ++qualifying;
    else
      excluded.push_back(std::to_string(k));
  }
  const double bm = ball_measure(r, n);
  const double rhs = bm / (1 - eps);
  auto rep = detail::base("cardinality", qualifying, rhs, rhs - qualifying, tolerance::trig);
  rep.extras = {{"ball_measure", bm}, {"ball_tiles_measure", ball.measure()}, {"excluded", double(excluded.size())}};
  for (const auto& k : excluded) rep.notes.push_back("phi_" + k + " not eps-concentrated on B_r; excluded");
  rep.witness.params = {{"r", r}, {"eps", eps}, {"resolution", resolution}};
  rep.witness.signals = {{"g", g}};
  rep.witness.family = phis;
  return rep.judge();
}

/// Card(K) <= 2 (nu x mu)(B_{A 2^{2/s}}) for the members of an orthonormal
/// family whose dispersion rho_s is at most A (unit window).
inline InequalityReport check_dispersion_cardinality(const std::vector<LatticeSignal<double>>& phis,
                                                     const LatticeSignal<double>& g, double s, double A,
                                                     const StftPlan& plan) {
  if (!(s > 0) || !(A > 0)) throw InputError("s and A must be positive");
  detail::require_unit(g);
  detail::require_orthonormal(phis);
  int qualifying = 0;
  InequalityReport rep;
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const double rho = dispersion(stft(phis[k], g, plan), s);
    if (rho <= A)
      ++qualifying;
    else
      rep.notes.push_back("phi_" + std::to_string(k) + " has dispersion " + std::to_string(rho) + " > A; excluded");
  }
  const double radius = A * std::pow(2.0, 2 / s);
  const double rhs = 2 * ball_measure(radius, plan.dimension());
  auto base = detail::base("dispersion_cardinality", qualifying, rhs, rhs - qualifying, tolerance::quadrature);
  base.notes = std::move(rep.notes);
  base.extras = {{"radius", radius}};
  base.witness.params = {{"s", s}, {"A", A}};
  base.witness.signals = {{"g", g}};
  base.witness.family = phis;
  return base.judge();
}

// ---------------------------------------------------------------------------
// Moment, local and entropy inequalities.

/// || |m|^s V ||^2 + || |w|^s V ||^2 >= c(s) ||f||^2 ||g||^2.
inline InequalityReport check_heisenberg(const LatticeSignal<double>& f, const LatticeSignal<double>& g, double s,
                                         const StftPlan& plan) {
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const HeisenbergConstant hc = heisenberg_constant(s, plan.dimension());
  const double scale = f.squared_norm() * g.squared_norm();
  const double lhs = moment(V, MomentKind::Lattice, 2 * s) + moment(V, MomentKind::Torus, 2 * s);
  const double rhs = hc.c * scale;
  auto r = detail::base("heisenberg", lhs, rhs, lhs - rhs, tolerance::quadrature * std::max(1.0, scale));
  const double radial = moment(V, MomentKind::Radial, 2 * s);
  r.extras = {{"c", hc.c},
              {"eps0", hc.eps0},
              {"radial_moment", radial},
              {"radial_bound", hc.core * scale},
              {"radial_slack", radial - hc.core * scale}};
  if (radial - hc.core * scale < -r.tolerance) r.notes.push_back("intermediate radial-moment bound violated");
  r.witness.params["s"] = s;
  r.witness.signals = {{"f", f}, {"g", g}};
  return r.judge();
}

/// ||V||_{L^2(Sigma)} <= c(s) (nu x mu)(Sigma)^{1/2} || |(m,w)|^s V ||.
inline InequalityReport check_local_uncertainty(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                                double s, const TileSet& sigma, const StftPlan& plan) {
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const double c = local_uncertainty_constant(s, plan.dimension());
  const double mu = measure(sigma);
  const double lhs = std::sqrt(mass_on(V, sigma));
  const double rhs = c * std::sqrt(mu) * std::sqrt(moment(V, MomentKind::Radial, 2 * s));
  auto r = detail::base("local_uncertainty", lhs, rhs, rhs - lhs,
                        tolerance::quadrature * std::max(1.0, f.norm_l2() * g.norm_l2()));
  r.extras = {{"c", c}, {"eps0", heisenberg_constant(s, plan.dimension()).eps0}, {"measure", mu}};
  r.witness.params["s"] = s;
  r.witness.signals = {{"f", f}, {"g", g}};
  r.witness.sigma = sigma;
  return r.judge();
}

/// || |(m,w)|^s V || >= c_s ||f|| ||g||.
inline InequalityReport check_local_corollary(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                              double s, const StftPlan& plan) {
  const PhaseSpaceField<double> V = stft(f, g, plan);
  const CorollaryConstant cc = local_uncertainty_corollary_constant(s, plan.dimension());
  const double lhs = std::sqrt(moment(V, MomentKind::Radial, 2 * s));
  const double rhs = cc.c_s * f.norm_l2() * g.norm_l2();
  auto r = detail::base("local_corollary", lhs, rhs, lhs - rhs,
                        tolerance::quadrature * std::max(1.0, f.norm_l2() * g.norm_l2()));
  r.extras = {{"c_s", cc.c_s}, {"r_star", cc.r_star}};
  r.witness.params["s"] = s;
  r.witness.signals = {{"f", f}, {"g", g}};
  return r.judge();
}

/// E_k(|V_g f|^2) >= -2 ln(||f|| ||g||) ||f||^2 ||g||^2.
inline InequalityReport check_entropy(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                      const StftPlan& plan) {
  detail::require_nonzero(f, "signal");
  detail::require_nonzero(g, "window");
  const double a = f.norm_l2() * g.norm_l2();
  const double lhs = entropy_k(stft(f, g, plan));
  const double rhs = -2 * std::log(a) * a * a;
  auto r = detail::base("entropy", lhs, rhs, lhs - rhs, tolerance::quadrature * std::max(1.0, a * a));
  r.witness.signals = {{"f", f}, {"g", g}};
  return r.judge();
}

}  // namespace lstft
