#pragma once

// Value types for the phase space Z^n x T^n: lattice multi-indices, finite
// truncation boxes, finitely supported signals, equispaced torus grids,
// sampled phase-space fields and finite unions of tiles.

#include "lstft/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lstft {

using MultiIndex = Eigen::VectorXi;

inline std::int64_t norm_sq(const MultiIndex& m) {
  std::int64_t s = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) s += std::int64_t(m[i]) * m[i];
  return s;
}

inline int max_abs(const MultiIndex& m) {
  return m.size() == 0 ? 0 : m.cwiseAbs().maxCoeff();
}

inline std::int64_t int_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Lexicographic order so multi-indices can key ordered containers.
struct MultiIndexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  }
};

/// The cube [-N, N]^n of lattice points, enumerated in row-major order with
/// the last axis varying fastest.
class SupportBox {
 public:
  SupportBox() = default;
  SupportBox(int dimension, int half_width) : dim_(dimension), half_(half_width) {
    if (dimension < 1) throw InputError("dimension must be >= 1");
    if (half_width < 0) throw InputError("half_width must be >= 0");
  }

  int dimension() const { return dim_; }
  int half_width() const { return half_; }
  int side() const { return 2 * half_ + 1; }
  Eigen::Index size() const { return Eigen::Index(int_pow(side(), dim_)); }

  bool contains(const MultiIndex& m) const {
    if (m.size() != dim_) return false;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (m[i] < -half_ || m[i] > half_) return false;
    return true;
  }

  Eigen::Index index(const MultiIndex& m) const {
    Eigen::Index idx = 0;
    for (int i = 0; i < dim_; ++i) idx = idx * side() + (m[i] + half_);
    return idx;
  }

  MultiIndex point(Eigen::Index idx) const {
    MultiIndex m(dim_);
    for (int i = dim_ - 1; i >= 0; --i) {
      m[i] = int(idx % side()) - half_;
      idx /= side();
    }
    return m;
  }

  bool operator==(const SupportBox& o) const { return dim_ == o.dim_ && half_ == o.half_; }
  bool operator!=(const SupportBox& o) const { return !(*this == o); }

 private:
  int dim_ = 1;
  int half_ = 0;
};

/// A complex sequence on Z^n that vanishes outside its box.
template <typename Real>
class LatticeSignal {
 public:
  using Scalar = Real;
  using Complex = std::complex<Real>;
  using Values = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  LatticeSignal() : values_(Values::Zero(1)) {}
  explicit LatticeSignal(const SupportBox& box) : box_(box), values_(Values::Zero(box.size())) {}
  LatticeSignal(const SupportBox& box, Values values) : box_(box), values_(std::move(values)) {
    if (values_.size() != box_.size())
      throw InputError("signal value count does not match its support box");
  }

  static LatticeSignal delta(const SupportBox& box, const MultiIndex& at) {
    LatticeSignal s(box);
    s.at(at) = Complex(1);
    return s;
  }

  const SupportBox& box() const { return box_; }
  int dimension() const { return box_.dimension(); }
  const Values& values() const { return values_; }
  Values& values() { return values_; }

  Complex operator()(const MultiIndex& k) const {
    return box_.contains(k) ? values_[box_.index(k)] : Complex(0);
  }

  Complex& at(const MultiIndex& k) {
    if (!box_.contains(k)) throw InputError("lattice index outside the signal box");
    return values_[box_.index(k)];
  }

  Real squared_norm() const { return values_.squaredNorm(); }
  Real norm_l2() const { return std::sqrt(squared_norm()); }
  Real norm_l1() const { return values_.cwiseAbs().sum(); }
  bool is_zero() const { return values_.cwiseAbs().maxCoeff() == Real(0); }

  /// Smallest half-width whose box holds every non-zero entry.
  int support_half_width() const {
    int w = 0;
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      if (values_[i] != Complex(0)) w = std::max(w, max_abs(box_.point(i)));
    return w;
  }

  /// Re-box into [-N, N]^n. Shrinking drops only zero entries.
  LatticeSignal embedded(int half_width) const {
    SupportBox target(dimension(), half_width);
    if (half_width < box_.half_width() && support_half_width() > half_width)
      throw InputError("signal support does not fit the requested box");
    LatticeSignal out(target);
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      if (values_[i] == Complex(0)) continue;
      out.values_[target.index(box_.point(i))] = values_[i];
    }
    return out;
  }

  template <typename Other>
  LatticeSignal<Other> cast() const {
    return LatticeSignal<Other>(box_, values_.template cast<std::complex<Other>>());
  }

  LatticeSignal& operator*=(Complex c) {
    values_ *= c;
    return *this;
  }
  friend LatticeSignal operator*(Complex c, LatticeSignal s) { return s *= c; }

 private:
  SupportBox box_;
  Values values_;
};

/// <f, h> = sum_k f(k) conj(h(k)); boxes may differ.
template <typename Real>
std::complex<Real> inner(const LatticeSignal<Real>& f, const LatticeSignal<Real>& h) {
  if (f.dimension() != h.dimension()) throw InputError("signal dimensions differ");
  if (f.box() == h.box()) return h.values().dot(f.values());
  std::complex<Real> s(0);
  const auto& small = f.box().half_width() <= h.box().half_width() ? f : h;
  for (Eigen::Index i = 0; i < small.values().size(); ++i) {
    MultiIndex k = small.box().point(i);
    s += f(k) * std::conj(h(k));
  }
  return s;
}

/// Equispaced product grid on T^n with M nodes per axis; node j sits at j/M,
/// represented in [-1/2, 1/2) when a magnitude is needed.
class TorusGrid {
 public:
  TorusGrid() = default;
  TorusGrid(int dimension, int points_per_axis) : dim_(dimension), m_(points_per_axis) {
    if (dimension < 1) throw InputError("dimension must be >= 1");
    if (points_per_axis < 1) throw InputError("grid needs at least one point per axis");
  }

  int dimension() const { return dim_; }
  int points_per_axis() const { return m_; }
  Eigen::Index size() const { return Eigen::Index(int_pow(m_, dim_)); }

  template <typename Real = double>
  Real weight() const {
    return Real(1) / Real(size());
  }

  Eigen::VectorXi node_index(Eigen::Index j) const {
    Eigen::VectorXi idx(dim_);
    for (int i = dim_ - 1; i >= 0; --i) {
      idx[i] = int(j % m_);
      j /= m_;
    }
    return idx;
  }

  Eigen::Index linear_index(const Eigen::VectorXi& idx) const {
    Eigen::Index j = 0;
    for (int i = 0; i < dim_; ++i) j = j * m_ + idx[i];
    return j;
  }

  /// Node coordinate in [0, 1).
  template <typename Real = double>
  Eigen::Matrix<Real, Eigen::Dynamic, 1> unit_node(Eigen::Index j) const {
    Eigen::VectorXi idx = node_index(j);
    return idx.cast<Real>() / Real(m_);
  }

  /// Node coordinate in [-1/2, 1/2).
  template <typename Real = double>
  Eigen::Matrix<Real, Eigen::Dynamic, 1> node(Eigen::Index j) const {
    Eigen::VectorXi idx = node_index(j);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> w(dim_);
    for (int i = 0; i < dim_; ++i)
      w[i] = 2 * idx[i] >= m_ ? Real(idx[i] - m_) / Real(m_) : Real(idx[i]) / Real(m_);
    return w;
  }

  bool operator==(const TorusGrid& o) const { return dim_ == o.dim_ && m_ == o.m_; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

 private:
  int dim_ = 1;
  int m_ = 1;
};

/// Samples of a function on (lattice box) x (torus grid). Rows follow the box
/// enumeration, columns the grid enumeration. `bandwidth` >= 0 records that
/// every row is a trigonometric polynomial with per-axis frequencies in
/// [-bandwidth, bandwidth]; -1 means unknown.
template <typename Real>
class PhaseSpaceField {
 public:
  using Scalar = Real;
  using Complex = std::complex<Real>;
  using Values = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  PhaseSpaceField() = default;
  PhaseSpaceField(const SupportBox& box, const TorusGrid& grid, int bandwidth = -1)
      : box_(box), grid_(grid), values_(Values::Zero(box.size(), grid.size())), bandwidth_(bandwidth) {
    check_dims();
  }
  PhaseSpaceField(const SupportBox& box, const TorusGrid& grid, Values values, int bandwidth = -1)
      : box_(box), grid_(grid), values_(std::move(values)), bandwidth_(bandwidth) {
    check_dims();
    if (values_.rows() != box_.size() || values_.cols() != grid_.size())
      throw InputError("field samples do not match box x grid");
  }

  const SupportBox& box() const { return box_; }
  const TorusGrid& grid() const { return grid_; }
  int dimension() const { return box_.dimension(); }
  const Values& values() const { return values_; }
  Values& values() { return values_; }
  int bandwidth() const { return bandwidth_; }
  void set_bandwidth(int b) { bandwidth_ = b; }

  bool same_shape(const PhaseSpaceField& o) const { return box_ == o.box_ && grid_ == o.grid_; }

  Real squared_norm() const { return values_.squaredNorm() * grid_.weight<Real>(); }
  Real norm() const { return std::sqrt(squared_norm()); }
  Real sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : Real(0); }

  PhaseSpaceField& operator*=(Complex c) {
    values_ *= c;
    return *this;
  }

 private:
  void check_dims() const {
    if (box_.dimension() != grid_.dimension())
      throw InputError("box and grid dimensions differ");
  }

  SupportBox box_;
  TorusGrid grid_;
  Values values_;
  int bandwidth_ = -1;
};

/// Axis-aligned torus box [lo, hi) attached to one lattice point. Endpoints
/// are arbitrary reals; each width must lie in [0, 1].
struct Tile {
  MultiIndex m;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

namespace detail {

inline bool boxes_overlap(const Tile& a, const Tile& b) {
  for (Eigen::Index i = 0; i < a.lo.size(); ++i)
    if (std::max(a.lo[i], b.lo[i]) >= std::min(a.hi[i], b.hi[i])) return false;
  return true;
}

inline double box_volume(const Tile& t) { return (t.hi - t.lo).prod(); }

// Split [a, a + width) into pieces inside [0, 1).
inline std::vector<std::pair<double, double>> wrap_interval(double a, double b) {
  const double width = b - a;
  if (width <= 0) return {};
  if (width >= 1) return {{0.0, 1.0}};
  double s = a - std::floor(a);
  if (s >= 1.0) s = 0.0;
  const double e = s + width;
  if (e <= 1.0) return {{s, e}};
  return {{s, 1.0}, {0.0, e - 1.0}};
}

// Union of boxes in [0,1)^n as disjoint boxes, via coordinate compression.
inline std::vector<Tile> disjoint_union(const MultiIndex& m, const std::vector<Tile>& pieces) {
  const int n = int(m.size());
  std::vector<std::vector<double>> cuts(n);
  for (const Tile& t : pieces)
    for (int i = 0; i < n; ++i) {
      cuts[i].push_back(t.lo[i]);
      cuts[i].push_back(t.hi[i]);
    }
  Eigen::VectorXi cells(n);
  for (int i = 0; i < n; ++i) {
    std::sort(cuts[i].begin(), cuts[i].end());
    cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
    cells[i] = int(cuts[i].size()) - 1;
    if (cells[i] <= 0) return {};
  }
  std::vector<Tile> out;
  Eigen::VectorXi c = Eigen::VectorXi::Zero(n);
  Eigen::VectorXd center(n);
  while (true) {
    for (int i = 0; i < n; ++i) center[i] = 0.5 * (cuts[i][c[i]] + cuts[i][c[i] + 1]);
    bool covered = false;
    for (const Tile& t : pieces) {
      bool in = true;
      for (int i = 0; i < n && in; ++i) in = center[i] >= t.lo[i] && center[i] < t.hi[i];
      if (in) {
        covered = true;
        break;
      }
    }
    if (covered) {
      Tile cell{m, Eigen::VectorXd(n), Eigen::VectorXd(n)};
      for (int i = 0; i < n; ++i) {
        cell.lo[i] = cuts[i][c[i]];
        cell.hi[i] = cuts[i][c[i] + 1];
      }
      // Merge runs along the last axis.
      bool merged = false;
      if (!out.empty()) {
        Tile& prev = out.back();
        bool same = prev.hi[n - 1] == cell.lo[n - 1];
        for (int i = 0; i < n - 1 && same; ++i) same = prev.lo[i] == cell.lo[i] && prev.hi[i] == cell.hi[i];
        if (same) {
          prev.hi[n - 1] = cell.hi[n - 1];
          merged = true;
        }
      }
      if (!merged) out.push_back(cell);
    }
    int axis = n - 1;
    while (axis >= 0 && ++c[axis] == cells[axis]) c[axis--] = 0;
    if (axis < 0) break;
  }
  return out;
}

}  // namespace detail

/// Finite union of tiles describing a set Sigma in Z^n x T^n. Construction
/// wraps every box into [0, 1)^n and makes tiles on the same lattice point
/// disjoint, so the measure is the plain sum of box volumes.
class TileSet {
 public:
  TileSet() = default;
  explicit TileSet(int dimension) : dim_(dimension) {
    if (dimension < 1) throw InputError("dimension must be >= 1");
  }
  TileSet(int dimension, const std::vector<Tile>& tiles) : TileSet(dimension) {
    std::map<MultiIndex, std::vector<Tile>, MultiIndexLess> groups;
    for (const Tile& t : tiles) {
      validate(t);
      for (Tile& piece : wrap(t)) groups[t.m].push_back(std::move(piece));
    }
    for (auto& [m, pieces] : groups) {
      bool disjoint = true;
      for (std::size_t a = 0; a < pieces.size() && disjoint; ++a)
        for (std::size_t b = a + 1; b < pieces.size() && disjoint; ++b)
          disjoint = !detail::boxes_overlap(pieces[a], pieces[b]);
      if (!disjoint) pieces = detail::disjoint_union(m, pieces);
      for (Tile& p : pieces) tiles_.push_back(std::move(p));
    }
  }

  int dimension() const { return dim_; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  bool empty() const { return tiles_.empty(); }

  double measure() const {
    double s = 0;
    for (const Tile& t : tiles_) s += detail::box_volume(t);
    return s;
  }

  std::vector<MultiIndex> lattice_points() const {
    std::vector<MultiIndex> pts;
    for (const Tile& t : tiles_)
      if (pts.empty() || pts.back() != t.m) pts.push_back(t.m);
    return pts;
  }

  double fiber_measure(const MultiIndex& m) const {
    double s = 0;
    for (const Tile& t : tiles_)
      if (t.m == m) s += detail::box_volume(t);
    return s;
  }

  int lattice_extent() const {
    int e = 0;
    for (const Tile& t : tiles_) e = std::max(e, max_abs(t.m));
    return e;
  }

  /// True when Sigma = Z x T: every occupied fiber carries the same torus set.
  bool is_product_form(double tol = 1e-12) const {
    auto pts = lattice_points();
    if (pts.size() < 2) return true;
    std::vector<Tile> first = fiber(pts[0]);
    const double mu = fiber_measure(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      std::vector<Tile> both = first;
      for (Tile t : fiber(pts[i])) {
        t.m = pts[0];
        both.push_back(std::move(t));
      }
      double uni = 0;
      for (const Tile& t : detail::disjoint_union(pts[0], both)) uni += detail::box_volume(t);
      if (std::abs(uni - mu) > tol || std::abs(fiber_measure(pts[i]) - mu) > tol) return false;
    }
    return true;
  }

  std::vector<Tile> fiber(const MultiIndex& m) const {
    std::vector<Tile> out;
    for (const Tile& t : tiles_)
      if (t.m == m) out.push_back(t);
    return out;
  }

 private:
  void validate(const Tile& t) const {
    if (t.m.size() != dim_ || t.lo.size() != dim_ || t.hi.size() != dim_)
      throw InputError("tile dimension does not match the tile set");
    for (int i = 0; i < dim_; ++i) {
      const double w = t.hi[i] - t.lo[i];
      if (!(w >= 0.0 && w <= 1.0)) throw InputError("tile width must lie in [0, 1]");
    }
  }

  std::vector<Tile> wrap(const Tile& t) const {
    std::vector<Tile> out{Tile{t.m, Eigen::VectorXd(dim_), Eigen::VectorXd(dim_)}};
    for (int i = 0; i < dim_; ++i) {
      auto pieces = detail::wrap_interval(t.lo[i], t.hi[i]);
      std::vector<Tile> next;
      for (const Tile& partial : out)
        for (auto [a, b] : pieces) {
          Tile p = partial;
          p.lo[i] = a;
          p.hi[i] = b;
          next.push_back(std::move(p));
        }
      out = std::move(next);
    }
    return out;
  }

  int dim_ = 0;
  std::vector<Tile> tiles_;
};

/// (nu x mu)(Sigma): counting measure on Z^n times Lebesgue measure on T^n.
inline double measure(const TileSet& sigma) { return sigma.measure(); }

namespace detail {

// Grid nodes j/M lying in [lo, hi) along one axis, with lo, hi in [0, 1].
inline std::vector<int> nodes_in(double lo, double hi, int M) {
  std::vector<int> js;
  for (int j = 0; j < M; ++j) {
    const double u = double(j) / M;
    if (u >= lo && u < hi) js.push_back(j);
  }
  return js;
}

}  // namespace detail

/// 0/1 samples of chi_Sigma on box x grid; a node belongs to a tile when it
/// lies in the half-open box [lo, hi).
template <typename Real = double>
PhaseSpaceField<Real> indicator_on_grid(const TileSet& sigma, const SupportBox& box,
                                        const TorusGrid& grid) {
  PhaseSpaceField<Real> chi(box, grid);
  if (sigma.empty()) return chi;
  if (sigma.dimension() != box.dimension()) throw InputError("tile set dimension mismatch");
  const int n = box.dimension();
  const int M = grid.points_per_axis();
  for (const Tile& t : sigma.tiles()) {
    if (!box.contains(t.m)) throw InputError("tile outside truncation box");
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
      chi.values()(row, grid.linear_index(idx)) = Real(1);
      int a = n - 1;
      while (a >= 0 && ++c[a] == axis[a].size()) c[a--] = 0;
      if (a < 0) break;
    }
  }
  return chi;
}

/// Measure of the grid-snapped set: M^-n times the number of grid nodes in Sigma.
inline double grid_measure(const TileSet& sigma, const TorusGrid& grid) {
  double nodes = 0;
  for (const Tile& t : sigma.tiles()) {
    double count = 1;
    for (Eigen::Index i = 0; i < t.lo.size(); ++i)
      count *= double(detail::nodes_in(t.lo[i], t.hi[i], grid.points_per_axis()).size());
    nodes += count;
  }
  return nodes * grid.weight();
}

namespace detail {

inline void ball_fiber_boxes(const MultiIndex& m, int axis, double radius_sq, int resolution,
                             Eigen::VectorXd& lo, Eigen::VectorXd& hi, std::vector<Tile>& out) {
  const int n = int(m.size());
  const double half = std::min(std::sqrt(radius_sq), 0.5);
  if (axis == n - 1) {
    lo[axis] = -half;
    hi[axis] = half;
    if (half > 0) out.push_back(Tile{m, lo, hi});
    return;
  }
  const double step = 2.0 * half / resolution;
  for (int s = 0; s < resolution; ++s) {
    const double x0 = -half + s * step;
    const double x1 = s + 1 == resolution ? half : x0 + step;
    const double rest = radius_sq - std::max(x0 * x0, x1 * x1);
    if (rest <= 0) continue;
    lo[axis] = x0;
    hi[axis] = x1;
    ball_fiber_boxes(m, axis + 1, rest, resolution, lo, hi, out);
  }
}

}  // namespace detail

/// Inner tile approximation of B_r = {|(m, w)| <= r}, |w| measured with the
/// [-1/2, 1/2)^n representative. Exact for n = 1; for n >= 2 each fiber is
/// covered by `resolution` strips per axis, each cut to its inscribed box.
inline TileSet ball_tileset(double r, int n, int resolution) {
  if (!(r > 0)) throw InputError("ball radius must be positive");
  if (resolution < 1) throw InputError("ball resolution must be >= 1");
  std::vector<Tile> tiles;
  const int R = int(std::floor(r));
  SupportBox box(n, R);
  Eigen::VectorXd lo(n), hi(n);
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    MultiIndex m = box.point(i);
    const double rest = r * r - double(norm_sq(m));
    if (rest <= 0) continue;
    detail::ball_fiber_boxes(m, 0, rest, resolution, lo, hi, tiles);
  }
  return TileSet(n, tiles);
}

}  // namespace lstft
