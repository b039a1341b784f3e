#pragma once

#include "lstft/lattice.hpp"

#include <Eigen/Core>

#include <random>

namespace test {

using lstft::LatticeSignal;
using lstft::MultiIndex;
using lstft::SupportBox;

inline MultiIndex idx(std::initializer_list<int> v) {
  MultiIndex m(int(v.size()));
  int i = 0;
  for (int x : v) m[i++] = x;
  return m;
}

inline Eigen::VectorXd pt(std::initializer_list<double> v) {
  Eigen::VectorXd w(int(v.size()));
  int i = 0;
  for (double x : v) w[i++] = x;
  return w;
}

inline LatticeSignal<double> random_signal(std::mt19937_64& rng, int n, int N) {
  std::normal_distribution<double> gauss;
  SupportBox box(n, N);
  LatticeSignal<double> f(box);
  for (Eigen::Index i = 0; i < box.size(); ++i) f.values()[i] = {gauss(rng), gauss(rng)};
  return f;
}

// Definition of V_g f at (m, w) with nothing shared with the library.
inline std::complex<double> stft_oracle(const LatticeSignal<double>& f, const LatticeSignal<double>& g,
                                        const MultiIndex& m, const Eigen::VectorXd& w) {
  std::complex<double> s = 0;
  for (Eigen::Index i = 0; i < f.box().size(); ++i) {
    MultiIndex k = f.box().point(i);
    double phase = 0;
    for (int a = 0; a < k.size(); ++a) phase += w[a] * k[a];
    s += f.values()[i] * std::conj(g(k - m)) * std::exp(std::complex<double>(0, -2 * M_PI * phase));
  }
  return s;
}

}  // namespace test
