#pragma once

// Shared helpers for the unit and acceptance tests. Everything is built from
// closed-form functions evaluated at nodes so results on different grids
// sample the same continuous field.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "llgvm/grid.hpp"

namespace testsupport {

using llgvm::PeriodicGrid;
using llgvm::ScalarField;
using llgvm::Vec3;
using llgvm::VectorField3;
// Vec3 is a std::array, so its operators are not found by ADL here.
using llgvm::operator+;
using llgvm::operator-;
using llgvm::operator*;

inline constexpr double kPi = std::numbers::pi;

inline ScalarField sample(const PeriodicGrid& g, const std::function<double(const Vec3&)>& f) {
  ScalarField u(g);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) u[g.index(i, j, k)] = f(g.node_position(i, j, k));
  return u;
}

inline VectorField3 sample_vec(const PeriodicGrid& g, const std::function<Vec3(const Vec3&)>& f) {
  VectorField3 u(g);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) u.set(g.index(i, j, k), f(g.node_position(i, j, k)));
  return u;
}

/// Random trigonometric polynomial with integer wave indices |n_a| <= nmax.
struct TrigPoly {
  struct Mode {
    int n[3];
    double a, phase;
  };
  std::vector<Mode> modes;
  Vec3 length;

  TrigPoly(const PeriodicGrid& g, unsigned seed, int nmax, int count = 8) : length(g.box_length()) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> idx(-nmax, nmax);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(0.0, 2 * kPi);
    for (int c = 0; c < count; ++c) modes.push_back({{idx(rng), idx(rng), idx(rng)}, amp(rng), ph(rng)});
  }
  double operator()(const Vec3& x) const {
    double s = 0.0;
    for (const auto& m : modes) {
      double arg = m.phase;
      for (int a = 0; a < 3; ++a) arg += 2 * kPi * m.n[a] * x[a] / length[a];
      s += m.a * std::cos(arg);
    }
    return s;
  }
  /// Analytic Laplacian.
  double laplacian(const Vec3& x) const {
    double s = 0.0;
    for (const auto& m : modes) {
      double arg = m.phase, k2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double ka = 2 * kPi * m.n[a] / length[a];
        arg += ka * x[a];
        k2 += ka * ka;
      }
      s -= k2 * m.a * std::cos(arg);
    }
    return s;
  }
};

inline ScalarField random_smooth(const PeriodicGrid& g, unsigned seed, int nmax = 3, int count = 8) {
  TrigPoly p(g, seed, nmax, count);
  return sample(g, [&](const Vec3& x) { return p(x); });
}

inline VectorField3 random_smooth_vec(const PeriodicGrid& g, unsigned seed, int nmax = 3) {
  VectorField3 v(g);
  for (int c = 0; c < 3; ++c) {
    ScalarField s = random_smooth(g, seed * 3 + c + 1, nmax);
    std::copy(s.values().begin(), s.values().end(), v.component(c).begin());
  }
  return v;
}

/// Random smooth unit field: normalize(e3 * bias + smooth perturbation).
inline VectorField3 random_unit(const PeriodicGrid& g, unsigned seed, int nmax = 2, double bias = 0.0) {
  VectorField3 v = random_smooth_vec(g, seed, nmax);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec3 m = v.get(i);
    m[2] += bias;
    const double n = llgvm::norm(m);
    v.set(i, (1.0 / n) * m);
  }
  return v;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
