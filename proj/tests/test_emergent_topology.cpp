#include <doctest.h>

#include <cmath>
#include <vector>

#include "llgvm/emergent.hpp"
#include "llgvm/errors.hpp"
#include "llgvm/spectral.hpp"
#include "llgvm/topology.hpp"
#include "support.hpp"

using namespace llgvm;
using namespace testsupport;

namespace {

Vec3 rotz(double t, const Vec3& v) {
  return {std::cos(t) * v[0] - std::sin(t) * v[1], std::sin(t) * v[0] + std::cos(t) * v[1], v[2]};
}

VectorField3 rotated(const VectorField3& m, double t) {
  VectorField3 r(m.grid());
  for (std::size_t i = 0; i < m.size(); ++i) r.set(i, rotz(t, m.get(i)));
  return r;
}

// A texture that is not axisymmetric, so rotating the spins moves it.
VectorField3 lopsided(const PeriodicGrid& g) {
  VectorField3 m = init_random_smooth(g, 77, 1, 2.0);
  const VectorField3 s = init_skyrmion_tube(g, 2.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    Vec3 v = m.get(i) + s.get(i);
    if (norm(v) < 0.5) v = s.get(i);
    m.set(i, (1.0 / norm(v)) * v);
  }
  return m;
}

}  // namespace

TEST_CASE("emergent fields vanish for constant and coplanar textures") {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  const VectorField3 c(g, {0.6, 0.0, 0.8});
  CHECK(max_abs(compute_b(c)) == 0.0);
  CHECK(max_abs(compute_e(c, c, 0.1)) == 0.0);
  const ScalarField phi = random_smooth(g, 4, 2);
  auto planar = [&](double shift) {
    VectorField3 m(g);
    for (std::size_t i = 0; i < g.size(); ++i) m.set(i, {std::cos(phi[i] + shift), std::sin(phi[i] + shift), 0.0});
    return m;
  };
  CHECK(max_abs(compute_b(planar(0.0))) <= 1e-14);
  CHECK(max_abs(compute_e(planar(0.0), planar(0.05), 0.1)) <= 1e-14);
}

TEST_CASE("b is divergence free and invariant under a global spin rotation") {
  const PeriodicGrid g = PeriodicGrid::cubic(32, 16.0);
  for (unsigned s = 0; s < 5; ++s) {
    const VectorField3 m = init_random_smooth(g, 500 + s, 1, 2.0);
    CHECK(magnetic_gauss_residual(compute_b(m)) < 1e-8);
  }
  const VectorField3 sk = init_skyrmion_tube(g, 2.0);
  const VectorField3 b = compute_b(sk);
  CHECK(l2_norm(compute_b(rotated(sk, 0.7)) - b) / l2_norm(b) < 1e-13);
}

TEST_CASE("emergent e is second order in time for a rigid spin rotation") {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  const VectorField3 m0 = lopsided(g);
  const double omega = 1.3, t = 0.2;
  auto err = [&](double dt) {
    const VectorField3 e = compute_e(rotated(m0, omega * t), rotated(m0, omega * (t + dt)), dt);
    const double tm = t + dt / 2, d = dt / 10;
    const VectorField3 ref = compute_e(rotated(m0, omega * (tm - d / 2)), rotated(m0, omega * (tm + d / 2)), d);
    return l2_norm(e - ref) / l2_norm(ref);
  };
  const double e1 = err(0.2), e2 = err(0.1);
  const double order = std::log2(e1 / e2);
  MESSAGE("emergent e order " << order);
  CHECK(order >= 1.9);
  CHECK_THROWS_AS(compute_e(m0, -1.0 * m0, 0.1), BlowUp);
}

namespace {
// Resolved unit texture translated rigidly by `shift`.
VectorField3 translated_texture(const PeriodicGrid& g, const Vec3& shift) {
  const double k = 2 * kPi / g.length(0);
  return sample_vec(g, [&](const Vec3& x0) {
    const Vec3 x = x0 - shift;
    const Vec3 v{std::cos(k * x[0]) + 0.5 * std::sin(k * x[2]), std::sin(k * x[1]) + 0.3 * std::cos(k * x[0]),
                 1.5 + 0.4 * std::cos(k * x[1])};
    return (1.0 / norm(v)) * v;
  });
}
VectorField3 faraday_field(const VectorField3& m0, const VectorField3& m1, double dt) {
  return (1.0 / dt) * (compute_b(m1) - compute_b(m0)) + curl(compute_e(m0, m1, dt));
}
}  // namespace

TEST_CASE("Faraday residual: dt-dependent part falls at first order") {
  const PeriodicGrid g = PeriodicGrid::cubic(32, 16.0);
  const Vec3 vel{1.0, 0.4, -0.3};
  const VectorField3 m0 = translated_texture(g, {0, 0, 0});
  const double nb = l2_norm(compute_b(m0));
  std::vector<VectorField3> r;
  const double dts[] = {0.4, 0.2, 0.1, 0.05};
  for (double dt : dts) {
    const VectorField3 m1 = translated_texture(g, dt * vel);
    r.push_back(faraday_field(m0, m1, dt));
    CHECK(faraday_residual(m0, m1, dt) < 1e-4);
  }
  for (int q = 0; q + 2 < 4; ++q) {
    const double d1 = l2_norm(r[q] - r[q + 1]) / nb, d2 = l2_norm(r[q + 1] - r[q + 2]) / nb;
    MESSAGE("Faraday differences " << d1 << " " << d2 << " order " << std::log2(d1 / d2));
    CHECK(std::log2(d1 / d2) >= 0.9);
  }
}

TEST_CASE("lattice skyrmion number and flux quantization") {
  const PeriodicGrid g = PeriodicGrid::cubic(64, 16.0);
  const MagnetizationField u{init_uniform(g), 0.5, 0.1};
  CHECK(skyrmion_number(u, 3) == 0.0);
  const MagnetizationField sk{init_skyrmion_tube(g, 2.0), 0.5, 0.1};
  for (int z : {0, 31, 63}) {
    const SliceDegree d = skyrmion_degree(sk.m, z);
    CHECK(d.q == -1.0);
    CHECK(std::abs(d.raw + 1.0) < 1e-10);
  }
  const VectorField3 b = compute_b(sk);
  double flux = 0.0;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) flux += b.component(2)[g.index(i, j, 20)] * g.spacing(0) * g.spacing(1);
  MESSAGE("flux / 4 pi = " << flux / (4 * kPi));
  CHECK(std::abs(4 * kPi * skyrmion_number(sk, 20) - flux) / (4 * kPi) < 1e-3);

  VectorField3 bad = init_uniform(PeriodicGrid::cubic(8, 4.0));
  bad.set(bad.grid().index(2, 2, 1), {0.0, 0.0, -1.0});
  CHECK_THROWS_AS(skyrmion_degree(bad, 1), DegenerateSlice);
  CHECK(skyrmion_degree(bad, 0).q == 0.0);
}

TEST_CASE("vector potential inverts curl on solenoidal fields") {
  const PeriodicGrid g({16, 16, 20}, {6.0, 7.0, 8.0});
  const VectorField3 b = curl(random_smooth_vec(g, 21, 3));
  const VectorField3 a = vector_potential(b);
  CHECK(l2_norm(curl(a) - b) / l2_norm(b) < 1e-10);
  CHECK(l2_norm(div(a)) / l2_norm(curl(a)) < 1e-10);
  CHECK(max_abs(vector_potential(VectorField3(g))) == 0.0);
  CHECK_THROWS_AS(vector_potential(random_smooth_vec(g, 2, 2)), ContractViolation);

  // One circularly polarized mode: b = (cos kz, sin kz, 0).
  const double k = 2 * kPi * 2 / 8.0;
  const VectorField3 bc = sample_vec(g, [&](const Vec3& x) { return Vec3{std::cos(k * x[2]), std::sin(k * x[2]), 0.0}; });
  // curl b = -k b here, so a = -b / k.
  CHECK(max_abs(vector_potential(bc) + (1.0 / k) * bc) < 1e-12);

  // Gauge independence of the helicity.
  const ScalarField chi = random_smooth(g, 13, 3);
  const double h0 = helicity(a, b);
  CHECK(std::abs(helicity(a + grad(chi), b) - h0) <= 1e-10 * std::max(1.0, std::abs(h0)));
}

TEST_CASE("vector potential agrees with a direct Biot-Savart sum") {
  const double L = 8.0;
  const int N = 16;
  const PeriodicGrid g = PeriodicGrid::cubic(N, L);
  const Vec3 c{L / 2, L / 2, L / 2};
  const double s = 2.0;
  // Localized solenoidal b: curl of a Gaussian-weighted vector potential.
  const VectorField3 A = sample_vec(g, [&](const Vec3& x) {
    const Vec3 d = x - c;
    const double w = std::exp(-dot(d, d) / (s * s));
    return Vec3{-d[1] * w, d[0] * w, 0.3 * d[0] * w};
  });
  const VectorField3 b = curl(A);
  const VectorField3 a = vector_potential(b);

  VectorField3 direct(g);
  const double h3 = g.cell_volume();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto ip = g.coords(p);
    const Vec3 x = g.node_position(ip[0], ip[1], ip[2]);
    Vec3 acc{0, 0, 0};
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto iq = g.coords(q);
      const Vec3 y = g.node_position(iq[0], iq[1], iq[2]);
      for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy)
          for (int sz = -1; sz <= 1; ++sz) {
            const Vec3 r = x - y - Vec3{sx * L, sy * L, sz * L};
            const double rr = norm(r);
            if (rr == 0.0) continue;
            acc = acc + (h3 / (4 * kPi * rr * rr * rr)) * cross(b.get(q), r);
          }
    }
    direct.set(p, acc);
  }
  const double d = l2_norm(direct - a) / l2_norm(a);
  MESSAGE("Biot-Savart relative difference " << d);
  CHECK(d < 5e-2);
}

TEST_CASE("hopfion helicity is quantized") {
  // Refinement toward the integer; 64 is the required resolution.
  for (int n : {32, 64}) {
    const PeriodicGrid g = PeriodicGrid::cubic(n, 16.0);
    const MagnetizationField h{init_hopfion(g, 2.5), 0.5, 0.1};
    const double H = hopf_invariant(h);
    MESSAGE("N = " << n << " H = " << H);
    if (n == 64) CHECK(std::abs(H - 1.0) < 1e-2);
  }
  const PeriodicGrid g = PeriodicGrid::cubic(64, 16.0);
  const MagnetizationField mirror{init_hopfion(g, 2.5, true), 0.5, 0.1};
  CHECK(std::abs(hopf_invariant(mirror) + 1.0) < 1e-2);
  const MagnetizationField u{init_uniform(g), 0.5, 0.1};
  CHECK(hopf_invariant(u) == 0.0);
  const MagnetizationField sk{init_skyrmion_tube(g, 2.0), 0.5, 0.1};
  CHECK_THROWS_AS(hopf_invariant(sk), ContractViolation);

  const TopologyReport r = topology_report(mirror);
  CHECK(r.skyrmion_number_per_slice.size() == 64);
  CHECK(r.gauge_residual < 1e-10);
  CHECK(format_report(r).find("hopf_invariant = ") != std::string::npos);
}
