#include <doctest.h>

#include <cmath>
#include <complex>

#include "llgvm/errors.hpp"
#include "llgvm/maxwell.hpp"
#include "llgvm/spectral.hpp"
#include "support.hpp"

using namespace llgvm;
using namespace testsupport;

TEST_CASE("staggered operators: div curl = 0 and adjoint pairs") {
  const PeriodicGrid g({8, 10, 12}, {4.0, 5.0, 7.0});
  const VectorField3 a = random_smooth_vec(g, 1, 3);
  const VectorField3 b = random_smooth_vec(g, 2, 3);
  const ScalarField phi = random_smooth(g, 3, 3);
  CHECK(max_abs(div_face(curl_edge(a))) < 1e-12 * max_abs(curl_edge(a)));
  CHECK(max_abs(curl_edge(grad_node(phi))) < 1e-12 * max_abs(grad_node(phi)));
  const double s = l2_norm(a) * l2_norm(b);
  CHECK(std::abs(l2_inner(curl_edge(a), b) - l2_inner(a, curl_face(b))) < 1e-13 * s);
  CHECK(std::abs(l2_inner(nodes_to_edges(a), b) - l2_inner(a, edges_to_nodes(b))) < 1e-13 * s);
  CHECK(std::abs(l2_inner(current_to_edges(a), b) - l2_inner(a, edges_to_force_nodes(b))) < 1e-13 * s);
  // The interpolated current has the spectral divergence.
  CHECK(max_abs(div_edge(current_to_edges(a)) - div(a)) < 1e-12 * max_abs(div(a)));
  CHECK(std::abs(l2_inner(grad_node(phi), a) + l2_inner(phi, div_edge(a))) < 1e-13 * l2_norm(phi) * l2_norm(a));
}

TEST_CASE("compatible initial data") {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  const EMFieldPair z = init_compatible(ScalarField(g), {}, 1.0, 1.0);
  CHECK(max_abs(z.E) == 0.0);
  CHECK(max_abs(z.B) == 0.0);

  // One Poisson mode rho = a cos(k.x), solved with the discrete symbol:
  // E_c at the edge midpoint is (a / eps) s_c sin(k.x_edge) / sum s^2 with
  // s_c = 2 sin(k_c h / 2) / h.
  const double a = 0.3, eps = 2.0, h = g.spacing(0);
  const Vec3 k{2 * kPi * 1 / 8.0, 2 * kPi * 2 / 8.0, -2 * kPi * 1 / 8.0};
  const ScalarField rho = sample(g, [&](const Vec3& x) { return a * std::cos(dot(k, x)); });
  const EMFieldPair em = init_compatible(rho, {}, eps, 1.0);
  CHECK(gauss_residual(em, rho) < 1e-12);
  Vec3 sd;
  double s2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    sd[c] = 2 * std::sin(k[c] * h / 2) / h;
    s2 += sd[c] * sd[c];
  }
  double err = 0.0, cont = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto ix = g.coords(q);
    for (int c = 0; c < 3; ++c) {
      Vec3 xe = g.node_position(ix[0], ix[1], ix[2]);
      xe[c] += h / 2;
      const double expect = a / eps * sd[c] / s2 * std::sin(dot(k, xe));
      err = std::max(err, std::abs(em.E.component(c)[q] - expect));
      // Continuum closed form (a / (eps |k|^2)) k sin(k.x), within O(h^2).
      cont = std::max(cont, std::abs(em.E.component(c)[q] - a / (eps * dot(k, k)) * k[c] * std::sin(dot(k, xe))));
    }
  }
  CHECK(err < 1e-13);
  MESSAGE("continuum deviation " << cont);
  CHECK(cont < dot(k, k) * h * h * a / (eps * norm(k)));
  CHECK(max_abs(em.B) == 0.0);

  // A non-zero mean is removed, not fatal.
  const ScalarField shifted = rho + ScalarField(g, 0.1);
  CHECK(gauss_residual(init_compatible(shifted, {}, eps, 1.0), rho) < 1e-12);

  const EMFieldPair m = init_compatible(ScalarField(g), parse_em_modes("1 2 0 0.5 0.3; 0 0 2 0.1 -0.2"), 1.0, 1.0);
  CHECK(max_abs(m.B) > 0.0);
  CHECK(div_b_residual(m) < 1e-12);
  CHECK(max_abs(div_edge(m.E)) < 1e-12 * max_abs(m.E) / h);
  CHECK_THROWS_AS(parse_em_modes("1 2 x"), ConfigError);
  CHECK_THROWS_AS(parse_em_modes("0 0 0 1 1"), ConfigError);
  CHECK_THROWS_AS(init_compatible(rho, {}, 0.5, 1.0), ContractViolation);
}

TEST_CASE("leapfrog: trivial states, uniform current, CFL") {
  const PeriodicGrid g = PeriodicGrid::cubic(8, 4.0);
  EMFieldPair z{VectorField3(g), VectorField3(g), 1.0, 1.0};
  const double dt = 0.5 * maxwell_cfl(g, 1.0, 1.0);
  CHECK(max_abs(step_fields(z, VectorField3(g), dt).E) == 0.0);

  const Vec3 j{0.2, -0.1, 0.05};
  EMFieldPair u{VectorField3(g, {0.1, 0.2, 0.3}), VectorField3(g), 2.0, 1.5};
  const VectorField3 jf(g, j);
  const int steps = 50;
  for (int s = 0; s < steps; ++s) u = step_fields(u, jf, dt);
  const Vec3 expect = Vec3{0.1, 0.2, 0.3} - (steps * dt / 2.0) * j;
  double err = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) err = std::max(err, norm(u.E.get(q) - expect));
  CHECK(err < 1e-14);
  CHECK(max_abs(u.B) == 0.0);

  CHECK_THROWS_AS(step_fields(z, VectorField3(g), maxwell_cfl(g, 1.0, 1.0)), StepRefused);
  CHECK_THROWS_AS(step_fields(z, VectorField3(g), -0.1), StepRefused);
}

TEST_CASE("leapfrog: div B exact and source-free energy conserved") {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  EMFieldPair em = init_compatible(ScalarField(g), parse_em_modes("1 0 0 0.4 0.2; 2 3 1 0.1 0.3; 5 -4 7 0.05 0.05"), 1.5, 2.0);
  em.B = em.B + curl_edge(random_smooth_vec(g, 9, 4));
  const double dt = 0.8 * maxwell_cfl(g, em.eps_r, em.mu_r);
  const double w0 = em_energy(em, dt), p0 = em_energy_plain(em);
  double drift = 0.0, plain = 0.0, divb = 0.0;
  for (int s = 0; s < 1000; ++s) {
    em = step_fields(em, VectorField3(g), dt);
    drift = std::max(drift, std::abs(em_energy(em, dt) - w0) / w0);
    plain = std::max(plain, std::abs(em_energy_plain(em) - p0) / p0);
    divb = std::max(divb, div_b_residual(em));
  }
  MESSAGE("leapfrog energy drift " << drift << ", plain energy oscillation " << plain << ", div B " << divb);
  CHECK(drift < 1e-10);
  CHECK(divb < 1e-12);
  CHECK(em_energy(em, dt) >= 0.0);

  // With a source the leapfrog energy changes by exactly -dt <J, mean E>.
  const VectorField3 j = random_smooth_vec(g, 4, 2);
  const EMFieldPair next = step_fields(em, j, dt);
  const double dW = em_energy(next, dt) - em_energy(em, dt);
  const double work = -dt * l2_inner(current_to_edges(j), 0.5 * (em.E + next.E));
  CHECK(std::abs(dW - work) < 1e-12 * std::abs(work));
}

TEST_CASE("plane-wave phase speed within the second-order dispersion bound") {
  const int N = 64;
  const PeriodicGrid g({N, 4, 4}, {16.0, 1.0, 1.0});
  const double h = g.spacing(0);
  const double k = 2 * kPi * 4 / 16.0;
  const double bound = (k * h) * (k * h) / 24.0;
  for (auto [eps, mu] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{2.0, 2.0}}) {
    const double v = 1.0 / std::sqrt(eps * mu);
    EMFieldPair em{VectorField3(g), VectorField3(g), eps, mu};
    // E_y = cos(kx), B_z = E_y / v = eps mu v E_y for a wave moving in +x.
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double x = g.coords(q)[0] * h;
      em.E.component(1)[q] = std::cos(k * x);
      em.B.component(2)[q] = std::cos(k * (x + h / 2)) / v;
    }
    auto phase = [&](const EMFieldPair& f) {
      std::complex<double> c = 0.0;
      for (int i = 0; i < N; ++i) c += f.E.component(1)[g.index(i, 0, 0)] * std::polar(1.0, -k * i * h);
      return std::arg(c);
    };
    const double dt = 0.5 * maxwell_cfl(g, eps, mu);
    const double T = 10 * (2 * kPi / (k * v));
    const int steps = int(std::round(T / dt));
    double unwrapped = 0.0, prev = phase(em);
    for (int s = 0; s < steps; ++s) {
      em = step_fields(em, VectorField3(g), dt);
      const double ph = phase(em);
      double d = ph - prev;
      while (d > kPi) d -= 2 * kPi;
      while (d < -kPi) d += 2 * kPi;
      unwrapped += d;
      prev = ph;
    }
    // c(t) ~ exp(-i w t) for cos(kx - wt).
    const double v_num = -unwrapped / (steps * dt) / k;
    const double err = std::abs(1.0 - v_num / v);
    // Yee relation sin(w dt / 2) / dt = v sin(k h / 2) / h.
    const double w_yee = 2.0 / dt * std::asin(v * dt / h * std::sin(k * h / 2));
    MESSAGE("eps mu = " << eps * mu << ": |1 - v_num/v| = " << err << ", Yee prediction "
                        << std::abs(1.0 - w_yee / k / v) << ", bound " << bound);
    CHECK(err <= bound * 1.05);
    CHECK(std::abs(v_num - w_yee / k) < 1e-3 * v);
  }
}
