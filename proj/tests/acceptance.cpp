// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// all pass. Usage: acceptance --cli <llgvm binary> --configs <dir> --work <dir>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "CLI11.hpp"
#include "llgvm/config.hpp"
#include "llgvm/coupler.hpp"
#include "llgvm/emergent.hpp"
#include "llgvm/kinetic.hpp"
#include "llgvm/magnetization.hpp"
#include "llgvm/maxwell.hpp"
#include "llgvm/run.hpp"
#include "llgvm/smoothing.hpp"
#include "llgvm/snapshot.hpp"
#include "llgvm/spectral.hpp"
#include "llgvm/topology.hpp"
#include "support.hpp"

using namespace llgvm;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  // Records one sub-check; the criterion passes only if all of them do.
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [failed]");
  }
};

std::string num(double v, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VectorField3 noise(const PeriodicGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  VectorField3 v(g);
  for (int c = 0; c < 3; ++c)
    for (double& x : v.component(c)) x = n(rng);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// 1. Energy law of the default coupled run.
void energy_dissipation(Check& c) {
  RunConfig cfg = parse_config_text("");
  const double T = cfg.run_dt * cfg.run_n_steps;
  auto run = [&](double dt, double& max_rise, double& seconds) {
    RunConfig k = cfg;
    k.run_dt = dt;
    validate(k);
    const auto t0 = std::chrono::steady_clock::now();
    SimState s = build_state(k);
    const long steps = std::lround(T / dt);
    max_rise = -std::numeric_limits<double>::infinity();
    double prev = s.ledger.total();
    for (long n = 0; n < steps; ++n) {
      s = advance(s);
      max_rise = std::max(max_rise, s.ledger.total() - prev);
      prev = s.ledger.total();
    }
    seconds = seconds_since(t0);
    return std::pair{ledger_residual(s), s.energy0};
  };
  double rise1, rise2, sec1, sec2;
  const auto [r1, e0] = run(cfg.run_dt, rise1, sec1);
  const auto [r2, e0b] = run(cfg.run_dt / 2, rise2, sec2);
  const double tol = 1e-6 * std::abs(e0);
  const double order = std::log2(r1 / r2);
  c.require(rise1 <= tol && rise2 <= tol,
            "max per-step energy change " + num(rise1) + " (dt) and " + num(rise2) + " (dt/2), tol " + num(tol));
  c.require(e0 == e0b, "same initial energy " + num(e0, 8));
  c.require(order >= 0.9, "ledger residual " + num(r1) + " -> " + num(r2) + ", order " + num(order));
  c.require(sec1 < 120.0, "200-step run " + num(sec1) + " s");
}

// 2. Self-adjointness of the mollifier.
void self_adjointness(Check& c) {
  const PeriodicGrid g = PeriodicGrid::cubic(32, 16.0);
  const Mollifier K(g, default_mollifier_epsilon(g));
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int r = 0; r < 100; ++r) {
    const VectorField3 j = noise(g, rng), e = noise(g, rng);
    worst = std::max(worst, self_adjointness_defect(K, j, e));
  }
  c.require(worst <= 1e-12, "worst |<Kj,e> - <j,Ke>| / (|j||e|) over 100 pairs " + num(worst));
}

// 3. Skyrmion number, hopfion helicity and its drift under the LLG flow.
void topology(Check& c) {
  const PeriodicGrid g32 = PeriodicGrid::cubic(32, 16.0);
  const MagnetizationField sk{init_skyrmion_tube(g32, 2.0), 0.5, 0.1};
  bool all = true;
  for (int z = 0; z < 32; ++z) all = all && skyrmion_number(sk, z) == -1.0;
  c.require(all, "skyrmion tube Q = -1 on all 32 slices");

  const PeriodicGrid g = PeriodicGrid::cubic(64, 16.0);
  MagnetizationField mf{init_hopfion(g, 2.5), 0.5, 0.1};
  const double H0 = hopf_invariant(mf);
  c.require(H0 >= 0.99 && H0 <= 1.01, "hopfion H = " + num(H0, 8) + " at N = 64");

  // dt resolves the relaxation of the ansatz (energy falls by 47%).
  const double dt = 5e-4;
  const LLCoefficients coeffs = LLCoefficients::make(mf.alpha);
  const VectorField3 j(g);
  double drift = 0.0, rise = -std::numeric_limits<double>::infinity(), e = energy(mf);
  const double e_start = e;
  for (int s = 0; s < 100; ++s) {
    mf = step(mf, j, dt, coeffs);
    drift = std::max(drift, std::abs(hopf_invariant(mf) - H0));
    const double en = energy(mf);
    rise = std::max(rise, en - e);
    e = en;
  }
  c.require(drift < 5e-3, "max |H - H0| over 100 LLG steps of dt = " + num(dt) + ": " + num(drift) +
                              " (energy " + num(e_start, 6) + " -> " + num(e, 6) + ", max rise " + num(rise) + ")");
}

VectorField3 translated_texture(const PeriodicGrid& g, const Vec3& shift) {
  const double k = 2 * kPi / g.length(0);
  return sample_vec(g, [&](const Vec3& x0) {
    const Vec3 x = x0 - shift;
    const Vec3 v{std::cos(k * x[0]) + 0.5 * std::sin(k * x[2]), std::sin(k * x[1]) + 0.3 * std::cos(k * x[0]),
                 1.5 + 0.4 * std::cos(k * x[1])};
    return (1.0 / norm(v)) * v;
  });
}

// 4. Emergent Gauss and Faraday laws.
void emergent_maxwell(Check& c) {
  const PeriodicGrid g = PeriodicGrid::cubic(32, 16.0);
  double worst = magnetic_gauss_residual(compute_b(init_skyrmion_tube(g, 2.0)));
  for (unsigned s = 0; s < 20; ++s)
    worst = std::max(worst, magnetic_gauss_residual(compute_b(init_random_smooth(g, 700 + s, 1, 2.0))));
  c.require(worst < 1e-8, "||div b|| / ||b|| on the skyrmion and 20 resolved fields " + num(worst));

  const Vec3 vel{1.0, 0.4, -0.3};
  const VectorField3 m0 = translated_texture(g, {0, 0, 0});
  const double nb = l2_norm(compute_b(m0));
  std::vector<VectorField3> r;
  double floor = 0.0;
  for (double dt : {0.4, 0.2, 0.1, 0.05}) {
    const VectorField3 m1 = translated_texture(g, dt * vel);
    r.push_back((1.0 / dt) * (compute_b(m1) - compute_b(m0)) + curl(compute_e(m0, m1, dt)));
    floor = std::max(floor, faraday_residual(m0, m1, dt));
  }
  std::string orders;
  bool ok = true;
  for (int q = 0; q + 2 < 4; ++q) {
    const double o = std::log2(l2_norm(r[q] - r[q + 1]) / l2_norm(r[q + 1] - r[q + 2]));
    ok = ok && o >= 0.9;
    orders += (orders.empty() ? "" : ", ") + num(o);
  }
  c.require(ok, "Faraday residual Richardson orders " + orders + " (dt 0.4 .. 0.05)");
  c.require(floor < 1e-4, "Faraday residual " + num(floor) + " relative to ||b|| = " + num(nb));
}

// 5. Structure of the Landau-Lifshitz form and coercivity of the energy.
void structure(Check& c) {
  const PeriodicGrid g = PeriodicGrid::cubic(32, 16.0);
  const double a = 0.1;
  double lam = 0.0, divf = 0.0, aid = 0.0;
  for (unsigned s = 0; s < 20; ++s) {
    const MagnetizationField mf{init_random_smooth(g, 300 + s, 1, 3.0), 0.5, a};
    const LLRhs r = ll_rhs(mf, VectorField3(g));
    lam = std::max(lam, l2_norm(lambda_identity_form(mf.m) - r.parts.Lambda_term) / l2_norm(r.parts.Lambda_term));
    const VectorField3 lhs = highest_order_term(mf.m);
    divf = std::max(divf, l2_norm(lhs - highest_order_divergence_form(mf.m)) / l2_norm(lhs));
    VectorField3 xi = random_smooth_vec(g, 900 + s, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec3 m = mf.m.get(i), x = xi.get(i);
      xi.set(i, x - dot(m, x) * m);
    }
    const VectorField3 Axi = apply_A(mf.m, xi, a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x2 = dot(xi.get(i), xi.get(i));
      if (x2 > 0.0) aid = std::max(aid, std::abs(dot(Axi.get(i), Axi.get(i)) - (1 + a * a) * x2) / x2);
    }
  }
  c.require(lam < 1e-8, "Lambda identity " + num(lam));
  c.require(divf < 1e-8, "divergence form " + num(divf));
  c.require(aid < 1e-14, "|A xi|^2 = (1+a^2)|xi|^2 to " + num(aid));

  // The bound is for the integral without the prefactor 1/2, i.e. 2 E(m).
  const PeriodicGrid g16 = PeriodicGrid::cubic(16, 16.0);
  const double h = 0.5, eps = 0.3;
  double margin = std::numeric_limits<double>::infinity();
  int literal = 0;
  for (unsigned s = 0; s < 100; ++s) {
    const MagnetizationField mf{init_random_smooth(g16, 1000 + s, 3, 1.2 + 0.01 * s), h, a};
    const EnergyParts p = energy_parts(mf);
    const double E = energy(mf);
    const double bound = (1 - 1 / (4 * eps)) * p.hessian2 + (h - eps) * p.zeeman2;
    margin = std::min(margin, (2 * E - bound) / std::abs(E));
    if (E < bound) ++literal;
  }
  c.require(margin >= -1e-12, "2E - bound >= 0 on 100 fields (min relative margin " + num(margin) + ", " +
                                  std::to_string(literal) + " below the bound without the factor 2)");
}

ParticleEnsemble single(const Vec3& x, const Vec3& v) {
  ParticleEnsemble p;
  p.x = {x};
  p.v = {v};
  p.w = {1.0};
  return p;
}

double min_image(double d, double L) { return d - L * std::round(d / L); }

double det6(std::array<std::array<double, 6>, 6> m) {
  double d = 1.0;
  for (int c = 0; c < 6; ++c) {
    int p = c;
    for (int r = c + 1; r < 6; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (int r = c + 1; r < 6; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 6; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

// 6. Push: speed, volume, mass and orbit order.
void kinetic_structure(Check& c) {
  const PeriodicGrid g = PeriodicGrid::cubic(8, 16.0);
  const VectorField3 E0(g), Bz(g, {0.0, 0.0, 1.0});
  {
    std::mt19937_64 rng(8);
    const VectorField3 B = noise(g, rng);
    F0Spec f;
    f.kind = "uniform_maxwellian";
    f.v_th = 1.0;
    ParticleEnsemble p = sample_initial(f, 1000, 3, g);
    std::vector<double> s0;
    for (const Vec3& v : p.v) s0.push_back(norm(v));
    double step_ulp = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const ParticleEnsemble q = lorentz_push(p, E0, B, 0.05);
      for (std::size_t i = 0; i < p.count(); ++i)
        step_ulp = std::max(step_ulp, std::abs(norm(q.v[i]) - norm(p.v[i])) /
                                          (norm(p.v[i]) * std::numeric_limits<double>::epsilon()));
      p = q;
    }
    c.require(step_ulp <= 4.0, "pure-B speed change per step " + num(step_ulp) + " ulp (1000 particles, 1000 steps)");
  }
  {
    const PeriodicGrid gj = PeriodicGrid::cubic(8, 2.0);
    const VectorField3 E = 0.5 * random_smooth_vec(gj, 3, 1);
    const VectorField3 B = 0.8 * random_smooth_vec(gj, 11, 1);
    const double dt = 0.05, d = 1e-4, h = gj.spacing(0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.3, 0.7);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Vec3 x0{(2 + u(rng)) * h, (3 + u(rng)) * h, (4 + u(rng)) * h};
      const Vec3 v0{0.02 * (u(rng) - 0.5), 0.02 * (u(rng) - 0.5), 0.02 * (u(rng) - 0.5)};
      std::array<std::array<double, 6>, 6> J{};
      for (int col = 0; col < 6; ++col) {
        Vec3 xp = x0, vp = v0, xm = x0, vm = v0;
        if (col < 3) {
          xp[col] += d;
          xm[col] -= d;
        } else {
          vp[col - 3] += d;
          vm[col - 3] -= d;
        }
        const ParticleEnsemble a = lorentz_push(single(xp, vp), E, B, dt);
        const ParticleEnsemble b = lorentz_push(single(xm, vm), E, B, dt);
        for (int r = 0; r < 3; ++r) {
          J[r][col] = min_image(a.x[0][r] - b.x[0][r], 2.0) / (2 * d);
          J[r + 3][col] = (a.v[0][r] - b.v[0][r]) / (2 * d);
        }
      }
      worst = std::max(worst, std::abs(det6(J) - 1.0));
    }
    c.require(worst < 1e-10, "max |det J - 1| over 50 phase points " + num(worst));
  }
  {
    RunConfig cfg = parse_config_text("grid.n = 16\ngrid.length = 8\nkinetic.n_particles = 5000\n");
    SimState s = build_state(cfg);
    const double m0 = total_moment(s.particles, 0.0);
    const std::vector<double> w0 = s.particles.w;
    for (int k = 0; k < 20; ++k) s = advance(s);
    const double q = -std::accumulate(s.last_deposit.rho.values().begin(), s.last_deposit.rho.values().end(), 0.0) *
                     s.mf.grid().cell_volume();
    c.require(s.particles.w == w0 && total_moment(s.particles, 0.0) == m0,
              "weights and total mass " + num(m0, 17) + " unchanged over 20 coupled steps");
    c.require(rel(q, m0) <= 1e-12, "deposited charge matches the mass to " + num(rel(q, m0)));
  }
  {
    auto rk4 = [](Vec3& x, Vec3& v, double dt, int steps) {
      auto acc = [](const Vec3& u) { return -1.0 * cross(u, Vec3{0, 0, 1}); };
      for (int s = 0; s < steps; ++s) {
        const Vec3 k1x = v, k1v = acc(v);
        const Vec3 k2x = v + (dt / 2) * k1v, k2v = acc(v + (dt / 2) * k1v);
        const Vec3 k3x = v + (dt / 2) * k2v, k3v = acc(v + (dt / 2) * k2v);
        const Vec3 k4x = v + dt * k3v, k4v = acc(v + dt * k3v);
        x = x + (dt / 6) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v = v + (dt / 6) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      }
    };
    const double T = 3.3;
    const Vec3 x0{8.0, 8.0, 8.0}, v0{0.5, 0.0, 0.1};
    auto err = [&](int steps) {
      const double dt = T / steps;
      ParticleEnsemble q = single(x0, v0);
      for (int s = 0; s < steps; ++s) q = lorentz_push(q, E0, Bz, dt);
      Vec3 x = x0, v = v0;
      rk4(x, v, dt / 100, steps * 100);
      Vec3 d;
      for (int a = 0; a < 3; ++a) d[a] = min_image(q.x[0][a] - x[a], 16.0);
      return norm(d);
    };
    const double e1 = err(32), e2 = err(64), e3 = err(128);
    const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
    c.require(o1 >= 1.9 && o2 >= 1.9, "gyro-orbit orders " + num(o1) + ", " + num(o2) + " against RK4 at dt/100");
  }
}

// 7. Yee solver: div B, energy, dispersion.
void maxwell_solver(Check& c) {
  {
    const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
    EMFieldPair em =
        init_compatible(ScalarField(g), parse_em_modes("1 0 0 0.4 0.2; 2 3 1 0.1 0.3; 5 -4 7 0.05 0.05"), 1.5, 2.0);
    em.B = em.B + curl_edge(random_smooth_vec(g, 9, 4));
    const double dt = 0.8 * maxwell_cfl(g, em.eps_r, em.mu_r);
    const double w0 = em_energy(em, dt);
    double drift = 0.0, divb = 0.0;
    for (int s = 0; s < 1000; ++s) {
      em = step_fields(em, VectorField3(g), dt);
      drift = std::max(drift, std::abs(em_energy(em, dt) - w0) / w0);
      divb = std::max(divb, div_b_residual(em));
    }
    c.require(divb < 1e-12, "max discrete div B " + num(divb) + " over 1000 steps");
    c.require(drift < 1e-10, "source-free energy drift " + num(drift) + " over 1000 steps");
  }
  const int N = 64;
  const PeriodicGrid g({N, 4, 4}, {16.0, 1.0, 1.0});
  const double h = g.spacing(0), k = 2 * kPi * 4 / 16.0;
  const double bound = (k * h) * (k * h) / 24.0;
  for (auto [eps, mu] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{2.0, 2.0}}) {
    const double v = 1.0 / std::sqrt(eps * mu);
    EMFieldPair em{VectorField3(g), VectorField3(g), eps, mu};
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double x = g.coords(q)[0] * h;
      em.E.component(1)[q] = std::cos(k * x);
      em.B.component(2)[q] = std::cos(k * (x + h / 2)) / v;
    }
    auto phase = [&](const EMFieldPair& f) {
      std::complex<double> z = 0.0;
      for (int i = 0; i < N; ++i) z += f.E.component(1)[g.index(i, 0, 0)] * std::polar(1.0, -k * i * h);
      return std::arg(z);
    };
    const double dt = 0.5 * maxwell_cfl(g, eps, mu);
    const int steps = int(std::round(10 * (2 * kPi / (k * v)) / dt));
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
    const double err = std::abs(1.0 + unwrapped / (steps * dt) / k / v);
    c.require(err <= bound, "eps_r mu_r = " + num(eps * mu) + ": phase-speed error " + num(err) + " <= " + num(bound));
  }
}

// 8. Moment exponent, homogeneity and the Maxwellian L^ell norm.
void moments(Check& c) {
  const double ell = moment_ell(2, 1, 4);
  c.require(std::abs(ell - 17.0 / 14.0) < 1e-15, "ell(2, 1, 4) = " + num(ell, 17));
  const PeriodicGrid g = PeriodicGrid::cubic(16, 16.0);
  F0Spec b;
  b.kind = "bump_maxwellian";
  b.center = {8, 8, 8};
  b.radius = 2.0;
  b.v_th = 1.0;
  const ParticleEnsemble p = sample_initial(b, 100000, 42, g);
  MomentParams mp;
  mp.p = 4.0;
  mp.velocity_bin = 0.5;
  const MomentEstimate e = moment_report(p, g, {{2, 1}}, mp).lp_estimates[0];
  c.require(std::abs(e.exponent_a + e.exponent_b - 1.0) < 1e-12,
            "exponents " + num(e.exponent_a, 6) + " + " + num(e.exponent_b, 6) + " = 1");
  const double R = 2.0;
  const double amp = 2.0 * std::sqrt(2.0 / kPi) * std::pow(2 * kPi * R * R, -1.5);
  const double closed = amp * std::pow(2 * kPi * R * R / ell, 1.5 / ell);
  c.require(rel(e.lhs, closed) < 0.05,
            "||m1||_ell " + num(e.lhs, 6) + " vs closed form " + num(closed, 6) + " (n = 1e5)");
}

// 9. Thread independence through the CLI, snapshots, selftest.
void determinism(Check& c, const std::string& cli, const fs::path& configs, const fs::path& work) {
  const std::string cfg = (configs / "skyrmion.cfg").string();
  const fs::path d1 = work / "threads1", d8 = work / "threads8";
  const int rc1 = run_command("\"" + cli + "\" run --config \"" + cfg + "\" --output \"" + d1.string() +
                              "\" --threads 1 > /dev/null");
  const int rc8 = run_command("\"" + cli + "\" run --config \"" + cfg + "\" --output \"" + d8.string() +
                              "\" --threads 8 > /dev/null");
  c.require(rc1 == 0 && rc8 == 0, "runs exit " + std::to_string(rc1) + " and " + std::to_string(rc8));
  if (rc1 == 0 && rc8 == 0) {
    const Bytes l1 = read_file((d1 / "ledger.csv").string()), l8 = read_file((d8 / "ledger.csv").string());
    c.require(l1 == l8 && !l1.empty(), "ledger.csv identical for --threads 1 and 8 (" + std::to_string(l1.size()) + " bytes)");
    bool same = true;
    for (const char* f : {"m_000200.llgf", "E_000200.llgf", "B_000200.llgf", "particles_000200.llgf"})
      same = same && read_file((d1 / f).string()) == read_file((d8 / f).string());
    c.require(same, "final m, E, B and particle snapshots identical");

    // Bitwise round trip of what the run wrote.
    const VectorField3 m = read_vector_snapshot((d1 / "m_000200.llgf").string());
    const fs::path again = work / "m_again.llgf";
    write_snapshot(again.string(), m, "m", 2.0);
    c.require(read_vector_snapshot(again.string()) == m, "snapshot re-written and re-read bitwise equal");
  }
  const PeriodicGrid g = PeriodicGrid::cubic(64, 16.0);
  const MagnetizationField hf{init_hopfion(g, 2.5), 0.5, 0.1};
  const double H = hopf_invariant(hf);
  const MagnetizationField back{decode_vector_snapshot(encode_snapshot(hf.m, "m", 0.0)), 0.5, 0.1};
  const double H2 = hopf_invariant(back);
  c.require(std::memcmp(&H, &H2, sizeof H) == 0, "hopfion snapshot reproduces H = " + num(H, 17) + " exactly");

  const int rcs = run_command("\"" + cli + "\" selftest > \"" + (work / "selftest.txt").string() + "\"");
  c.require(rcs == 0, "selftest exit " + std::to_string(rcs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string cli, configs, work;
  app.add_option("--cli", cli, "llgvm executable")->required();
  app.add_option("--configs", configs, "Bundled config directory")->required();
  app.add_option("--work", work, "Scratch directory")->required();
  CLI11_PARSE(app, argc, argv);
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"energy dissipation law of the coupled run", energy_dissipation},
      {"mollifier self-adjointness", self_adjointness},
      {"topological quantization", topology},
      {"emergent Gauss and Faraday laws", emergent_maxwell},
      {"structural identities and coercivity", structure},
      {"kinetic structure of the push", kinetic_structure},
      {"Maxwell solver invariants and dispersion", maxwell_solver},
      {"moment machinery", moments},
      {"determinism and IO", [&](Check& c) { determinism(c, cli, configs, work); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("threw: ") + e.what());
    }
    failed += c.pass ? 0 : 1;
    std::printf("criterion %zu: %s  %s (%s) [%.1f s]\n", i + 1, c.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                c.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("acceptance: %d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
