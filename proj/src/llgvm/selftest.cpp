#include "llgvm/selftest.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "llgvm/config.hpp"
#include "llgvm/coupler.hpp"
#include "llgvm/emergent.hpp"
#include "llgvm/errors.hpp"
#include "llgvm/parallel.hpp"
#include "llgvm/snapshot.hpp"
#include "llgvm/spectral.hpp"
#include "llgvm/topology.hpp"

namespace llgvm {

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

VectorField3 noise(const PeriodicGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  VectorField3 v(g);
  for (int c = 0; c < 3; ++c)
    for (double& x : v.component(c)) x = d(rng);
  return v;
}

VectorField3 tangent_noise(const VectorField3& m, std::mt19937_64& rng) {
  VectorField3 xi = noise(m.grid(), rng);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 mi = m.get(i), x = xi.get(i);
    xi.set(i, x - dot(mi, x) * mi);
  }
  return xi;
}

Outcome spectral_exactness() {
  const PeriodicGrid g({8, 12, 16}, {4.0, 6.0, 8.0});
  const Vec3 k{2 * kPi * 2 / 4.0, 2 * kPi * 1 / 6.0, -2 * kPi * 3 / 8.0};
  ScalarField u(g);
  double err = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto c = g.coords(q);
    u[q] = std::cos(dot(k, g.node_position(c[0], c[1], c[2])));
  }
  const VectorField3 gu = grad(u);
  const ScalarField lu = laplacian(u);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto c = g.coords(q);
    const double s = std::sin(dot(k, g.node_position(c[0], c[1], c[2])));
    for (int a = 0; a < 3; ++a) err = std::max(err, std::abs(gu.component(a)[q] + k[a] * s));
    err = std::max(err, std::abs(lu[q] + dot(k, k) * u[q]) / dot(k, k));
  }
  return {err < 1e-12, "max error " + num(err)};
}

Outcome mollifier_symmetry() {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  const Mollifier K(g, default_mollifier_epsilon(g));
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) worst = std::max(worst, self_adjointness_defect(K, noise(g, rng), noise(g, rng)));
  const ScalarField one(g, 1.0);
  const double mass = std::abs(max_abs(mollify(one, K) - one));
  return {worst <= 1e-12 && mass <= 1e-14, "defect " + num(worst) + ", constant preserved to " + num(mass)};
}

Outcome ll_structure() {
  const PeriodicGrid g = PeriodicGrid::cubic(8, 4.0);
  std::mt19937_64 rng(9);
  const VectorField3 m = init_random_smooth(g, 3);
  const VectorField3 xi = tangent_noise(m, rng);
  const double alpha = 0.3;
  const VectorField3 ax = apply_A(m, xi, alpha);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double n2 = dot(xi.get(i), xi.get(i));
    const double a2 = dot(ax.get(i), ax.get(i));
    worst = std::max(worst, std::abs(a2 - (1 + alpha * alpha) * n2) / std::max(n2, 1e-300));
  }
  return {worst <= 1e-14, "|A xi|^2 vs (1+a^2)|xi|^2 relative " + num(worst)};
}

Outcome llg_energy_decay() {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  MagnetizationField mf{init_skyrmion_tube(g, 1.5), 0.5, 0.1};
  const LLCoefficients co = LLCoefficients::make(0.1);
  double e = energy(mf), worst = -std::numeric_limits<double>::infinity(), defect = 0.0;
  for (int s = 0; s < 5; ++s) {
    mf = step(mf, VectorField3(g), 0.01, co);
    const double en = energy(mf);
    worst = std::max(worst, en - e);
    e = en;
    defect = std::max(defect, unit_norm_defect(mf.m));
  }
  return {worst <= 0.0 && defect <= 1e-15, "max energy increase " + num(worst) + ", unit-norm defect " + num(defect)};
}

Outcome topology() {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  const MagnetizationField mf{init_skyrmion_tube(g, 1.5), 0.5, 0.1};
  const double q = skyrmion_number(mf, 8);
  const PeriodicGrid coarse = PeriodicGrid::cubic(32, 16.0);
  const double divb = magnetic_gauss_residual(compute_b(init_random_smooth(coarse, 500, 1, 2.0)));
  return {q == -1.0 && divb < 1e-8, "Q = " + num(q) + ", div b relative " + num(divb)};
}

Outcome pure_b_push() {
  const PeriodicGrid g = PeriodicGrid::cubic(8, 4.0);
  F0Spec f;
  f.kind = "uniform_maxwellian";
  f.v_th = 1.0;
  ParticleEnsemble p = sample_initial(f, 64, 3, g);
  VectorField3 b(g);
  std::mt19937_64 rng(2);
  b = noise(g, rng);
  std::vector<double> s0;
  for (const Vec3& v : p.v) s0.push_back(norm(v));
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) p = lorentz_push(p, VectorField3(g), b, 0.05);
  for (std::size_t i = 0; i < p.count(); ++i)
    worst = std::max(worst, std::abs(norm(p.v[i]) - s0[i]) / (s0[i] * std::numeric_limits<double>::epsilon()));
  return {worst <= 1e3, "speed change after 100 steps " + num(worst) + " ulp"};
}

Outcome deposit_mass() {
  const PeriodicGrid g = PeriodicGrid::cubic(8, 4.0);
  F0Spec f;
  f.center = {2.0, 2.0, 2.0};
  f.radius = 1.0;
  f.mass = 2.5;
  const ParticleEnsemble p = sample_initial(f, 1000, 4, g);
  const Deposit d = deposit(p, g);
  double q = 0.0;
  for (double v : d.rho.values()) q += v;
  q *= g.cell_volume();
  return {std::abs(q + f.mass) <= 1e-12 * f.mass, "deposited charge " + num(q) + " for mass " + num(f.mass)};
}

Outcome maxwell_invariants() {
  const PeriodicGrid g = PeriodicGrid::cubic(8, 4.0);
  EMFieldPair em = init_compatible(ScalarField(g), parse_em_modes("1 0 0 0.4 0.2; 1 2 1 0.1 0.3"), 1.0, 1.0);
  const double dt = 0.8 * maxwell_cfl(g, 1.0, 1.0);
  const double w0 = em_energy(em, dt);
  double drift = 0.0, divb = 0.0;
  for (int s = 0; s < 100; ++s) {
    em = step_fields(em, VectorField3(g), dt);
    drift = std::max(drift, std::abs(em_energy(em, dt) - w0) / w0);
    divb = std::max(divb, div_b_residual(em));
  }
  return {drift < 1e-10 && divb < 1e-12, "energy drift " + num(drift) + ", div B " + num(divb)};
}

Outcome moments() {
  const double ell = moment_ell(2.0, 1.0, 4.0);
  return {std::abs(ell - 17.0 / 14.0) < 1e-15, "ell = " + num(ell)};
}

Outcome snapshots() {
  const PeriodicGrid g({4, 6, 8}, {1.0, 2.0, 3.0});
  std::mt19937_64 rng(8);
  const VectorField3 v = noise(g, rng);
  Bytes b = encode_snapshot(v, "m", 1.25);
  SnapshotInfo info;
  const bool round = decode_vector_snapshot(b, &info) == v && info.time == 1.25 && info.name == "m";
  auto code = [](const Bytes& bytes) {
    try {
      decode_vector_snapshot(bytes);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::internal;
  };
  Bytes flipped = b;
  flipped[kSnapshotHeaderSize + 17] ^= 0x10;
  Bytes cut(b.begin(), b.end() - 5);
  Bytes ver = b;
  ver[7] = '2';
  const bool errs = code(flipped) == ErrorCode::checksum && code(cut) == ErrorCode::truncated &&
                    code(ver) == ErrorCode::version;
  return {round && errs, std::string("round trip ") + (round ? "exact" : "differs") + ", corruption " +
                             (errs ? "detected" : "missed")};
}

Outcome config_validation() {
  const RunConfig c = parse_config_text("", "selftest");
  bool ok = c.grid_n == 32 && c.run_n_steps == 200 && c.kinetic_n_particles == 10000 && c.f0.center[0] == 8.0;
  std::size_t problems = 0;
  try {
    parse_config_text("grid.n = 33\nllg.alpah = 1\nrun.dt = x\n", "selftest");
    ok = false;
  } catch (const ConfigError& e) {
    problems = e.problems().size();
  }
  ok = ok && problems == 3;
  return {ok, "defaults read, " + std::to_string(problems) + " of 3 problems reported"};
}

SimState small_coupled(std::size_t particles) {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  F0Spec f;
  f.center = {4.0, 4.0, 4.0};
  f.radius = 1.5;
  f.v_th = 0.2;
  MagnetizationField mf{init_skyrmion_tube(g, 1.5), 0.5, 0.1};
  return make_state(std::move(mf), particles ? sample_initial(f, particles, 6, g) : ParticleEnsemble{},
                    parse_em_modes("1 0 0 0.05 0.05"), 1.0, 1.0, Mollifier(g, default_mollifier_epsilon(g)),
                    CouplerParams{}, 0.01);
}

Outcome coupled_step() {
  const PeriodicGrid g = PeriodicGrid::cubic(16, 8.0);
  SimState fixed = make_state(MagnetizationField{init_uniform(g), 0.5, 0.1}, ParticleEnsemble{}, {}, 1.0, 1.0,
                              Mollifier(g, default_mollifier_epsilon(g)), CouplerParams{}, 0.01);
  const SimState next = advance(fixed);
  const bool still = next.mf.m == fixed.mf.m && max_abs(next.em.E) == 0.0 && next.ledger.total() == 0.0;
  SimState s = small_coupled(1000);
  double prev = s.ledger.total(), worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    s = advance(s);
    worst = std::max(worst, s.ledger.total() - prev);
    prev = s.ledger.total();
  }
  const double tol = 1e-6 * std::abs(s.energy0);
  return {still && worst <= tol, std::string("fixed point ") + (still ? "kept" : "lost") +
                                     ", max energy increase " + num(worst)};
}

Outcome thread_independence() {
  const int saved = parallel::thread_count();
  auto run = [](int threads) {
    parallel::set_thread_count(threads);
    SimState s = small_coupled(1000);
    for (int k = 0; k < 2; ++k) s = advance(s);
    return std::pair{ledger_csv_line(ledger_row(s)), encode_snapshot(s.particles, s.mf.grid(), "p", s.t)};
  };
  std::pair<std::string, Bytes> a, b;
  try {
    a = run(1);
    b = run(4);
  } catch (...) {
    parallel::set_thread_count(saved);
    throw;
  }
  parallel::set_thread_count(saved);
  return {a == b, a == b ? "ledger rows and particles identical for 1 and 4 threads" : "results differ"};
}

}  // namespace

int SelftestResult::failures() const {
  int n = 0;
  for (const auto& c : checks) n += c.passed ? 0 : 1;
  return n;
}

SelftestResult run_selftest(std::ostream* out) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> suite = {
      {"spectral derivatives exact on a mode", spectral_exactness},
      {"mollifier self-adjoint and mass preserving", mollifier_symmetry},
      {"A(m) norm identity", ll_structure},
      {"LLG energy non-increasing, |m| = 1", llg_energy_decay},
      {"skyrmion number and div b", topology},
      {"pure-B push conserves speed", pure_b_push},
      {"deposit conserves charge", deposit_mass},
      {"Maxwell energy and div B", maxwell_invariants},
      {"moment exponent 17/14", moments},
      {"snapshot round trip and corruption", snapshots},
      {"config defaults and error collection", config_validation},
      {"coupled step fixed point and energy", coupled_step},
      {"thread-count independence", thread_independence},
  };
  SelftestResult res;
  for (const auto& [name, fn] : suite) {
    SelftestCheck c{name, false, ""};
    try {
      const Outcome o = fn();
      c.passed = o.ok;
      c.detail = o.detail;
    } catch (const std::exception& e) {
      c.detail = std::string("threw: ") + e.what();
    }
    if (out) *out << "selftest: " << (c.passed ? "PASS" : "FAIL") << "  " << c.name << " (" << c.detail << ")\n";
    res.checks.push_back(std::move(c));
  }
  if (out) *out << "selftest: " << res.failures() << " of " << res.checks.size() << " checks failed\n";
  return res;
}

}  // namespace llgvm
