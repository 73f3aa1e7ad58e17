#include "llgvm/coupler.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "llgvm/emergent.hpp"
#include "llgvm/errors.hpp"
#include "llgvm/log.hpp"
#include "llgvm/spectral.hpp"
#include "llgvm/topology.hpp"

namespace llgvm {

namespace {

// Runs f, re-throwing library errors with the step and phase prepended while
// keeping their type.
template <class F>
auto phase(long step, const char* name, F&& f) -> decltype(f()) {
  auto tag = [&](const std::exception& e) {
    return "step " + std::to_string(step) + ", phase " + name + ": " + e.what();
  };
  try {
    return f();
  } catch (const BlowUp& e) {
    throw BlowUp(tag(e));
  } catch (const StepRefused& e) {
    throw StepRefused(tag(e));
  } catch (const StateCorruption& e) {
    throw StateCorruption(tag(e));
  } catch (const ContractViolation& e) {
    throw ContractViolation(tag(e));
  } catch (const Error& e) {
    throw Error(e.code(), tag(e));
  }
}

int llg_substeps(const CouplerParams& p, double dt) {
  if (p.llg_dt <= 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(dt / p.llg_dt - 1e-12)));
}

ScalarField neutralized(const ScalarField& rho) {
  ScalarField r = rho;
  const double m = mean(r);
  for (double& v : r.values()) v -= m;
  return r;
}

double dissipation_increment(const VectorField3& prev, const VectorField3& next, double alpha, double dt) {
  const VectorField3 d = (1.0 / dt) * (next - prev);
  return alpha * dt * l2_inner(d, d);
}

}  // namespace

double CouplingAudit::residual() const noexcept { return std::abs(kinetic_power + em_power + llg_power); }

double coupled_dt_max(const SimState& s) {
  const int sub = llg_substeps(s.params, s.dt);
  const double llg = s.params.coeffs.dt_max(s.mf.grid(), s.mf.h_zeeman) * sub;
  const double cfl = maxwell_cfl(s.em.grid(), s.em.eps_r, s.em.mu_r);
  return std::min(llg, cfl);
}

SimState make_state(MagnetizationField mf, ParticleEnsemble particles, const std::vector<EMMode>& modes,
                    double eps_r, double mu_r, const Mollifier& mollifier, const CouplerParams& params,
                    double dt) {
  const PeriodicGrid& g = mf.grid();
  require_same_grid(g, mollifier.grid(), "make_state");
  const Deposit d0 = deposit(particles, g);
  const ScalarField rho_s = mollify(d0.rho, mollifier);
  EMFieldPair em = init_compatible(rho_s, modes, eps_r, mu_r);
  SimState s{0.0,
             0,
             std::move(mf),
             std::move(particles),
             std::move(em),
             mollifier,
             EnergyLedger{},
             params,
             dt,
             VectorField3(g),
             CouplingAudit{},
             d0,
             0.0};
  if (!(dt > 0.0)) throw ContractViolation("make_state: dt must be > 0");
  const int sub = llg_substeps(params, dt);
  const double llg_max = params.coeffs.dt_max(g, s.mf.h_zeeman);
  if (dt / sub > llg_max)
    throw ContractViolation("make_state: LLG sub-step " + std::to_string(dt / sub) + " exceeds dt_max " +
                            std::to_string(llg_max));
  const double cfl = maxwell_cfl(g, eps_r, mu_r);
  if (!(dt < cfl))
    throw ContractViolation("make_state: dt " + std::to_string(dt) + " violates the Maxwell CFL bound " +
                            std::to_string(cfl));
  s.ledger.kinetic = kinetic_energy(s.particles);
  s.ledger.em_energy = em_energy(s.em, dt);
  s.ledger.micromagnetic = energy(s.mf);
  s.energy0 = s.ledger.total();
  return s;
}

SimState advance(const SimState& s) {
  const long n = s.step_index;
  const double dt = s.dt;
  const PeriodicGrid& g = s.mf.grid();
  const Mollifier& K = s.mollifier;
  SimState out = s;

  // (1) total fields at the particles
  const VectorField3 E_node = phase(n, "gather", [&] { return edges_to_force_nodes(s.em.E); });
  const VectorField3 b_now = phase(n, "gather", [&] { return compute_b(s.mf.m); });
  const VectorField3 FE = mollify(E_node + s.e_last, K);
  const VectorField3 FB = mollify(faces_to_nodes(s.em.B) + b_now, K);

  // (2) push
  out.particles = phase(n, "push", [&] { return lorentz_push(s.particles, FE, FB, dt); });

  // (3) deposit: current from the mid-step positions and mean velocities,
  // which are the points where the force was gathered.
  ParticleEnsemble mid = s.particles;
  for (std::size_t q = 0; q < mid.count(); ++q) {
    mid.x[q] = wrap_position(g, s.particles.x[q] + (0.5 * dt) * s.particles.v[q]);
    mid.v[q] = 0.5 * (s.particles.v[q] + out.particles.v[q]);
  }
  const Deposit dm = phase(n, "deposit", [&] { return deposit(mid, g); });
  Deposit dn = phase(n, "deposit", [&] { return deposit(out.particles, g); });
  out.last_deposit = Deposit{dn.rho, dm.j};

  // (4) mollified current
  const VectorField3 js = mollify(dm.j, K);

  // (5) magnetization
  const int sub = llg_substeps(s.params, dt);
  const double dts = dt / sub;
  double diss = 0.0;
  MagnetizationField m = s.mf;
  for (int k = 0; k < sub; ++k) {
    MagnetizationField next = phase(n, "llg", [&] { return step(m, js, dts, s.params.coeffs, s.params.llg_options); });
    diss += dissipation_increment(m.m, next.m, s.params.coeffs.alpha, dts);
    m = std::move(next);
  }
  out.mf = std::move(m);

  // (6) emergent e at the half step
  out.e_last = phase(n, "emergent", [&] { return compute_e(s.mf.m, out.mf.m, dt); });

  // (7) Maxwell with source K j
  out.em = phase(n, "maxwell", [&] { return step_fields(s.em, js, dt); });

  // (8) ledger
  out.step_index = n + 1;
  out.t = out.step_index * dt;
  out.ledger.kinetic = kinetic_energy(out.particles);
  out.ledger.em_energy = em_energy(out.em, dt);
  out.ledger.micromagnetic = phase(n, "ledger", [&] { return energy(out.mf); });
  out.ledger.dissipation_cum = s.ledger.dissipation_cum + diss;
  out.last_audit = coupling_powers(s, out);
  out.ledger.coupling_residual = out.last_audit.residual();
  if (!std::isfinite(out.ledger.total()))
    throw BlowUp("step " + std::to_string(n) + ", phase ledger: non-finite energy");
  return out;
}

CouplingAudit coupling_powers(const SimState& prev, const SimState& next) {
  const Mollifier& K = prev.mollifier;
  const VectorField3& j = next.last_deposit.j;
  const VectorField3 js = mollify(j, K);
  CouplingAudit a;
  a.kinetic_power = l2_inner(j, mollify(edges_to_force_nodes(prev.em.E) + prev.e_last, K));
  a.em_power = -l2_inner(current_to_edges(js), 0.5 * (prev.em.E + next.em.E));
  a.llg_power = -l2_inner(js, next.e_last);
  return a;
}

double energy_audit(const SimState& prev, const SimState& next) { return coupling_powers(prev, next).residual(); }

double self_adjointness_defect(const Mollifier& k, const VectorField3& a, const VectorField3& b) {
  const double s = l2_norm(a) * l2_norm(b);
  if (s == 0.0) return 0.0;
  return std::abs(l2_inner(k.apply(a), b) - l2_inner(a, k.apply(b))) / s;
}

double ledger_residual(const SimState& s) {
  return std::abs(s.ledger.total() - s.energy0 + s.ledger.dissipation_cum);
}

LedgerRow ledger_row(const SimState& s) {
  LedgerRow r;
  r.t = s.t;
  r.energy = s.ledger;
  r.divB = div_b_residual(s.em);
  r.gauss_residual = gauss_residual(s.em, neutralized(mollify(s.last_deposit.rho, s.mollifier)));
  const int zmid = s.mf.grid().n(2) / 2;
  try {
    r.Q_mid_slice = skyrmion_number(s.mf, zmid);
  } catch (const DegenerateSlice&) {
    r.Q_mid_slice = std::numeric_limits<double>::quiet_NaN();
  }
  r.hopf = std::numeric_limits<double>::quiet_NaN();
  if (s.params.track_hopf && has_zero_flux(compute_b(s.mf.m))) r.hopf = hopf_invariant(s.mf);
  return r;
}

std::string ledger_csv_header() {
  return "t,kinetic,em,micromagnetic,dissipation_cum,total,coupling_residual,divB,gauss_residual,Q_mid_slice,hopf";
}

std::string ledger_csv_line(const LedgerRow& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.t << ',' << r.energy.kinetic << ',' << r.energy.em_energy << ',' << r.energy.micromagnetic << ','
     << r.energy.dissipation_cum << ',' << r.energy.total() << ',' << r.energy.coupling_residual << ','
     << r.divB << ',' << r.gauss_residual << ',' << r.Q_mid_slice << ',' << r.hopf;
  return os.str();
}

}  // namespace llgvm
