#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llgvm/kinetic.hpp"
#include "llgvm/magnetization.hpp"
#include "llgvm/maxwell.hpp"
#include "llgvm/smoothing.hpp"

namespace llgvm {

struct EnergyLedger {
  double kinetic = 0.0;          // 1/2 sum w |v|^2
  double em_energy = 0.0;        // leapfrog energy of (E, B), see em_energy()
  double micromagnetic = 0.0;    // E(m)
  double dissipation_cum = 0.0;  // alpha sum dt ||(m^{n+1} - m^n) / dt||^2
  double coupling_residual = 0.0;

  double total() const noexcept { return kinetic + em_energy + micromagnetic; }
};

/// The three coupling powers of one step, each evaluated with the fields the
/// sub-step actually used.
struct CouplingAudit {
  double kinetic_power = 0.0;  // <j, K(E^n + e^{n-1/2})>, equals (KE^{n+1} - KE^n) / dt
  double em_power = 0.0;       // -<K j, (E^n + E^{n+1}) / 2>, equals (W^{n+1} - W^n) / dt
  double llg_power = 0.0;      // -<K j, e^{n+1/2}>
  double residual() const noexcept;  // |sum of the three|
};

struct CouplerParams {
  LLCoefficients coeffs = LLCoefficients::make(0.1);
  /// Upper bound on the LLG sub-step; each coupled step uses
  /// ceil(dt / llg_dt) equal sub-steps with the same current. 0: one sub-step.
  double llg_dt = 0.0;
  StepOptions llg_options{};
  bool track_hopf = false;  // evaluate the Hopf invariant in every ledger row
};

struct LedgerRow {
  double t = 0.0;
  EnergyLedger energy;
  double divB = 0.0;
  double gauss_residual = 0.0;
  double Q_mid_slice = 0.0;  // NaN when the slice is degenerate
  double hopf = 0.0;         // NaN when not tracked or b has a net flux
};

struct SimState {
  double t = 0.0;
  long step_index = 0;
  MagnetizationField mf;
  ParticleEnsemble particles;
  EMFieldPair em;
  Mollifier mollifier;
  EnergyLedger ledger;

  CouplerParams params;
  double dt = 0.0;
  VectorField3 e_last;     // emergent e of the last step, lagged into the force
  CouplingAudit last_audit;
  Deposit last_deposit;    // rho at the new positions, j at mid-step
  double energy0 = 0.0;    // total energy at t = 0
};

/// Builds the t = 0 state: E from the Gauss law for K rho (after removing
/// the neutralizing mean), B and transverse E from `modes`, e = 0.
/// Throws ContractViolation when dt exceeds the LLG or Maxwell bound.
SimState make_state(MagnetizationField mf, ParticleEnsemble particles, const std::vector<EMMode>& modes,
                    double eps_r, double mu_r, const Mollifier& mollifier, const CouplerParams& params,
                    double dt);

/// Largest dt accepted by advance: min of the LLG bound (per sub-step) and
/// the Maxwell CFL bound (strict).
double coupled_dt_max(const SimState& s);

/// One step of the regularized system: gather K(E + e), K(B + b) at the
/// particles, push, deposit, mollify j, LLG step(s) with K j, emergent e,
/// Maxwell step with source K j, ledger. Errors propagate with the step
/// index and phase in the message.
SimState advance(const SimState& state);

/// Recomputes the coupling powers between two consecutive states and returns
/// |sum|. With a symmetric mollifier the continuum identities cancel exactly;
/// what remains is the time lag of E and e inside the step.
double energy_audit(const SimState& prev, const SimState& next);
CouplingAudit coupling_powers(const SimState& prev, const SimState& next);

/// |<K a, b> - <a, K b>| / (||a|| ||b||).
double self_adjointness_defect(const Mollifier& k, const VectorField3& a, const VectorField3& b);

/// |E^n - E^0 + D^n|, the defect of the energy-dissipation law.
double ledger_residual(const SimState& s);

LedgerRow ledger_row(const SimState& s);

/// Header and one CSV line. Columns: t, kinetic, em, micromagnetic,
/// dissipation_cum, total, coupling_residual, divB, gauss_residual,
/// Q_mid_slice, hopf.
std::string ledger_csv_header();
std::string ledger_csv_line(const LedgerRow& r);

}  // namespace llgvm
