#pragma once

#include <functional>
#include <string>
#include <vector>

#include "llgvm/config.hpp"
#include "llgvm/coupler.hpp"

namespace llgvm {

/// t = 0 state of a validated config.
SimState build_state(const RunConfig& cfg);

struct RunSummary {
  long steps = 0;
  double t_final = 0.0;
  double energy0 = 0.0;
  double energy_final = 0.0;
  double max_energy_increase = 0.0;  // max over steps of E^{n+1} - E^n (<= 0 when monotone)
  double ledger_residual = 0.0;      // |E^n - E^0 + D^n| at the end
  double max_coupling_residual = 0.0;
  double max_gauss_residual = 0.0;
  double max_div_b = 0.0;
  std::string ledger_path;
  std::vector<std::string> snapshots;
};

/// Runs run.n_steps coupled steps. Writes <output_dir>/ledger.csv (one row
/// at t = 0 and one per step, flushed as it goes), the magnetization every
/// run.snapshot_every steps (m_<step>.llgf) and m, E, B and the particles
/// of the final state. `on_row` sees every ledger row. Errors from advance
/// propagate after the rows so far are on disk.
RunSummary run_simulation(const RunConfig& cfg, const std::function<void(const LedgerRow&)>& on_row = {});

}  // namespace llgvm
