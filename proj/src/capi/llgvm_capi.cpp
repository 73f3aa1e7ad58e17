#include "llgvm/llgvm.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "llgvm/config.hpp"
#include "llgvm/errors.hpp"
#include "llgvm/parallel.hpp"
#include "llgvm/run.hpp"
#include "llgvm/selftest.hpp"
#include "llgvm/snapshot.hpp"
#include "llgvm/spectral.hpp"
#include "llgvm/topology.hpp"

struct llgvm_config {
  llgvm::RunConfig cfg;
};

struct llgvm_sim {
  llgvm::SimState state;
};

namespace {

thread_local std::string g_last_error;

llgvm_status fail(llgvm_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

// Runs f, mapping exceptions to status codes.
template <class F>
llgvm_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return LLGVM_OK;
  } catch (const llgvm::Error& e) {
    return fail(static_cast<llgvm_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LLGVM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LLGVM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LLGVM_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw llgvm::ContractViolation(std::string(what) + " must not be NULL");
}

llgvm_ledger to_c(const llgvm::LedgerRow& r) {
  llgvm_ledger o;
  o.t = r.t;
  o.kinetic = r.energy.kinetic;
  o.em_energy = r.energy.em_energy;
  o.micromagnetic = r.energy.micromagnetic;
  o.total = r.energy.total();
  o.dissipation_cum = r.energy.dissipation_cum;
  o.coupling_residual = r.energy.coupling_residual;
  o.div_b = r.divB;
  o.gauss_residual = r.gauss_residual;
  o.q_mid_slice = r.Q_mid_slice;
  o.hopf = r.hopf;
  return o;
}

}  // namespace

extern "C" {

const char* llgvm_version(void) { return "1.0.0"; }

const char* llgvm_last_error(void) { return g_last_error.c_str(); }

void llgvm_string_free(char* s) { std::free(s); }

llgvm_status llgvm_set_threads(int n) {
  return guarded([&] {
    if (n < 1) throw llgvm::ContractViolation("thread count must be >= 1, got " + std::to_string(n));
    llgvm::parallel::set_thread_count(n);
  });
}

int llgvm_get_threads(void) { return llgvm::parallel::thread_count(); }

llgvm_status llgvm_config_load(const char* path, llgvm_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new llgvm_config{llgvm::parse_config(path)};
  });
}

llgvm_status llgvm_config_parse(const char* text, llgvm_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new llgvm_config{llgvm::parse_config_text(text)};
  });
}

void llgvm_config_free(llgvm_config* cfg) { delete cfg; }

llgvm_status llgvm_config_set_seed(llgvm_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->cfg.run_seed = seed;
  });
}

llgvm_status llgvm_config_set_output_dir(llgvm_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg, "cfg");
    require(dir, "dir");
    llgvm::RunConfig c = cfg->cfg;
    c.run_output_dir = dir;
    llgvm::validate(c);
    cfg->cfg = std::move(c);
  });
}

size_t llgvm_config_warning_count(const llgvm_config* cfg) { return cfg ? cfg->cfg.warnings.size() : 0; }

const char* llgvm_config_warning(const llgvm_config* cfg, size_t i) {
  if (!cfg || i >= cfg->cfg.warnings.size()) return nullptr;
  return cfg->cfg.warnings[i].c_str();
}

llgvm_status llgvm_config_double(const llgvm_config* cfg, const char* key, double* out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(out, "out");
    const llgvm::RunConfig& c = cfg->cfg;
    const std::string k = key;
    if (k == "grid.n") *out = c.grid_n;
    else if (k == "grid.length") *out = c.grid_length;
    else if (k == "llg.alpha") *out = c.llg_alpha;
    else if (k == "llg.h") *out = c.llg_h;
    else if (k == "em.eps_r") *out = c.em_eps_r;
    else if (k == "em.mu_r") *out = c.em_mu_r;
    else if (k == "run.dt") *out = c.run_dt;
    else if (k == "run.n_steps") *out = static_cast<double>(c.run_n_steps);
    else if (k == "kinetic.n_particles") *out = static_cast<double>(c.kinetic_n_particles);
    else throw llgvm::ContractViolation("llgvm_config_double: no numeric key '" + k + "'");
  });
}

llgvm_status llgvm_default_config(char** text) {
  return guarded([&] {
    require(text, "text");
    *text = dup_string(llgvm::default_config_text());
  });
}

llgvm_status llgvm_run(const llgvm_config* cfg, llgvm_run_summary* summary) {
  return guarded([&] {
    require(cfg, "cfg");
    const llgvm::RunSummary s = llgvm::run_simulation(cfg->cfg);
    if (summary) {
      summary->steps = s.steps;
      summary->t_final = s.t_final;
      summary->energy0 = s.energy0;
      summary->energy_final = s.energy_final;
      summary->max_energy_increase = s.max_energy_increase;
      summary->ledger_residual = s.ledger_residual;
      summary->max_coupling_residual = s.max_coupling_residual;
      summary->max_gauss_residual = s.max_gauss_residual;
      summary->max_div_b = s.max_div_b;
    }
  });
}

llgvm_status llgvm_sim_create(const llgvm_config* cfg, llgvm_sim** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = nullptr;
    *out = new llgvm_sim{llgvm::build_state(cfg->cfg)};
  });
}

llgvm_status llgvm_sim_step(llgvm_sim* sim, long n_steps) {
  return guarded([&] {
    require(sim, "sim");
    if (n_steps < 0) throw llgvm::ContractViolation("n_steps must be >= 0");
    // On failure the handle keeps the last completed step.
    for (long k = 0; k < n_steps; ++k) sim->state = llgvm::advance(sim->state);
  });
}

llgvm_status llgvm_sim_ledger(const llgvm_sim* sim, llgvm_ledger* out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    *out = to_c(llgvm::ledger_row(sim->state));
  });
}

llgvm_status llgvm_sim_ledger_csv(const llgvm_sim* sim, char** line) {
  return guarded([&] {
    require(sim, "sim");
    require(line, "line");
    *line = dup_string(llgvm::ledger_csv_line(llgvm::ledger_row(sim->state)));
  });
}

void llgvm_sim_free(llgvm_sim* sim) { delete sim; }

llgvm_status llgvm_snapshot_read_info(const char* path, llgvm_snapshot_info* out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const llgvm::SnapshotInfo i = llgvm::read_snapshot_info(path);
    *out = {};
    out->kind = static_cast<int>(i.kind);
    for (int a = 0; a < 3; ++a) {
      out->n[a] = i.n[a];
      out->length[a] = i.length[a];
    }
    out->time = i.time;
    std::strncpy(out->name, i.name.c_str(), sizeof out->name - 1);
  });
}

llgvm_status llgvm_diag_topology(const char* path, llgvm_topology* out, char** report) {
  return guarded([&] {
    require(path, "path");
    const llgvm::MagnetizationField mf{llgvm::read_vector_snapshot(path), 0.5, 0.1};
    llgvm::require_unit_norm(mf.m, 1e-10, "diag topology");
    const llgvm::TopologyReport r = llgvm::topology_report(mf);
    const int mid = mf.grid().n(2) / 2;
    double q = std::nan("");
    for (const auto& [z, v] : r.skyrmion_number_per_slice)
      if (z == mid) q = v;
    if (out) {
      out->q_mid_slice = q;
      out->hopf = r.hopf_invariant;
      out->helicity = r.helicity;
      out->gauge_residual = r.gauge_residual;
      out->b_div_defect = r.b_div_defect;
    }
    if (report) *report = dup_string(llgvm::format_report(r) + "\n" + llgvm::format_slices_csv(r));
  });
}

llgvm_status llgvm_diag_energy(const char* path, double h, double eps_r, double mu_r, llgvm_energy* out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const llgvm::Bytes bytes = llgvm::read_file(path);
    const llgvm::SnapshotInfo info = llgvm::decode_snapshot_info(bytes);
    *out = {};
    out->kind = static_cast<int>(info.kind);
    if (info.kind == llgvm::SnapshotKind::particles) {
      out->energy = llgvm::kinetic_energy(llgvm::decode_particle_snapshot(bytes));
      return;
    }
    if (info.kind != llgvm::SnapshotKind::vector)
      throw llgvm::ContractViolation(std::string(path) + ": energy needs a vector field or particle snapshot");
    llgvm::VectorField3 f = llgvm::decode_vector_snapshot(bytes);
    if (info.name == "m") {
      if (!(h >= 0.0)) throw llgvm::ContractViolation("Zeeman strength h must be >= 0");
      const llgvm::MagnetizationField mf{std::move(f), h, 0.1};
      const llgvm::EnergyParts p = llgvm::energy_parts(mf);
      out->energy = llgvm::energy(mf);
      out->hessian2 = p.hessian2;
      out->gradient2 = p.gradient2;
      out->zeeman2 = p.zeeman2;
      out->unit_norm_defect = llgvm::unit_norm_defect(mf.m);
    } else if (info.name == "E") {
      out->energy = 0.5 * eps_r * llgvm::l2_inner(f, f);
    } else if (info.name == "B") {
      out->energy = 0.5 * llgvm::l2_inner(f, f) / mu_r;
    } else {
      throw llgvm::ContractViolation(std::string(path) + ": no energy for a field named '" + info.name + "'");
    }
  });
}

llgvm_status llgvm_selftest(int* failures, char** report) {
  int n = 0;
  const llgvm_status st = guarded([&] {
    std::ostringstream os;
    const llgvm::SelftestResult r = llgvm::run_selftest(&os);
    n = r.failures();
    if (failures) *failures = n;
    if (report) *report = dup_string(os.str());
  });
  if (st != LLGVM_OK) return st;
  if (n > 0) return fail(LLGVM_ERR_SELFTEST, std::to_string(n) + " selftest check(s) failed");
  return LLGVM_OK;
}

}  // extern "C"
