// Command-line front end. Talks to the solver only through the C interface.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "llgvm/llgvm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitSelftest = 4;

int exit_code(llgvm_status s) {
  switch (s) {
    case LLGVM_OK: return kExitOk;
    case LLGVM_ERR_CONFIG: return kExitConfig;
    case LLGVM_ERR_BLOWUP:
    case LLGVM_ERR_STATE_CORRUPTION:
    case LLGVM_ERR_REFUSED: return kExitBlowup;
    case LLGVM_ERR_SELFTEST: return kExitSelftest;
    default: return kExitOther;
  }
}

int report_failure(const char* what, llgvm_status s) {
  std::fprintf(stderr, "llgvm: %s failed (status %d)\n%s\n", what, static_cast<int>(s), llgvm_last_error());
  return exit_code(s);
}

struct ConfigDeleter {
  void operator()(llgvm_config* c) const { llgvm_config_free(c); }
};
using ConfigPtr = std::unique_ptr<llgvm_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { llgvm_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Options {
  std::string config;
  std::string output;
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string snapshot;
  std::optional<double> h;
  std::optional<double> expect_hopf;
  std::optional<double> expect_q;
  double tol = 1e-2;
  bool print_defaults = false;
};

llgvm_status load_config(const Options& o, ConfigPtr& out) {
  llgvm_config* c = nullptr;
  const llgvm_status s = o.config.empty() ? llgvm_config_parse("", &c) : llgvm_config_load(o.config.c_str(), &c);
  out.reset(c);
  if (s != LLGVM_OK) return s;
  if (o.seed) {
    if (const llgvm_status t = llgvm_config_set_seed(c, *o.seed); t != LLGVM_OK) return t;
  }
  if (!o.output.empty()) return llgvm_config_set_output_dir(c, o.output.c_str());
  return LLGVM_OK;
}

int cmd_run(const Options& o) {
  if (o.print_defaults) {
    char* text = nullptr;
    if (const llgvm_status s = llgvm_default_config(&text); s != LLGVM_OK) return report_failure("defaults", s);
    StringPtr t(text);
    std::fputs(t.get(), stdout);
    return kExitOk;
  }
  ConfigPtr cfg;
  if (const llgvm_status s = load_config(o, cfg); s != LLGVM_OK) return report_failure("config", s);
  for (size_t i = 0; i < llgvm_config_warning_count(cfg.get()); ++i)
    std::fprintf(stderr, "llgvm: warning: %s\n", llgvm_config_warning(cfg.get(), i));
  llgvm_run_summary sum{};
  if (const llgvm_status s = llgvm_run(cfg.get(), &sum); s != LLGVM_OK) return report_failure("run", s);
  std::printf("steps = %ld\n", sum.steps);
  std::printf("t_final = %.17g\n", sum.t_final);
  std::printf("energy0 = %.17g\n", sum.energy0);
  std::printf("energy_final = %.17g\n", sum.energy_final);
  std::printf("max_energy_increase = %.17g\n", sum.max_energy_increase);
  std::printf("ledger_residual = %.17g\n", sum.ledger_residual);
  std::printf("max_coupling_residual = %.17g\n", sum.max_coupling_residual);
  std::printf("max_gauss_residual = %.17g\n", sum.max_gauss_residual);
  std::printf("max_div_b = %.17g\n", sum.max_div_b);
  return kExitOk;
}

bool within(double value, std::optional<double> expect, double tol) {
  return !expect || (std::isfinite(value) && std::abs(value - *expect) <= tol);
}

int cmd_topology(const Options& o) {
  llgvm_topology t{};
  char* text = nullptr;
  if (const llgvm_status s = llgvm_diag_topology(o.snapshot.c_str(), &t, &text); s != LLGVM_OK)
    return report_failure("diag topology", s);
  StringPtr r(text);
  std::fputs(r.get(), stdout);
  bool ok = true;
  if (!within(t.hopf, o.expect_hopf, o.tol)) {
    std::fprintf(stderr, "llgvm: hopf invariant %.10g differs from %g by more than %g\n", t.hopf, *o.expect_hopf, o.tol);
    ok = false;
  }
  if (!within(t.q_mid_slice, o.expect_q, o.tol)) {
    std::fprintf(stderr, "llgvm: mid-slice skyrmion number %.10g differs from %g by more than %g\n", t.q_mid_slice,
                 *o.expect_q, o.tol);
    ok = false;
  }
  return ok ? kExitOk : kExitOther;
}

int cmd_energy(const Options& o) {
  double h = 0.5, eps_r = 1.0, mu_r = 1.0;
  if (!o.config.empty()) {
    ConfigPtr cfg;
    if (const llgvm_status s = load_config(o, cfg); s != LLGVM_OK) return report_failure("config", s);
    llgvm_config_double(cfg.get(), "llg.h", &h);
    llgvm_config_double(cfg.get(), "em.eps_r", &eps_r);
    llgvm_config_double(cfg.get(), "em.mu_r", &mu_r);
  }
  if (o.h) h = *o.h;
  llgvm_energy e{};
  if (const llgvm_status s = llgvm_diag_energy(o.snapshot.c_str(), h, eps_r, mu_r, &e); s != LLGVM_OK)
    return report_failure("diag energy", s);
  std::printf("kind = %d\n", e.kind);
  std::printf("energy = %.17g\n", e.energy);
  if (e.kind == 2 && (e.hessian2 != 0.0 || e.gradient2 != 0.0 || e.zeeman2 != 0.0 || e.unit_norm_defect != 0.0)) {
    std::printf("h = %.17g\n", h);
    std::printf("hessian2 = %.17g\n", e.hessian2);
    std::printf("gradient2 = %.17g\n", e.gradient2);
    std::printf("zeeman2 = %.17g\n", e.zeeman2);
    std::printf("unit_norm_defect = %.3g\n", e.unit_norm_defect);
  }
  return kExitOk;
}

int cmd_selftest() {
  int failures = 0;
  char* text = nullptr;
  const llgvm_status s = llgvm_selftest(&failures, &text);
  StringPtr r(text);
  if (r) std::fputs(r.get(), stdout);
  if (s != LLGVM_OK) return report_failure("selftest", s);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled micromagnetic / Vlasov-Maxwell solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(llgvm_version()));
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Run the coupled system and write ledger.csv and snapshots");
  run->add_option("--config", o.config, "Config file (key = value)");
  run->add_option("--output", o.output, "Output directory (overrides run.output_dir)");
  run->add_option("--seed", o.seed, "Seed for the initial data (overrides llg.seed and kinetic.seed)");
  run->add_flag("--print-defaults", o.print_defaults, "Print a config file with every default and exit");
  add_common(run);

  CLI::App* diag = app.add_subcommand("diag", "Diagnostics of snapshot files");
  diag->require_subcommand(1);
  CLI::App* topo = diag->add_subcommand("topology", "Skyrmion numbers per slice and the Hopf invariant of m");
  topo->add_option("snapshot", o.snapshot, "Magnetization snapshot")->required();
  topo->add_option("--expect-hopf", o.expect_hopf, "Fail unless the Hopf invariant is within --tol of this");
  topo->add_option("--expect-q", o.expect_q, "Fail unless the mid-slice skyrmion number is within --tol of this");
  topo->add_option("--tol", o.tol, "Tolerance of the --expect checks")->capture_default_str();
  add_common(topo);
  CLI::App* energy = diag->add_subcommand("energy", "Energy held in a snapshot");
  energy->add_option("snapshot", o.snapshot, "Snapshot of m, E, B or particles")->required();
  energy->add_option("--config", o.config, "Take llg.h, em.eps_r and em.mu_r from this config");
  energy->add_option("--zeeman", o.h, "Zeeman strength h for m (default 0.5 or llg.h of --config)");
  add_common(energy);

  CLI::App* selftest = app.add_subcommand("selftest", "Run the invariant suite; exit 4 on any failure");
  add_common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (const llgvm_status s = llgvm_set_threads(o.threads); s != LLGVM_OK) return report_failure("threads", s);
  if (run->parsed()) return cmd_run(o);
  if (topo->parsed()) return cmd_topology(o);
  if (energy->parsed()) return cmd_energy(o);
  if (selftest->parsed()) return cmd_selftest();
  return kExitOther;
}
