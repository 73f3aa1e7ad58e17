#ifndef LLGVM_LLGVM_H
#define LLGVM_LLGVM_H

/* C interface to the coupled LLG / Vlasov-Maxwell solver.
 *
 * Every function returning llgvm_status leaves a message for the calling
 * thread in llgvm_last_error() when it fails. Handles are opaque and owned by
 * the caller; free them with the matching *_free function. Strings returned
 * through char** are heap allocated and released with llgvm_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LLGVM_BUILDING)
#define LLGVM_API __declspec(dllexport)
#else
#define LLGVM_API __declspec(dllimport)
#endif
#else
#define LLGVM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Codes 2, 3 and 4 double as CLI exit codes. */
typedef enum llgvm_status {
  LLGVM_OK = 0,
  LLGVM_ERR_INTERNAL = 1,
  LLGVM_ERR_CONFIG = 2,
  LLGVM_ERR_BLOWUP = 3,
  LLGVM_ERR_SELFTEST = 4,
  LLGVM_ERR_CONTRACT = 5,
  LLGVM_ERR_IO = 6,
  LLGVM_ERR_CHECKSUM = 7,
  LLGVM_ERR_TRUNCATED = 8,
  LLGVM_ERR_VERSION = 9,
  LLGVM_ERR_DEGENERATE = 10,
  LLGVM_ERR_STATE_CORRUPTION = 11,
  LLGVM_ERR_REFUSED = 12
} llgvm_status;

typedef struct llgvm_config llgvm_config;
typedef struct llgvm_sim llgvm_sim;

typedef struct llgvm_ledger {
  double t;
  double kinetic;
  double em_energy;
  double micromagnetic;
  double total;
  double dissipation_cum;
  double coupling_residual;
  double div_b;
  double gauss_residual;
  double q_mid_slice; /* NaN when the slice is degenerate */
  double hopf;        /* NaN when not tracked or b has a net flux */
} llgvm_ledger;

typedef struct llgvm_run_summary {
  long steps;
  double t_final;
  double energy0;
  double energy_final;
  double max_energy_increase; /* max over steps of E^{n+1} - E^n */
  double ledger_residual;     /* |E^n - E^0 + D^n| at the end */
  double max_coupling_residual;
  double max_gauss_residual;
  double max_div_b;
} llgvm_run_summary;

typedef struct llgvm_snapshot_info {
  int kind; /* 1 scalar field, 2 vector field, 3 particles */
  int n[3];
  double length[3];
  double time;
  char name[32];
} llgvm_snapshot_info;

typedef struct llgvm_topology {
  double q_mid_slice; /* skyrmion number of the slice z = N/2, NaN if degenerate */
  double hopf;        /* NaN when b has a net flux */
  double helicity;
  double gauge_residual;
  double b_div_defect;
} llgvm_topology;

typedef struct llgvm_energy {
  int kind;             /* snapshot kind */
  double energy;        /* E(m), field energy or kinetic energy */
  double hessian2;      /* ||Lap m||^2, magnetization only */
  double gradient2;     /* ||grad m||^2, magnetization only */
  double zeeman2;       /* ||m - e3||^2, magnetization only */
  double unit_norm_defect; /* max | |m| - 1 |, magnetization only */
} llgvm_energy;

LLGVM_API const char* llgvm_version(void);
/* Message of the last failed call on this thread, "" when none. */
LLGVM_API const char* llgvm_last_error(void);
LLGVM_API void llgvm_string_free(char* s);

/* Worker threads for field and particle loops (n >= 1). Results do not
 * depend on it. */
LLGVM_API llgvm_status llgvm_set_threads(int n);
LLGVM_API int llgvm_get_threads(void);

/* Parsing collects every problem; the message lists them one per line. */
LLGVM_API llgvm_status llgvm_config_load(const char* path, llgvm_config** out);
LLGVM_API llgvm_status llgvm_config_parse(const char* text, llgvm_config** out);
LLGVM_API void llgvm_config_free(llgvm_config* cfg);
/* Overrides llg.seed and kinetic.seed. */
LLGVM_API llgvm_status llgvm_config_set_seed(llgvm_config* cfg, uint64_t seed);
LLGVM_API llgvm_status llgvm_config_set_output_dir(llgvm_config* cfg, const char* dir);
LLGVM_API size_t llgvm_config_warning_count(const llgvm_config* cfg);
/* NULL when i is out of range. Valid until the config changes. */
LLGVM_API const char* llgvm_config_warning(const llgvm_config* cfg, size_t i);
LLGVM_API llgvm_status llgvm_config_double(const llgvm_config* cfg, const char* key, double* out);
/* The default config file text. */
LLGVM_API llgvm_status llgvm_default_config(char** text);

/* Full run: ledger.csv and snapshots in run.output_dir. summary may be NULL. */
LLGVM_API llgvm_status llgvm_run(const llgvm_config* cfg, llgvm_run_summary* summary);

LLGVM_API llgvm_status llgvm_sim_create(const llgvm_config* cfg, llgvm_sim** out);
LLGVM_API llgvm_status llgvm_sim_step(llgvm_sim* sim, long n_steps);
LLGVM_API llgvm_status llgvm_sim_ledger(const llgvm_sim* sim, llgvm_ledger* out);
/* One CSV row in the ledger.csv format. */
LLGVM_API llgvm_status llgvm_sim_ledger_csv(const llgvm_sim* sim, char** line);
LLGVM_API void llgvm_sim_free(llgvm_sim* sim);

LLGVM_API llgvm_status llgvm_snapshot_read_info(const char* path, llgvm_snapshot_info* out);
/* Topology of a magnetization snapshot. report (may be NULL) receives the
 * key = value text followed by the per-slice CSV. */
LLGVM_API llgvm_status llgvm_diag_topology(const char* path, llgvm_topology* out, char** report);
/* Energy of a snapshot: E(m) with Zeeman strength h for a field named "m",
 * 1/2 eps_r ||E||^2 for "E", 1/2 ||B||^2 / mu_r for "B", 1/2 sum w |v|^2
 * for particles. */
LLGVM_API llgvm_status llgvm_diag_energy(const char* path, double h, double eps_r, double mu_r,
                                         llgvm_energy* out);

/* Invariant suite. failures and report may be NULL. Returns
 * LLGVM_ERR_SELFTEST when any check fails. */
LLGVM_API llgvm_status llgvm_selftest(int* failures, char** report);

#ifdef __cplusplus
}
#endif

#endif
