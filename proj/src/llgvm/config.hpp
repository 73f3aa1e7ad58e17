#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llgvm/coupler.hpp"
#include "llgvm/kinetic.hpp"
#include "llgvm/maxwell.hpp"

namespace llgvm {

/// Flat run configuration. Keys are dotted, e.g. `llg.alpha = 0.1`; the
/// member comments give the key and its default.
struct RunConfig {
  // grid.n, grid.length: N^3 nodes on a cube of side L.
  int grid_n = 32;
  double grid_length = 16.0;

  double llg_alpha = 0.1;         // llg.alpha > 0
  double llg_h = 0.5;             // llg.h >= 0; h <= 1/4 warns
  double llg_dt = 0.0;            // llg.dt: LLG sub-step bound, 0 = one sub-step
  double llg_stabilizer_c = 0.0;  // llg.stabilizer_c: 0 = 1/lambda, else >= lambda
  std::string llg_init = "skyrmion_tube";  // llg.init
  double llg_radius = 2.0;                 // llg.radius
  std::uint64_t llg_seed = 1;              // llg.seed (random_smooth)

  double em_eps_r = 1.0;       // em.eps_r >= 1
  double em_mu_r = 1.0;        // em.mu_r >= 1
  std::string em_init_modes;   // em.init_modes: "nx ny nz e_amp b_amp; ..."

  std::size_t kinetic_n_particles = 10000;  // kinetic.n_particles, 0 = no particles
  std::uint64_t kinetic_seed = 1;           // kinetic.seed
  F0Spec f0;  // kinetic.f0.{kind, center, radius, v_th, mass, drift}
  bool f0_center_set = false;  // otherwise validate() puts the center at the box center

  double mollifier_eps = 0.0;  // mollifier.eps: 0 = four grid spacings

  double run_dt = 0.01;          // run.dt
  long run_n_steps = 200;        // run.n_steps
  long run_snapshot_every = 0;   // run.snapshot_every: 0 = final state only
  std::string run_output_dir = "out";  // run.output_dir
  std::optional<std::uint64_t> run_seed;  // run.seed: replaces llg.seed and kinetic.seed
  bool run_track_hopf = false;            // run.track_hopf

  /// Non-fatal findings of the last validation (e.g. h <= 1/4).
  std::vector<std::string> warnings;

  PeriodicGrid grid() const;
  LLCoefficients coefficients() const;
  double mollifier_epsilon() const;
  std::uint64_t effective_llg_seed() const { return run_seed.value_or(llg_seed); }
  std::uint64_t effective_kinetic_seed() const { return run_seed.value_or(kinetic_seed); }
};

/// Parses `key = value` lines ('#' starts a comment). Every problem (unknown
/// or duplicate key, malformed or out-of-range value) is collected and thrown
/// as one ConfigError. `origin` names the source in messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
/// Throws ConfigError when the file cannot be read.
RunConfig parse_config(const std::string& path);

/// Range and cross-key checks, run by the parsers and again after command
/// line overrides. Fills cfg.warnings and logs them; throws ConfigError.
void validate(RunConfig& cfg);

/// The documented keys in file order.
const std::vector<std::string>& config_keys();
/// A complete config file with every key at its default.
std::string default_config_text();

}  // namespace llgvm
