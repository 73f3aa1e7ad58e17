#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "llgvm/grid.hpp"

namespace llgvm {

/// Weighted macro-particles. Positions live in [0, L) per axis; weights are
/// f-mass (units of the integral of f) and never change after sampling.
struct ParticleEnsemble {
  std::vector<Vec3> x;
  std::vector<Vec3> v;
  std::vector<double> w;

  std::size_t count() const noexcept { return w.size(); }
  bool operator==(const ParticleEnsemble&) const = default;
};

/// Initial distribution. Names: bump_maxwellian (Gaussian density of width
/// `radius` around `center`), uniform_maxwellian, two_stream (two beams at
/// +-drift, uniform in space), delta (all particles at `center` with
/// velocity `drift`). Maxwellians are isotropic with thermal speed v_th,
/// shifted by `drift` for bump/uniform, and truncated at |v - drift| <= 6 v_th.
struct F0Spec {
  std::string kind = "bump_maxwellian";
  Vec3 center{8.0, 8.0, 8.0};
  double radius = 2.0;
  double v_th = 0.1;
  double mass = 1.0;  // M0 target
  Vec3 drift{0.0, 0.0, 0.0};
};

/// Analytic M2 = integral of f |v|^2 for this f0 (untruncated).
double analytic_m2(const F0Spec& spec);

/// Deterministic in the seed. Equal weights mass / n. Throws ConfigError for
/// an unknown kind and ContractViolation for n = 0 or negative parameters.
ParticleEnsemble sample_initial(const F0Spec& spec, std::size_t n_particles, std::uint64_t seed,
                                const PeriodicGrid& grid);

/// Wrap into [0, L) per axis.
Vec3 wrap_position(const PeriodicGrid& grid, const Vec3& x) noexcept;

/// Trilinear (cloud-in-cell) interpolation of a node field at x.
Vec3 gather(const VectorField3& f, const Vec3& x) noexcept;

/// Per-particle gather of a node field.
std::vector<Vec3> gather(const VectorField3& f, const std::vector<Vec3>& x);

/// One step of the characteristic flow for charge q = -1:
/// half drift, electric half kick, exact rotation about B, electric half
/// kick, half drift. Fields are gathered at the mid-step position. Every
/// sub-map has unit Jacobian, speed is conserved exactly when E = 0 and the
/// step is second order. Throws BlowUp for non-finite gathered fields; warns
/// when dt max|B| > 1.
ParticleEnsemble lorentz_push(const ParticleEnsemble& p, const VectorField3& E_tot,
                              const VectorField3& B_tot, double dt);

struct Deposit {
  ScalarField rho;  // -sum w S / h^3
  VectorField3 j;   // -sum w v S / h^3
};

/// Cloud-in-cell deposition. Particles are bucketed by cell with a stable
/// counting sort and every node sums its eight neighbouring cells in a fixed
/// order, so the result is independent of thread count.
Deposit deposit(const ParticleEnsemble& p, const PeriodicGrid& grid);

/// sum w |v|^k as a density on nodes (positive sign).
ScalarField moment_density(const ParticleEnsemble& p, const PeriodicGrid& grid, double k);

/// sum w |v|^k.
double total_moment(const ParticleEnsemble& p, double k);

/// ell = (k + 3/q) / (k' + 3/q + (k - k')/p) with 1/p + 1/q = 1.
double moment_ell(double k, double kprime, double p);

struct MomentEstimate {
  double k = 0.0, kprime = 0.0, p = 0.0;
  double ell = 0.0;
  double lhs = 0.0;        // ||m_k'||_{L^ell}
  double f_lp = 0.0;       // ||f||_{L^p} of the phase-space histogram
  double m_k = 0.0;        // M_k
  double rhs = 0.0;        // f_lp^a M_k^b, the bound without its constant
  double exponent_a = 0.0; // (k - k') / (k + 3/q)
  double exponent_b = 0.0; // (k' + 3/q) / (k + 3/q)
};

struct MomentParams {
  double p = 4.0;
  double velocity_bin = 0.05;  // width of the velocity histogram cells
};

struct MomentReport {
  double M0 = 0.0;
  double M2 = 0.0;
  std::vector<std::pair<double, ScalarField>> moment_fields;  // (k', m_k')
  std::vector<MomentEstimate> lp_estimates;
};

/// k_list holds (k, k') pairs. Throws ContractViolation when k' > k or k' < 0.
MomentReport moment_report(const ParticleEnsemble& p, const PeriodicGrid& grid,
                           const std::vector<std::pair<double, double>>& k_list,
                           const MomentParams& params = {});

/// Half of sum w |v|^2.
double kinetic_energy(const ParticleEnsemble& p);

}  // namespace llgvm
