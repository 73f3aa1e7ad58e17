#pragma once

#include <cstdint>
#include <string>

#include "llgvm/grid.hpp"
#include "llgvm/spectral.hpp"

namespace llgvm {

struct MagnetizationField {
  VectorField3 m;
  double h_zeeman = 0.5;
  double alpha = 0.1;

  const PeriodicGrid& grid() const noexcept { return m.grid(); }
};

/// Largest node deviation | |m| - 1 |.
double unit_norm_defect(const VectorField3& m);
/// Throws StateCorruption when the unit-norm defect exceeds tol.
void require_unit_norm(const VectorField3& m, double tol, const char* where);

/// Coefficients of the semi-implicit step. The step solves, per Fourier mode,
///   (1 + a^2)(m* - m^n)/dt + c D^2 m* = c D^2 m^n + (1 + a^2) rhs(m^n)
/// where D^2 is the biharmonic operator.
struct LLCoefficients {
  double alpha;
  double lambda;  // alpha / (1 + alpha^2)
  double c;       // implicit stabilizer, c >= lambda

  /// c <= 0 selects the default 1/lambda. Throws ContractViolation for
  /// alpha <= 0 or c < lambda.
  static LLCoefficients make(double alpha, double c = 0.0);

  /// Linear stability bound about the ground state, minimized over the grid
  /// wavevectors. For each |k| with s = k^4 - k^2 + h and K = k^4,
  ///   dt <= 2 a (1 + a^2) / ((1 + a^2) s - 2 a c K)
  /// whenever the denominator is positive; modes with a non-positive
  /// denominator impose no bound. Returns +inf when no mode is bounded.
  double dt_max(const PeriodicGrid& grid, double h) const;
};

/// E(m) = 1/2 (||Lap m||^2 - ||grad m||^2 + h ||m - e3||^2), all norms
/// evaluated spectrally (||grad m||^2 = -<m, Lap m>).
double energy(const MagnetizationField& mf);

/// The three pieces of the energy, unscaled: ||Lap m||^2, ||grad m||^2,
/// ||m - e3||^2.
struct EnergyParts {
  double hessian2;
  double gradient2;
  double zeeman2;
};
EnergyParts energy_parts(const MagnetizationField& mf);

/// -(D^2 m + Lap m + h (m - e3)).
VectorField3 effective_field(const MagnetizationField& mf);

struct LLParts {
  VectorField3 A_term;       // A(m) D^2 m
  VectorField3 f_term;       // [h e3 - m x (j.grad) m - Lap m]^tan
  ScalarField Lambda_term;   // -m . D^2 m
};

struct LLRhs {
  VectorField3 dmdt;
  LLParts parts;
};

/// dm/dt = (A(m) f - a Lambda m - A(m) D^2 m) / (1 + a^2), A(m) xi = a xi - m x xi.
LLRhs ll_rhs(const MagnetizationField& mf, const VectorField3& j);

/// A(m) xi pointwise.
VectorField3 apply_A(const VectorField3& m, const VectorField3& xi, double alpha);

/// |Lap m|^2 + Lap |grad m|^2 + 2 grad m . grad Lap m, the form of -m . D^2 m
/// that holds on the unit sphere.
ScalarField lambda_identity_form(const VectorField3& m);

/// m x D^2 m, and its divergence form Lap(m x Lap m) - 2 sum_k d_k(d_k m x Lap m).
VectorField3 highest_order_term(const VectorField3& m);
VectorField3 highest_order_divergence_form(const VectorField3& m);

struct StepOptions {
  bool dealias = false;  // 2/3 rule on the explicit right-hand side
};

/// One semi-implicit step followed by node-wise renormalization.
/// Throws StepRefused for dt outside (0, dt_max], BlowUp when |m*| < 0.5.
MagnetizationField step(const MagnetizationField& mf, const VectorField3& j, double dt,
                        const LLCoefficients& coeffs, const StepOptions& opt = {});

// Initial data. All return exactly unit-norm fields.

VectorField3 init_uniform(const PeriodicGrid& grid);
/// Planar skyrmion extended along z, centered in the x-y plane:
/// m = (sin t cos p, sin t sin p, cos t), t(r) = pi (1 - tanh(r / radius)).
VectorField3 init_skyrmion_tube(const PeriodicGrid& grid, double radius);
/// Degree-one Hopf map of the compactified ball, centered in the box. The
/// radial profile f(r) = pi (1 - tanh((r / radius)^3)) reaches e3 to machine
/// precision a few radii out. `mirror` reflects x -> -x (degree -1).
VectorField3 init_hopfion(const PeriodicGrid& grid, double radius, bool mirror = false);
/// normalize(bias e3 + low-mode random trigonometric polynomial).
VectorField3 init_random_smooth(const PeriodicGrid& grid, std::uint64_t seed, int max_mode = 2,
                                double bias = 1.5);

/// Dispatch by name: uniform, skyrmion_tube, hopfion, random_smooth.
/// Throws ConfigError for an unknown name.
VectorField3 init_by_name(const std::string& name, const PeriodicGrid& grid, double radius,
                          std::uint64_t seed);

}  // namespace llgvm
