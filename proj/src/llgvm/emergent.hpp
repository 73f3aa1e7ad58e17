#pragma once

#include "llgvm/grid.hpp"
#include "llgvm/magnetization.hpp"

namespace llgvm {

struct EmergentFieldPair {
  VectorField3 e;  // at the half step
  VectorField3 b;  // at the full step
};

/// b_i = 1/2 eps_ijk m . (d_j m x d_k m), spectral derivatives.
VectorField3 compute_b(const MagnetizationField& mf);
VectorField3 compute_b(const VectorField3& m);

/// e_i = m . (d_i m x d_t m) at the midpoint, with
/// m = normalize((prev + next) / 2) and d_t m = (next - prev) / dt.
/// Throws BlowUp where |prev + next| < 0.5.
VectorField3 compute_e(const MagnetizationField& prev, const MagnetizationField& next, double dt);
VectorField3 compute_e(const VectorField3& prev, const VectorField3& next, double dt);

/// ||(b(next) - b(prev)) / dt + curl e|| / ||b(next)||.
double faraday_residual(const VectorField3& prev, const VectorField3& next, double dt);

/// ||div b|| / ||b||.
double magnetic_gauss_residual(const VectorField3& b);

}  // namespace llgvm
