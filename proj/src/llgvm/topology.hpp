#pragma once

#include <string>
#include <utility>
#include <vector>

#include "llgvm/grid.hpp"
#include "llgvm/magnetization.hpp"

namespace llgvm {

struct SliceDegree {
  double q;    // rounded lattice degree
  double raw;  // sum of solid angles / 4 pi before rounding
};

/// Lattice degree of the periodic slice z = z_index. Each plaquette is split
/// into two spherical triangles whose signed solid angles are summed.
/// Throws DegenerateSlice for a triangle with an antipodal pair of corners.
SliceDegree skyrmion_degree(const VectorField3& m, int z_index);
double skyrmion_number(const MagnetizationField& mf, int z_index);

/// Signed solid angle of the spherical triangle (a, b, c).
/// Returns false when it is undefined (antipodal corners).
bool solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, double& omega);

/// ||div b|| / (sum |k|^2 |b_hat|^2 V)^{1/2}, a dimensionless measure of how
/// far b is from solenoidal.
double solenoidal_defect(const VectorField3& b);

/// Coulomb-gauge potential a_hat = i k x b_hat / |k|^2, a_hat(0) = 0.
/// The mean of b is dropped (logged). Throws ContractViolation when
/// solenoidal_defect(b) > 1e-6.
VectorField3 vector_potential(const VectorField3& b);

/// Projection onto mean-free solenoidal fields: b_hat - k (k . b_hat) / |k|^2.
VectorField3 solenoidal_projection(const VectorField3& b);

/// <a, P b> with P the projection onto mean-free solenoidal fields, so that
/// adding a periodic gradient to a leaves the value unchanged.
double helicity(const VectorField3& a, const VectorField3& b);

/// True when every node on the box faces equals e3 within tol.
bool is_localized(const VectorField3& m, double tol = 1e-6);

/// Flux of the emergent b through the three coordinate planes in units of
/// 4 pi, i.e. the mean skyrmion number of the slices normal to each axis.
Vec3 flux_quanta(const VectorField3& b);
/// True when every flux_quanta component is below tol. On the periodic box
/// the Hopf invariant is defined exactly for these textures; they need not
/// equal e3 on the faces (an evolved hopfion radiates to the boundary).
bool has_zero_flux(const VectorField3& b, double tol = 0.1);

/// helicity(a, b) / (4 pi)^2 for b = compute_b(m) and a the potential of
/// P b. The emergent b of a grid texture is solenoidal only up to aliasing of
/// its triple products (about 7e-4 relative for the N = 64 hopfion), so the
/// field is projected before curl inversion; the defect is logged.
/// Throws ContractViolation when b has a net flux (has_zero_flux fails).
double hopf_invariant(const MagnetizationField& mf);

struct TopologyReport {
  std::vector<std::pair<int, double>> skyrmion_number_per_slice;  // NaN for a degenerate slice
  double helicity = 0.0;
  double hopf_invariant = 0.0;  // NaN when b has a net flux
  double gauge_residual = 0.0;  // ||div a|| / ||a||
  double b_mean = 0.0;          // |mean of b|, removed before curl inversion
  double b_div_defect = 0.0;    // solenoidal_defect of the emergent b
  std::vector<std::string> notes;
};

TopologyReport topology_report(const MagnetizationField& mf);

/// Key-value text block, one `key = value` per line.
std::string format_report(const TopologyReport& r);
/// CSV with header z_index,Q.
std::string format_slices_csv(const TopologyReport& r);

}  // namespace llgvm
