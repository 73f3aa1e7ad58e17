#pragma once

#include <array>
#include <complex>
#include <span>
#include <variant>
#include <vector>

#include "llgvm/grid.hpp"

namespace llgvm {

/// Half-complex spectrum of a real field, layout (k Ny + j)(Nx/2 + 1) + i.
using Spectrum = std::vector<std::complex<double>>;

/// Wavenumbers of the half-complex layout. `k` holds the signed physical
/// wavenumber (Nyquist kept, used by even-order operators); `kappa` is the same
/// with the Nyquist entry zeroed, used by odd-order operators so that the
/// result of a first derivative stays real.
struct Wavenumbers {
  explicit Wavenumbers(const PeriodicGrid& grid);
  std::array<std::vector<double>, 3> k;
  std::array<std::vector<double>, 3> kappa;
  int nxh;  // Nx/2 + 1
  int ny;
  int nz;
  std::size_t size() const noexcept { return static_cast<std::size_t>(nxh) * ny * nz; }
  std::size_t index(int i, int j, int l) const noexcept {
    return (static_cast<std::size_t>(l) * ny + j) * nxh + i;
  }
  double k2(int i, int j, int l) const noexcept {
    return k[0][i] * k[0][i] + k[1][j] * k[1][j] + k[2][l] * k[2][l];
  }
  double kappa2(int i, int j, int l) const noexcept {
    return kappa[0][i] * kappa[0][i] + kappa[1][j] * kappa[1][j] + kappa[2][l] * kappa[2][l];
  }
  /// Multiplicity of a half-spectrum mode in the full spectrum (1 or 2).
  double multiplicity(int i) const noexcept;
};

/// Unnormalized forward transform.
Spectrum fft_forward(const PeriodicGrid& grid, std::span<const double> values);
/// Inverse transform including the 1/N factor, so inverse(forward(u)) == u.
void fft_inverse(const PeriodicGrid& grid, const Spectrum& spec, std::span<double> out);

enum class DerivKind { grad, div, curl, laplacian, biharmonic };

using AnyField = std::variant<ScalarField, VectorField3>;

/// Generic entry point. Throws ContractViolation for a kind that does not
/// apply to the field rank (grad of a vector, div/curl of a scalar).
AnyField spectral_derivative(const AnyField& field, DerivKind kind);

ScalarField partial(const ScalarField& u, int axis);
VectorField3 partial(const VectorField3& u, int axis);
/// All three partials of a vector field, d[axis].
std::array<VectorField3, 3> partials(const VectorField3& u);
VectorField3 grad(const ScalarField& u);
ScalarField div(const VectorField3& u);
VectorField3 curl(const VectorField3& u);
ScalarField laplacian(const ScalarField& u);
VectorField3 laplacian(const VectorField3& u);
ScalarField biharmonic(const ScalarField& u);
VectorField3 biharmonic(const VectorField3& u);

/// Zeroes every mode with |n| > N/3 along any axis (2/3 rule).
void dealias(ScalarField& u);
void dealias(VectorField3& u);

/// Sum of a·b h³ (midpoint rule), serial fixed-order sum.
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VectorField3& a, const VectorField3& b);
double l2_inner(const AnyField& a, const AnyField& b);
double l2_norm(const ScalarField& a);
double l2_norm(const VectorField3& a);

/// V · sum over the full discrete spectrum of |û(k)|², û = forward / N.
/// Equals l2_inner(u, u) by Parseval.
double spectral_energy(const ScalarField& u);

/// Discrete H^s norm: (V sum (1 + |k|²)^s |û(k)|²)^{1/2}.
double hs_norm(const ScalarField& u, double s);
double hs_norm(const VectorField3& u, double s);
double hs_norm(const AnyField& u, double s);

}  // namespace llgvm
