#pragma once

#include <vector>

#include "llgvm/grid.hpp"
#include "llgvm/spectral.hpp"

namespace llgvm {

/// Grid-sampled bump kernel exp(-1/(1 - |x/eps|^2)) on |x| < eps (periodic
/// minimum-image distance), normalized so that sum K h^3 = 1. Convolution is
/// done in Fourier space with the real part of the kernel's transform, which
/// makes the discrete operator exactly symmetric.
class Mollifier {
 public:
  /// eps is a physical length. Throws ContractViolation unless
  /// 0 < eps < half the shortest box side.
  Mollifier(const PeriodicGrid& grid, double epsilon);

  const PeriodicGrid& grid() const noexcept { return kernel_.grid(); }
  double epsilon() const noexcept { return epsilon_; }
  const ScalarField& kernel() const noexcept { return kernel_; }
  /// Number of nodes inside the support.
  std::size_t support_nodes() const noexcept { return support_nodes_; }
  /// Real Fourier symbol on the half-complex layout, symbol[0] = 1.
  const std::vector<double>& symbol() const noexcept { return symbol_; }

  ScalarField apply(const ScalarField& f) const;
  VectorField3 apply(const VectorField3& f) const;

 private:
  double epsilon_;
  ScalarField kernel_;
  std::vector<double> symbol_;
  std::size_t support_nodes_ = 0;
};

/// Default support radius: four of the largest grid spacings.
double default_mollifier_epsilon(const PeriodicGrid& grid);

AnyField mollify(const AnyField& field, const Mollifier& k);
ScalarField mollify(const ScalarField& field, const Mollifier& k);
VectorField3 mollify(const VectorField3& field, const Mollifier& k);

}  // namespace llgvm
