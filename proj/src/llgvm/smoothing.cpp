#include "llgvm/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "llgvm/errors.hpp"
#include "llgvm/log.hpp"

namespace llgvm {

namespace {
// Signed minimum-image offset of node index m along an axis of n cells.
int min_image(int m, int n) { return m <= n / 2 ? m : m - n; }
}  // namespace

Mollifier::Mollifier(const PeriodicGrid& grid, double epsilon)
    : epsilon_(epsilon), kernel_(grid) {
  const double half_box =
      0.5 * std::min({grid.length(0), grid.length(1), grid.length(2)});
  if (!(epsilon > 0.0) || !(epsilon < half_box)) {
    throw ContractViolation("mollifier epsilon must lie in (0, " + std::to_string(half_box) +
                            "), got " + std::to_string(epsilon));
  }
  double mass = 0.0;
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const double dx = min_image(i, grid.n(0)) * grid.spacing(0);
        const double dy = min_image(j, grid.n(1)) * grid.spacing(1);
        const double dz = min_image(k, grid.n(2)) * grid.spacing(2);
        const double r2 = (dx * dx + dy * dy + dz * dz) / (epsilon * epsilon);
        if (r2 >= 1.0) continue;
        const double v = std::exp(-1.0 / (1.0 - r2));
        kernel_[grid.index(i, j, k)] = v;
        mass += v;
        ++support_nodes_;
      }
  const double scale = 1.0 / (mass * grid.cell_volume());
  for (double& v : kernel_.values()) v *= scale;
  if (support_nodes_ < 7) {
    log().warn("mollifier support of radius {} covers only {} node(s); K acts almost as identity",
               epsilon, support_nodes_);
  }

  const Spectrum s = fft_forward(grid, kernel_.values());
  symbol_.resize(s.size());
  const double h3 = grid.cell_volume();
  for (std::size_t i = 0; i < s.size(); ++i) symbol_[i] = s[i].real() * h3;
}

double default_mollifier_epsilon(const PeriodicGrid& grid) { return 4.0 * grid.max_spacing(); }

ScalarField Mollifier::apply(const ScalarField& f) const {
  require_same_grid(f.grid(), grid(), "mollify");
  Spectrum s = fft_forward(grid(), f.values());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= symbol_[i];
  ScalarField r(grid());
  fft_inverse(grid(), s, r.values());
  return r;
}

VectorField3 Mollifier::apply(const VectorField3& f) const {
  require_same_grid(f.grid(), grid(), "mollify");
  VectorField3 r(grid());
  for (int c = 0; c < 3; ++c) {
    Spectrum s = fft_forward(grid(), f.component(c));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= symbol_[i];
    fft_inverse(grid(), s, r.component(c));
  }
  return r;
}

AnyField mollify(const AnyField& field, const Mollifier& k) {
  return std::visit([&](const auto& f) -> AnyField { return k.apply(f); }, field);
}
ScalarField mollify(const ScalarField& field, const Mollifier& k) { return k.apply(field); }
VectorField3 mollify(const VectorField3& field, const Mollifier& k) { return k.apply(field); }

}  // namespace llgvm
