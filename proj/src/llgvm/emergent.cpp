#include "llgvm/emergent.hpp"

#include <string>

#include "llgvm/errors.hpp"
#include "llgvm/parallel.hpp"
#include "llgvm/spectral.hpp"

namespace llgvm {

VectorField3 compute_b(const VectorField3& m) {
  const std::array<VectorField3, 3> d = partials(m);
  VectorField3 b(m.grid());
  parallel::for_each_index(m.size(), [&](std::size_t i) {
    const Vec3 mi = m.get(i);
    const Vec3 d0 = d[0].get(i), d1 = d[1].get(i), d2 = d[2].get(i);
    b.set(i, {triple(mi, d1, d2), triple(mi, d2, d0), triple(mi, d0, d1)});
  });
  return b;
}

VectorField3 compute_b(const MagnetizationField& mf) { return compute_b(mf.m); }

VectorField3 compute_e(const VectorField3& prev, const VectorField3& next, double dt) {
  require_same_grid(prev.grid(), next.grid(), "compute_e");
  if (!(dt > 0.0)) throw ContractViolation("compute_e: dt must be positive");
  const PeriodicGrid& g = prev.grid();
  VectorField3 mid(g), dmdt(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 s = prev.get(i) + next.get(i);
    const double n = norm(s);
    if (!(n >= 0.5)) {
      const auto c = g.coords(i);
      throw BlowUp("emergent e: nearly antipodal update at node (" + std::to_string(c[0]) + ", " +
                   std::to_string(c[1]) + ", " + std::to_string(c[2]) +
                   "); time step too large for the field motion");
    }
    mid.set(i, (1.0 / n) * s);
    dmdt.set(i, (1.0 / dt) * (next.get(i) - prev.get(i)));
  }
  const std::array<VectorField3, 3> d = partials(mid);
  VectorField3 e(g);
  parallel::for_each_index(g.size(), [&](std::size_t i) {
    const Vec3 mi = mid.get(i), v = dmdt.get(i);
    e.set(i, {triple(mi, d[0].get(i), v), triple(mi, d[1].get(i), v), triple(mi, d[2].get(i), v)});
  });
  return e;
}

VectorField3 compute_e(const MagnetizationField& prev, const MagnetizationField& next, double dt) {
  return compute_e(prev.m, next.m, dt);
}

double faraday_residual(const VectorField3& prev, const VectorField3& next, double dt) {
  const VectorField3 b0 = compute_b(prev), b1 = compute_b(next);
  const VectorField3 r = (1.0 / dt) * (b1 - b0) + curl(compute_e(prev, next, dt));
  const double nb = l2_norm(b1);
  return nb > 0.0 ? l2_norm(r) / nb : l2_norm(r);
}

double magnetic_gauss_residual(const VectorField3& b) {
  const double nb = l2_norm(b);
  const double nd = l2_norm(div(b));
  return nb > 0.0 ? nd / nb : nd;
}

}  // namespace llgvm
