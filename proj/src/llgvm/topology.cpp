#include "llgvm/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "llgvm/emergent.hpp"
#include "llgvm/errors.hpp"
#include "llgvm/log.hpp"
#include "llgvm/spectral.hpp"

namespace llgvm {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFourPi = 4.0 * std::numbers::pi;
}  // namespace

bool solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, double& omega) {
  const double num = triple(a, b, c);
  const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  if (std::abs(num) < 1e-12 && den < 1e-12) return false;
  omega = 2.0 * std::atan2(num, den);
  return true;
}

SliceDegree skyrmion_degree(const VectorField3& m, int z) {
  const PeriodicGrid& g = m.grid();
  if (z < 0 || z >= g.n(2)) throw ContractViolation("skyrmion_number: z index out of range");
  double total = 0.0;
  for (int j = 0; j < g.n(1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      const Vec3 m00 = m.get(g.wrapped_index(i, j, z));
      const Vec3 m10 = m.get(g.wrapped_index(i + 1, j, z));
      const Vec3 m11 = m.get(g.wrapped_index(i + 1, j + 1, z));
      const Vec3 m01 = m.get(g.wrapped_index(i, j + 1, z));
      double w1 = 0.0, w2 = 0.0;
      if (!solid_angle(m00, m10, m11, w1) || !solid_angle(m00, m11, m01, w2)) {
        throw DegenerateSlice("degenerate plaquette (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") in slice z = " + std::to_string(z) +
                              ": antipodal spins");
      }
      total += w1 + w2;
    }
  const double raw = total / kFourPi;
  return {std::round(raw), raw};
}

double skyrmion_number(const MagnetizationField& mf, int z_index) {
  require_unit_norm(mf.m, 1e-6, "skyrmion_number");
  return skyrmion_degree(mf.m, z_index).q;
}

double solenoidal_defect(const VectorField3& b) {
  const PeriodicGrid& g = b.grid();
  const Wavenumbers w(g);
  const double n = static_cast<double>(g.size());
  double grad2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Spectrum s = fft_forward(g, b.component(c));
    std::size_t idx = 0;
    for (int l = 0; l < w.nz; ++l)
      for (int j = 0; j < w.ny; ++j)
        for (int i = 0; i < w.nxh; ++i, ++idx)
          grad2 += w.multiplicity(i) * w.kappa2(i, j, l) * std::norm(s[idx]) / (n * n);
  }
  grad2 *= g.volume();
  const double d = l2_norm(div(b));
  return grad2 > 0.0 ? d / std::sqrt(grad2) : d;
}

VectorField3 vector_potential(const VectorField3& b) {
  const double defect = solenoidal_defect(b);
  if (!(defect <= 1e-6)) {
    throw ContractViolation("vector_potential: input is not solenoidal (relative div " +
                            std::to_string(defect) + ")");
  }
  const PeriodicGrid& g = b.grid();
  const Vec3 mean_b = mean(b);
  if (norm(mean_b) > 0.0) log().debug("vector_potential: dropping mean of b, |<b>| = {}", norm(mean_b));
  const Wavenumbers w(g);
  std::array<Spectrum, 3> s{fft_forward(g, b.component(0)), fft_forward(g, b.component(1)),
                            fft_forward(g, b.component(2))};
  std::array<Spectrum, 3> a{Spectrum(w.size()), Spectrum(w.size()), Spectrum(w.size())};
  const std::complex<double> I{0.0, 1.0};
  std::size_t idx = 0;
  for (int l = 0; l < w.nz; ++l)
    for (int j = 0; j < w.ny; ++j)
      for (int i = 0; i < w.nxh; ++i, ++idx) {
        const double q = w.kappa2(i, j, l);
        if (q == 0.0) continue;  // k = 0 and pure Nyquist modes
        const double k[3] = {w.kappa[0][i], w.kappa[1][j], w.kappa[2][l]};
        for (int c = 0; c < 3; ++c) {
          const int p = (c + 1) % 3, r = (c + 2) % 3;
          a[c][idx] = I * (k[p] * s[r][idx] - k[r] * s[p][idx]) / q;
        }
      }
  VectorField3 out(g);
  for (int c = 0; c < 3; ++c) fft_inverse(g, a[c], out.component(c));
  return out;
}

VectorField3 solenoidal_projection(const VectorField3& b) {
  const PeriodicGrid& g = b.grid();
  const Wavenumbers w(g);
  std::array<Spectrum, 3> s{fft_forward(g, b.component(0)), fft_forward(g, b.component(1)),
                            fft_forward(g, b.component(2))};
  std::size_t idx = 0;
  for (int l = 0; l < w.nz; ++l)
    for (int j = 0; j < w.ny; ++j)
      for (int i = 0; i < w.nxh; ++i, ++idx) {
        const double q = w.kappa2(i, j, l);
        if (q == 0.0) {
          for (int c = 0; c < 3; ++c) s[c][idx] = 0.0;
          continue;
        }
        const double k[3] = {w.kappa[0][i], w.kappa[1][j], w.kappa[2][l]};
        const std::complex<double> kb = k[0] * s[0][idx] + k[1] * s[1][idx] + k[2] * s[2][idx];
        for (int c = 0; c < 3; ++c) s[c][idx] -= k[c] * kb / q;
      }
  VectorField3 pb(g);
  for (int c = 0; c < 3; ++c) fft_inverse(g, s[c], pb.component(c));
  return pb;
}

double helicity(const VectorField3& a, const VectorField3& b) {
  require_same_grid(a.grid(), b.grid(), "helicity");
  return l2_inner(a, solenoidal_projection(b));
}

bool is_localized(const VectorField3& m, double tol) {
  const PeriodicGrid& g = m.grid();
  auto off = [&](int i, int j, int k) {
    const Vec3 v = m.get(g.index(i, j, k));
    return std::abs(v[0]) > tol || std::abs(v[1]) > tol || std::abs(v[2] - 1.0) > tol;
  };
  const int nx = g.n(0), ny = g.n(1), nz = g.n(2);
  for (int a = 0; a < ny; ++a)
    for (int b = 0; b < nz; ++b)
      if (off(0, a, b)) return false;
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < nz; ++b)
      if (off(a, 0, b)) return false;
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b)
      if (off(a, b, 0)) return false;
  return true;
}

Vec3 flux_quanta(const VectorField3& b) {
  const PeriodicGrid& g = b.grid();
  const Vec3 mb = mean(b);
  const double vol = g.length(0) * g.length(1) * g.length(2);
  Vec3 q;
  for (int a = 0; a < 3; ++a) q[a] = mb[a] * vol / g.length(a) / kFourPi;
  return q;
}

bool has_zero_flux(const VectorField3& b, double tol) {
  const Vec3 q = flux_quanta(b);
  return std::abs(q[0]) < tol && std::abs(q[1]) < tol && std::abs(q[2]) < tol;
}

double hopf_invariant(const MagnetizationField& mf) {
  require_unit_norm(mf.m, 1e-6, "hopf_invariant");
  const VectorField3 b = compute_b(mf.m);
  if (!has_zero_flux(b)) {
    const Vec3 q = flux_quanta(b);
    throw ContractViolation("hopf_invariant: b has a net flux (" + std::to_string(q[0]) + ", " +
                            std::to_string(q[1]) + ", " + std::to_string(q[2]) + ") x 4 pi");
  }
  log().debug("hopf_invariant: solenoidal defect of b = {}", solenoidal_defect(b));
  const VectorField3 pb = solenoidal_projection(b);
  return helicity(vector_potential(pb), pb) / (kFourPi * kFourPi);
}

TopologyReport topology_report(const MagnetizationField& mf) {
  require_unit_norm(mf.m, 1e-6, "topology_report");
  TopologyReport r;
  const PeriodicGrid& g = mf.grid();
  for (int z = 0; z < g.n(2); ++z) {
    try {
      r.skyrmion_number_per_slice.emplace_back(z, skyrmion_degree(mf.m, z).q);
    } catch (const DegenerateSlice& e) {
      r.skyrmion_number_per_slice.emplace_back(z, kNaN);
      r.notes.emplace_back(e.what());
    }
  }
  const VectorField3 b = compute_b(mf.m);
  r.b_mean = norm(mean(b));
  r.b_div_defect = solenoidal_defect(b);
  const VectorField3 pb = solenoidal_projection(b);
  const VectorField3 a = vector_potential(pb);
  r.helicity = helicity(a, pb);
  const double na = l2_norm(a);
  r.gauge_residual = na > 0.0 ? l2_norm(div(a)) / na : 0.0;
  if (has_zero_flux(b)) {
    r.hopf_invariant = r.helicity / (kFourPi * kFourPi);
  } else {
    r.hopf_invariant = kNaN;
    r.notes.emplace_back("hopf invariant not defined: b has a net flux through the box faces");
  }
  return r;
}

std::string format_report(const TopologyReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "helicity = " << r.helicity << "\n";
  os << "hopf_invariant = " << r.hopf_invariant << "\n";
  os << "gauge_residual = " << r.gauge_residual << "\n";
  os << "b_mean = " << r.b_mean << "\n";
  os << "b_div_defect = " << r.b_div_defect << "\n";
  os << "slices = " << r.skyrmion_number_per_slice.size() << "\n";
  if (!r.skyrmion_number_per_slice.empty()) {
    const auto& mid = r.skyrmion_number_per_slice[r.skyrmion_number_per_slice.size() / 2];
    os << "skyrmion_number_mid_slice = " << mid.second << "\n";
  }
  for (const auto& n : r.notes) os << "note = " << n << "\n";
  return os.str();
}

std::string format_slices_csv(const TopologyReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "z_index,Q\n";
  for (const auto& [z, q] : r.skyrmion_number_per_slice) os << z << "," << q << "\n";
  return os.str();
}

}  // namespace llgvm
