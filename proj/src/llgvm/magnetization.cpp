#include "llgvm/magnetization.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "llgvm/errors.hpp"
#include "llgvm/parallel.hpp"

namespace llgvm {

namespace {

constexpr Vec3 kE3{0.0, 0.0, 1.0};

// Spectra of the three components plus the derived node fields the right-hand
// side needs.
struct Derived {
  std::array<Spectrum, 3> hat;
  VectorField3 lap;
  VectorField3 bih;
};

Derived derive(const VectorField3& m) {
  const PeriodicGrid& g = m.grid();
  const Wavenumbers w(g);
  Derived d{{}, VectorField3(g), VectorField3(g)};
  for (int c = 0; c < 3; ++c) {
    d.hat[c] = fft_forward(g, m.component(c));
    Spectrum a(w.size()), b(w.size());
    std::size_t idx = 0;
    for (int l = 0; l < w.nz; ++l)
      for (int j = 0; j < w.ny; ++j)
        for (int i = 0; i < w.nxh; ++i, ++idx) {
          const double k2 = w.k2(i, j, l);
          a[idx] = -k2 * d.hat[c][idx];
          b[idx] = k2 * k2 * d.hat[c][idx];
        }
    fft_inverse(g, a, d.lap.component(c));
    fft_inverse(g, b, d.bih.component(c));
  }
  return d;
}

}  // namespace

double unit_norm_defect(const VectorField3& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = std::abs(norm(m.get(i)) - 1.0);
    if (!(d <= worst)) worst = d;  // also propagates NaN
  }
  return worst;
}

void require_unit_norm(const VectorField3& m, double tol, const char* where) {
  const double d = unit_norm_defect(m);
  if (!(d <= tol)) {
    throw StateCorruption(std::string(where) + ": unit-norm defect " + std::to_string(d) +
                          " exceeds " + std::to_string(tol));
  }
}

LLCoefficients LLCoefficients::make(double alpha, double c) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ContractViolation("Gilbert damping alpha must be positive");
  }
  const double lambda = alpha / (1.0 + alpha * alpha);
  if (c <= 0.0) c = 1.0 / lambda;
  if (c < lambda) {
    throw ContractViolation("stabilizer c = " + std::to_string(c) + " is below lambda = " +
                            std::to_string(lambda));
  }
  return {alpha, lambda, c};
}

double LLCoefficients::dt_max(const PeriodicGrid& grid, double h) const {
  const Wavenumbers w(grid);
  const double a = alpha, a2 = 1.0 + alpha * alpha;
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < w.nz; ++l)
    for (int j = 0; j < w.ny; ++j)
      for (int i = 0; i < w.nxh; ++i) {
        const double k2 = w.k2(i, j, l);
        const double k4 = k2 * k2;
        const double denom = a2 * (k4 - k2 + h) - 2.0 * a * c * k4;
        if (denom > 0.0) best = std::min(best, 2.0 * a * a2 / denom);
      }
  return best;
}

EnergyParts energy_parts(const MagnetizationField& mf) {
  const VectorField3& m = mf.m;
  const PeriodicGrid& g = m.grid();
  const Wavenumbers w(g);
  const double n = static_cast<double>(g.size());
  double h4 = 0.0, h2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Spectrum s = fft_forward(g, m.component(c));
    std::size_t idx = 0;
    for (int l = 0; l < w.nz; ++l)
      for (int j = 0; j < w.ny; ++j)
        for (int i = 0; i < w.nxh; ++i, ++idx) {
          const double k2 = w.k2(i, j, l);
          const double a = w.multiplicity(i) * std::norm(s[idx]) / (n * n);
          h4 += k2 * k2 * a;
          h2 += k2 * a;
        }
  }
  double z = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 d = m.get(i) - kE3;
    z += dot(d, d);
  }
  return {h4 * g.volume(), h2 * g.volume(), z * g.cell_volume()};
}

double energy(const MagnetizationField& mf) {
  require_unit_norm(mf.m, 1e-6, "energy");
  const EnergyParts p = energy_parts(mf);
  return 0.5 * (p.hessian2 - p.gradient2 + mf.h_zeeman * p.zeeman2);
}

VectorField3 effective_field(const MagnetizationField& mf) {
  require_unit_norm(mf.m, 1e-6, "effective_field");
  const Derived d = derive(mf.m);
  VectorField3 r(mf.grid());
  const double h = mf.h_zeeman;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Vec3 m = mf.m.get(i);
    r.set(i, -1.0 * (d.bih.get(i) + d.lap.get(i) + h * (m - kE3)));
  }
  return r;
}

VectorField3 apply_A(const VectorField3& m, const VectorField3& xi, double alpha) {
  require_same_grid(m.grid(), xi.grid(), "apply_A");
  VectorField3 r(m.grid());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Vec3 x = xi.get(i);
    r.set(i, alpha * x - cross(m.get(i), x));
  }
  return r;
}

LLRhs ll_rhs(const MagnetizationField& mf, const VectorField3& j) {
  require_same_grid(mf.grid(), j.grid(), "ll_rhs");
  require_unit_norm(mf.m, 1e-6, "ll_rhs");
  const PeriodicGrid& g = mf.grid();
  const VectorField3& m = mf.m;
  const double a = mf.alpha, h = mf.h_zeeman;
  const Derived d = derive(m);

  // Spin-transfer transport (j.grad) m, skipped when there is no current.
  VectorField3 transport(g);
  if (max_abs(j) > 0.0) {
    const std::array<VectorField3, 3> dm = partials(m);
    parallel::for_each_index(g.size(), [&](std::size_t i) {
      const Vec3 ji = j.get(i);
      transport.set(i, ji[0] * dm[0].get(i) + ji[1] * dm[1].get(i) + ji[2] * dm[2].get(i));
    });
  }

  LLRhs out{VectorField3(g), {VectorField3(g), VectorField3(g), ScalarField(g)}};
  const double inv = 1.0 / (1.0 + a * a);
  parallel::for_each_index(g.size(), [&](std::size_t i) {
    const Vec3 mi = m.get(i);
    const Vec3 b = d.bih.get(i);
    const Vec3 raw = h * kE3 - cross(mi, transport.get(i)) - d.lap.get(i);
    const Vec3 f = raw - dot(mi, raw) * mi;
    const double lam = -dot(mi, b);
    const Vec3 Ab = a * b - cross(mi, b);
    const Vec3 Af = a * f - cross(mi, f);
    out.parts.A_term.set(i, Ab);
    out.parts.f_term.set(i, f);
    out.parts.Lambda_term[i] = lam;
    out.dmdt.set(i, inv * (Af - (a * lam) * mi - Ab));
  });
  return out;
}

ScalarField lambda_identity_form(const VectorField3& m) {
  const PeriodicGrid& g = m.grid();
  const VectorField3 lap = laplacian(m);
  const std::array<VectorField3, 3> dm = partials(m);
  const std::array<VectorField3, 3> dlap = partials(lap);
  ScalarField grad2(g), rest(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0, t = 0.0;
    for (int k = 0; k < 3; ++k) {
      s += dot(dm[k].get(i), dm[k].get(i));
      t += dot(dm[k].get(i), dlap[k].get(i));
    }
    grad2[i] = s;
    rest[i] = dot(lap.get(i), lap.get(i)) + 2.0 * t;
  }
  return rest + laplacian(grad2);
}

VectorField3 highest_order_term(const VectorField3& m) { return cross(m, biharmonic(m)); }

VectorField3 highest_order_divergence_form(const VectorField3& m) {
  const VectorField3 lap = laplacian(m);
  const std::array<VectorField3, 3> dm = partials(m);
  VectorField3 r = laplacian(cross(m, lap));
  for (int k = 0; k < 3; ++k) r = r - 2.0 * partial(cross(dm[k], lap), k);
  return r;
}

MagnetizationField step(const MagnetizationField& mf, const VectorField3& j, double dt,
                        const LLCoefficients& coeffs, const StepOptions& opt) {
  const double limit = coeffs.dt_max(mf.grid(), mf.h_zeeman);
  if (!(dt > 0.0) || !(dt <= limit)) {
    throw StepRefused("LLG step dt = " + std::to_string(dt) + " outside the stable range (0, " +
                      std::to_string(limit) + "]");
  }
  const PeriodicGrid& g = mf.grid();
  const double a2 = 1.0 + coeffs.alpha * coeffs.alpha;
  LLRhs rhs = ll_rhs(mf, j);
  if (opt.dealias) dealias(rhs.dmdt);

  const Wavenumbers w(g);
  MagnetizationField next{VectorField3(g), mf.h_zeeman, mf.alpha};
  for (int c = 0; c < 3; ++c) {
    Spectrum mh = fft_forward(g, mf.m.component(c));
    const Spectrum rh = fft_forward(g, rhs.dmdt.component(c));
    std::size_t idx = 0;
    for (int l = 0; l < w.nz; ++l)
      for (int jj = 0; jj < w.ny; ++jj)
        for (int i = 0; i < w.nxh; ++i, ++idx) {
          const double k2 = w.k2(i, jj, l);
          mh[idx] += (dt * a2) * rh[idx] / (a2 + coeffs.c * dt * k2 * k2);
        }
    fft_inverse(g, mh, next.m.component(c));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 v = next.m.get(i);
    const double n = norm(v);
    if (!(n >= 0.5)) {
      const auto ijk = g.coords(i);
      throw BlowUp("LLG renormalization collapse |m*| = " + std::to_string(n) + " at node (" +
                   std::to_string(ijk[0]) + ", " + std::to_string(ijk[1]) + ", " +
                   std::to_string(ijk[2]) + ")");
    }
    next.m.set(i, (1.0 / n) * v);
  }
  return next;
}

VectorField3 init_uniform(const PeriodicGrid& grid) { return VectorField3(grid, kE3); }

VectorField3 init_skyrmion_tube(const PeriodicGrid& grid, double radius) {
  VectorField3 m(grid);
  const double cx = 0.5 * grid.length(0), cy = 0.5 * grid.length(1);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const Vec3 x = grid.node_position(i, j, k);
        const double dx = x[0] - cx, dy = x[1] - cy;
        const double r = std::hypot(dx, dy);
        const double t = std::numbers::pi * (1.0 - std::tanh(r / radius));
        const double phi = std::atan2(dy, dx);
        m.set(grid.index(i, j, k),
              {std::sin(t) * std::cos(phi), std::sin(t) * std::sin(phi), std::cos(t)});
      }
  return m;
}

VectorField3 init_hopfion(const PeriodicGrid& grid, double radius, bool mirror) {
  VectorField3 m(grid);
  const Vec3 c{0.5 * grid.length(0), 0.5 * grid.length(1), 0.5 * grid.length(2)};
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        Vec3 x = grid.node_position(i, j, k) - c;
        if (mirror) x[0] = -x[0];
        const double r = norm(x);
        const double s = r / radius;
        const double f = std::numbers::pi * (1.0 - std::tanh(s * s * s));
        // Point of S^3: (sin f x/r, cos f), split into two complex numbers.
        const double sf = r > 0.0 ? std::sin(f) / r : 0.0;
        const double q1 = sf * x[0], q2 = sf * x[1], q3 = sf * x[2], q4 = std::cos(f);
        // m1 + i m2 = 2 Z1 conj(Z2), m3 = |Z2|^2 - |Z1|^2 with Z1 = q1 + i q2, Z2 = q3 + i q4.
        const double m1 = 2.0 * (q1 * q3 + q2 * q4);
        const double m2 = 2.0 * (q2 * q3 - q1 * q4);
        const double m3 = q3 * q3 + q4 * q4 - q1 * q1 - q2 * q2;
        const Vec3 v{m1, m2, m3};
        m.set(grid.index(i, j, k), (1.0 / norm(v)) * v);
      }
  return m;
}

VectorField3 init_random_smooth(const PeriodicGrid& grid, std::uint64_t seed, int max_mode,
                                double bias) {
  constexpr int kModes = 6;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> wave(-max_mode, max_mode);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  struct Mode {
    int n[3];
    double a, p;
  };
  std::array<std::array<Mode, kModes>, 3> modes;
  for (auto& comp : modes)
    for (auto& md : comp) {
      md.n[0] = wave(rng);
      md.n[1] = wave(rng);
      md.n[2] = wave(rng);
      md.a = amp(rng) / kModes;
      md.p = phase(rng);
    }
  VectorField3 m(grid);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const Vec3 x = grid.node_position(i, j, k);
        Vec3 v{0.0, 0.0, bias};
        for (int c = 0; c < 3; ++c)
          for (const Mode& md : modes[c]) {
            double arg = md.p;
            for (int a = 0; a < 3; ++a) arg += 2.0 * std::numbers::pi * md.n[a] * x[a] / grid.length(a);
            v[c] += md.a * std::cos(arg);
          }
        const double n = norm(v);
        if (!(n > 1e-3)) throw ContractViolation("random_smooth: bias too small for a unit field");
        m.set(grid.index(i, j, k), (1.0 / n) * v);
      }
  return m;
}

VectorField3 init_by_name(const std::string& name, const PeriodicGrid& grid, double radius,
                          std::uint64_t seed) {
  if (name == "uniform") return init_uniform(grid);
  if (name == "skyrmion_tube") return init_skyrmion_tube(grid, radius);
  if (name == "hopfion") return init_hopfion(grid, radius);
  if (name == "random_smooth") return init_random_smooth(grid, seed);
  throw ConfigError({"llg.init: unknown initial data '" + name +
                     "' (expected uniform, skyrmion_tube, hopfion, random_smooth)"});
}

}  // namespace llgvm
