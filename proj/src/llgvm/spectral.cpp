#include "llgvm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "llgvm/errors.hpp"

namespace llgvm {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex g_plan_mutex;

// Plans are created once per grid shape and never destroyed; executing a plan
// on new arrays is thread-safe, creating one is not.
const Plans& plans_for(const PeriodicGrid& grid) {
  static std::map<std::tuple<int, int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  const auto key = std::make_tuple(grid.n(0), grid.n(1), grid.n(2));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int nx = grid.n(0), ny = grid.n(1), nz = grid.n(2);
  const std::size_t nreal = grid.size();
  const std::size_t ncplx = static_cast<std::size_t>(nz) * ny * (nx / 2 + 1);
  double* r = fftw_alloc_real(nreal);
  fftw_complex* c = fftw_alloc_complex(ncplx);
  Plans p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.r2c = fftw_plan_dft_r2c_3d(nz, ny, nx, r, c, flags);
  p.c2r = fftw_plan_dft_c2r_3d(nz, ny, nx, c, r, flags);
  fftw_free(r);
  fftw_free(c);
  if (!p.r2c || !p.c2r) throw Error(ErrorCode::internal, "FFTW plan creation failed");
  return cache.emplace(key, p).first->second;
}

template <class F>
void for_each_mode(const Wavenumbers& w, F&& f) {
  std::size_t idx = 0;
  for (int l = 0; l < w.nz; ++l)
    for (int j = 0; j < w.ny; ++j)
      for (int i = 0; i < w.nxh; ++i, ++idx) f(idx, i, j, l);
}

constexpr std::complex<double> kI{0.0, 1.0};

// out = F^{-1}[ mult(i,j,l) * F[in] ]
template <class M>
void apply_multiplier(const PeriodicGrid& grid, std::span<const double> in,
                      std::span<double> out, M&& mult) {
  Spectrum s = fft_forward(grid, in);
  const Wavenumbers w(grid);
  for_each_mode(w, [&](std::size_t idx, int i, int j, int l) { s[idx] *= mult(w, i, j, l); });
  fft_inverse(grid, s, out);
}

ScalarField scalar_multiplier(const ScalarField& u, auto mult) {
  ScalarField r(u.grid());
  apply_multiplier(u.grid(), u.values(), r.values(), mult);
  return r;
}

VectorField3 vector_multiplier(const VectorField3& u, auto mult) {
  VectorField3 r(u.grid());
  for (int c = 0; c < 3; ++c) apply_multiplier(u.grid(), u.component(c), r.component(c), mult);
  return r;
}

void require_finite(bool ok, const char* what) {
  if (!ok) throw ContractViolation(std::string("non-finite input to ") + what);
}

}  // namespace

Wavenumbers::Wavenumbers(const PeriodicGrid& grid)
    : nxh(grid.n(0) / 2 + 1), ny(grid.n(1)), nz(grid.n(2)) {
  const std::array<int, 3> extent{nxh, ny, nz};
  for (int a = 0; a < 3; ++a) {
    const int n = grid.n(a);
    const double base = 2.0 * std::numbers::pi / grid.length(a);
    k[a].resize(extent[a]);
    kappa[a].resize(extent[a]);
    for (int m = 0; m < extent[a]; ++m) {
      const int signed_m = m <= n / 2 ? m : m - n;
      k[a][m] = base * signed_m;
      kappa[a][m] = (m == n / 2) ? 0.0 : k[a][m];
    }
  }
}

double Wavenumbers::multiplicity(int i) const noexcept {
  return (i == 0 || i == nxh - 1) ? 1.0 : 2.0;
}

Spectrum fft_forward(const PeriodicGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw ContractViolation("fft_forward: extent mismatch");
  const Plans& p = plans_for(grid);
  Spectrum s(static_cast<std::size_t>(grid.n(2)) * grid.n(1) * (grid.n(0) / 2 + 1));
  // r2c does not modify its input.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(s.data()));
  return s;
}

void fft_inverse(const PeriodicGrid& grid, const Spectrum& spec, std::span<double> out) {
  if (out.size() != grid.size()) throw ContractViolation("fft_inverse: extent mismatch");
  const Plans& p = plans_for(grid);
  Spectrum scratch(spec);  // c2r overwrites its input
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (double& v : out) v *= inv;
}

ScalarField partial(const ScalarField& u, int axis) {
  if (axis < 0 || axis > 2) throw ContractViolation("partial: axis out of range");
  return scalar_multiplier(u, [axis](const Wavenumbers& w, int i, int j, int l) {
    const int m[3] = {i, j, l};
    return kI * w.kappa[axis][m[axis]];
  });
}

VectorField3 partial(const VectorField3& u, int axis) {
  if (axis < 0 || axis > 2) throw ContractViolation("partial: axis out of range");
  return vector_multiplier(u, [axis](const Wavenumbers& w, int i, int j, int l) {
    const int m[3] = {i, j, l};
    return kI * w.kappa[axis][m[axis]];
  });
}

std::array<VectorField3, 3> partials(const VectorField3& u) {
  const PeriodicGrid& g = u.grid();
  const Wavenumbers w(g);
  std::array<VectorField3, 3> d{VectorField3(g), VectorField3(g), VectorField3(g)};
  for (int c = 0; c < 3; ++c) {
    const Spectrum s = fft_forward(g, u.component(c));
    for (int a = 0; a < 3; ++a) {
      Spectrum t(s.size());
      for_each_mode(w, [&](std::size_t idx, int i, int j, int l) {
        const int m[3] = {i, j, l};
        t[idx] = s[idx] * (kI * w.kappa[a][m[a]]);
      });
      fft_inverse(g, t, d[a].component(c));
    }
  }
  return d;
}

VectorField3 grad(const ScalarField& u) {
  require_finite(u.all_finite(), "grad");
  const PeriodicGrid& g = u.grid();
  const Wavenumbers w(g);
  const Spectrum s = fft_forward(g, u.values());
  VectorField3 r(g);
  for (int a = 0; a < 3; ++a) {
    Spectrum t(s.size());
    for_each_mode(w, [&](std::size_t idx, int i, int j, int l) {
      const int m[3] = {i, j, l};
      t[idx] = s[idx] * (kI * w.kappa[a][m[a]]);
    });
    fft_inverse(g, t, r.component(a));
  }
  return r;
}

ScalarField div(const VectorField3& u) {
  require_finite(u.all_finite(), "div");
  const PeriodicGrid& g = u.grid();
  const Wavenumbers w(g);
  Spectrum acc(w.size());
  for (int a = 0; a < 3; ++a) {
    const Spectrum s = fft_forward(g, u.component(a));
    for_each_mode(w, [&](std::size_t idx, int i, int j, int l) {
      const int m[3] = {i, j, l};
      acc[idx] += s[idx] * (kI * w.kappa[a][m[a]]);
    });
  }
  ScalarField r(g);
  fft_inverse(g, acc, r.values());
  return r;
}

VectorField3 curl(const VectorField3& u) {
  require_finite(u.all_finite(), "curl");
  const PeriodicGrid& g = u.grid();
  const Wavenumbers w(g);
  std::array<Spectrum, 3> s{fft_forward(g, u.component(0)), fft_forward(g, u.component(1)),
                            fft_forward(g, u.component(2))};
  VectorField3 r(g);
  for (int c = 0; c < 3; ++c) {
    const int p = (c + 1) % 3, q = (c + 2) % 3;
    Spectrum t(w.size());
    for_each_mode(w, [&](std::size_t idx, int i, int j, int l) {
      const int m[3] = {i, j, l};
      t[idx] = kI * (w.kappa[p][m[p]] * s[q][idx] - w.kappa[q][m[q]] * s[p][idx]);
    });
    fft_inverse(g, t, r.component(c));
  }
  return r;
}

namespace {
auto minus_k2 = [](const Wavenumbers& w, int i, int j, int l) {
  return std::complex<double>(-w.k2(i, j, l), 0.0);
};
auto k4 = [](const Wavenumbers& w, int i, int j, int l) {
  const double q = w.k2(i, j, l);
  return std::complex<double>(q * q, 0.0);
};
}  // namespace

ScalarField laplacian(const ScalarField& u) {
  require_finite(u.all_finite(), "laplacian");
  return scalar_multiplier(u, minus_k2);
}
VectorField3 laplacian(const VectorField3& u) {
  require_finite(u.all_finite(), "laplacian");
  return vector_multiplier(u, minus_k2);
}
ScalarField biharmonic(const ScalarField& u) {
  require_finite(u.all_finite(), "biharmonic");
  return scalar_multiplier(u, k4);
}
VectorField3 biharmonic(const VectorField3& u) {
  require_finite(u.all_finite(), "biharmonic");
  return vector_multiplier(u, k4);
}

AnyField spectral_derivative(const AnyField& field, DerivKind kind) {
  if (const auto* s = std::get_if<ScalarField>(&field)) {
    switch (kind) {
      case DerivKind::grad: return grad(*s);
      case DerivKind::laplacian: return laplacian(*s);
      case DerivKind::biharmonic: return biharmonic(*s);
      case DerivKind::div: throw ContractViolation("div requires a vector field");
      case DerivKind::curl: throw ContractViolation("curl requires a vector field");
    }
  }
  const auto& v = std::get<VectorField3>(field);
  switch (kind) {
    case DerivKind::div: return div(v);
    case DerivKind::curl: return curl(v);
    case DerivKind::laplacian: return laplacian(v);
    case DerivKind::biharmonic: return biharmonic(v);
    case DerivKind::grad:
      throw ContractViolation("grad requires a scalar field (use partials for a vector field)");
  }
  throw ContractViolation("unknown derivative kind");
}

namespace {
void dealias_component(const PeriodicGrid& g, std::span<double> v) {
  Spectrum s = fft_forward(g, v);
  const Wavenumbers w(g);
  const int nx = g.n(0), ny = g.n(1), nz = g.n(2);
  for_each_mode(w, [&](std::size_t idx, int i, int j, int l) {
    const int jj = j <= ny / 2 ? j : ny - j;
    const int ll = l <= nz / 2 ? l : nz - l;
    if (3 * i > nx || 3 * jj > ny || 3 * ll > nz) s[idx] = 0.0;
  });
  fft_inverse(g, s, v);
}
}  // namespace

void dealias(ScalarField& u) { dealias_component(u.grid(), u.values()); }
void dealias(VectorField3& u) {
  for (int c = 0; c < 3; ++c) dealias_component(u.grid(), u.component(c));
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double l2_inner(const VectorField3& a, const VectorField3& b) {
  require_same_grid(a.grid(), b.grid(), "l2_inner");
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto x = a.component(c);
    auto y = b.component(c);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  }
  return s * a.grid().cell_volume();
}

double l2_inner(const AnyField& a, const AnyField& b) {
  if (a.index() != b.index()) throw ContractViolation("l2_inner: rank mismatch");
  if (const auto* s = std::get_if<ScalarField>(&a)) return l2_inner(*s, std::get<ScalarField>(b));
  return l2_inner(std::get<VectorField3>(a), std::get<VectorField3>(b));
}

double l2_norm(const ScalarField& a) { return std::sqrt(l2_inner(a, a)); }
double l2_norm(const VectorField3& a) { return std::sqrt(l2_inner(a, a)); }

namespace {
double weighted_spectral_sum(const PeriodicGrid& g, std::span<const double> v, double s_exp) {
  require_finite(std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }),
                 "hs_norm");
  const Spectrum s = fft_forward(g, v);
  const Wavenumbers w(g);
  const double n = static_cast<double>(g.size());
  double acc = 0.0;
  for_each_mode(w, [&](std::size_t idx, int i, int j, int l) {
    const double amp2 = std::norm(s[idx]) / (n * n);
    const double weight = s_exp == 0.0 ? 1.0 : std::pow(1.0 + w.k2(i, j, l), s_exp);
    acc += w.multiplicity(i) * weight * amp2;
  });
  return acc * g.volume();
}
}  // namespace

double spectral_energy(const ScalarField& u) {
  return weighted_spectral_sum(u.grid(), u.values(), 0.0);
}

double hs_norm(const ScalarField& u, double s) {
  if (!std::isfinite(s)) throw ContractViolation("hs_norm: non-finite order");
  return std::sqrt(weighted_spectral_sum(u.grid(), u.values(), s));
}

double hs_norm(const VectorField3& u, double s) {
  if (!std::isfinite(s)) throw ContractViolation("hs_norm: non-finite order");
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += weighted_spectral_sum(u.grid(), u.component(c), s);
  return std::sqrt(acc);
}

double hs_norm(const AnyField& u, double s) {
  return std::visit([s](const auto& f) { return hs_norm(f, s); }, u);
}

}  // namespace llgvm
