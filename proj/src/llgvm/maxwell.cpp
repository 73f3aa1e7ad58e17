#include "llgvm/maxwell.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "llgvm/errors.hpp"
#include "llgvm/log.hpp"
#include "llgvm/parallel.hpp"
#include "llgvm/spectral.hpp"

namespace llgvm {

namespace {

// Periodic neighbours of one node: up[a] / down[a] shift by +-1 along axis a.
struct Neighbours {
  std::size_t up[3], down[3];
};

Neighbours neighbours(const PeriodicGrid& g, std::size_t idx) noexcept {
  const auto c = g.coords(idx);
  const std::size_t stride[3] = {1, std::size_t(g.n(0)), std::size_t(g.n(0)) * g.n(1)};
  Neighbours nb;
  for (int a = 0; a < 3; ++a) {
    const std::size_t span = stride[a] * g.n(a);
    nb.up[a] = c[a] + 1 == g.n(a) ? idx + stride[a] - span : idx + stride[a];
    nb.down[a] = c[a] == 0 ? idx + span - stride[a] : idx - stride[a];
  }
  return nb;
}

template <class F>
void for_nodes(const PeriodicGrid& g, F&& f) {
  parallel::for_each_index(g.size(), f);
}

Vec3 polarization(const std::array<int, 3>& n) {
  const Vec3 k{double(n[0]), double(n[1]), double(n[2])};
  Vec3 p = cross(k, Vec3{0.0, 0.0, 1.0});
  if (norm(p) < 1e-12) p = cross(k, Vec3{1.0, 0.0, 0.0});
  return (1.0 / norm(p)) * p;
}

}  // namespace

std::vector<EMMode> parse_em_modes(const std::string& text) {
  std::vector<EMMode> out;
  std::stringstream all(text);
  std::string item;
  std::vector<std::string> problems;
  while (std::getline(all, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream is(item);
    EMMode m;
    std::string extra;
    if (!(is >> m.n[0] >> m.n[1] >> m.n[2] >> m.e_amp >> m.b_amp) || (is >> extra)) {
      problems.push_back("em.init_modes: expected 'nx ny nz e_amp b_amp', got '" + item + "'");
      continue;
    }
    if (m.n[0] == 0 && m.n[1] == 0 && m.n[2] == 0) {
      problems.push_back("em.init_modes: wave index (0, 0, 0) has no transverse part");
      continue;
    }
    out.push_back(m);
  }
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

VectorField3 curl_edge(const VectorField3& e) {
  const PeriodicGrid& g = e.grid();
  const double h[3] = {g.spacing(0), g.spacing(1), g.spacing(2)};
  VectorField3 b(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3, d = (c + 2) % 3;
      // (curl E)_c = d_a E_d - d_d E_a
      const double v = (e.component(d)[nb.up[a]] - e.component(d)[i]) / h[a] -
                       (e.component(a)[nb.up[d]] - e.component(a)[i]) / h[d];
      b.component(c)[i] = v;
    }
  });
  return b;
}

VectorField3 curl_face(const VectorField3& b) {
  const PeriodicGrid& g = b.grid();
  const double h[3] = {g.spacing(0), g.spacing(1), g.spacing(2)};
  VectorField3 e(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3, d = (c + 2) % 3;
      const double v = (b.component(d)[i] - b.component(d)[nb.down[a]]) / h[a] -
                       (b.component(a)[i] - b.component(a)[nb.down[d]]) / h[d];
      e.component(c)[i] = v;
    }
  });
  return e;
}

ScalarField div_face(const VectorField3& b) {
  const PeriodicGrid& g = b.grid();
  ScalarField out(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += (b.component(a)[nb.up[a]] - b.component(a)[i]) / g.spacing(a);
    out[i] = s;
  });
  return out;
}

ScalarField div_edge(const VectorField3& e) {
  const PeriodicGrid& g = e.grid();
  ScalarField out(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += (e.component(a)[i] - e.component(a)[nb.down[a]]) / g.spacing(a);
    out[i] = s;
  });
  return out;
}

VectorField3 grad_node(const ScalarField& phi) {
  const PeriodicGrid& g = phi.grid();
  VectorField3 e(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    for (int a = 0; a < 3; ++a) e.component(a)[i] = (phi[nb.up[a]] - phi[i]) / g.spacing(a);
  });
  return e;
}

VectorField3 nodes_to_edges(const VectorField3& f) {
  const PeriodicGrid& g = f.grid();
  VectorField3 e(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    for (int a = 0; a < 3; ++a) e.component(a)[i] = 0.5 * (f.component(a)[i] + f.component(a)[nb.up[a]]);
  });
  return e;
}

VectorField3 edges_to_nodes(const VectorField3& e) {
  const PeriodicGrid& g = e.grid();
  VectorField3 f(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    for (int a = 0; a < 3; ++a) f.component(a)[i] = 0.5 * (e.component(a)[i] + e.component(a)[nb.down[a]]);
  });
  return f;
}

namespace {

// Applies the per-axis symbol e^{sign i k h/2} (k h/2) / sin(k h/2) to
// component a along axis a.
VectorField3 staggered_interp(const VectorField3& f, double sign) {
  const PeriodicGrid& g = f.grid();
  const Wavenumbers w(g);
  VectorField3 out(g);
  for (int a = 0; a < 3; ++a) {
    Spectrum s = fft_forward(g, f.component(a));
    const double h = g.spacing(a);
    std::size_t idx = 0;
    for (int l = 0; l < w.nz; ++l)
      for (int j = 0; j < w.ny; ++j)
        for (int i = 0; i < w.nxh; ++i, ++idx) {
          const int ia[3] = {i, j, l};
          const double kappa = w.kappa[a][ia[a]];
          if (kappa == 0.0) {
            if (w.k[a][ia[a]] != 0.0) s[idx] = 0.0;
            continue;
          }
          const double x = 0.5 * kappa * h;
          s[idx] *= std::polar(x / std::sin(x), sign * x);
        }
    fft_inverse(g, s, out.component(a));
  }
  return out;
}

}  // namespace

VectorField3 current_to_edges(const VectorField3& j) { return staggered_interp(j, 1.0); }

VectorField3 edges_to_force_nodes(const VectorField3& e) { return staggered_interp(e, -1.0); }

VectorField3 faces_to_nodes(const VectorField3& b) {
  const PeriodicGrid& g = b.grid();
  VectorField3 f(g);
  for_nodes(g, [&](std::size_t i) {
    const Neighbours nb = neighbours(g, i);
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3, d = (c + 2) % 3;
      const std::size_t ia = nb.down[a];
      const auto& bc = b.component(c);
      f.component(c)[i] = 0.25 * (bc[i] + bc[ia] + bc[nb.down[d]] + bc[neighbours(g, ia).down[d]]);
    }
  });
  return f;
}

EMFieldPair init_compatible(const ScalarField& rho0, const std::vector<EMMode>& modes, double eps_r,
                            double mu_r) {
  if (!(eps_r >= 1.0) || !(mu_r >= 1.0))
    throw ContractViolation("init_compatible: eps_r and mu_r must be >= 1");
  const PeriodicGrid& g = rho0.grid();
  EMFieldPair em{VectorField3(g), VectorField3(g), eps_r, mu_r};

  ScalarField rho = rho0;
  const double m = mean(rho);
  const double scale = max_abs(rho);
  if (std::abs(m) > 1e-12 * std::max(scale, 1e-300)) {
    log().info("init_compatible: removing mean {:.6g} of rho0 (neutralizing background)", m);
  }
  for (auto& v : rho.values()) v -= m;

  // div_edge(grad_node phi) has symbol -sum 4 sin^2(k_a h_a / 2) / h_a^2.
  Spectrum s = fft_forward(g, rho.values());
  const Wavenumbers w(g);
  std::size_t idx = 0;
  for (int l = 0; l < w.nz; ++l)
    for (int j = 0; j < w.ny; ++j)
      for (int i = 0; i < w.nxh; ++i, ++idx) {
        const double k[3] = {w.k[0][i], w.k[1][j], w.k[2][l]};
        double sigma = 0.0;
        for (int a = 0; a < 3; ++a) {
          const double sn = std::sin(0.5 * k[a] * g.spacing(a));
          sigma += 4.0 * sn * sn / (g.spacing(a) * g.spacing(a));
        }
        s[idx] = sigma > 0.0 ? -s[idx] / (eps_r * sigma) : 0.0;
      }
  ScalarField phi(g);
  fft_inverse(g, s, phi.values());
  em.E = grad_node(phi);

  for (const EMMode& mode : modes) {
    const Vec3 pol = polarization(mode.n);
    VectorField3 pot(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
      const auto c = g.coords(q);
      double arg = 0.0;
      for (int a = 0; a < 3; ++a) arg += 2.0 * std::numbers::pi * mode.n[a] * c[a] / g.n(a);
      pot.set(q, std::cos(arg) * pol);
    }
    if (mode.e_amp != 0.0) em.E = em.E + mode.e_amp * curl_face(pot);
    if (mode.b_amp != 0.0) em.B = em.B + mode.b_amp * curl_edge(pot);
  }
  return em;
}

double maxwell_cfl(const PeriodicGrid& g, double eps_r, double mu_r) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) s += 1.0 / (g.spacing(a) * g.spacing(a));
  return std::sqrt(eps_r * mu_r) / std::sqrt(s);
}

EMFieldPair step_fields(const EMFieldPair& em, const VectorField3& j, double dt) {
  require_same_grid(em.grid(), j.grid(), "step_fields");
  const double cfl = maxwell_cfl(em.grid(), em.eps_r, em.mu_r);
  if (!(dt > 0.0) || !(dt < cfl))
    throw StepRefused("step_fields: dt = " + std::to_string(dt) + " outside (0, " + std::to_string(cfl) +
                      ") (staggered leapfrog CFL bound)");
  EMFieldPair out = em;
  out.B = out.B - (0.5 * dt) * curl_edge(out.E);
  const VectorField3 drive = (1.0 / em.mu_r) * curl_face(out.B) - current_to_edges(j);
  out.E = out.E + (dt / em.eps_r) * drive;
  out.B = out.B - (0.5 * dt) * curl_edge(out.E);
  return out;
}

double em_energy_plain(const EMFieldPair& em) {
  return 0.5 * (em.eps_r * l2_inner(em.E, em.E) + l2_inner(em.B, em.B) / em.mu_r);
}

double em_energy(const EMFieldPair& em, double dt) {
  const VectorField3 c = curl_edge(em.E);
  return em_energy_plain(em) - dt * dt / (8.0 * em.mu_r) * l2_inner(c, c);
}

double div_b_residual(const EMFieldPair& em) {
  const double bmax = max_abs(em.B);
  if (bmax == 0.0) return 0.0;
  return max_abs(div_face(em.B)) * em.grid().min_spacing() / bmax;
}

double gauss_residual(const EMFieldPair& em, const ScalarField& rho) {
  const ScalarField r = em.eps_r * div_edge(em.E) - rho;
  const double n = l2_norm(rho);
  return n > 0.0 ? l2_norm(r) / n : l2_norm(r);
}

}  // namespace llgvm
