#include "llgvm/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "llgvm/errors.hpp"
#include "llgvm/log.hpp"
#include "llgvm/parallel.hpp"

namespace llgvm {

namespace {

constexpr double kTruncation = 6.0;

int wrap_int(int i, int n) noexcept {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

struct CellWeights {
  std::size_t base[3];
  double frac[3];
};

CellWeights locate(const PeriodicGrid& g, const Vec3& x) noexcept {
  CellWeights c{};
  for (int a = 0; a < 3; ++a) {
    const double s = x[a] / g.spacing(a);
    const double fl = std::floor(s);
    c.base[a] = static_cast<std::size_t>(wrap_int(static_cast<int>(fl), g.n(a)));
    c.frac[a] = s - fl;
  }
  return c;
}

Vec3 maxwellian(std::mt19937_64& rng, double v_th) {
  std::normal_distribution<double> nd(0.0, 1.0);
  for (;;) {
    const Vec3 u{nd(rng), nd(rng), nd(rng)};
    if (norm(u) <= kTruncation) return v_th * u;
  }
}

// Cell-sorted order of the particles (stable counting sort).
struct Buckets {
  std::vector<std::size_t> start;  // size cells + 1
  std::vector<std::size_t> order;
  std::vector<CellWeights> where;
};

Buckets bucket(const ParticleEnsemble& p, const PeriodicGrid& g) {
  Buckets b;
  const std::size_t n = p.count();
  b.where.resize(n);
  parallel::for_each_index(n, [&](std::size_t q) { b.where[q] = locate(g, p.x[q]); });
  b.start.assign(g.size() + 1, 0);
  for (std::size_t q = 0; q < n; ++q) {
    const auto& c = b.where[q].base;
    ++b.start[g.index(int(c[0]), int(c[1]), int(c[2])) + 1];
  }
  std::partial_sum(b.start.begin(), b.start.end(), b.start.begin());
  std::vector<std::size_t> fill(b.start.begin(), b.start.end() - 1);
  b.order.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto& c = b.where[q].base;
    b.order[fill[g.index(int(c[0]), int(c[1]), int(c[2]))]++] = q;
  }
  return b;
}

// Deposits value(q) (nc components) with CIC weights, node-parallel.
template <int NC, class Value>
std::array<std::vector<double>, NC> deposit_generic(const ParticleEnsemble& p, const PeriodicGrid& g,
                                                    Value value) {
  const Buckets b = bucket(p, g);
  std::array<std::vector<double>, NC> out;
  for (auto& o : out) o.assign(g.size(), 0.0);
  const double inv_h3 = 1.0 / g.cell_volume();
  parallel::for_each_index(g.size(), [&](std::size_t node) {
    const auto gc = g.coords(node);
    double acc[NC] = {};
    for (int a = 0; a < 8; ++a) {
      const int off[3] = {a & 1, (a >> 1) & 1, (a >> 2) & 1};
      const std::size_t cell = g.wrapped_index(gc[0] - off[0], gc[1] - off[1], gc[2] - off[2]);
      for (std::size_t s = b.start[cell]; s < b.start[cell + 1]; ++s) {
        const std::size_t q = b.order[s];
        const auto& f = b.where[q].frac;
        const double wt = (off[0] ? f[0] : 1 - f[0]) * (off[1] ? f[1] : 1 - f[1]) * (off[2] ? f[2] : 1 - f[2]);
        const auto val = value(q);
        for (int c = 0; c < NC; ++c) acc[c] += wt * val[c];
      }
    }
    for (int c = 0; c < NC; ++c) out[c][node] = acc[c] * inv_h3;
  });
  return out;
}

}  // namespace

double analytic_m2(const F0Spec& s) {
  return s.mass * (3.0 * s.v_th * s.v_th + dot(s.drift, s.drift));
}

Vec3 wrap_position(const PeriodicGrid& g, const Vec3& x) noexcept {
  Vec3 r;
  for (int a = 0; a < 3; ++a) {
    const double L = g.length(a);
    double y = std::fmod(x[a], L);
    if (y < 0) y += L;
    if (y >= L) y = 0.0;  // fmod of a value just below 0 can round up to L
    r[a] = y;
  }
  return r;
}

ParticleEnsemble sample_initial(const F0Spec& spec, std::size_t n, std::uint64_t seed,
                                const PeriodicGrid& g) {
  static const char* kinds[] = {"bump_maxwellian", "uniform_maxwellian", "two_stream", "delta"};
  if (std::find(std::begin(kinds), std::end(kinds), spec.kind) == std::end(kinds))
    throw ConfigError({"kinetic.f0.kind: unknown distribution '" + spec.kind +
                       "' (expected bump_maxwellian, uniform_maxwellian, two_stream or delta)"});
  if (n == 0) throw ContractViolation("sample_initial: n_particles must be >= 1");
  if (!(spec.mass >= 0) || !(spec.v_th >= 0) || !(spec.radius > 0))
    throw ContractViolation("sample_initial: mass, v_th must be >= 0 and radius > 0");

  ParticleEnsemble p;
  p.x.resize(n);
  p.v.resize(n);
  p.w.assign(n, spec.mass / static_cast<double>(n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (std::size_t q = 0; q < n; ++q) {
    if (spec.kind == "delta") {
      p.x[q] = wrap_position(g, spec.center);
      p.v[q] = spec.drift;
    } else if (spec.kind == "bump_maxwellian") {
      const Vec3 d{nd(rng), nd(rng), nd(rng)};
      p.x[q] = wrap_position(g, spec.center + spec.radius * d);
      p.v[q] = spec.drift + maxwellian(rng, spec.v_th);
    } else {
      const Vec3 u{ud(rng), ud(rng), ud(rng)};
      p.x[q] = wrap_position(g, {u[0] * g.length(0), u[1] * g.length(1), u[2] * g.length(2)});
      Vec3 v = maxwellian(rng, spec.v_th);
      if (spec.kind == "two_stream")
        v = v + ((q % 2 == 0) ? 1.0 : -1.0) * spec.drift;
      else
        v = v + spec.drift;
      p.v[q] = v;
    }
  }
  return p;
}

Vec3 gather(const VectorField3& f, const Vec3& x) noexcept {
  const PeriodicGrid& g = f.grid();
  const CellWeights c = locate(g, x);
  Vec3 r{0.0, 0.0, 0.0};
  for (int a = 0; a < 8; ++a) {
    const int off[3] = {a & 1, (a >> 1) & 1, (a >> 2) & 1};
    const double wt = (off[0] ? c.frac[0] : 1 - c.frac[0]) * (off[1] ? c.frac[1] : 1 - c.frac[1]) *
                      (off[2] ? c.frac[2] : 1 - c.frac[2]);
    const std::size_t idx =
        g.wrapped_index(int(c.base[0]) + off[0], int(c.base[1]) + off[1], int(c.base[2]) + off[2]);
    for (int k = 0; k < 3; ++k) r[k] += wt * f.component(k)[idx];
  }
  return r;
}

std::vector<Vec3> gather(const VectorField3& f, const std::vector<Vec3>& x) {
  std::vector<Vec3> out(x.size());
  parallel::for_each_index(x.size(), [&](std::size_t q) { out[q] = gather(f, x[q]); });
  return out;
}

ParticleEnsemble lorentz_push(const ParticleEnsemble& p, const VectorField3& E, const VectorField3& B,
                              double dt) {
  require_same_grid(E.grid(), B.grid(), "lorentz_push");
  if (!(dt > 0)) throw ContractViolation("lorentz_push: dt must be > 0");
  const PeriodicGrid& g = E.grid();
  constexpr double q = -1.0;
  ParticleEnsemble out = p;
  const std::size_t n = p.count();
  std::vector<char> bad(n, 0);
  std::vector<double> bmax(n, 0.0);
  parallel::for_each_index(n, [&](std::size_t i) {
    const Vec3 xh = p.x[i] + (0.5 * dt) * p.v[i];
    const Vec3 e = gather(E, xh);
    const Vec3 b = gather(B, xh);
    if (!std::isfinite(e[0] + e[1] + e[2] + b[0] + b[1] + b[2])) {
      bad[i] = 1;
      return;
    }
    Vec3 v = p.v[i] + (0.5 * q * dt) * e;
    // dv/dt = q v x B is a rotation about -q B at rate |B|.
    const double bn = norm(b);
    bmax[i] = bn;
    if (bn > 0.0) {
      const Vec3 axis = (-q / bn) * b;
      const double th = bn * dt, c = std::cos(th), s = std::sin(th);
      v = c * v + s * cross(axis, v) + ((1 - c) * dot(axis, v)) * axis;
    }
    v = v + (0.5 * q * dt) * e;
    out.v[i] = v;
    out.x[i] = wrap_position(g, xh + (0.5 * dt) * v);
  });
  for (std::size_t i = 0; i < n; ++i)
    if (bad[i]) throw BlowUp("lorentz_push: non-finite field gathered at particle " + std::to_string(i));
  const double bm = n ? *std::max_element(bmax.begin(), bmax.end()) : 0.0;
  if (dt * bm > 1.0)
    log().warn("lorentz_push: dt * max|B| = {:.3g} > 1, gyration is under-resolved", dt * bm);
  return out;
}

Deposit deposit(const ParticleEnsemble& p, const PeriodicGrid& g) {
  auto rho = deposit_generic<1>(p, g, [&](std::size_t q) { return std::array<double, 1>{-p.w[q]}; });
  auto j = deposit_generic<3>(p, g, [&](std::size_t q) {
    const double w = -p.w[q];
    return std::array<double, 3>{w * p.v[q][0], w * p.v[q][1], w * p.v[q][2]};
  });
  Deposit d{ScalarField(g), VectorField3(g)};
  std::copy(rho[0].begin(), rho[0].end(), d.rho.values().begin());
  for (int c = 0; c < 3; ++c) std::copy(j[c].begin(), j[c].end(), d.j.component(c).begin());
  return d;
}

ScalarField moment_density(const ParticleEnsemble& p, const PeriodicGrid& g, double k) {
  auto m = deposit_generic<1>(p, g, [&](std::size_t q) {
    return std::array<double, 1>{p.w[q] * std::pow(norm(p.v[q]), k)};
  });
  ScalarField out(g);
  std::copy(m[0].begin(), m[0].end(), out.values().begin());
  return out;
}

double total_moment(const ParticleEnsemble& p, double k) {
  // Neumaier summation: the ensemble mass is checked to a few ulps.
  double s = 0.0, c = 0.0;
  for (std::size_t q = 0; q < p.count(); ++q) {
    const double x = p.w[q] * (k == 0.0 ? 1.0 : std::pow(norm(p.v[q]), k));
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

double moment_ell(double k, double kprime, double p) {
  if (kprime > k || kprime < 0) throw ContractViolation("moment_ell: need 0 <= k' <= k");
  if (!(p >= 1)) throw ContractViolation("moment_ell: need p >= 1");
  const double three_over_q = std::isinf(p) ? 3.0 : 3.0 * (1.0 - 1.0 / p);
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return (k + three_over_q) / (kprime + three_over_q + (k - kprime) * inv_p);
}

namespace {

// ||f||_{L^p} of the histogram on (grid cell) x (velocity cube of side dv).
double histogram_lp(const ParticleEnsemble& p, const PeriodicGrid& g, double pexp, double dv) {
  using Key = std::tuple<std::size_t, long, long, long>;
  std::map<Key, double> bins;
  for (std::size_t q = 0; q < p.count(); ++q) {
    const CellWeights c = locate(g, p.x[q]);
    const Key key{g.index(int(c.base[0]), int(c.base[1]), int(c.base[2])),
                  std::lround(std::floor(p.v[q][0] / dv)), std::lround(std::floor(p.v[q][1] / dv)),
                  std::lround(std::floor(p.v[q][2] / dv))};
    bins[key] += p.w[q];
  }
  const double vol = g.cell_volume() * dv * dv * dv;
  double s = 0.0;
  for (const auto& [key, w] : bins) s += std::pow(w / vol, pexp) * vol;
  return std::pow(s, 1.0 / pexp);
}

}  // namespace

MomentReport moment_report(const ParticleEnsemble& p, const PeriodicGrid& g,
                           const std::vector<std::pair<double, double>>& k_list, const MomentParams& params) {
  MomentReport r;
  r.M0 = total_moment(p, 0.0);
  r.M2 = total_moment(p, 2.0);
  const double f_lp = histogram_lp(p, g, params.p, params.velocity_bin);
  for (const auto& [k, kp] : k_list) {
    if (kp > k || kp < 0) throw ContractViolation("moment_report: need 0 <= k' <= k");
    MomentEstimate e;
    e.k = k;
    e.kprime = kp;
    e.p = params.p;
    e.ell = moment_ell(k, kp, params.p);
    const double tq = 3.0 * (1.0 - 1.0 / params.p);
    e.exponent_a = (k - kp) / (k + tq);
    e.exponent_b = (kp + tq) / (k + tq);
    const ScalarField m = moment_density(p, g, kp);
    double s = 0.0;
    for (double v : m.values()) s += std::pow(std::abs(v), e.ell);
    e.lhs = std::pow(s * g.cell_volume(), 1.0 / e.ell);
    e.f_lp = f_lp;
    e.m_k = total_moment(p, k);
    e.rhs = std::pow(f_lp, e.exponent_a) * std::pow(e.m_k, e.exponent_b);
    r.moment_fields.emplace_back(kp, m);
    r.lp_estimates.push_back(e);
  }
  return r;
}

double kinetic_energy(const ParticleEnsemble& p) {
  double s = 0.0;
  for (std::size_t q = 0; q < p.count(); ++q) s += p.w[q] * dot(p.v[q], p.v[q]);
  return 0.5 * s;
}

}  // namespace llgvm
