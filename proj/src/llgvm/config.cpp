#include "llgvm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include "llgvm/errors.hpp"
#include "llgvm/log.hpp"

namespace llgvm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

// Each parser returns an error text, empty on success.
std::string parse_value(const std::string& v, double& out) {
  const char* b = v.data();
  const char* e = b + v.size();
  auto r = std::from_chars(b, e, out);
  if (r.ec != std::errc() || r.ptr != e) return "expected a number, got '" + v + "'";
  if (!std::isfinite(out)) return "value must be finite";
  return "";
}

template <class I>
std::string parse_integer(const std::string& v, I& out) {
  const char* b = v.data();
  const char* e = b + v.size();
  auto r = std::from_chars(b, e, out);
  if (r.ec == std::errc::result_out_of_range) return "integer out of range: '" + v + "'";
  if (r.ec != std::errc() || r.ptr != e) return "expected an integer, got '" + v + "'";
  return "";
}

std::string parse_value(const std::string& v, bool& out) {
  if (v == "true" || v == "1") {
    out = true;
    return "";
  }
  if (v == "false" || v == "0") {
    out = false;
    return "";
  }
  return "expected true or false, got '" + v + "'";
}

std::string parse_value(const std::string& v, Vec3& out) {
  std::string t = v;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::string tok[3], extra;
  if (!(is >> tok[0] >> tok[1] >> tok[2]) || (is >> extra)) return "expected three numbers, got '" + v + "'";
  for (int a = 0; a < 3; ++a) {
    const std::string err = parse_value(tok[a], out[a]);
    if (!err.empty()) return err;
  }
  return "";
}

using Setter = std::function<std::string(RunConfig&, const std::string&)>;

template <class T>
Setter set_number(T RunConfig::*member) {
  return [member](RunConfig& c, const std::string& v) {
    if constexpr (std::is_floating_point_v<T>) {
      return parse_value(v, c.*member);
    } else {
      return parse_integer(v, c.*member);
    }
  };
}

const std::vector<std::pair<std::string, Setter>>& key_table() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"grid.n", set_number(&RunConfig::grid_n)},
      {"grid.length", set_number(&RunConfig::grid_length)},
      {"llg.alpha", set_number(&RunConfig::llg_alpha)},
      {"llg.h", set_number(&RunConfig::llg_h)},
      {"llg.dt", set_number(&RunConfig::llg_dt)},
      {"llg.stabilizer_c", set_number(&RunConfig::llg_stabilizer_c)},
      {"llg.init", [](RunConfig& c, const std::string& v) { c.llg_init = v; return std::string(); }},
      {"llg.radius", set_number(&RunConfig::llg_radius)},
      {"llg.seed", set_number(&RunConfig::llg_seed)},
      {"em.eps_r", set_number(&RunConfig::em_eps_r)},
      {"em.mu_r", set_number(&RunConfig::em_mu_r)},
      {"em.init_modes", [](RunConfig& c, const std::string& v) { c.em_init_modes = v; return std::string(); }},
      {"kinetic.n_particles", set_number(&RunConfig::kinetic_n_particles)},
      {"kinetic.seed", set_number(&RunConfig::kinetic_seed)},
      {"kinetic.f0.kind", [](RunConfig& c, const std::string& v) { c.f0.kind = v; return std::string(); }},
      {"kinetic.f0.center",
       [](RunConfig& c, const std::string& v) {
         c.f0_center_set = true;
         return parse_value(v, c.f0.center);
       }},
      {"kinetic.f0.radius", [](RunConfig& c, const std::string& v) { return parse_value(v, c.f0.radius); }},
      {"kinetic.f0.v_th", [](RunConfig& c, const std::string& v) { return parse_value(v, c.f0.v_th); }},
      {"kinetic.f0.mass", [](RunConfig& c, const std::string& v) { return parse_value(v, c.f0.mass); }},
      {"kinetic.f0.drift", [](RunConfig& c, const std::string& v) { return parse_value(v, c.f0.drift); }},
      {"mollifier.eps", set_number(&RunConfig::mollifier_eps)},
      {"run.dt", set_number(&RunConfig::run_dt)},
      {"run.n_steps", set_number(&RunConfig::run_n_steps)},
      {"run.snapshot_every", set_number(&RunConfig::run_snapshot_every)},
      {"run.output_dir",
       [](RunConfig& c, const std::string& v) { c.run_output_dir = v; return std::string(); }},
      {"run.seed",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t s = 0;
         std::string err = parse_integer(v, s);
         if (err.empty()) c.run_seed = s;
         return err;
       }},
      {"run.track_hopf", [](RunConfig& c, const std::string& v) { return parse_value(v, c.run_track_hopf); }},
  };
  return table;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

PeriodicGrid RunConfig::grid() const { return PeriodicGrid::cubic(grid_n, grid_length); }

LLCoefficients RunConfig::coefficients() const { return LLCoefficients::make(llg_alpha, llg_stabilizer_c); }

double RunConfig::mollifier_epsilon() const {
  return mollifier_eps > 0.0 ? mollifier_eps : 4.0 * grid_length / grid_n;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, setter] : key_table()) k.push_back(name);
    return k;
  }();
  return keys;
}

void validate(RunConfig& c) {
  std::vector<std::string> e;
  c.warnings.clear();
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) e.push_back(msg);
    return ok;
  };

  bool grid_ok = need(c.grid_n >= 4 && c.grid_n % 2 == 0,
                     "grid.n = " + std::to_string(c.grid_n) + ": must be even and >= 4 (the periodic grid needs an even size)");
  grid_ok &= need(c.grid_length > 0.0, "grid.length = " + fmt(c.grid_length) + ": must be > 0");
  grid_ok &= need(static_cast<double>(c.grid_n) * c.grid_n * c.grid_n <= 1 << 27, "grid.n too large (more than 2^27 nodes)");

  const bool alpha_ok = need(c.llg_alpha > 0.0, "llg.alpha = " + fmt(c.llg_alpha) + ": must be > 0");
  need(c.llg_h >= 0.0, "llg.h = " + fmt(c.llg_h) + ": must be >= 0");
  if (c.llg_h <= 0.25)
    c.warnings.push_back("llg.h = " + fmt(c.llg_h) +
                         " <= 1/4: the energy is H^2-coercive only for h > 1/4; the run proceeds without that bound");
  need(c.llg_dt >= 0.0, "llg.dt = " + fmt(c.llg_dt) + ": must be >= 0 (0 = one LLG sub-step per step)");
  bool coeff_ok = alpha_ok;
  if (alpha_ok && c.llg_stabilizer_c != 0.0) {
    const double lambda = c.llg_alpha / (1.0 + c.llg_alpha * c.llg_alpha);
    coeff_ok = need(c.llg_stabilizer_c >= lambda, "llg.stabilizer_c = " + fmt(c.llg_stabilizer_c) +
                                                      ": must be >= lambda = alpha/(1+alpha^2) = " + fmt(lambda) +
                                                      " (or 0 for the default 1/lambda)");
  }
  static const std::set<std::string> inits = {"uniform", "skyrmion_tube", "hopfion", "random_smooth"};
  need(inits.count(c.llg_init) == 1,
       "llg.init = '" + c.llg_init + "': expected uniform, skyrmion_tube, hopfion or random_smooth");
  need(c.llg_radius > 0.0, "llg.radius = " + fmt(c.llg_radius) + ": must be > 0");

  need(c.em_eps_r >= 1.0, "em.eps_r = " + fmt(c.em_eps_r) + ": must be >= 1");
  need(c.em_mu_r >= 1.0, "em.mu_r = " + fmt(c.em_mu_r) + ": must be >= 1");
  try {
    parse_em_modes(c.em_init_modes);
  } catch (const ConfigError& ce) {
    for (const auto& p : ce.problems()) e.push_back(p);
  }

  need(c.kinetic_n_particles <= (std::size_t(1) << 28), "kinetic.n_particles too large (more than 2^28)");
  static const std::set<std::string> kinds = {"bump_maxwellian", "uniform_maxwellian", "two_stream", "delta"};
  need(kinds.count(c.f0.kind) == 1, "kinetic.f0.kind = '" + c.f0.kind +
                                        "': expected bump_maxwellian, uniform_maxwellian, two_stream or delta");
  need(c.f0.radius > 0.0, "kinetic.f0.radius = " + fmt(c.f0.radius) + ": must be > 0");
  need(c.f0.v_th >= 0.0, "kinetic.f0.v_th = " + fmt(c.f0.v_th) + ": must be >= 0");
  need(c.f0.mass > 0.0, "kinetic.f0.mass = " + fmt(c.f0.mass) + ": must be > 0");
  if (grid_ok && !c.f0_center_set) c.f0.center = {0.5 * c.grid_length, 0.5 * c.grid_length, 0.5 * c.grid_length};

  if (grid_ok)
    need(c.mollifier_eps >= 0.0 && c.mollifier_epsilon() < 0.5 * c.grid_length,
         "mollifier.eps = " + fmt(c.mollifier_eps) + ": the width (" + fmt(c.mollifier_epsilon()) +
             " with 0 meaning 4h) must lie in (0, L/2)");

  const bool dt_ok = need(c.run_dt > 0.0, "run.dt = " + fmt(c.run_dt) + ": must be > 0");
  need(c.run_n_steps >= 0, "run.n_steps = " + std::to_string(c.run_n_steps) + ": must be >= 0");
  need(c.run_snapshot_every >= 0, "run.snapshot_every = " + std::to_string(c.run_snapshot_every) + ": must be >= 0");
  need(!c.run_output_dir.empty(), "run.output_dir must not be empty");

  // Step-size bounds, computed from the grid symbols only.
  if (grid_ok && coeff_ok && dt_ok && c.llg_dt >= 0.0 && c.llg_h >= 0.0 && c.em_eps_r >= 1.0 && c.em_mu_r >= 1.0) {
    const PeriodicGrid g = c.grid();
    const double cfl = maxwell_cfl(g, c.em_eps_r, c.em_mu_r);
    need(c.run_dt < cfl, "run.dt = " + fmt(c.run_dt) + ": must be below the Maxwell CFL bound " + fmt(cfl));
    const int sub = c.llg_dt > 0.0 ? std::max(1, int(std::ceil(c.run_dt / c.llg_dt - 1e-12))) : 1;
    const double bound = c.coefficients().dt_max(g, c.llg_h);
    need(c.run_dt / sub <= bound, "LLG sub-step " + fmt(c.run_dt / sub) + " (run.dt / ceil(run.dt / llg.dt)) exceeds dt_max = " +
                                      fmt(bound) + " for this grid, h and stabilizer");
  }

  for (const auto& w : c.warnings) log().warn("{}", w);
  if (!e.empty()) throw ConfigError(e);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::vector<std::string> errors;
  std::map<std::string, int> seen;
  std::map<std::string, Setter> setters(key_table().begin(), key_table().end());
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    auto it = setters.find(key);
    if (it == setters.end()) {
      errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (seen.count(key)) {
      errors.push_back(where + "duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")");
      continue;
    }
    seen[key] = lineno;
    const std::string err = it->second(c, value);
    if (!err.empty()) errors.push_back(where + key + ": " + err);
  }
  if (!errors.empty()) {
    // Range checks on the keys that did parse, so the report is complete.
    try {
      validate(c);
    } catch (const ConfigError& ce) {
      for (const auto& p : ce.problems()) errors.push_back(p);
    }
    throw ConfigError(errors);
  }
  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({path + ": cannot open config file"});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string default_config_text() {
  const RunConfig c;
  std::ostringstream os;
  os << "grid.n = " << c.grid_n << "\n"
     << "grid.length = " << c.grid_length << "\n"
     << "llg.alpha = " << c.llg_alpha << "\n"
     << "llg.h = " << c.llg_h << "\n"
     << "llg.dt = " << c.llg_dt << "\n"
     << "llg.stabilizer_c = " << c.llg_stabilizer_c << "\n"
     << "llg.init = " << c.llg_init << "\n"
     << "llg.radius = " << c.llg_radius << "\n"
     << "llg.seed = " << c.llg_seed << "\n"
     << "em.eps_r = " << c.em_eps_r << "\n"
     << "em.mu_r = " << c.em_mu_r << "\n"
     << "em.init_modes =\n"
     << "kinetic.n_particles = " << c.kinetic_n_particles << "\n"
     << "kinetic.seed = " << c.kinetic_seed << "\n"
     << "kinetic.f0.kind = " << c.f0.kind << "\n"
     << "kinetic.f0.center = 8 8 8\n"
     << "kinetic.f0.radius = " << c.f0.radius << "\n"
     << "kinetic.f0.v_th = " << c.f0.v_th << "\n"
     << "kinetic.f0.mass = " << c.f0.mass << "\n"
     << "kinetic.f0.drift = 0 0 0\n"
     << "mollifier.eps = " << c.mollifier_eps << "\n"
     << "run.dt = " << c.run_dt << "\n"
     << "run.n_steps = " << c.run_n_steps << "\n"
     << "run.snapshot_every = " << c.run_snapshot_every << "\n"
     << "run.output_dir = " << c.run_output_dir << "\n"
     << "run.track_hopf = false\n"
     << "# run.seed = 1  (when set, replaces llg.seed and kinetic.seed)\n";
  return os.str();
}

}  // namespace llgvm
