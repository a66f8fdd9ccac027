#include "twist/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "twist/errors.hpp"
#include "twist/units.hpp"

namespace twist {

using nlohmann::json;

namespace {

class Reader {
 public:
  std::vector<std::string> errors;

  void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key())) errors.push_back(path + "." + it.key() + ": unknown field");
  }

  const json* object(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& v = parent.at(key);
    if (!v.is_object()) {
      errors.push_back(path + key + ": expected an object");
      return nullptr;
    }
    return &v;
  }

  bool number(const json& obj, const std::string& key, const std::string& path, double& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      errors.push_back(path + "." + key + ": expected a number");
      return false;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) {
      errors.push_back(path + "." + key + ": must be finite");
      return false;
    }
    return true;
  }

  bool integer(const json& obj, const std::string& key, const std::string& path, int& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      errors.push_back(path + "." + key + ": expected an integer");
      return false;
    }
    out = v.get<int>();
    return true;
  }

  bool list(const json& obj, const std::string& key, const std::string& path,
            std::vector<double>& out) {
    if (!obj.contains(key)) return false;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      errors.push_back(path + "." + key + ": expected an array of numbers");
      return false;
    }
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number()) {
        errors.push_back(path + "." + key + ": expected an array of numbers");
        return false;
      }
      out.push_back(e.get<double>());
    }
    return true;
  }

  void require(bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  }
};

void read_pulse(Reader& r, const json& j, PulseParams& p) {
  r.check_keys(j, "pulse", {"intensity_Wcm2", "E_star", "omega", "a", "phi", "support_tol", "table_cells"});
  double I = 0;
  const bool has_I = r.number(j, "intensity_Wcm2", "pulse", I);
  const bool has_E = r.number(j, "E_star", "pulse", p.E_star);
  if (has_I && has_E) r.errors.push_back("pulse: give either intensity_Wcm2 or E_star, not both");
  if (has_I) {
    if (I < 0)
      r.errors.push_back("pulse.intensity_Wcm2: must be >= 0");
    else
      p.E_star = units::intensity_to_field(I);
  }
  if (!has_I && !has_E) r.errors.push_back("pulse: missing intensity_Wcm2 or E_star");
  if (has_E && p.E_star < 0) r.errors.push_back("pulse.E_star: must be >= 0");
  if (!r.number(j, "omega", "pulse", p.omega)) r.errors.push_back("pulse.omega: missing");
  else r.require(p.omega > 0, "pulse.omega: must be positive");
  if (!r.number(j, "a", "pulse", p.a)) r.errors.push_back("pulse.a: missing");
  else r.require(p.a > 0, "pulse.a: must be positive");
  r.number(j, "phi", "pulse", p.phi);
  if (r.number(j, "support_tol", "pulse", p.support_tol))
    r.require(p.support_tol > 0 && p.support_tol < 1, "pulse.support_tol: must lie in (0, 1)");
  if (r.integer(j, "table_cells", "pulse", p.table_cells))
    r.require(p.table_cells >= 64, "pulse.table_cells: must be at least 64");
}

void read_beam(Reader& r, const json& j, BeamSpec& b) {
  r.check_keys(j, "beam", {"kind", "l", "s", "m", "mu", "p_par", "p_perp", "p", "E_kin_keV",
                           "theta0", "theta0_deg", "sigma"});
  std::string kind = "bessel";
  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) r.errors.push_back("beam.kind: expected \"bessel\" or \"rotated\"");
    else kind = j.at("kind").get<std::string>();
  }
  auto half = [&](const char* key, int& out) {
    double v;
    if (!r.number(j, key, "beam", v)) {
      r.errors.push_back(std::string("beam.") + key + ": missing");
      return;
    }
    if (std::abs(std::abs(v) - 0.5) > 1e-12)
      r.errors.push_back(std::string("beam.") + key + ": must be +0.5 or -0.5");
    else
      out = v > 0 ? 1 : -1;
  };
  if (kind == "bessel") {
    b.kind = BeamSpec::Kind::Bessel;
    if (!r.integer(j, "l", "beam", b.l)) r.errors.push_back("beam.l: missing integer");
    half("s", b.s);
    for (const char* k : {"m", "mu"})
      if (j.contains(k)) r.errors.push_back(std::string("beam.") + k + ": only for rotated beams");
  } else if (kind == "rotated") {
    b.kind = BeamSpec::Kind::Rotated;
    double m;
    if (!r.number(j, "m", "beam", m)) {
      r.errors.push_back("beam.m: missing");
    } else {
      const double twice = 2 * m;
      if (std::abs(twice - std::round(twice)) > 1e-12 || static_cast<long>(std::round(twice)) % 2 == 0)
        r.errors.push_back("beam.m: must be half-odd-integer");
      else
        b.m2 = static_cast<int>(std::round(twice));
    }
    half("mu", b.mu);
    for (const char* k : {"l", "s"})
      if (j.contains(k)) r.errors.push_back(std::string("beam.") + k + ": only for bessel beams");
  } else {
    r.errors.push_back("beam.kind: expected \"bessel\" or \"rotated\", got \"" + kind + "\"");
  }

  double p_par = 0, p_perp = 0, p = 0, ek = 0, th = 0;
  const bool has_comp = r.number(j, "p_par", "beam", p_par) | r.number(j, "p_perp", "beam", p_perp);
  const bool has_p = r.number(j, "p", "beam", p);
  const bool has_E = r.number(j, "E_kin_keV", "beam", ek);
  bool has_th = r.number(j, "theta0", "beam", th);
  double thd;
  if (r.number(j, "theta0_deg", "beam", thd)) {
    if (has_th) r.errors.push_back("beam: give either theta0 or theta0_deg");
    th = thd * units::pi / 180;
    has_th = true;
  }
  if (has_comp) {
    if (has_p || has_E || has_th)
      r.errors.push_back("beam: give (p_par, p_perp) or (|p| or E_kin_keV, theta0), not both");
    r.require(j.contains("p_par") && j.contains("p_perp"), "beam: p_par and p_perp go together");
    b.p_par = p_par;
    b.p_perp = p_perp;
  } else {
    if (has_p && has_E) r.errors.push_back("beam: give either p or E_kin_keV");
    if (has_E) {
      if (ek > 0) p = units::kinetic_energy_to_momentum(ek);
      else r.errors.push_back("beam.E_kin_keV: must be positive");
    } else if (!has_p) {
      r.errors.push_back("beam: missing momentum (p_par/p_perp, p, or E_kin_keV)");
    } else if (!(p > 0)) {
      r.errors.push_back("beam.p: must be positive");
    }
    if (!has_th) r.errors.push_back("beam.theta0: missing (theta0 or theta0_deg)");
    else r.require(th > 0 && th < units::pi, "beam.theta0: must lie in (0, pi)");
    b.p_par = p * std::cos(th);
    b.p_perp = p * std::sin(th);
  }
  r.require(!has_comp || p_perp > 0, "beam.p_perp: must be positive");
  if (r.number(j, "sigma", "beam", b.sigma)) r.require(b.sigma > 0, "beam.sigma: must be positive");
}

void read_numerics(Reader& r, const json& j, NumericsConfig& n) {
  r.check_keys(j, "numerics", {"L", "margin", "span", "sigmas", "n_p", "n_phi_slices", "n_phi_momentum",
                               "min_panels", "samples_per_period", "box_points", "radial_points",
                               "radial_max"});
  if (r.number(j, "L", "numerics", n.L)) r.require(n.L >= 0, "numerics.L: must be >= 0 (0: default)");
  if (r.number(j, "margin", "numerics", n.margin)) r.require(n.margin >= 0, "numerics.margin: must be >= 0");
  if (r.number(j, "span", "numerics", n.span)) r.require(n.span >= 2, "numerics.span: must be >= 2");
  if (r.number(j, "sigmas", "numerics", n.sigmas)) r.require(n.sigmas > 0, "numerics.sigmas: must be positive");
  if (r.integer(j, "n_p", "numerics", n.n_p)) r.require(n.n_p == 0 || n.n_p >= 9, "numerics.n_p: 0 or at least 9");
  if (r.integer(j, "n_phi_slices", "numerics", n.n_phi_slices))
    r.require(n.n_phi_slices >= 8 && n.n_phi_slices % 4 == 0, "numerics.n_phi_slices: multiple of 4, at least 8");
  if (r.integer(j, "n_phi_momentum", "numerics", n.n_phi_momentum))
    r.require(n.n_phi_momentum >= 8 && (n.n_phi_momentum & (n.n_phi_momentum - 1)) == 0,
              "numerics.n_phi_momentum: power of two, at least 8");
  if (r.integer(j, "min_panels", "numerics", n.min_panels)) r.require(n.min_panels >= 1, "numerics.min_panels: must be >= 1");
  if (r.integer(j, "samples_per_period", "numerics", n.samples_per_period))
    r.require(n.samples_per_period >= 4, "numerics.samples_per_period: must be >= 4");
  if (r.integer(j, "box_points", "numerics", n.box_points)) r.require(n.box_points >= 2, "numerics.box_points: must be >= 2");
  if (r.integer(j, "radial_points", "numerics", n.radial_points))
    r.require(n.radial_points >= 2, "numerics.radial_points: must be >= 2");
  if (r.number(j, "radial_max", "numerics", n.radial_max))
    r.require(n.radial_max >= 0, "numerics.radial_max: must be >= 0 (0: default)");
}

void read_outputs(Reader& r, const json& j, OutputConfig& o) {
  r.check_keys(j, "outputs", {"snapshot_fractions", "cep_phases", "classical_phi"});
  if (r.list(j, "snapshot_fractions", "outputs", o.snapshot_fractions)) {
    r.require(!o.snapshot_fractions.empty(), "outputs.snapshot_fractions: must not be empty");
    for (double f : o.snapshot_fractions)
      if (f < 0 || f > 1) {
        r.errors.push_back("outputs.snapshot_fractions: entries must lie in [0, 1]");
        break;
      }
  }
  r.list(j, "cep_phases", "outputs", o.cep_phases);
  r.list(j, "classical_phi", "outputs", o.classical_phi);
}

}  // namespace

json Scenario::echo() const {
  json j;
  j["name"] = name;
  j["pulse"] = {{"E_star", pulse.E_star}, {"omega", pulse.omega}, {"a", pulse.a}, {"phi", pulse.phi},
                {"support_tol", pulse.support_tol}, {"table_cells", pulse.table_cells}};
  json b = {{"p_par", beam.p_par}, {"p_perp", beam.p_perp}, {"sigma", beam.sigma}};
  if (beam.kind == BeamSpec::Kind::Bessel) {
    b["kind"] = "bessel";
    b["l"] = beam.l;
    b["s"] = 0.5 * beam.s;
  } else {
    b["kind"] = "rotated";
    b["m"] = 0.5 * beam.m2;
    b["mu"] = 0.5 * beam.mu;
  }
  j["beam"] = b;
  const auto& n = numerics;
  j["numerics"] = {{"L", n.L}, {"margin", n.margin}, {"span", n.span}, {"sigmas", n.sigmas},
                   {"n_p", n.n_p}, {"n_phi_slices", n.n_phi_slices},
                   {"n_phi_momentum", n.n_phi_momentum}, {"min_panels", n.min_panels},
                   {"samples_per_period", n.samples_per_period}, {"box_points", n.box_points},
                   {"radial_points", n.radial_points}, {"radial_max", n.radial_max}};
  j["outputs"] = {{"snapshot_fractions", outputs.snapshot_fractions},
                  {"cep_phases", outputs.cep_phases},
                  {"classical_phi", outputs.classical_phi}};
  return j;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Scenario::hash() const { return fnv1a_hex(echo().dump()); }

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  Reader r;
  Scenario s;
  r.check_keys(j, "config", {"name", "pulse", "beam", "numerics", "outputs"});
  if (j.contains("name")) {
    if (j.at("name").is_string()) s.name = j.at("name").get<std::string>();
    else r.errors.push_back("config.name: expected a string");
  }
  if (const json* p = r.object(j, "pulse", "config.")) read_pulse(r, *p, s.pulse);
  else if (!j.contains("pulse")) r.errors.push_back("config.pulse: missing");
  if (const json* b = r.object(j, "beam", "config.")) read_beam(r, *b, s.beam);
  else if (!j.contains("beam")) r.errors.push_back("config.beam: missing");
  if (const json* n = r.object(j, "numerics", "config.")) read_numerics(r, *n, s.numerics);
  if (const json* o = r.object(j, "outputs", "config.")) read_outputs(r, *o, s.outputs);
  if (!r.errors.empty()) {
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& e : r.errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_scenario(j);
}

}  // namespace twist
