#include "ghostpol/objects.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

namespace ghostpol {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSymmetryOrder = 24;

std::string field(std::size_t index, std::string_view name) {
  return "objects[" + std::to_string(index) + "]." + std::string(name);
}

double require_number(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(path + ": missing required field");
  if (!it->is_number()) throw Error(path + ": expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw Error(path + ": value must be finite");
  return v;
}

double optional_number(const json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  return require_number(obj, key, path);
}

cplx parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(path + ": complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

void check_unit_interval(double v, const std::string& path) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(path + ": value " + std::to_string(v) + " outside [0, 1]");
}

}  // namespace

ObjectSpec ObjectSpec::retarder(std::string name, double phi, double t_h, double t_v) {
  ObjectSpec s;
  s.name = std::move(name);
  s.kind = ObjectKind::RetarderDiattenuator;
  s.phi = phi;
  s.t_h = t_h;
  s.t_v = t_v;
  s.jones = JonesMatrix::diagonal(t_h, std::polar(t_v, phi));
  return s;
}

ObjectSpec ObjectSpec::explicit_jones(std::string name, const JonesMatrix& j) {
  ObjectSpec s;
  s.name = std::move(name);
  s.kind = ObjectKind::JonesExplicit;
  s.phi = 0.0;
  s.t_h = s.t_v = 1.0;
  s.jones = j;
  return s;
}

void validate(const ObjectSpec& spec) {
  if (spec.name.empty()) throw Error("object name must be non-empty");
  if (spec.kind == ObjectKind::RetarderDiattenuator) {
    if (!std::isfinite(spec.phi)) throw Error(spec.name + ".phi_rad: value must be finite");
    check_unit_interval(spec.t_h, spec.name + ".t_h");
    check_unit_interval(spec.t_v, spec.name + ".t_v");
  } else {
    if (!spec.jones.is_finite()) throw Error(spec.name + ".jones: entries must be finite");
    if (svd2(spec.jones).sigma1 > 1.0 + 1e-12) throw Error(spec.name + ".jones: matrix is not passive (sigma1 > 1)");
  }
}

void validate(const ObjectSet& set) {
  if (set.objects.empty()) throw Error("object set must contain at least one object");
  if (!(set.theta_period > 0.0 && set.theta_period <= kPi + 1e-12))
    throw Error("theta_period_rad: value must lie in (0, pi]");
  std::set<std::string> seen;
  for (const ObjectSpec& o : set.objects) {
    validate(o);
    if (!seen.insert(o.name).second) throw Error("duplicate object name \"" + o.name + "\"");
  }
}

JonesMatrix build_jones(const ObjectSpec& spec, double theta) {
  if (spec.kind == ObjectKind::RetarderDiattenuator) {
    return rotate(JonesMatrix::diagonal(spec.t_h, std::polar(spec.t_v, spec.phi)), theta);
  }
  return rotate(spec.jones, theta);
}

ObjectSpec object_a() { return ObjectSpec::retarder("a", kPi / 2.0); }
ObjectSpec object_b() { return ObjectSpec::retarder("b", kPi / 2.0, 1.0, std::exp(-0.7)); }
ObjectSpec object_c() { return ObjectSpec::retarder("c", 0.0, 1.0, 0.0); }

std::vector<double> default_retarder_phases() {
  std::vector<double> out;
  for (int k = 0; k < 6; ++k) out.push_back(k * kPi / 3.0);
  return out;
}

ObjectSet preset_set(std::string_view name, std::span<const double> phases) {
  ObjectSet set;
  if (name == "paper-abc") {
    set.objects = {object_a(), object_b(), object_c()};
    set.theta_period = kPi;
    return set;
  }
  if (name == "retarder-sweep") {
    std::vector<double> phis(phases.begin(), phases.end());
    if (phis.empty()) phis = default_retarder_phases();
    for (std::size_t i = 0; i < phis.size(); ++i)
      set.objects.push_back(ObjectSpec::retarder("phi" + std::to_string(i), phis[i]));
    set.theta_period = kPi;
    set.fixed_orientation = true;
    validate(set);
    return set;
  }
  throw Error("unknown object-set preset \"" + std::string(name) + "\"; available presets: paper-abc, retarder-sweep");
}

double rotation_period(const ObjectSpec& spec) {
  const JonesMatrix j = build_jones(spec, 0.0);
  constexpr double tol = 1e-10;
  // Commuting with two incommensurate rotations means commuting with all of them.
  if (frobenius_distance(rotate(j, 1.0), j) < tol && frobenius_distance(rotate(j, 0.3), j) < tol) return 0.0;
  for (int k = kMaxSymmetryOrder; k >= 1; --k) {
    const double p = kPi / k;
    if (frobenius_distance(rotate(j, p), j) < tol) return p;
  }
  return kPi;
}

ObjectSet parse_object_set(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("object-set document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("object-set document must be a JSON object");

  ObjectSet set;
  set.theta_period = optional_number(doc, "theta_period_rad", "theta_period_rad", kPi);
  if (doc.contains("fixed_orientation")) {
    if (!doc["fixed_orientation"].is_boolean()) throw Error("fixed_orientation: expected a boolean");
    set.fixed_orientation = doc["fixed_orientation"].get<bool>();
  }
  if (!doc.contains("objects") || !doc["objects"].is_array()) throw Error("objects: expected an array");

  const json& objs = doc["objects"];
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const json& o = objs[i];
    if (!o.is_object()) throw Error(field(i, "") + ": expected an object");
    if (!o.contains("name") || !o["name"].is_string()) throw Error(field(i, "name") + ": expected a string");
    std::string name = o["name"].get<std::string>();
    if (name.empty()) throw Error(field(i, "name") + ": must be non-empty");
    const std::string kind = o.value("kind", std::string("retarder-diattenuator"));

    if (kind == "retarder-diattenuator") {
      const double phi = optional_number(o, "phi_rad", field(i, "phi_rad"), 0.0);
      const double t_h = optional_number(o, "t_h", field(i, "t_h"), 1.0);
      const double t_v = optional_number(o, "t_v", field(i, "t_v"), 1.0);
      check_unit_interval(t_h, field(i, "t_h"));
      check_unit_interval(t_v, field(i, "t_v"));
      set.objects.push_back(ObjectSpec::retarder(std::move(name), phi, t_h, t_v));
    } else if (kind == "jones-explicit") {
      if (!o.contains("jones") || !o["jones"].is_array() || o["jones"].size() != 4)
        throw Error(field(i, "jones") + ": expected four [re, im] entries (hh, hv, vh, vv)");
      const json& e = o["jones"];
      const JonesMatrix j{parse_complex(e[0], field(i, "jones[0]")), parse_complex(e[1], field(i, "jones[1]")),
                          parse_complex(e[2], field(i, "jones[2]")), parse_complex(e[3], field(i, "jones[3]"))};
      set.objects.push_back(ObjectSpec::explicit_jones(std::move(name), j));
    } else {
      throw Error(field(i, "kind") + ": unknown kind \"" + kind + "\" (retarder-diattenuator or jones-explicit)");
    }
  }
  validate(set);
  return set;
}

std::string serialize_object_set(const ObjectSet& set) {
  json doc;
  doc["theta_period_rad"] = set.theta_period;
  doc["fixed_orientation"] = set.fixed_orientation;
  doc["objects"] = json::array();
  for (const ObjectSpec& o : set.objects) {
    json j;
    j["name"] = o.name;
    if (o.kind == ObjectKind::RetarderDiattenuator) {
      j["kind"] = "retarder-diattenuator";
      j["phi_rad"] = o.phi;
      j["t_h"] = o.t_h;
      j["t_v"] = o.t_v;
    } else {
      j["kind"] = "jones-explicit";
      j["jones"] = json::array();
      for (const cplx& z : {o.jones.hh, o.jones.hv, o.jones.vh, o.jones.vv})
        j["jones"].push_back({z.real(), z.imag()});
    }
    doc["objects"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

}  // namespace ghostpol
