#include "ghostpol/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ghostpol {

using nlohmann::json;

namespace {

json vec_json(const PoincareVector& v) { return json::array({v.h, v.d, v.c}); }

PoincareVector vec_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw Error(path + ": expected [p_H, p_D, p_C]");
  for (const json& e : j)
    if (!e.is_number()) throw Error(path + ": expected numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_number()) throw Error(path + "." + key + ": expected a number");
  return obj[key].get<double>();
}

json jones_json(const JonesMatrix& m) {
  json out = json::array();
  for (const cplx& z : {m.hh, m.hv, m.vh, m.vv}) out.push_back({z.real(), z.imag()});
  return out;
}

JonesMatrix jones_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) throw Error(path + ": expected four [re, im] entries");
  cplx e[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 2 || !j[i][0].is_number() || !j[i][1].is_number())
      throw Error(path + ": complex numbers are [re, im] pairs");
    e[i] = {j[i][0].get<double>(), j[i][1].get<double>()};
  }
  return {e[0], e[1], e[2], e[3]};
}

json design_json(const ProbeTransform& probe, const ReferenceBank& bank) {
  json doc;
  doc["probe"] = {{"m1", vec_json(probe.m1)},
                  {"sigma1", probe.sigma1},
                  {"sigma2", probe.sigma2},
                  {"left_angles", json::array({probe.left_angles[0], probe.left_angles[1], probe.left_angles[2]})}};
  json b;
  b["mode"] = to_string(bank.mode);
  if (bank.mode == BankMode::ConstrainedCoplanar) {
    b["normal"] = vec_json(bank.normal);
    b["azimuth0_rad"] = bank.azimuth0;
    b["sigma1"] = bank.sigma1;
    b["sigma2"] = bank.sigma2;
    b["count"] = bank.count();
  } else {
    b["outputs"] = json::array();
    for (const JonesMatrix& m : bank.outputs) b["outputs"].push_back(jones_json(m));
  }
  doc["bank"] = b;
  return doc;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_csv(std::string_view text, std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      header = split_line(line);
      first = false;
      continue;
    }
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw Error("CSV row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(header.size()));
    rows.push_back(std::move(cells));
  }
  if (first) throw Error("CSV document is empty");
  return rows;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error("CSV cell \"" + s + "\" is not a number");
  }
  if (pos != s.size()) throw Error("CSV cell \"" + s + "\" is not a number");
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw Error("value \"" + s + "\" is not an integer");
  }
  if (pos != s.size()) throw Error("value \"" + s + "\" is not an integer");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Design parse_design(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("design document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probe") || !doc.contains("bank"))
    throw Error("design document needs \"probe\" and \"bank\" objects");

  const json& p = doc["probe"];
  Design d;
  d.probe.m1 = vec_from(p.value("m1", json()), "probe.m1");
  d.probe.sigma1 = number(p, "sigma1", "probe");
  d.probe.sigma2 = number(p, "sigma2", "probe");
  if (p.contains("left_angles")) {
    const json& a = p["left_angles"];
    if (!a.is_array() || a.size() != 3) throw Error("probe.left_angles: expected three angles");
    for (std::size_t i = 0; i < 3; ++i) d.probe.left_angles[i] = a[i].get<double>();
  }
  (void)d.probe.jones();  // validates ranges

  const json& b = doc["bank"];
  const BankMode mode = bank_mode_from_string(b.value("mode", std::string("constrained-coplanar")));
  if (mode == BankMode::ConstrainedCoplanar) {
    if (!b.contains("count") || !b["count"].is_number_integer()) throw Error("bank.count: expected an integer");
    d.bank = make_bank_coplanar(vec_from(b.value("normal", json()), "bank.normal"), number(b, "azimuth0_rad", "bank"),
                                number(b, "sigma1", "bank"), number(b, "sigma2", "bank"), b["count"].get<int>());
  } else {
    if (!b.contains("outputs") || !b["outputs"].is_array()) throw Error("bank.outputs: expected an array");
    std::vector<JonesMatrix> outs;
    for (std::size_t i = 0; i < b["outputs"].size(); ++i)
      outs.push_back(jones_from(b["outputs"][i], "bank.outputs[" + std::to_string(i) + "]"));
    d.bank = make_bank_free(std::move(outs));
  }
  return d;
}

std::string serialize_design(const Design& design) { return design_json(design.probe, design.bank).dump(2) + "\n"; }

std::string serialize_design_result(const DesignResult& r) {
  json doc = design_json(r.probe, r.bank);
  doc["margin"] = r.margin;
  doc["objective"] = r.objective;
  doc["discriminable"] = r.discriminable;
  doc["q"] = r.q;
  doc["outputs"] = r.outputs;
  doc["passivity_scale"] = passivity_scale(r.bank);
  const OptimizerConfig& c = r.config;
  doc["config"] = {{"multistarts", c.multistarts},
                   {"max_iterations", c.max_iterations},
                   {"f_tol", c.f_tol},
                   {"x_tol", c.x_tol},
                   {"initial_step", c.initial_step},
                   {"seed", c.seed},
                   {"passivity_weight", c.passivity_weight},
                   {"range_weight", c.range_weight},
                   {"linear_basis_weight", c.linear_basis_weight},
                   {"sigma_min", c.sigma_min},
                   {"sigma_max", c.sigma_max},
                   {"search_grid", c.search_grid},
                   {"final_grid", c.final_grid},
                   {"angle_tol_rad", c.angle_tol}};
  json trace = json::array();
  for (const TracePoint& t : r.trace) trace.push_back({t.iteration, t.value});
  doc["trace"] = trace;
  return doc.dump(2) + "\n";
}

std::string poincare_csv(const PatternLibrary& lib) {
  std::string out = "object_name,theta_rad,p_H,p_D,p_C\n";
  for (const PatternEntry& e : lib.entries) {
    out += lib.set.objects[e.object_index].name + "," + format_double(e.theta) + "," + format_double(e.reduced.h) +
           "," + format_double(e.reduced.d) + "," + format_double(e.reduced.c) + "\n";
  }
  return out;
}

std::vector<PoincareRow> parse_poincare_csv(std::string_view text) {
  std::vector<std::string> header;
  const auto rows = read_csv(text, header);
  if (header != std::vector<std::string>{"object_name", "theta_rad", "p_H", "p_D", "p_C"})
    throw Error("poincare CSV header mismatch");
  std::vector<PoincareRow> out;
  for (const auto& r : rows) out.push_back({r[0], to_double(r[1]), {to_double(r[2]), to_double(r[3]), to_double(r[4])}});
  return out;
}

std::string patterns_csv(const PatternLibrary& lib) {
  const std::size_t n = lib.bank.count();
  std::string out = "object_name,theta_rad";
  for (std::size_t i = 1; i <= n; ++i) out += ",gamma_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) out += ",joint_" + std::to_string(i);
  out += "\n";
  for (const PatternEntry& e : lib.entries) {
    out += lib.set.objects[e.object_index].name + "," + format_double(e.theta);
    for (double g : e.pattern.gammas) out += "," + format_double(g);
    for (double j : e.pattern.joints) out += "," + format_double(j);
    out += "\n";
  }
  return out;
}

std::vector<PatternRow> parse_patterns_csv(std::string_view text) {
  std::vector<std::string> header;
  const auto rows = read_csv(text, header);
  if (header.size() < 4 || header[0] != "object_name" || header[1] != "theta_rad" || (header.size() - 2) % 2 != 0)
    throw Error("patterns CSV header mismatch");
  const std::size_t n = (header.size() - 2) / 2;
  for (std::size_t i = 0; i < n; ++i)
    if (header[2 + i] != "gamma_" + std::to_string(i + 1) || header[2 + n + i] != "joint_" + std::to_string(i + 1))
      throw Error("patterns CSV header mismatch");
  std::vector<PatternRow> out;
  for (const auto& r : rows) {
    PatternRow row{r[0], to_double(r[1]), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      row.gammas.push_back(to_double(r[2 + i]));
      row.joints.push_back(to_double(r[2 + n + i]));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string noise_csv(const std::vector<NoiseSweepRow>& rows) {
  std::string out = "budget,accuracy,trials,seed\n";
  for (const NoiseSweepRow& r : rows)
    out += std::to_string(r.budget) + "," + format_double(r.accuracy) + "," + std::to_string(r.trials) + "," +
           std::to_string(r.seed) + "\n";
  return out;
}

std::vector<NoiseSweepRow> parse_noise_csv(std::string_view text) {
  std::vector<std::string> header;
  const auto rows = read_csv(text, header);
  if (header != std::vector<std::string>{"budget", "accuracy", "trials", "seed"})
    throw Error("noise-sweep CSV header mismatch");
  std::vector<NoiseSweepRow> out;
  for (const auto& r : rows)
    out.push_back({to_int(r[0]), to_double(r[1]), static_cast<int>(to_int(r[2])), std::stoull(r[3])});
  return out;
}

Counts parse_counts(std::string_view text) {
  std::string s(text);
  for (char& ch : s)
    if (ch == ',' || ch == ';' || ch == '[' || ch == ']') ch = ' ';
  std::istringstream in(s);
  Counts out;
  std::string tok;
  while (in >> tok) {
    const std::int64_t v = to_int(tok);
    if (v < 0) throw Error("coincidence counts must be non-negative");
    out.push_back(v);
  }
  if (out.empty()) throw Error("counts document contains no values");
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace ghostpol
