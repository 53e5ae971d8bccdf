#include "commands.hpp"

#include <cmath>
#include <limits>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ghostpol/verify.hpp"

namespace ghostpol::cli {

using nlohmann::json;

namespace {

std::filesystem::path resolve_path(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  if (!std::filesystem::exists(path)) throw Error("referenced file does not exist: " + path.string());
  return path;
}

bool looks_like_path(const std::string& s) {
  return s.find('/') != std::string::npos || s.ends_with(".json");
}

void read_optimizer(const json& j, OptimizerConfig& c) {
  if (!j.is_object()) throw Error("optimizer: expected an object");
  c.multistarts = j.value("multistarts", c.multistarts);
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.f_tol = j.value("f_tol", c.f_tol);
  c.x_tol = j.value("x_tol", c.x_tol);
  c.initial_step = j.value("initial_step", c.initial_step);
  c.passivity_weight = j.value("passivity_weight", c.passivity_weight);
  c.range_weight = j.value("range_weight", c.range_weight);
  c.linear_basis_weight = j.value("linear_basis_weight", c.linear_basis_weight);
  c.sigma_min = j.value("sigma_min", c.sigma_min);
  c.sigma_max = j.value("sigma_max", c.sigma_max);
  c.search_grid = j.value("search_grid", c.search_grid);
  c.final_grid = j.value("final_grid", c.final_grid);
  c.angle_tol = j.value("angle_tol_rad", c.angle_tol);
  validate(c);
}

Design identity_design(int outputs) {
  return {identity_probe(), make_bank_coplanar({1.0, 0.0, 0.0}, 0.0, 1.0, 0.3, outputs)};
}

std::string json_number_or_null(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

void write_artifact(const RunConfig& cfg, const std::string& name, std::string_view content, std::ostream& out) {
  const std::filesystem::path path = cfg.out_dir / name;
  write_file(path, content);
  out << "wrote " << path.string() << "\n";
}

PatternLibrary library_for(const RunConfig& cfg, const DesignResult& d) {
  return build_library(cfg.objects, cfg.grid_points, d.probe.jones(), d.bank, cfg.q, cfg.angle_tol);
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config must be a JSON object");

  RunConfig cfg;
  try {
    cfg.q = doc.value("q", cfg.q);
    check_concurrence(cfg.q);
    cfg.grid_points = doc.value("grid_points", cfg.grid_points);
    cfg.angle_tol = doc.value("angle_tol_rad", cfg.angle_tol);
    cfg.outputs = doc.value("outputs", cfg.outputs);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.trials = doc.value("trials", cfg.trials);
    if (doc.contains("budgets")) cfg.budgets = doc["budgets"].get<std::vector<std::int64_t>>();
    if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
    if (cfg.out_dir.is_relative()) cfg.out_dir = base_dir / cfg.out_dir;
    if (doc.contains("optimizer")) read_optimizer(doc["optimizer"], cfg.optimizer);
  } catch (const json::exception& e) {
    throw Error(std::string("config field has the wrong type: ") + e.what());
  }
  cfg.optimizer.seed = cfg.seed;
  if (cfg.outputs < 2 || cfg.outputs > 4) throw Error("outputs: must be 2, 3 or 4");
  if (cfg.grid_points < 2) throw Error("grid_points: must be at least 2");

  const json objects = doc.value("objects", json("paper-abc"));
  if (objects.is_object()) {
    cfg.objects = parse_object_set(objects.dump());
    cfg.objects_label = "inline";
  } else if (objects.is_string()) {
    const std::string s = objects.get<std::string>();
    if (looks_like_path(s)) {
      cfg.objects = parse_object_set(read_file(resolve_path(s, base_dir)));
    } else {
      std::vector<double> phases;
      if (doc.contains("phases_rad")) phases = doc["phases_rad"].get<std::vector<double>>();
      cfg.objects = preset_set(s, phases);
    }
    cfg.objects_label = s;
  } else {
    throw Error("objects: expected a preset name, a path or an inline object set");
  }

  const json design = doc.value("design", json("optimize"));
  if (design.is_object()) {
    cfg.design_source = DesignSource::Document;
    cfg.design = parse_design(design.dump());
  } else if (design.is_string()) {
    const std::string s = design.get<std::string>();
    if (s == "optimize") {
      cfg.design_source = DesignSource::Optimize;
    } else if (s == "identity") {
      cfg.design_source = DesignSource::Identity;
      cfg.design = identity_design(cfg.outputs);
    } else {
      cfg.design_source = DesignSource::Document;
      cfg.design = parse_design(read_file(resolve_path(s, base_dir)));
    }
  } else {
    throw Error("design: expected \"optimize\", \"identity\", a path or an inline design");
  }
  if (cfg.design_source != DesignSource::Optimize) cfg.outputs = static_cast<int>(cfg.design.bank.count());
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path), path.has_parent_path() ? path.parent_path() : ".");
}

DesignResult resolve_design(const RunConfig& cfg, std::ostream& log) {
  if (cfg.design_source == DesignSource::Optimize) {
    log << "optimizing design (" << cfg.optimizer.multistarts << " starts, seed " << cfg.optimizer.seed << ")\n";
    return optimize_joint(cfg.objects, cfg.q, cfg.outputs, cfg.optimizer);
  }
  DesignResult d;
  d.probe = cfg.design.probe;
  d.bank = cfg.design.bank;
  d.q = cfg.q;
  d.outputs = static_cast<int>(d.bank.count());
  d.config = cfg.optimizer;
  const PatternLibrary lib = library_for(cfg, d);
  d.margin = separation_margin(lib);
  d.discriminable = d.margin > kDiscriminableMargin;
  return d;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const DesignResult d = resolve_design(cfg, out);
  if (cfg.design_source == DesignSource::Optimize) write_artifact(cfg, "design.json", serialize_design_result(d), out);
  const PatternLibrary lib = library_for(cfg, d);
  write_artifact(cfg, "poincare.csv", poincare_csv(lib), out);
  write_artifact(cfg, "patterns.csv", patterns_csv(lib), out);
  out << "entries " << lib.entries.size() << ", margin " << format_double(separation_margin(lib)) << "\n";
  return kOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  RunConfig run = cfg;
  run.design_source = DesignSource::Optimize;
  const DesignResult d = resolve_design(run, out);
  write_artifact(cfg, "design.json", serialize_design_result(d), out);
  out << "margin " << format_double(d.margin) << "\n";
  if (!d.discriminable) {
    out << "object set is non-discriminable with this configuration\n";
    return kNonDiscriminable;
  }
  return kOk;
}

int cmd_identify(const RunConfig& cfg, const std::filesystem::path& counts_path, std::ostream& out) {
  const Counts counts = parse_counts(read_file(counts_path));
  const DesignResult d = resolve_design(cfg, out);
  const PatternLibrary lib = library_for(cfg, d);
  const CoincidencePattern estimate = estimate_pattern(counts, d.bank);
  const IdentificationResult r = identify(estimate, lib);

  json report;
  report["counts"] = counts;
  report["estimated_gammas"] = estimate.gammas;
  report["objects"] = cfg.objects_label;
  report["q"] = cfg.q;
  report["grid_points"] = cfg.grid_points;
  report["angle_tol_rad"] = lib.angle_tol;
  report["design"] = json::parse(serialize_design({d.probe, d.bank}));
  report["result"] = {{"object_name", cfg.objects.objects[r.object_index].name},
                      {"object_index", r.object_index},
                      {"theta_hat_rad", r.theta_hat},
                      {"distance", r.distance},
                      {"margin", std::isfinite(r.margin) ? json(r.margin) : json(nullptr)}};
  write_artifact(cfg, "identify.json", report.dump(2) + "\n", out);
  out << "object " << cfg.objects.objects[r.object_index].name << ", theta_hat " << format_double(r.theta_hat)
      << ", distance " << format_double(r.distance) << ", margin " << json_number_or_null(r.margin) << "\n";
  return kOk;
}

int cmd_noise_sweep(const RunConfig& cfg, std::ostream& out) {
  const DesignResult d = resolve_design(cfg, out);
  const PatternLibrary lib = library_for(cfg, d);
  const auto rows = noise_sweep(lib, cfg.budgets, cfg.trials, cfg.seed);
  write_artifact(cfg, "noise_sweep.csv", noise_csv(rows), out);
  for (const NoiseSweepRow& r : rows) out << "budget " << r.budget << ": accuracy " << format_double(r.accuracy) << "\n";
  return kOk;
}

int cmd_verify(std::uint64_t seed, std::ostream& out) {
  bool all = true;
  for (const verify::SuiteResult& r : verify::run_all(seed)) {
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3fs", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "  [" << timing << "]\n";
    all = all && r.passed;
  }
  out << (all ? "all suites passed" : "verification FAILED") << "\n";
  return all ? kOk : kVerifyFailed;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ghostpol: metasurface-assisted ghost discrimination of polarization objects"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::int64_t> budgets;
  std::string counts_path;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", config_path, "run configuration (JSON)");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--out", out_dir, "output directory override");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "write Poincare and coincidence-pattern data");
  CLI::App* optimize = app.add_subcommand("optimize", "search probe and reference metasurfaces");
  CLI::App* ident = app.add_subcommand("identify", "identify an object from coincidence counts");
  CLI::App* sweep = app.add_subcommand("noise-sweep", "Monte Carlo identification accuracy vs pair budget");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
  for (CLI::App* s : {simulate, optimize, ident, sweep}) add_common(s, true);
  add_common(verify_cmd, false);
  ident->add_option("--counts", counts_path, "coincidence counts file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--budgets", budgets, "pair budgets, comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalidInput;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(seed.value_or(1), out);
    RunConfig cfg = load_run_config(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.optimizer.seed = *seed;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!budgets.empty()) cfg.budgets = budgets;
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (optimize->parsed()) return cmd_optimize(cfg, out);
    if (ident->parsed()) return cmd_identify(cfg, counts_path, out);
    return cmd_noise_sweep(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace ghostpol::cli
