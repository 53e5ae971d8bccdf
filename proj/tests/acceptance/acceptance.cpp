// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ghostpol/io.hpp"
#include "ghostpol/verify.hpp"

using namespace ghostpol;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 1;

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, double limit_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool ok = v.passed && in_time;
  if (!ok) ++failures;
  std::string timing = fixed(secs, 3) + "s";
  if (limit_s > 0.0) timing += " < " + fixed(limit_s, 0) + "s";
  if (!in_time) timing += " EXCEEDED";
  std::printf("%s [%2d] %-28s %s  (%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

Verdict from_suite(const verify::SuiteResult& r) { return {r.passed, r.detail}; }

double pattern_distance(const CoincidencePattern& a, const CoincidencePattern& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.gammas.size(); ++n) s += (a.gammas[n] - b.gammas[n]) * (a.gammas[n] - b.gammas[n]);
  return std::sqrt(s);
}

}  // namespace

int main() {
  report(1, "ellipsoid invariant", 1.0, [] { return from_suite(verify::ellipsoid_suite(kSeed)); });
  report(2, "pathway equivalence", 2.0, [] { return from_suite(verify::pathway_suite(kSeed)); });
  report(3, "closed-form coincidence", 1.0, [] { return from_suite(verify::closed_form_suite(kSeed)); });

  report(4, "identity / polarizing probes", 0.0, [] {
    const ObjectSet set = preset_set("paper-abc");
    const std::size_t grid = 180;
    double origin_dev = 0.0;
    for (std::size_t k = 0; k < grid; ++k) {
      const double theta = kPi * static_cast<double>(k) / grid;
      const PoincareVector p = poincare_closed_form(identity_probe().jones() * build_jones(object_a(), theta), 1.0);
      origin_dev = std::max(origin_dev, p.norm());
    }
    // Circular analyzer: no object in the set extinguishes it at any angle.
    const JonesMatrix polarizer = make_probe({0.0, 0.0, 1.0}, 1.0, 0.0);
    double sphere_dev = 0.0;
    for (const ObjectSpec& o : set.objects)
      for (std::size_t k = 0; k < grid; ++k) {
        const double theta = kPi * static_cast<double>(k) / grid;
        sphere_dev = std::max(sphere_dev, std::abs(poincare_closed_form(polarizer * build_jones(o, theta), 1.0).norm() - 1.0));
      }
    return Verdict{origin_dev < 1e-12 && sphere_dev < 1e-12,
                   "identity max |p| " + sci(origin_dev) + ", polarizer max ||p|-1| " + sci(sphere_dev) + " (tol 1e-12)"};
  });

  DesignResult design;
  bool have_design = false;
  report(5, "optimized discrimination", 120.0, [&] {
    const ObjectSet set = preset_set("paper-abc");
    OptimizerConfig cfg;
    cfg.seed = kSeed;
    cfg.final_grid = 180;
    cfg.angle_tol = 2.0 * kPi / 180.0;
    design = optimize_joint(set, 1.0, 3, cfg);
    have_design = true;
    const PatternLibrary lib = build_library(set, 180, design.probe.jones(), design.bank, 1.0, cfg.angle_tol);

    std::size_t on_grid_ok = 0;
    for (std::size_t k = 0; k < lib.entries.size(); ++k) {
      const IdentificationResult r = identify(lib.entries[k].pattern, lib);
      if (r.object_index == lib.entries[k].object_index && r.theta_hat == lib.entries[k].theta) ++on_grid_ok;
    }

    std::mt19937_64 rng(derive_seed(kSeed, 5));
    std::uniform_real_distribution<double> u(0.0, kPi);
    const std::size_t off_trials = 540;
    std::size_t off_grid_ok = 0;
    double worst_theta = 0.0;
    for (std::size_t i = 0; i < off_trials; ++i) {
      const std::size_t obj = i % set.size();
      const double theta = u(rng);
      const CoincidencePattern p = pattern(set.objects[obj], theta, design.probe.jones(), design.bank, 1.0);
      const IdentificationResult r = identify(p, lib);
      const double err = angle_distance(r.theta_hat, theta, lib.periods[obj]);
      if (r.object_index == obj && err <= lib.grid_spacing + 1e-12) ++off_grid_ok;
      worst_theta = std::max(worst_theta, err);
    }
    const bool ok = design.margin > 0.0 && on_grid_ok == lib.entries.size() && off_grid_ok == off_trials;
    return Verdict{ok, "margin " + sci(design.margin) + ", on-grid " + std::to_string(on_grid_ok) + "/" +
                           std::to_string(lib.entries.size()) + ", off-grid " + std::to_string(off_grid_ok) + "/" +
                           std::to_string(off_trials) + " (worst theta error " + fixed(worst_theta * 180.0 / kPi, 3) +
                           " deg, spacing 1 deg)"};
  });

  report(6, "entanglement necessity", 0.0, [] {
    // Collapse at q = 0, separation at q = 1, linear transverse scaling in q.
    const ObjectSet set = preset_set("retarder-sweep");
    const JonesMatrix probe = make_probe(poincare_of_pure(state_d()), 1.0, 0.0);
    const ReferenceBank bank = make_bank_coplanar({1.0, 0.0, 0.0}, 0.0, 1.0, 0.3, 3);
    const PatternLibrary lib0 = build_library(set, 2, probe, bank, 0.0);
    const PatternLibrary lib1 = build_library(set, 2, probe, bank, 1.0);
    double max0 = 0.0;
    double min1 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        max0 = std::max(max0, pattern_distance(lib0.entries[i].pattern, lib0.entries[j].pattern));
        min1 = std::min(min1, pattern_distance(lib1.entries[i].pattern, lib1.entries[j].pattern));
      }
    double ratio_dev = 0.0;
    for (double q : {0.25, 0.5})
      for (const ObjectSpec& o : set.objects) {
        const JonesMatrix t = probe * build_jones(o, 0.0);
        const PoincareVector pq = poincare_closed_form(t, q);
        const PoincareVector p1 = poincare_closed_form(t, 1.0);
        ratio_dev = std::max({ratio_dev, std::abs(pq.d - q * p1.d), std::abs(pq.c - q * p1.c)});
      }
    const verify::SuiteResult suite = verify::entanglement_suite(kSeed);
    const bool ok = max0 < 1e-12 && min1 > 0.0 && ratio_dev < 1e-12 && suite.passed;
    return Verdict{ok, "q=0 max distance " + sci(max0) + ", q=1 min distance " + sci(min1) + ", linearity dev " +
                           sci(ratio_dev)};
  });

  report(7, "Bell relation", 0.0, [] { return from_suite(verify::bell_suite(kSeed)); });
  report(8, "constant-sum property", 0.0, [] { return from_suite(verify::constant_sum_suite(kSeed)); });

  report(9, "noise benchmark", 60.0, [&] {
    if (!have_design) return Verdict{false, "no optimized design from criterion 5"};
    const PatternLibrary lib = build_library(preset_set("paper-abc"), 180, design.probe.jones(), design.bank, 1.0,
                                             2.0 * kPi / 180.0);
    const std::vector<std::int64_t> budgets{100, 1000, 10000, 1000000};
    const int trials = 1000;
    const auto rows = noise_sweep(lib, budgets, trials, kSeed);
    bool monotone = true;
    std::string curve;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      curve += (i ? ", " : "") + std::to_string(rows[i].budget) + ":" + fixed(rows[i].accuracy, 3);
      if (i == 0) continue;
      auto var = [&](double a) { return a * (1.0 - a) / trials; };
      const double slack = 2.0 * std::sqrt(var(rows[i].accuracy) + var(rows[i - 1].accuracy));
      if (rows[i].accuracy < rows[i - 1].accuracy - slack) monotone = false;
    }
    const bool ok = rows.back().accuracy >= 0.99 && monotone;
    return Verdict{ok, "accuracy {" + curve + "}" + (monotone ? ", non-decreasing" : ", DECREASING")};
  });

  report(10, "ghostpol verify", 0.0, [] {
    const std::string cmd = std::string("\"") + GHOSTPOL_BINARY + "\" verify > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return Verdict{status == 0, "exit status " + std::to_string(status)};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
