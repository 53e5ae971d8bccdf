#include "ghostpol/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ghostpol {

namespace {

constexpr double kTieTol = 1e-12;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class Distance>
double min_separation(const PatternLibrary& lib, double angle_tol, Distance dist_sq) {
  if (angle_tol < lib.grid_spacing - 1e-15 && !lib.set.fixed_orientation)
    throw Error("angle tolerance must be at least one grid spacing");
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = lib.entries.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (must_separate(lib, i, j, angle_tol)) best = std::min(best, dist_sq(lib.entries[i], lib.entries[j]));
  return std::sqrt(best);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

CoincidencePattern pattern(const ObjectSpec& spec, double theta, const JonesMatrix& probe,
                           const ReferenceBank& bank, double q) {
  const JonesMatrix t_p = probe * build_jones(spec, theta);
  ReducedReference rr;
  try {
    rr = reduced_reference(t_p, q);
  } catch (const Error&) {
    throw Error("zero probe detection probability for object \"" + spec.name + "\" at theta = " +
                std::to_string(theta));
  }
  const double scale = passivity_scale(bank);
  const double joint_factor = rr.probe_prob * scale * scale;

  CoincidencePattern out;
  out.gammas.reserve(bank.count());
  out.joints.reserve(bank.count());
  for (const JonesMatrix& m : bank.outputs) {
    const double g = coincidence_expectation(rr.rho, m);
    out.gammas.push_back(g);
    out.joints.push_back(joint_factor * g);
#ifndef NDEBUG
    const ConditionalCoincidence oracle = joint_oracle(t_p, m, q);
    if (std::abs(oracle.gamma - g) > 1e-9 * std::max(1.0, g))
      throw Error("reduced-state and bipartite coincidence pathways disagree");
#endif
  }
  return out;
}

PatternLibrary build_library(const ObjectSet& set, std::size_t grid_points, const JonesMatrix& probe,
                             const ReferenceBank& bank, double q, double angle_tol) {
  validate(set);
  check_concurrence(q);
  if (grid_points < 2) throw Error("grid_points must be at least 2");

  PatternLibrary lib;
  lib.set = set;
  lib.grid_points = grid_points;
  lib.grid_spacing = set.theta_period / static_cast<double>(grid_points);
  lib.angle_tol = angle_tol > 0.0 ? angle_tol : 2.0 * lib.grid_spacing;
  lib.q = q;
  lib.probe = probe;
  lib.bank = bank;

  const std::size_t angles = set.fixed_orientation ? 1 : grid_points;
  lib.entries.reserve(set.size() * angles);
  for (std::size_t o = 0; o < set.size(); ++o) {
    const ObjectSpec& spec = set.objects[o];
    lib.periods.push_back(rotation_period(spec));
    for (std::size_t k = 0; k < angles; ++k) {
      PatternEntry e;
      e.object_index = o;
      e.theta = static_cast<double>(k) * lib.grid_spacing;
      e.pattern = pattern(spec, e.theta, probe, bank, q);
      const JonesMatrix t_p = probe * build_jones(spec, e.theta);
      e.reduced = poincare_closed_form(t_p, q);
      e.probe_prob = 0.5 * t_p.frobenius_sq();
      lib.entries.push_back(std::move(e));
    }
  }
  return lib;
}

double angle_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

bool must_separate(const PatternLibrary& lib, std::size_t i, std::size_t j, double angle_tol) {
  const PatternEntry& a = lib.entries[i];
  const PatternEntry& b = lib.entries[j];
  if (a.object_index != b.object_index) return true;
  if (lib.set.fixed_orientation) return false;
  const double period = lib.periods[a.object_index];
  if (period == 0.0) return false;
  return angle_distance(a.theta, b.theta, period) > angle_tol + 1e-12;
}

double separation_margin(const PatternLibrary& lib, double angle_tol) {
  return min_separation(lib, angle_tol, [](const PatternEntry& a, const PatternEntry& b) {
    return squared_distance(a.pattern.gammas, b.pattern.gammas);
  });
}

double separation_margin(const PatternLibrary& lib) { return separation_margin(lib, lib.angle_tol); }

double poincare_margin(const PatternLibrary& lib, double angle_tol) {
  return min_separation(lib, angle_tol, [](const PatternEntry& a, const PatternEntry& b) {
    const PoincareVector d = a.reduced - b.reduced;
    return d.dot(d);
  });
}

IdentificationResult identify(const CoincidencePattern& observed, const PatternLibrary& lib) {
  if (lib.entries.empty()) throw Error("pattern library is empty");
  const std::size_t dim = lib.entries.front().pattern.gammas.size();
  if (observed.gammas.size() != dim)
    throw Error("dimension mismatch: observed pattern has " + std::to_string(observed.gammas.size()) +
                " outputs, library has " + std::to_string(dim));

  std::vector<double> dist(lib.entries.size());
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lib.entries.size(); ++i) {
    dist[i] = std::sqrt(squared_distance(observed.gammas, lib.entries[i].pattern.gammas));
    best_d = std::min(best_d, dist[i]);
  }
  std::size_t best = 0;
  while (dist[best] > best_d + kTieTol) ++best;

  double runner_up = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lib.entries.size(); ++i)
    if (i != best && must_separate(lib, best, i, lib.angle_tol)) runner_up = std::min(runner_up, dist[i]);

  IdentificationResult r;
  r.entry_index = best;
  r.object_index = lib.entries[best].object_index;
  r.theta_hat = lib.periods[r.object_index] == 0.0 ? 0.0 : lib.entries[best].theta;
  r.distance = dist[best];
  r.margin = std::max(0.0, runner_up - dist[best]);
  return r;
}

bool is_correct(const PatternLibrary& lib, const IdentificationResult& result, std::size_t truth) {
  const PatternEntry& t = lib.entries[truth];
  if (result.object_index != t.object_index) return false;
  if (lib.set.fixed_orientation) return true;
  const double period = lib.periods[t.object_index];
  if (period == 0.0) return true;
  return angle_distance(result.theta_hat, t.theta, period) <= lib.angle_tol + 1e-12;
}

Counts sample_counts(const CoincidencePattern& p, std::int64_t pair_budget, std::uint64_t seed) {
  if (pair_budget < 0) throw Error("pair budget must be non-negative");
  std::mt19937_64 rng(seed);
  Counts out(p.joints.size(), 0);
  for (std::size_t n = 0; n < p.joints.size(); ++n) {
    const double mean = static_cast<double>(pair_budget) * p.joints[n];
    if (mean <= 0.0) continue;
    std::poisson_distribution<std::int64_t> dist(mean);
    out[n] = dist(rng);
  }
  return out;
}

CoincidencePattern estimate_pattern(std::span<const std::int64_t> counts, const ReferenceBank& bank) {
  if (counts.size() != bank.count())
    throw Error("dimension mismatch: " + std::to_string(counts.size()) + " counts for a " +
                std::to_string(bank.count()) + "-output bank");
  const double total_gamma = total_coincidence_constant(bank);
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw Error("coincidence counts must be non-negative");
    total += c;
  }
  if (total == 0) throw Error("no coincidences recorded");
  CoincidencePattern out;
  for (std::int64_t c : counts) out.gammas.push_back(total_gamma * static_cast<double>(c) / static_cast<double>(total));
  return out;
}

std::vector<NoiseSweepRow> noise_sweep(const PatternLibrary& lib, std::span<const std::int64_t> budgets, int trials,
                                       std::uint64_t seed) {
  if (trials < 1) throw Error("trials must be at least 1");
  if (lib.entries.empty()) throw Error("pattern library is empty");
  std::vector<NoiseSweepRow> rows;
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    int correct = 0;
    for (int t = 0; t < trials; ++t) {
      std::mt19937_64 rng(derive_seed(seed, b, static_cast<std::uint64_t>(t)));
      std::uniform_int_distribution<std::size_t> pick(0, lib.entries.size() - 1);
      const std::size_t truth = pick(rng);
      const Counts counts = sample_counts(lib.entries[truth].pattern, budgets[b], rng());
      std::int64_t total = 0;
      for (std::int64_t c : counts) total += c;

      IdentificationResult r;
      if (total == 0) {
        r.object_index = lib.entries.front().object_index;
        r.theta_hat = lib.entries.front().theta;
      } else {
        r = identify(estimate_pattern(counts, lib.bank), lib);
      }
      if (is_correct(lib, r, truth)) ++correct;
    }
    rows.push_back({budgets[b], static_cast<double>(correct) / trials, trials, seed});
  }
  return rows;
}

double chance_accuracy(const PatternLibrary& lib) {
  IdentificationResult guess;
  guess.object_index = lib.entries.front().object_index;
  guess.theta_hat = lib.entries.front().theta;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < lib.entries.size(); ++i)
    if (is_correct(lib, guess, i)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(lib.entries.size());
}

}  // namespace ghostpol
