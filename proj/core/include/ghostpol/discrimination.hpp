#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ghostpol/metasurface.hpp"
#include "ghostpol/objects.hpp"
#include "ghostpol/quantum.hpp"

namespace ghostpol {

/// One point in the pattern space D.
struct CoincidencePattern {
  std::vector<double> gammas;  ///< conditional coincidence expectations, one per reference output
  std::vector<double> joints;  ///< joint detection probability per emitted pair (passivity-scaled bank)
};

/// Coincidence pattern produced by object `spec` rotated to `theta`, probe-arm
/// metasurface `probe` and reference bank `bank`, for source concurrence q.
/// Throws when the probe detection probability vanishes.
CoincidencePattern pattern(const ObjectSpec& spec, double theta, const JonesMatrix& probe,
                           const ReferenceBank& bank, double q);

struct PatternEntry {
  std::size_t object_index = 0;
  double theta = 0.0;
  CoincidencePattern pattern;
  PoincareVector reduced;  ///< Poincare vector of the heralded reference state
  double probe_prob = 0.0;
};

struct PatternLibrary {
  ObjectSet set;
  std::vector<double> periods;  ///< rotation period per object, 0 for isotropic objects
  std::vector<PatternEntry> entries;
  std::size_t grid_points = 0;
  double grid_spacing = 0.0;
  double angle_tol = 0.0;
  double q = 1.0;
  JonesMatrix probe;
  ReferenceBank bank;
};

/// Library over the grid theta_k = k * theta_period / grid_points (theta = 0 only
/// for fixed-orientation sets). A non-positive angle_tol selects two grid spacings.
PatternLibrary build_library(const ObjectSet& set, std::size_t grid_points, const JonesMatrix& probe,
                             const ReferenceBank& bank, double q, double angle_tol = 0.0);

/// Circular distance between angles modulo `period`.
double angle_distance(double a, double b, double period);

/// True when entries i and j must be told apart: different objects, or the same
/// anisotropic, rotatable object at angles further apart than angle_tol.
bool must_separate(const PatternLibrary& lib, std::size_t i, std::size_t j, double angle_tol);

/// Minimum Euclidean distance in D over all pairs that must be separated.
double separation_margin(const PatternLibrary& lib, double angle_tol);
double separation_margin(const PatternLibrary& lib);

/// Same pairing rule, measured between reduced-state Poincare vectors.
double poincare_margin(const PatternLibrary& lib, double angle_tol);

struct IdentificationResult {
  std::size_t object_index = 0;
  double theta_hat = 0.0;
  double distance = 0.0;
  /// Runner-up distance among entries that must be separated from the winner, minus the best distance.
  double margin = 0.0;
  std::size_t entry_index = 0;
};

/// Nearest library entry in D; ties (within 1e-12) go to the lowest object index, then the lowest theta.
IdentificationResult identify(const CoincidencePattern& observed, const PatternLibrary& lib);

/// Whether `result` names the object of entry `truth` at an acceptable angle.
bool is_correct(const PatternLibrary& lib, const IdentificationResult& result, std::size_t truth);

using Counts = std::vector<std::int64_t>;

/// Independent Poisson coincidence counts with means pair_budget * joints.
Counts sample_counts(const CoincidencePattern& p, std::int64_t pair_budget, std::uint64_t seed);

/// Gamma estimate from relative counts, rescaled to the bank's constant total.
/// The result carries no joint probabilities.
CoincidencePattern estimate_pattern(std::span<const std::int64_t> counts, const ReferenceBank& bank);

struct NoiseSweepRow {
  std::int64_t budget = 0;
  double accuracy = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo identification accuracy per pair budget. Each trial draws a
/// library entry uniformly, samples counts and identifies them; trials without
/// any coincidence fall back to the tie rule (the first library entry).
std::vector<NoiseSweepRow> noise_sweep(const PatternLibrary& lib, std::span<const std::int64_t> budgets, int trials,
                                       std::uint64_t seed);

/// Expected accuracy of always answering the first library entry.
double chance_accuracy(const PatternLibrary& lib);

/// Deterministic 64-bit seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace ghostpol
