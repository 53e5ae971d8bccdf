#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ghostpol/quantum.hpp"

namespace ghostpol::verify {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  ///< largest deviation (or smallest margin) observed
  double seconds = 0.0;
  std::string detail;
};

/// Model entry points the suites exercise; replaceable to run mutation checks.
struct ModelHooks {
  std::function<PoincareVector(const JonesMatrix&, double)> poincare = poincare_closed_form;
};

inline constexpr int kSamples = 10000;

/// Uniform sample from the complex unit disk.
cplx random_disk(std::mt19937_64& rng);
JonesMatrix random_jones(std::mt19937_64& rng);

/// |p_H^2 + (p_D^2 + p_C^2)/q^2 - eta^2| < 1e-10 with the transverse part taken q-free.
SuiteResult ellipsoid_suite(std::uint64_t seed, const ModelHooks& hooks = {});
/// Reduced-state trace, closed form and full bipartite oracle agree within 1e-12.
SuiteResult pathway_suite(std::uint64_t seed, const ModelHooks& hooks = {});
/// Singular-value formula for Gamma matches the trace formula within 1e-12.
SuiteResult closed_form_suite(std::uint64_t seed);
/// Retarder set behind a diagonal polarizer collapses at q = 0 and separates at q = 1.
SuiteResult entanglement_suite(std::uint64_t seed, const ModelHooks& hooks = {});
/// CHSH = sqrt(2)(1 + q) and Wootters concurrence = q.
SuiteResult bell_suite(std::uint64_t seed);
/// Constant total coincidences for constrained banks and exact count-based estimates.
SuiteResult constant_sum_suite(std::uint64_t seed);

std::vector<SuiteResult> run_all(std::uint64_t seed, const ModelHooks& hooks = {});

}  // namespace ghostpol::verify
