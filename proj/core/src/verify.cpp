#include "ghostpol/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "ghostpol/discrimination.hpp"
#include "ghostpol/oracles.hpp"

namespace ghostpol::verify {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_ = Clock::now();
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_pairwise(const PatternLibrary& lib) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lib.entries.size(); ++i)
    for (std::size_t j = i + 1; j < lib.entries.size(); ++j) {
      double s = 0.0;
      for (std::size_t n = 0; n < lib.entries[i].pattern.gammas.size(); ++n) {
        const double d = lib.entries[i].pattern.gammas[n] - lib.entries[j].pattern.gammas[n];
        s += d * d;
      }
      worst = std::max(worst, std::sqrt(s));
    }
  return worst;
}

PoincareVector random_ball(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const PoincareVector p{u(rng), u(rng), u(rng)};
    if (p.norm() <= 1.0) return p;
  }
}

PoincareVector random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return PoincareVector{n(rng), n(rng), n(rng)}.normalized();
}

}  // namespace

cplx random_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

JonesMatrix random_jones(std::mt19937_64& rng) {
  return {random_disk(rng), random_disk(rng), random_disk(rng), random_disk(rng)};
}

SuiteResult ellipsoid_suite(std::uint64_t seed, const ModelHooks& hooks) {
  Timer timer;
  std::mt19937_64 rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> uq(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const JonesMatrix t = random_jones(rng);
    const double q = i % 10 == 0 ? 0.0 : uq(rng);
    const PoincareVector p = hooks.poincare(t, q);
    const PoincareVector unit_q = hooks.poincare(t, 1.0);  // transverse part with q factored out
    const double e = eta(t);
    const double residual = p.h * p.h + unit_q.d * unit_q.d + unit_q.c * unit_q.c - e * e;
    const double scaling = std::max(std::abs(p.d - q * unit_q.d), std::abs(p.c - q * unit_q.c));
    worst = std::max({worst, std::abs(residual), std::abs(ellipsoid_residual(t, q)), scaling});
  }
  return {"ellipsoid", worst < 1e-10, worst, timer.seconds(), "max |residual| = " + sci(worst) + " (tol 1e-10)"};
}

SuiteResult pathway_suite(std::uint64_t seed, const ModelHooks& hooks) {
  Timer timer;
  std::mt19937_64 rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> uq(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const JonesMatrix t = random_jones(rng);
    const JonesMatrix m = random_jones(rng);
    const double q = uq(rng);
    const ConditionalCoincidence oracle = joint_oracle(t, m, q);
    const ReducedReference rr = reduced_reference(t, q);
    const double via_trace = coincidence_expectation(rr.rho, m);
    const double via_closed = coincidence_closed_form(hooks.poincare(t, q), svd2(m));
    worst = std::max({worst, std::abs(oracle.gamma - via_trace), std::abs(oracle.gamma - via_closed),
                      std::abs(oracle.probe_prob - rr.probe_prob)});
  }
  return {"pathway", worst < 1e-12, worst, timer.seconds(), "max |gamma difference| = " + sci(worst) + " (tol 1e-12)"};
}

SuiteResult closed_form_suite(std::uint64_t seed) {
  Timer timer;
  std::mt19937_64 rng(derive_seed(seed, 3));
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const PoincareVector p = random_ball(rng);
    const JonesMatrix m = random_jones(rng);
    const double closed = coincidence_closed_form(p, svd2(m));
    const double traced = coincidence_expectation(density_of_poincare(p), m);
    worst = std::max(worst, std::abs(closed - traced));
  }
  return {"closed-form-gamma", worst < 1e-12, worst, timer.seconds(),
          "max |closed - trace| = " + sci(worst) + " (tol 1e-12)"};
}

SuiteResult entanglement_suite(std::uint64_t seed, const ModelHooks& hooks) {
  Timer timer;
  (void)seed;  // deterministic configuration
  const ObjectSet set = preset_set("retarder-sweep");
  const JonesMatrix probe = make_probe(poincare_of_pure(state_d()), 1.0, 0.0);
  const ReferenceBank bank = make_bank_coplanar({1.0, 0.0, 0.0}, 0.0, 1.0, 0.3, 3);

  const double spread_q0 = max_pairwise(build_library(set, 2, probe, bank, 0.0));
  const PatternLibrary lib1 = build_library(set, 2, probe, bank, 1.0);
  const double margin_q1 = separation_margin(lib1);
  const double spread_q1 = max_pairwise(lib1);

  double linear_dev = 0.0;
  for (double q : {0.25, 0.5}) {
    linear_dev = std::max(linear_dev, std::abs(max_pairwise(build_library(set, 2, probe, bank, q)) - q * spread_q1));
    for (const ObjectSpec& o : set.objects) {
      const JonesMatrix t = probe * build_jones(o, 0.0);
      const PoincareVector pq = hooks.poincare(t, q);
      const PoincareVector p1 = hooks.poincare(t, 1.0);
      linear_dev = std::max({linear_dev, std::abs(pq.d - q * p1.d), std::abs(pq.c - q * p1.c), std::abs(pq.h - p1.h)});
    }
  }
  const bool ok = spread_q0 < 1e-12 && margin_q1 > 0.0 && linear_dev < 1e-12;
  return {"entanglement-necessity", ok, std::max(spread_q0, linear_dev), timer.seconds(),
          "q=0 spread " + sci(spread_q0) + ", q=1 margin " + sci(margin_q1) + ", linearity dev " + sci(linear_dev)};
}

SuiteResult bell_suite(std::uint64_t seed) {
  Timer timer;
  (void)seed;
  double worst = 0.0;
  for (double q : {0.0, 0.5, 1.0}) worst = std::max(worst, std::abs(chsh_canonical(q) - std::sqrt(2.0) * (1.0 + q)));
  for (double q : {0.0, 0.25, 0.37, 0.8, 1.0})
    worst = std::max(worst, std::abs(oracles::wootters_concurrence(source_state(q).rho) - q));
  return {"bell-concurrence", worst < 1e-12, worst, timer.seconds(), "max deviation " + sci(worst) + " (tol 1e-12)"};
}

SuiteResult constant_sum_suite(std::uint64_t seed) {
  Timer timer;
  std::mt19937_64 rng(derive_seed(seed, 8));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ObjectSet set = preset_set("paper-abc");
  const JonesMatrix probe = make_probe(random_unit(rng), 1.0, 0.1 + 0.8 * u(rng));
  const ReferenceBank bank =
      make_bank_coplanar(random_unit(rng), 2.0 * std::numbers::pi * u(rng), 1.0, 0.05 + 0.9 * u(rng), 3);
  const PatternLibrary lib = build_library(set, 180, probe, bank, 1.0);
  const double total = total_coincidence_constant(bank);

  double mean = 0.0;
  std::vector<double> sums;
  for (const PatternEntry& e : lib.entries) {
    double s = 0.0;
    for (double g : e.pattern.gammas) s += g;
    sums.push_back(s);
    mean += s;
  }
  mean /= static_cast<double>(sums.size());
  double variance = 0.0;
  double offset = std::abs(mean - total);
  for (double s : sums) variance += (s - mean) * (s - mean);
  variance /= static_cast<double>(sums.size());

  // Rational case: p = m_0 on a (1, 0) bank gives gammas (1, 1/4, 1/4), counts (4, 1, 1).
  const ReferenceBank projector_bank = make_bank_coplanar({1.0, 0.0, 0.0}, 0.0, 1.0, 0.0, 3);
  const Counts proportional{4, 1, 1};
  const CoincidencePattern est = estimate_pattern(proportional, projector_bank);
  const double exact_err =
      std::max({std::abs(est.gammas[0] - 1.0), std::abs(est.gammas[1] - 0.25), std::abs(est.gammas[2] - 0.25)});

  // Library patterns scaled to ~2^40 counts; integer rounding bounds the error near 1e-12.
  double scaled_err = 0.0;
  for (const PatternEntry& e : lib.entries) {
    Counts c;
    for (double g : e.pattern.gammas) c.push_back(std::llround(g * 0x1.0p40));
    const CoincidencePattern g = estimate_pattern(c, bank);
    for (std::size_t n = 0; n < g.gammas.size(); ++n)
      scaled_err = std::max(scaled_err, std::abs(g.gammas[n] - e.pattern.gammas[n]));
  }

  const bool ok = variance < 1e-24 && offset < 1e-12 && exact_err < 1e-15 && scaled_err < 1e-9;
  return {"constant-sum", ok, variance, timer.seconds(),
          "variance " + sci(variance) + " (tol 1e-24), exact estimate error " + sci(exact_err) +
              ", rounded-count estimate error " + sci(scaled_err)};
}

std::vector<SuiteResult> run_all(std::uint64_t seed, const ModelHooks& hooks) {
  return {ellipsoid_suite(seed, hooks), pathway_suite(seed, hooks), closed_form_suite(seed),
          entanglement_suite(seed, hooks), bell_suite(seed),         constant_sum_suite(seed)};
}

}  // namespace ghostpol::verify
