#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ghostpol/discrimination.hpp"
#include "ghostpol/optimizer.hpp"
#include "test_support.hpp"

using namespace ghostpol;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
  ObjectSet set = preset_set("paper-abc");
  JonesMatrix probe = make_probe({0.0, 0.0, 1.0}, 1.0, 0.45);
  ReferenceBank bank = make_bank_coplanar({0.0, 0.0, 1.0}, 0.0, 1.0, 0.02, 3);
};

double distance(const CoincidencePattern& a, const CoincidencePattern& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.gammas.size(); ++n) s += (a.gammas[n] - b.gammas[n]) * (a.gammas[n] - b.gammas[n]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("pattern matches the bipartite oracle") {
  const Fixture f;
  const double scale = passivity_scale(f.bank);
  const CoincidencePattern p = pattern(f.set.objects[1], 0.7, f.probe, f.bank, 0.8);
  const JonesMatrix t = f.probe * build_jones(f.set.objects[1], 0.7);
  REQUIRE(p.gammas.size() == 3);
  for (std::size_t n = 0; n < 3; ++n) {
    const testsupport::Mat4 op =
        testsupport::kron(testsupport::to_eigen(t), testsupport::to_eigen(f.bank.outputs[n]) * scale);
    const double joint = (op * testsupport::source(0.8) * op.adjoint()).trace().real();
    CHECK(p.joints[n] == Approx(joint).epsilon(1e-12));
    CHECK(p.gammas[n] * t.frobenius_sq() / 2.0 * scale * scale == Approx(joint).epsilon(1e-12));
  }
}

TEST_CASE("pattern names the object when the probe blocks it") {
  const ObjectSpec c = object_c();
  const JonesMatrix v_only = JonesMatrix::projector(state_v());
  try {
    pattern(c, 0.0, v_only, Fixture{}.bank, 1.0);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(c.name) != std::string::npos);
  }
}

TEST_CASE("build_library grid") {
  const Fixture f;
  const PatternLibrary lib = build_library(f.set, 180, f.probe, f.bank, 1.0);
  CHECK(lib.entries.size() == 540);
  CHECK(lib.grid_spacing == Approx(kPi / 180.0));
  CHECK(lib.angle_tol == Approx(2.0 * kPi / 180.0));
  CHECK(lib.entries[1].theta == Approx(kPi / 180.0));
  CHECK(lib.entries[180].object_index == 1);

  const PatternLibrary sweep = build_library(preset_set("retarder-sweep"), 180, f.probe, f.bank, 1.0);
  CHECK(sweep.entries.size() == 6);
}

TEST_CASE("angle_distance") {
  CHECK(angle_distance(0.1, kPi - 0.1, kPi) == Approx(0.2));
  CHECK(angle_distance(0.3, 0.3 + 5.0 * kPi, kPi) == Approx(0.0).epsilon(1e-12));
  CHECK(angle_distance(0.0, kPi / 2.0, kPi) == Approx(kPi / 2.0));
}

TEST_CASE("must_separate") {
  ObjectSet set{{object_a(), ObjectSpec::retarder("iso", 0.0, 0.5, 0.5)}};
  const Fixture f;
  const PatternLibrary lib = build_library(set, 18, f.probe, f.bank, 1.0);
  CHECK(lib.periods[1] == 0.0);
  const double tol = lib.angle_tol;
  CHECK_FALSE(must_separate(lib, 0, 1, tol));  // adjacent angles of the same object
  CHECK(must_separate(lib, 0, 5, tol));
  CHECK(must_separate(lib, 0, 18, tol));  // different objects
  CHECK_FALSE(must_separate(lib, 18, 25, tol));  // isotropic object at any angle
  CHECK_FALSE(must_separate(lib, 0, 17, tol));  // wraps around the period
}

TEST_CASE("separation margin") {
  const Fixture f;
  const PatternLibrary lib = build_library(f.set, 60, f.probe, f.bank, 1.0);
  const double m = separation_margin(lib);
  // Brute-force oracle over every pair.
  double ref = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lib.entries.size(); ++i)
    for (std::size_t j = i + 1; j < lib.entries.size(); ++j) {
      const bool same = lib.entries[i].object_index == lib.entries[j].object_index;
      if (same && angle_distance(lib.entries[i].theta, lib.entries[j].theta, kPi) <= lib.angle_tol + 1e-12) continue;
      ref = std::min(ref, distance(lib.entries[i].pattern, lib.entries[j].pattern));
    }
  CHECK(m == Approx(ref).epsilon(1e-14));
  CHECK(m > 0.0);
  CHECK_THROWS_AS(separation_margin(lib, lib.grid_spacing * 0.5), Error);
  CHECK(poincare_margin(lib, lib.angle_tol) > 0.0);

  SUBCASE("identity probe cannot separate") {
    const PatternLibrary flat = build_library(f.set, 60, JonesMatrix::identity(), f.bank, 1.0);
    CHECK(separation_margin(flat) < 1e-12);
  }
}

TEST_CASE("identify") {
  const Fixture f;
  const PatternLibrary lib = build_library(f.set, 180, f.probe, f.bank, 1.0);
  SUBCASE("on-grid round trip") {
    for (std::size_t k = 0; k < lib.entries.size(); k += 7) {
      const IdentificationResult r = identify(lib.entries[k].pattern, lib);
      CHECK(r.entry_index == k);
      CHECK(r.distance == 0.0);
      CHECK(is_correct(lib, r, k));
    }
  }
  SUBCASE("off-grid angles land within one grid spacing") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int i = 0; i < 60; ++i) {
      const std::size_t obj = static_cast<std::size_t>(i % 3);
      const double theta = u(rng);
      const IdentificationResult r = identify(pattern(f.set.objects[obj], theta, f.probe, f.bank, 1.0), lib);
      CHECK(r.object_index == obj);
      CHECK(angle_distance(r.theta_hat, theta, kPi) <= lib.grid_spacing + 1e-12);
    }
  }
  SUBCASE("ties go to the first entry") {
    const JonesMatrix diagonal = make_probe(poincare_of_pure(state_d()), 1.0, 0.0);
    const PatternLibrary flat = build_library(preset_set("retarder-sweep"), 10, diagonal, f.bank, 0.0);
    const IdentificationResult r = identify(flat.entries[4].pattern, flat);
    CHECK(r.entry_index == 0);
  }
}

TEST_CASE("sample_counts is Poisson with the joint means") {
  CoincidencePattern p;
  p.gammas = {0.0, 0.0};
  p.joints = {0.02, 0.5};
  const int n = 4000;
  const std::int64_t budget = 1000;
  double mean0 = 0.0, mean1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Counts c = sample_counts(p, budget, derive_seed(5, i));
    mean0 += static_cast<double>(c[0]);
    mean1 += static_cast<double>(c[1]);
  }
  mean0 /= n;
  mean1 /= n;
  // Within three standard errors of the Poisson mean.
  CHECK(std::abs(mean0 - 20.0) < 3.0 * std::sqrt(20.0 / n));
  CHECK(std::abs(mean1 - 500.0) < 3.0 * std::sqrt(500.0 / n));
  CHECK(sample_counts(p, budget, 9) == sample_counts(p, budget, 9));
  CHECK(sample_counts(p, 0, 9) == Counts{0, 0});
}

TEST_CASE("estimate_pattern") {
  const Fixture f;
  const Counts c{10, 20, 30};
  const CoincidencePattern g = estimate_pattern(c, f.bank);
  const double total = total_coincidence_constant(f.bank);
  CHECK(g.gammas[0] == Approx(total / 6.0));
  CHECK(g.gammas[2] == Approx(total / 2.0));
  CHECK(g.joints.empty());
  CHECK_THROWS_AS(estimate_pattern(Counts{0, 0, 0}, f.bank), Error);
  CHECK_THROWS_AS(estimate_pattern(Counts{1, 2}, f.bank), Error);
}

TEST_CASE("noise_sweep") {
  const Fixture f;
  const PatternLibrary lib = build_library(f.set, 30, f.probe, f.bank, 1.0);
  const std::vector<std::int64_t> budgets{0, 1000000};
  const auto rows = noise_sweep(lib, budgets, 200, 3);
  REQUIRE(rows.size() == 2);
  const double chance = chance_accuracy(lib);
  CHECK(std::abs(rows[0].accuracy - chance) < 4.0 * std::sqrt(chance * (1.0 - chance) / 200.0));
  CHECK(rows[1].accuracy > 0.95);
  CHECK(noise_sweep(lib, budgets, 200, 3)[1].accuracy == rows[1].accuracy);
  // The first entry is right for its own angle and the two neighbours on each side.
  CHECK(chance == Approx(5.0 / 90.0));
}

TEST_CASE("derive_seed") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2, 0) != derive_seed(1, 2, 1));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
