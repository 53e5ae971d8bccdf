#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ghostpol/objects.hpp"
#include "test_support.hpp"

using namespace ghostpol;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("build_jones") {
  const JonesMatrix a = build_jones(object_a(), 0.0);
  CHECK(frobenius_distance(a, JonesMatrix::diagonal(1.0, cplx(0.0, 1.0))) < 1e-15);

  const JonesMatrix b = build_jones(object_b(), 0.0);
  CHECK(std::abs(b.vv - cplx(0.0, std::exp(-0.7))) < 1e-15);

  const JonesMatrix c = build_jones(object_c(), 0.0);
  CHECK(frobenius_distance(c, JonesMatrix::diagonal(1.0, 0.0)) < 1e-15);

  // A polarizer rotated by 90 degrees passes V.
  CHECK(frobenius_distance(build_jones(object_c(), kPi / 2.0), JonesMatrix::diagonal(0.0, 1.0)) < 1e-15);

  const JonesMatrix x{0.1, 0.2, 0.3, 0.4};
  CHECK(frobenius_distance(build_jones(ObjectSpec::explicit_jones("x", x), 0.0), x) == 0.0);
}

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(preset_set("paper-abc")));
  CHECK_THROWS_AS(validate(ObjectSpec::retarder("bad", 0.0, 1.0, 1.2)), Error);
  CHECK_THROWS_AS(validate(ObjectSpec::retarder("bad", 0.0, -0.1, 1.0)), Error);
  CHECK_THROWS_AS(validate(ObjectSpec::retarder("", 0.0)), Error);
  CHECK_THROWS_AS(validate(ObjectSpec::retarder("bad", std::nan(""))), Error);
  CHECK_THROWS_AS(validate(ObjectSpec::explicit_jones("gain", JonesMatrix::identity() * 2.0)), Error);

  ObjectSet dup{{object_a(), object_a()}};
  CHECK_THROWS_AS(validate(dup), Error);
  CHECK_THROWS_AS(validate(ObjectSet{}), Error);
  ObjectSet bad_period{{object_a()}, 0.0};
  CHECK_THROWS_AS(validate(bad_period), Error);
}

TEST_CASE("presets") {
  const ObjectSet abc = preset_set("paper-abc");
  REQUIRE(abc.size() == 3);
  CHECK(abc.objects[0] == object_a());
  CHECK(abc.objects[1] == object_b());
  CHECK(abc.objects[2] == object_c());
  CHECK_FALSE(abc.fixed_orientation);

  const ObjectSet sweep = preset_set("retarder-sweep");
  REQUIRE(sweep.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(sweep.objects[k].phi == Approx(static_cast<double>(k) * kPi / 3.0));
  CHECK(sweep.fixed_orientation);

  const std::vector<double> phases{0.1, 0.2};
  CHECK(preset_set("retarder-sweep", phases).size() == 2);

  try {
    preset_set("nope");
    FAIL("expected an exception");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("paper-abc") != std::string::npos);
    CHECK(msg.find("retarder-sweep") != std::string::npos);
  }
}

TEST_CASE("rotation_period") {
  CHECK(rotation_period(object_a()) == Approx(kPi));
  CHECK(rotation_period(object_c()) == Approx(kPi));
  CHECK(rotation_period(ObjectSpec::retarder("iso", 0.0)) == 0.0);
  CHECK(is_isotropic(ObjectSpec::retarder("halfgray", 0.0, 0.5, 0.5)));
  CHECK(is_isotropic(ObjectSpec::explicit_jones("rotator", rotation(0.3))));
  // Invariance at the period for every preset object.
  for (const ObjectSpec& o : preset_set("paper-abc").objects) {
    const double p = rotation_period(o);
    CHECK(frobenius_distance(build_jones(o, 0.4 + p), build_jones(o, 0.4)) < 1e-12);
  }
}

TEST_CASE("object-set JSON round trip") {
  ObjectSet set = preset_set("paper-abc");
  set.objects.push_back(ObjectSpec::explicit_jones("m", JonesMatrix{0.1, cplx(0.2, -0.3), 0.0, cplx(0.0, 0.5)}));
  const ObjectSet back = parse_object_set(serialize_object_set(set));
  CHECK(back == set);

  const ObjectSet sweep = preset_set("retarder-sweep");
  CHECK(parse_object_set(serialize_object_set(sweep)) == sweep);

  CHECK_THROWS_AS(parse_object_set("{"), Error);
  CHECK_THROWS_AS(parse_object_set(R"({"objects": [{"name": "x", "kind": "mystery"}]})"), Error);
  CHECK_THROWS_AS(parse_object_set(R"({"objects": [{"name": "x", "t_v": 3}]})"), Error);
}
