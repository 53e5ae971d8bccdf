#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghostpol/jones.hpp"

namespace ghostpol {

enum class ObjectKind { RetarderDiattenuator, JonesExplicit };

/// Polarization object at zero rotation angle.
///
/// A retarder-diattenuator is t_H |H><H| + t_V e^{i phi} |V><V|; a jones-explicit
/// object carries its matrix directly.
struct ObjectSpec {
  std::string name;
  ObjectKind kind = ObjectKind::RetarderDiattenuator;
  double phi = 0.0;
  double t_h = 1.0;
  double t_v = 1.0;
  JonesMatrix jones = JonesMatrix::identity();

  static ObjectSpec retarder(std::string name, double phi, double t_h = 1.0, double t_v = 1.0);
  static ObjectSpec explicit_jones(std::string name, const JonesMatrix& j);

  bool operator==(const ObjectSpec&) const = default;
};

/// Ordered discrimination target.
///
/// Rotation angles are searched on [0, theta_period). When fixed_orientation is
/// set, every object is evaluated at theta = 0 only and angles are not identified.
struct ObjectSet {
  std::vector<ObjectSpec> objects;
  double theta_period = 3.14159265358979323846;
  bool fixed_orientation = false;

  std::size_t size() const { return objects.size(); }
  bool operator==(const ObjectSet&) const = default;
};

/// Throws Error on empty/duplicate names, out-of-range transmissions or period.
void validate(const ObjectSpec& spec);
void validate(const ObjectSet& set);

JonesMatrix build_jones(const ObjectSpec& spec, double theta);

/// Omega_a: quarter-wave plate diag(1, i).
ObjectSpec object_a();
/// Omega_b: partially transparent retarder diag(1, i e^{-0.7}).
ObjectSpec object_b();
/// Omega_c: horizontal polarizer diag(1, 0).
ObjectSpec object_c();

/// Six equally spaced retardances k*pi/3, k = 0..5.
std::vector<double> default_retarder_phases();

/// Named presets: "paper-abc" and "retarder-sweep" (phases from `phases`, or the
/// default six when empty). Unknown names throw an Error listing the presets.
ObjectSet preset_set(std::string_view name, std::span<const double> phases = {});

/// Smallest p in {pi/k} with rotate(J, p) == J within 1e-10; 0 for isotropic objects.
double rotation_period(const ObjectSpec& spec);

inline bool is_isotropic(const ObjectSpec& spec) { return rotation_period(spec) == 0.0; }

/// JSON object-set document; see docs/formats.md.
ObjectSet parse_object_set(std::string_view text);
std::string serialize_object_set(const ObjectSet& set);

}  // namespace ghostpol
