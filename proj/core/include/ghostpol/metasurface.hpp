#pragma once

#include <array>
#include <string>
#include <vector>

#include "ghostpol/jones.hpp"

namespace ghostpol {

/// Probe-arm metasurface M_P = U_left diag(sigma1, sigma2) [v1 v2]^dagger, where v1
/// is the pure state at Poincare point m1.
struct ProbeTransform {
  PoincareVector m1{1.0, 0.0, 0.0};
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  /// Euler angles of the SU(2) left factor; irrelevant to coincidences behind a bucket detector.
  std::array<double, 3> left_angles{0.0, 0.0, 0.0};

  JonesMatrix jones() const;
};

/// Builds the probe matrix. Throws unless 0 <= sigma2 <= sigma1 <= 1 and |m1| = 1.
JonesMatrix make_probe(const PoincareVector& m1, double sigma1, double sigma2,
                       const std::array<double, 3>& left_angles = {0.0, 0.0, 0.0});

/// Probe with sigma = (1, 1): no polarization-dependent action.
ProbeTransform identity_probe();

enum class BankMode { ConstrainedCoplanar, Free };

/// Multi-output reference-arm metasurface, one Jones matrix per diffraction output.
///
/// In constrained-coplanar mode every output shares (sigma1, sigma2), the right
/// singular vectors m_n lie in the plane orthogonal to `normal` at equal angular
/// spacing from `azimuth0`, and sum to zero.
struct ReferenceBank {
  std::vector<JonesMatrix> outputs;
  BankMode mode = BankMode::ConstrainedCoplanar;
  double sigma1 = 1.0;
  double sigma2 = 0.3;
  PoincareVector normal{1.0, 0.0, 0.0};
  double azimuth0 = 0.0;

  std::size_t count() const { return outputs.size(); }
};

/// Orthonormal in-plane basis (e1, e2) for a unit normal: e1 is the projection of
/// the H axis (D axis when the normal is within 1e-6 of H), e2 = normal x e1.
std::array<PoincareVector, 2> plane_basis(const PoincareVector& normal);

/// Poincare vectors of the right singular vectors of a constrained bank.
std::vector<PoincareVector> coplanar_directions(const PoincareVector& normal, double azimuth0, int count);

ReferenceBank make_bank_coplanar(const PoincareVector& normal, double azimuth0, double sigma1, double sigma2,
                                 int count);

/// Unconstrained bank built from explicit output matrices.
ReferenceBank make_bank_free(std::vector<JonesMatrix> outputs);

/// Uniform amplitude scale s making the largest eigenvalue of sum_n (s M_n)^dagger (s M_n) equal to 1.
double passivity_scale(const ReferenceBank& bank);

/// sum_n Gamma_n = N (sigma1^2 + sigma2^2) / 2, identical for every reference state.
/// Throws in free mode.
double total_coincidence_constant(const ReferenceBank& bank);

std::string to_string(BankMode mode);
BankMode bank_mode_from_string(const std::string& s);

}  // namespace ghostpol
