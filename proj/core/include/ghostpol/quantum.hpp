#pragma once

#include <array>

#include "ghostpol/jones.hpp"

namespace ghostpol {

/// 4x4 complex matrix over the two-photon basis {HH, HV, VH, VV}, probe slot first.
/// Index of |probe, reference> is 2*probe + reference with H = 0, V = 1.
using Matrix4 = std::array<std::array<cplx, 4>, 4>;

Matrix4 kron(const JonesMatrix& probe, const JonesMatrix& reference);
Matrix4 multiply(const Matrix4& a, const Matrix4& b);
Matrix4 adjoint(const Matrix4& a);
cplx trace(const Matrix4& a);

/// Polarization state of the photon pair: equal HH/VV populations with coherence q/2.
struct TwoPhotonState {
  double q = 1.0;
  Matrix4 rho{};
};

/// Normalized single-photon density matrix.
struct DensityMatrix2 {
  cplx hh{0.5, 0.0};
  cplx hv{0.0, 0.0};
  cplx vh{0.0, 0.0};
  cplx vv{0.5, 0.0};

  double trace() const { return hh.real() + vv.real(); }
  /// Hermitian, unit trace and positive semidefinite within tol.
  bool is_valid(double tol = 1e-12) const;
};

/// Reference-photon state heralded by a probe detection, plus the herald probability.
struct ReducedReference {
  DensityMatrix2 rho;
  double probe_prob = 0.0;
};

struct ConditionalCoincidence {
  double gamma = 0.0;       ///< coincidence expectation conditioned on a probe click
  double joint = 0.0;       ///< unconditional joint detection probability
  double probe_prob = 0.0;  ///< probe (bucket) detection probability
};

/// Throws Error unless 0 <= q <= 1.
void check_concurrence(double q);

TwoPhotonState source_state(double q);

/// Partial trace over the probe of (T (x) 1) rho_in (T (x) 1)^dagger, then normalized.
/// Throws when the probe detection probability falls below 1e-15.
ReducedReference reduced_reference(const JonesMatrix& t_p, double q);

PoincareVector poincare_of_density(const DensityMatrix2& rho);
DensityMatrix2 density_of_poincare(const PoincareVector& p);

/// q-independent part of the transverse Poincare components:
/// 2 (T_HH T_HV* + T_VH T_VV*) / ||T||_F^2, real part along D and imaginary part along C.
cplx transverse_coherence(const JonesMatrix& t_p);

/// Poincare vector of the heralded reference state straight from the entries of T_P.
PoincareVector poincare_closed_form(const JonesMatrix& t_p, double q);

/// p_H^2 + (p_D^2 + p_C^2)/q^2 - eta^2 with the transverse part evaluated q-free.
double ellipsoid_residual(const JonesMatrix& t_p, double q);

/// tr[M rho M^dagger]
double coincidence_expectation(const DensityMatrix2& rho, const JonesMatrix& m);

/// 1/2 (s1^2 + s2^2) + 1/2 (p . m1)(s1^2 - s2^2), with m1 the Poincare vector of right1.
double coincidence_closed_form(const PoincareVector& p, const SingularDecomposition& m_svd);

/// Brute-force evaluation on the full two-photon space, no reduced-state shortcut.
ConditionalCoincidence joint_oracle(const JonesMatrix& t_p, const JonesMatrix& m, double q);

/// Polarization correlation <A(alpha) (x) B(beta)> for linear analyzers at angles alpha (probe), beta (reference).
double analyzer_correlation(const TwoPhotonState& state, double alpha, double beta);

/// CHSH parameter with probe analyzers at 0 and 45 degrees, reference analyzers at +-22.5 degrees.
double chsh_canonical(double q);

}  // namespace ghostpol
