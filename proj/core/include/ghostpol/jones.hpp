#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ghostpol {

using cplx = std::complex<double>;

/// Error raised for invalid arguments, schema violations and degenerate inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polarization ket c_H|H> + c_V|V>.
struct PureState {
  cplx h{1.0, 0.0};
  cplx v{0.0, 0.0};

  double norm_sq() const { return std::norm(h) + std::norm(v); }
  PureState normalized() const;
};

/// <a|b>
cplx inner(const PureState& a, const PureState& b);

PureState state_h();
PureState state_v();
/// (|H> + |V>)/sqrt(2)
PureState state_d();
/// (|H> - i|V>)/sqrt(2), the +C pole of the Poincare sphere.
PureState state_r();

/// Point on or inside the Poincare sphere, components along the H, D and C axes.
struct PoincareVector {
  double h = 0.0;
  double d = 0.0;
  double c = 0.0;

  double norm() const;
  double dot(const PoincareVector& o) const { return h * o.h + d * o.d + c * o.c; }
  PoincareVector cross(const PoincareVector& o) const;
  PoincareVector operator+(const PoincareVector& o) const { return {h + o.h, d + o.d, c + o.c}; }
  PoincareVector operator-(const PoincareVector& o) const { return {h - o.h, d - o.d, c - o.c}; }
  PoincareVector operator*(double s) const { return {h * s, d * s, c * s}; }
  PoincareVector normalized() const;
};

/// 2x2 polarization transfer matrix. Entry t_kl = <k|J|l> (row = output, column = input).
struct JonesMatrix {
  cplx hh{0.0, 0.0};
  cplx hv{0.0, 0.0};
  cplx vh{0.0, 0.0};
  cplx vv{0.0, 0.0};

  static JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static JonesMatrix diagonal(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }
  /// |s><s|
  static JonesMatrix projector(const PureState& s);
  /// |out><in|
  static JonesMatrix outer(const PureState& out, const PureState& in);

  JonesMatrix operator*(const JonesMatrix& o) const;
  JonesMatrix operator+(const JonesMatrix& o) const;
  JonesMatrix operator-(const JonesMatrix& o) const;
  JonesMatrix operator*(cplx s) const;
  PureState apply(const PureState& s) const;
  JonesMatrix adjoint() const;
  cplx determinant() const { return hh * vv - hv * vh; }
  double frobenius_sq() const;
  bool is_finite() const;

  bool operator==(const JonesMatrix&) const = default;
};

/// Frobenius norm of a - b.
double frobenius_distance(const JonesMatrix& a, const JonesMatrix& b);

/// Standard matrix product a*b (b acts first).
JonesMatrix compose(const JonesMatrix& a, const JonesMatrix& b);

/// Counterclockwise rotation R(theta) = [[cos, -sin], [sin, cos]].
JonesMatrix rotation(double theta);

/// Element physically rotated by theta: R(theta) J R(-theta).
JonesMatrix rotate(const JonesMatrix& j, double theta);

/// J = sigma1 |left1><right1| + sigma2 |left2><right2|.
///
/// Right vectors carry a real non-negative H amplitude (V amplitude when the H
/// amplitude vanishes). When sigma1 == sigma2 the right basis is {|H>, |V>}.
struct SingularDecomposition {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  PureState left1, left2, right1, right2;

  JonesMatrix reconstruct() const;
};

SingularDecomposition svd2(const JonesMatrix& j);

/// Poincare vector [tr(rho Z), tr(rho X), -tr(rho Y)] of rho = |s><s|.
PoincareVector poincare_of_pure(const PureState& s);

/// Inverse of poincare_of_pure for a unit vector; H amplitude real non-negative.
PureState pure_of_poincare(const PoincareVector& p);

/// (sigma1^2 - sigma2^2) / (sigma1^2 + sigma2^2). Throws for the zero matrix.
double eta(const JonesMatrix& j);

}  // namespace ghostpol
