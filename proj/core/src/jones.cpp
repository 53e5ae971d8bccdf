#include "ghostpol/jones.hpp"

#include <algorithm>
#include <cmath>

namespace ghostpol {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Fix the global phase so the H amplitude is real non-negative (V amplitude if H vanishes).
PureState canonical_phase(const PureState& s) {
  const cplx ref = std::abs(s.h) > 1e-12 ? s.h : s.v;
  const double mag = std::abs(ref);
  if (mag == 0.0) return s;
  const cplx ph = std::conj(ref) / mag;
  return {s.h * ph, s.v * ph};
}

PureState orthogonal_complement(const PureState& s) { return {-std::conj(s.v), std::conj(s.h)}; }

PureState scaled(const PureState& s, cplx f) { return {s.h * f, s.v * f}; }

}  // namespace

PureState PureState::normalized() const {
  const double n = std::sqrt(norm_sq());
  if (n == 0.0) throw Error("cannot normalize the zero state");
  return {h / n, v / n};
}

cplx inner(const PureState& a, const PureState& b) { return std::conj(a.h) * b.h + std::conj(a.v) * b.v; }

PureState state_h() { return {1.0, 0.0}; }
PureState state_v() { return {0.0, 1.0}; }
PureState state_d() { return {kInvSqrt2, kInvSqrt2}; }
PureState state_r() { return {kInvSqrt2, cplx(0.0, -kInvSqrt2)}; }

double PoincareVector::norm() const { return std::sqrt(h * h + d * d + c * c); }

PoincareVector PoincareVector::cross(const PoincareVector& o) const {
  return {d * o.c - c * o.d, c * o.h - h * o.c, h * o.d - d * o.h};
}

PoincareVector PoincareVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error("cannot normalize the zero Poincare vector");
  return *this * (1.0 / n);
}

JonesMatrix JonesMatrix::projector(const PureState& s) { return outer(s, s); }

JonesMatrix JonesMatrix::outer(const PureState& out, const PureState& in) {
  return {out.h * std::conj(in.h), out.h * std::conj(in.v), out.v * std::conj(in.h), out.v * std::conj(in.v)};
}

JonesMatrix JonesMatrix::operator*(const JonesMatrix& o) const {
  return {hh * o.hh + hv * o.vh, hh * o.hv + hv * o.vv, vh * o.hh + vv * o.vh, vh * o.hv + vv * o.vv};
}

JonesMatrix JonesMatrix::operator+(const JonesMatrix& o) const {
  return {hh + o.hh, hv + o.hv, vh + o.vh, vv + o.vv};
}

JonesMatrix JonesMatrix::operator-(const JonesMatrix& o) const {
  return {hh - o.hh, hv - o.hv, vh - o.vh, vv - o.vv};
}

JonesMatrix JonesMatrix::operator*(cplx s) const { return {hh * s, hv * s, vh * s, vv * s}; }

PureState JonesMatrix::apply(const PureState& s) const { return {hh * s.h + hv * s.v, vh * s.h + vv * s.v}; }

JonesMatrix JonesMatrix::adjoint() const { return {std::conj(hh), std::conj(vh), std::conj(hv), std::conj(vv)}; }

double JonesMatrix::frobenius_sq() const { return std::norm(hh) + std::norm(hv) + std::norm(vh) + std::norm(vv); }

bool JonesMatrix::is_finite() const {
  for (const cplx& z : {hh, hv, vh, vv}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double frobenius_distance(const JonesMatrix& a, const JonesMatrix& b) { return std::sqrt((a - b).frobenius_sq()); }

JonesMatrix compose(const JonesMatrix& a, const JonesMatrix& b) { return a * b; }

JonesMatrix rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c};
}

JonesMatrix rotate(const JonesMatrix& j, double theta) { return rotation(theta) * j * rotation(-theta); }

JonesMatrix SingularDecomposition::reconstruct() const {
  return JonesMatrix::outer(left1, right1) * sigma1 + JonesMatrix::outer(left2, right2) * sigma2;
}

SingularDecomposition svd2(const JonesMatrix& a) {
  // Gram matrix G = A^dagger A.
  const double g_hh = std::norm(a.hh) + std::norm(a.vh);
  const double g_vv = std::norm(a.hv) + std::norm(a.vv);
  const cplx g_hv = std::conj(a.hh) * a.hv + std::conj(a.vh) * a.vv;
  const double trace = g_hh + g_vv;
  const double half_diff = 0.5 * (g_hh - g_vv);
  const double disc = std::hypot(half_diff, std::abs(g_hv));

  SingularDecomposition out;
  if (trace == 0.0) {
    out.left1 = out.right1 = state_h();
    out.left2 = out.right2 = state_v();
    return out;
  }

  if (disc <= 1e-13 * trace) {
    out.right1 = state_h();
    out.right2 = state_v();
    out.sigma1 = out.sigma2 = std::sqrt(0.5 * trace);
    const PureState col_h = a.apply(state_h());
    const double n1 = std::sqrt(col_h.norm_sq());
    out.left1 = n1 > 0.0 ? scaled(col_h, 1.0 / n1) : state_h();
    const PureState comp = orthogonal_complement(out.left1);
    const cplx overlap = inner(comp, a.apply(state_v()));
    out.left2 = std::abs(overlap) > 0.0 ? scaled(comp, overlap / std::abs(overlap)) : comp;
    return out;
  }

  // Dominant eigenvector of G from whichever row is better conditioned.
  PureState v1 = half_diff >= 0.0 ? PureState{disc + half_diff, std::conj(g_hv)} : PureState{g_hv, disc - half_diff};
  v1 = canonical_phase(v1.normalized());
  const PureState v2 = canonical_phase(orthogonal_complement(v1));

  const PureState av1 = a.apply(v1);
  out.sigma1 = std::sqrt(av1.norm_sq());
  out.right1 = v1;
  out.right2 = v2;
  out.left1 = scaled(av1, 1.0 / out.sigma1);
  const PureState comp = orthogonal_complement(out.left1);
  const cplx overlap = inner(comp, a.apply(v2));
  out.sigma2 = std::min(std::abs(overlap), out.sigma1);
  out.left2 = std::abs(overlap) > 0.0 ? scaled(comp, overlap / std::abs(overlap)) : comp;
  return out;
}

PoincareVector poincare_of_pure(const PureState& s) {
  const cplx coherence = s.h * std::conj(s.v);
  return {std::norm(s.h) - std::norm(s.v), 2.0 * coherence.real(), 2.0 * coherence.imag()};
}

PureState pure_of_poincare(const PoincareVector& p) {
  const PoincareVector u = p.normalized();
  const double polar = std::acos(std::clamp(u.h, -1.0, 1.0));
  const double azimuth = std::atan2(-u.c, u.d);
  return {std::cos(0.5 * polar), std::polar(std::sin(0.5 * polar), azimuth)};
}

double eta(const JonesMatrix& j) {
  const SingularDecomposition s = svd2(j);
  const double s1 = s.sigma1 * s.sigma1;
  const double s2 = s.sigma2 * s.sigma2;
  if (s1 + s2 == 0.0) throw Error("degenerate transformation: zero Jones matrix");
  return (s1 - s2) / (s1 + s2);
}

}  // namespace ghostpol
