#include "ghostpol/oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace ghostpol::oracles {

namespace {

using Mat4 = Eigen::Matrix4cd;

Mat4 to_eigen(const Matrix4& m) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

// Square root of a PSD matrix; eigenvalues within round-off of zero are clamped.
Mat4 psd_sqrt(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Eigen::Vector4d ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) ev(i) = ev(i) < 1e-14 ? 0.0 : std::sqrt(ev(i));
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd p;
  const cplx i(0.0, 1.0);
  switch (k) {
    case 0: p << 0.0, 1.0, 1.0, 0.0; break;  // X
    case 1: p << 0.0, -i, i, 0.0; break;     // Y
    default: p << 1.0, 0.0, 0.0, -1.0; break;  // Z
  }
  return p;
}

Mat4 kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace

double wootters_concurrence(const Matrix4& rho_in) {
  const Mat4 rho = to_eigen(rho_in);
  const Mat4 yy = kron2(pauli(1), pauli(1));
  const Mat4 tilde = yy * rho.conjugate() * yy;
  const Mat4 product = psd_sqrt(rho) * psd_sqrt(tilde);
  Eigen::JacobiSVD<Mat4> svd(product);
  const Eigen::Vector4d s = svd.singularValues();  // decreasing
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double chsh_optimal(const Matrix4& rho_in) {
  const Mat4 rho = to_eigen(rho_in);
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (rho * kron2(pauli(i), pauli(j))).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  const Eigen::Vector3d u = es.eigenvalues();  // increasing
  return 2.0 * std::sqrt(u(2) + u(1));
}

}  // namespace ghostpol::oracles
