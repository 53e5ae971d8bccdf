#include "ghostpol/quantum.hpp"

#include <cmath>
#include <numbers>

namespace ghostpol {

namespace {

constexpr double kMinProbeProb = 1e-15;

cplx entry(const JonesMatrix& j, int row, int col) {
  if (row == 0) return col == 0 ? j.hh : j.hv;
  return col == 0 ? j.vh : j.vv;
}

// Linear analyzer observable cos(2a) Z + sin(2a) X.
JonesMatrix linear_analyzer(double angle) {
  const double c = std::cos(2.0 * angle);
  const double s = std::sin(2.0 * angle);
  return {c, s, s, -c};
}

}  // namespace

Matrix4 kron(const JonesMatrix& probe, const JonesMatrix& reference) {
  Matrix4 out{};
  for (int pr = 0; pr < 2; ++pr)
    for (int pc = 0; pc < 2; ++pc)
      for (int rr = 0; rr < 2; ++rr)
        for (int rc = 0; rc < 2; ++rc)
          out[2 * pr + rr][2 * pc + rc] = entry(probe, pr, pc) * entry(reference, rr, rc);
  return out;
}

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      if (a[i][k] == cplx{}) continue;
      for (int j = 0; j < 4; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

Matrix4 adjoint(const Matrix4& a) {
  Matrix4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = std::conj(a[j][i]);
  return out;
}

cplx trace(const Matrix4& a) { return a[0][0] + a[1][1] + a[2][2] + a[3][3]; }

bool DensityMatrix2::is_valid(double tol) const {
  if (std::abs(hv - std::conj(vh)) > tol) return false;
  if (std::abs(hh.imag()) > tol || std::abs(vv.imag()) > tol) return false;
  if (std::abs(trace() - 1.0) > tol) return false;
  // 2x2 Hermitian PSD <=> both eigenvalues >= 0 <=> trace >= 0 and det >= 0.
  const double det = hh.real() * vv.real() - std::norm(hv);
  return det >= -tol && hh.real() >= -tol && vv.real() >= -tol;
}

void check_concurrence(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("concurrence q must lie in [0, 1], got " + std::to_string(q));
}

TwoPhotonState source_state(double q) {
  check_concurrence(q);
  TwoPhotonState s;
  s.q = q;
  s.rho[0][0] = 0.5;
  s.rho[3][3] = 0.5;
  s.rho[0][3] = 0.5 * q;
  s.rho[3][0] = 0.5 * q;
  return s;
}

ReducedReference reduced_reference(const JonesMatrix& t_p, double q) {
  const TwoPhotonState in = source_state(q);
  const Matrix4 op = kron(t_p, JonesMatrix::identity());
  const Matrix4 out = multiply(multiply(op, in.rho), adjoint(op));

  // Partial trace over the probe slot.
  cplx r[2][2]{};
  for (int p = 0; p < 2; ++p)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) r[a][b] += out[2 * p + a][2 * p + b];

  const double tr = r[0][0].real() + r[1][1].real();
  if (!(tr >= kMinProbeProb)) throw Error("zero probe detection probability");

  ReducedReference res;
  res.probe_prob = tr;
  res.rho = {r[0][0] / tr, r[0][1] / tr, r[1][0] / tr, r[1][1] / tr};
  return res;
}

PoincareVector poincare_of_density(const DensityMatrix2& rho) {
  // tr(rho Z), tr(rho X) = 2 Re rho_HV, -tr(rho Y) = 2 Im rho_HV.
  const cplx coh = 0.5 * (rho.hv + std::conj(rho.vh));
  return {rho.hh.real() - rho.vv.real(), 2.0 * coh.real(), 2.0 * coh.imag()};
}

DensityMatrix2 density_of_poincare(const PoincareVector& p) {
  const cplx coh(0.5 * p.d, 0.5 * p.c);
  return {0.5 * (1.0 + p.h), coh, std::conj(coh), 0.5 * (1.0 - p.h)};
}

cplx transverse_coherence(const JonesMatrix& t) {
  const double fro = t.frobenius_sq();
  if (!(fro > 0.0)) throw Error("degenerate transformation: zero Jones matrix");
  return 2.0 * (t.hh * std::conj(t.hv) + t.vh * std::conj(t.vv)) / fro;
}

PoincareVector poincare_closed_form(const JonesMatrix& t, double q) {
  check_concurrence(q);
  const double fro = t.frobenius_sq();
  if (!(fro > 0.0)) throw Error("degenerate transformation: zero Jones matrix");
  const double p_h = (std::norm(t.hh) + std::norm(t.vh) - std::norm(t.vv) - std::norm(t.hv)) / fro;
  const cplx coh = transverse_coherence(t);
  return {p_h, q * coh.real(), q * coh.imag()};
}

double ellipsoid_residual(const JonesMatrix& t, double q) {
  const PoincareVector p = poincare_closed_form(t, q);
  const cplx coh = transverse_coherence(t);
  const double e = eta(t);
  return p.h * p.h + std::norm(coh) - e * e;
}

double coincidence_expectation(const DensityMatrix2& rho, const JonesMatrix& m) {
  // tr[M rho M^dagger] = sum_k <k|M rho M^dagger|k>
  const JonesMatrix r{rho.hh, rho.hv, rho.vh, rho.vv};
  const JonesMatrix out = m * r * m.adjoint();
  return out.hh.real() + out.vv.real();
}

double coincidence_closed_form(const PoincareVector& p, const SingularDecomposition& m_svd) {
  const double s1 = m_svd.sigma1 * m_svd.sigma1;
  const double s2 = m_svd.sigma2 * m_svd.sigma2;
  const PoincareVector m1 = poincare_of_pure(m_svd.right1);
  return 0.5 * (s1 + s2) + 0.5 * p.dot(m1) * (s1 - s2);
}

ConditionalCoincidence joint_oracle(const JonesMatrix& t_p, const JonesMatrix& m, double q) {
  const TwoPhotonState in = source_state(q);
  const Matrix4 herald = kron(t_p, JonesMatrix::identity());
  const Matrix4 both = kron(t_p, m);
  const double probe_prob = trace(multiply(multiply(herald, in.rho), adjoint(herald))).real();
  if (!(probe_prob >= kMinProbeProb)) throw Error("zero probe detection probability");
  ConditionalCoincidence out;
  out.probe_prob = probe_prob;
  out.joint = trace(multiply(multiply(both, in.rho), adjoint(both))).real();
  out.gamma = out.joint / probe_prob;
  return out;
}

double analyzer_correlation(const TwoPhotonState& state, double alpha, double beta) {
  const Matrix4 obs = kron(linear_analyzer(alpha), linear_analyzer(beta));
  return trace(multiply(state.rho, obs)).real();
}

double chsh_canonical(double q) {
  const TwoPhotonState s = source_state(q);
  constexpr double a0 = 0.0;
  constexpr double a1 = std::numbers::pi / 4.0;
  constexpr double b0 = std::numbers::pi / 8.0;
  constexpr double b1 = -std::numbers::pi / 8.0;
  return analyzer_correlation(s, a0, b0) + analyzer_correlation(s, a0, b1) + analyzer_correlation(s, a1, b0) -
         analyzer_correlation(s, a1, b1);
}

}  // namespace ghostpol
