#include "ghostpol/metasurface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ghostpol {

namespace {

void check_unit(const PoincareVector& v, const char* what) {
  if (!(std::abs(v.norm() - 1.0) <= 1e-9)) throw Error(std::string(what) + " must be a unit Poincare vector");
}

void check_singular_values(double sigma1, double sigma2) {
  if (!(sigma2 >= 0.0 && sigma2 <= sigma1 && sigma1 <= 1.0))
    throw Error("singular values must satisfy 0 <= sigma2 <= sigma1 <= 1");
}

JonesMatrix su2_from_euler(const std::array<double, 3>& a) {
  const cplx i(0.0, 1.0);
  const JonesMatrix p1 = JonesMatrix::diagonal(std::exp(i * a[0]), std::exp(-i * a[0]));
  const JonesMatrix p2 = JonesMatrix::diagonal(std::exp(i * a[2]), std::exp(-i * a[2]));
  return p1 * rotation(a[1]) * p2;
}

}  // namespace

JonesMatrix make_probe(const PoincareVector& m1, double sigma1, double sigma2,
                       const std::array<double, 3>& left_angles) {
  check_unit(m1, "m1");
  check_singular_values(sigma1, sigma2);
  const PureState v1 = pure_of_poincare(m1);
  const PureState v2{-std::conj(v1.v), std::conj(v1.h)};
  const JonesMatrix right = JonesMatrix::outer(state_h(), v1) * sigma1 + JonesMatrix::outer(state_v(), v2) * sigma2;
  return su2_from_euler(left_angles) * right;
}

JonesMatrix ProbeTransform::jones() const { return make_probe(m1, sigma1, sigma2, left_angles); }

ProbeTransform identity_probe() { return ProbeTransform{}; }

std::array<PoincareVector, 2> plane_basis(const PoincareVector& normal) {
  const PoincareVector n = normal.normalized();
  PoincareVector ref{1.0, 0.0, 0.0};
  if (std::abs(n.dot(ref)) > 1.0 - 1e-6) ref = {0.0, 1.0, 0.0};
  const PoincareVector e1 = (ref - n * n.dot(ref)).normalized();
  return {e1, n.cross(e1)};
}

std::vector<PoincareVector> coplanar_directions(const PoincareVector& normal, double azimuth0, int count) {
  const auto [e1, e2] = plane_basis(normal);
  std::vector<PoincareVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const double a = azimuth0 + 2.0 * std::numbers::pi * n / count;
    out.push_back(e1 * std::cos(a) + e2 * std::sin(a));
  }
  return out;
}

ReferenceBank make_bank_coplanar(const PoincareVector& normal, double azimuth0, double sigma1, double sigma2,
                                 int count) {
  if (count < 2 || count > 4) throw Error("reference bank output count must be 2, 3 or 4");
  check_unit(normal, "plane normal");
  check_singular_values(sigma1, sigma2);
  if (!std::isfinite(azimuth0)) throw Error("azimuth0 must be finite");

  ReferenceBank bank;
  bank.mode = BankMode::ConstrainedCoplanar;
  bank.sigma1 = sigma1;
  bank.sigma2 = sigma2;
  bank.normal = normal.normalized();
  const double turn = 2.0 * std::numbers::pi;
  bank.azimuth0 = azimuth0 - turn * std::floor(azimuth0 / turn);
  for (const PoincareVector& m : coplanar_directions(bank.normal, bank.azimuth0, count))
    bank.outputs.push_back(make_probe(m, sigma1, sigma2));
  return bank;
}

ReferenceBank make_bank_free(std::vector<JonesMatrix> outputs) {
  if (outputs.empty()) throw Error("reference bank needs at least one output");
  for (const JonesMatrix& m : outputs)
    if (!m.is_finite()) throw Error("reference bank outputs must be finite");
  ReferenceBank bank;
  bank.mode = BankMode::Free;
  bank.outputs = std::move(outputs);
  bank.sigma1 = bank.sigma2 = 0.0;
  return bank;
}

double passivity_scale(const ReferenceBank& bank) {
  JonesMatrix gram{};
  for (const JonesMatrix& m : bank.outputs) gram = gram + m.adjoint() * m;
  const double a = gram.hh.real();
  const double d = gram.vv.real();
  const double lambda_max = 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::abs(gram.hv));
  if (!(lambda_max > 0.0)) throw Error("reference bank has no transmitting output");
  return 1.0 / std::sqrt(lambda_max);
}

double total_coincidence_constant(const ReferenceBank& bank) {
  if (bank.mode != BankMode::ConstrainedCoplanar) throw Error("total coincidence is not constant in free mode");
  return 0.5 * static_cast<double>(bank.count()) * (bank.sigma1 * bank.sigma1 + bank.sigma2 * bank.sigma2);
}

std::string to_string(BankMode mode) {
  return mode == BankMode::ConstrainedCoplanar ? "constrained-coplanar" : "free";
}

BankMode bank_mode_from_string(const std::string& s) {
  if (s == "constrained-coplanar") return BankMode::ConstrainedCoplanar;
  if (s == "free") return BankMode::Free;
  throw Error("bank.mode: unknown mode \"" + s + "\" (constrained-coplanar or free)");
}

}  // namespace ghostpol
