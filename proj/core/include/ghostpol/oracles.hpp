#pragma once

#include "ghostpol/quantum.hpp"

namespace ghostpol::oracles {

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), where l_i are the singular values of
/// sqrt(rho) sqrt(rho~) in decreasing order and rho~ = (Y x Y) rho* (Y x Y).
double wootters_concurrence(const Matrix4& rho);

/// Maximum CHSH value over analyzer settings: 2 sqrt(u1 + u2) with u1, u2 the two largest
/// eigenvalues of T^T T, T_ij = tr(rho sigma_i x sigma_j).
double chsh_optimal(const Matrix4& rho);

}  // namespace ghostpol::oracles
