#pragma once

// Independent reference computations used only by the tests.

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "chshcert/chsh_model.hpp"

namespace oracle {

using namespace chshcert;
using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;
using Matrix36c = Eigen::Matrix<std::complex<double>, 36, 36>;

/// sum_i |i><i| (x) O_i on C^3 (x) C^2.
inline Matrix6c block_diag(int x, bool alice) {
  Matrix6c m = Matrix6c::Zero();
  for (int r = 0; r < 3; ++r)
    m.block<2, 2>(2 * r, 2 * r) = alice ? alice_observable<double>(x, r) : bob_observable<double>(x, r);
  return m;
}

inline Matrix36c dense_chsh_operator() {
  const Matrix6c a0 = block_diag(0, true), a1 = block_diag(1, true);
  const Matrix6c b0 = block_diag(0, false), b1 = block_diag(1, false);
  const Matrix6c bp = b0 + b1, bm = b0 - b1;
  return Eigen::kroneckerProduct(a0, bp).eval() + Eigen::kroneckerProduct(a1, bm).eval();
}

/// Embeds each two-qubit block at registers (i, j); basis index (2i+a)*6 + (2j+b).
inline Matrix36c dense_state(const StateBlocksd &s) {
  Matrix36c rho = Matrix36c::Zero();
  for (const auto &[l, blk] : s)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2)
            rho((2 * l.i + a) * 6 + 2 * l.j + b, (2 * l.i + a2) * 6 + 2 * l.j + b2) =
                blk.weight * blk.rho(2 * a + b, 2 * a2 + b2);
  return rho;
}

/// Closed-form + branch partials for a0t, a1t, b0t and theta.
inline Vector4<double> nominal_plus_partials(const ReducedPointd &x, const StateFamilyParamsd &p) {
  using std::cos, std::sin;
  const double a0 = x(0), a1 = x(1), b0 = x(2), b1 = x(3), t = x(4), nu = p.nu, pc = p.p_c;
  Vector4<double> g;
  g(0) = -nu * (2 * sin(a0) * cos(a1) * cos(b0) * cos(b1) - 2 * cos(a0) * sin(a1) * sin(b0) * sin(b1) +
                sin(2 * a0) * cos(2 * b0));
  g(1) = -nu * (2 * cos(a0) * sin(a1) * cos(b0) * cos(b1) - 2 * sin(a0) * cos(a1) * sin(b0) * sin(b1) +
                sin(2 * a1) * cos(2 * b1));
  g(2) = -nu * (2 * cos(a0) * cos(a1) * sin(b0) * cos(b1) - 2 * sin(a0) * sin(a1) * cos(b0) * sin(b1) +
                cos(2 * a0) * sin(2 * b0)) +
         (nu - 1) * (1 - pc) * (sin(t) * sin(b0 - b1) + sin(2 * b0) * cos(t));
  g(3) = (1 - nu) * ((1 - pc) * (sin(t) * sin(b0 - b1) * sin(b0 + b1) + cos(t) * cos(b0 - b1)) -
                     pc * sin(t / 2) / 2);
  return g;
}

} // namespace oracle
