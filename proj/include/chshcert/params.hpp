#pragma once

#include <numbers>

#include "chshcert/types.hpp"

namespace chshcert {

/// Block-diagonal state family: Phi+ weight nu, corner mass p_c, corner split q.
template <typename Scalar> struct StateFamilyParams {
  Scalar nu = 0;
  Scalar p_c = 0;
  Scalar q = Scalar(0.5);
};

template <typename Scalar> void validate(const StateFamilyParams<Scalar> &p) {
  detail::require(p.nu >= 0 && p.nu <= 1, "nu must lie in [0, 1]");
  detail::require(p.p_c >= 0 && p.p_c <= 1, "p_c must lie in [0, 1]");
  detail::require(p.q >= 0 && p.q <= 1, "q must lie in [0, 1]");
}

/// nu = 0.061, p_c = 0.61381508, q = 1/2: the reference example whose
/// extractability is certified to be trivial.
template <typename Scalar = double> StateFamilyParams<Scalar> reference_parameters() {
  return {Scalar(0.061), Scalar(0.61381508), Scalar(0.5)};
}

/// Sign selecting which of the two bound branches eps+ / eps- is evaluated.
enum class Branch { plus = 1, minus = -1 };

inline int sign_of(Branch b) { return b == Branch::plus ? 1 : -1; }

/// (a0t, a1t, b0t, b1t, theta): arccos of Alice's and Bob's register-1 channel
/// parameters and the saturation angle of Alice's register-2 channel.
template <typename Scalar> using ReducedPoint = Vector5<Scalar>;

enum ReducedIndex : int { kA0 = 0, kA1 = 1, kB0 = 2, kB1 = 3, kTheta = 4 };

template <typename Scalar> constexpr Scalar half_pi() {
  return std::numbers::pi_v<Scalar> / 2;
}

template <typename Scalar>
bool in_reduced_domain(const ReducedPoint<Scalar> &x, Scalar slack = Scalar(1e-12)) {
  return (x.array() >= -slack).all() && (x.array() <= half_pi<Scalar>() + slack).all();
}

template <typename Scalar> bool is_canonical(const ReducedPoint<Scalar> &x) {
  return x(kA0) <= x(kA1) && x(kB0) <= x(kB1);
}

/// The full-amplitude-damping point (0, pi/2, 0, pi/2, 0).
template <typename Scalar = double> ReducedPoint<Scalar> amplitude_damping_point() {
  return ReducedPoint<Scalar>(0, half_pi<Scalar>(), 0, half_pi<Scalar>(), 0);
}

using StateFamilyParamsd = StateFamilyParams<double>;
using ReducedPointd = ReducedPoint<double>;

} // namespace chshcert
