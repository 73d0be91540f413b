#pragma once

// Three-register CHSH construction: block observables, the block-diagonal
// state family, its CHSH score and the exact extraction-fidelity oracle.

#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <numbers>
#include <utility>

#include "chshcert/bounds.hpp"
#include "chshcert/qubit_algebra.hpp"

namespace chshcert {

/// S = 2 + (2 sqrt 2 - 2) nu.
template <typename Scalar> Scalar chsh_score(Scalar nu) {
  detail::require(nu >= 0 && nu <= 1, "nu must lie in [0, 1]");
  return 2 + (2 * std::numbers::sqrt2_v<Scalar> - 2) * nu;
}

struct BlockLabel {
  int i = 0;
  int j = 0;

  BlockLabel() = default;
  BlockLabel(int i_, int j_) : i(i_), j(j_) {
    detail::require(i >= 0 && i <= 2 && j >= 0 && j <= 2, "block label out of range");
  }
  auto operator<=>(const BlockLabel &) const = default;
};

namespace detail {

// cos(k pi/2), sin(k pi/2) for integer k, exactly.
inline std::pair<int, int> quarter_turn(int k) {
  static constexpr int c[4] = {1, 0, -1, 0};
  static constexpr int s[4] = {0, 1, 0, -1};
  const int m = ((k % 4) + 4) % 4;
  return {c[m], s[m]};
}

} // namespace detail

/// A_1^i = cos(i pi/2) Z + sin(i pi/2) X; A_0^i = Z.
template <typename Scalar> Matrix2c<Scalar> alice_observable(int x, int i) {
  if (x == 0)
    return pauli<Scalar>(3);
  const auto [c, s] = detail::quarter_turn(i);
  return Scalar(c) * pauli<Scalar>(3) + Scalar(s) * pauli<Scalar>(1);
}

/// B_1^j = cos(j pi/2) H+ + sin(j pi/2) H-; B_0^j = H+.
template <typename Scalar> Matrix2c<Scalar> bob_observable(int y, int j) {
  if (y == 0)
    return h_plus<Scalar>();
  const auto [c, s] = detail::quarter_turn(j);
  return Scalar(c) * h_plus<Scalar>() + Scalar(s) * h_minus<Scalar>();
}

/// W^{ij} = A0 (x) (B0 + B1) + A1 (x) (B0 - B1).
template <typename Scalar> TwoQubitOperator<Scalar> block_observable(const BlockLabel &l) {
  const Matrix2c<Scalar> b0 = bob_observable<Scalar>(0, l.j);
  const Matrix2c<Scalar> b1 = bob_observable<Scalar>(1, l.j);
  return kron<Scalar>(alice_observable<Scalar>(0, l.i), b0 + b1) +
         kron<Scalar>(alice_observable<Scalar>(1, l.i), b0 - b1);
}

template <typename Scalar> std::map<BlockLabel, TwoQubitOperator<Scalar>> block_observables() {
  std::map<BlockLabel, TwoQubitOperator<Scalar>> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.emplace(BlockLabel(i, j), block_observable<Scalar>(BlockLabel(i, j)));
  return out;
}

template <typename Scalar> struct StateBlock {
  Scalar weight;
  TwoQubitOperator<Scalar> rho;
};

template <typename Scalar> using StateBlocks = std::map<BlockLabel, StateBlock<Scalar>>;

/// Product state (I + a.sigma)/2 (x) (I + b.sigma)/2.
template <typename Scalar>
TwoQubitOperator<Scalar> product_state(const BlochVector<Scalar> &a, const BlochVector<Scalar> &b) {
  return kron<Scalar>(density_from_bloch<Scalar>(a), density_from_bloch<Scalar>(b));
}

/// Blocks with zero weight are omitted.
template <typename Scalar> StateBlocks<Scalar> build_state(const StateFamilyParams<Scalar> &p) {
  validate(p);
  const Scalar r = 1 / std::numbers::sqrt2_v<Scalar>;
  const BlochVector<Scalar> z(0, 0, 1), hp(r, 0, r);
  const TwoQubitOperator<Scalar> up = product_state<Scalar>(z, hp);
  const TwoQubitOperator<Scalar> down = product_state<Scalar>(-z, hp);
  const TwoQubitOperator<Scalar> mixed21 =
      (kron<Scalar>(pauli<Scalar>(0), pauli<Scalar>(0)) +
       kron<Scalar>(pauli<Scalar>(3), h_minus<Scalar>())) /
      Scalar(4);

  const Scalar rest = 1 - p.nu;
  const std::array<std::pair<BlockLabel, StateBlock<Scalar>>, 6> all = {{
      {BlockLabel(1, 1), {p.nu, phi_plus<Scalar>()}},
      {BlockLabel(0, 0), {rest * p.p_c * p.q / 2, up}},
      {BlockLabel(0, 2), {rest * p.p_c * p.q / 2, up}},
      {BlockLabel(2, 0), {rest * p.p_c * (1 - p.q) / 2, up}},
      {BlockLabel(2, 2), {rest * p.p_c * (1 - p.q) / 2, down}},
      {BlockLabel(2, 1), {rest * (1 - p.p_c), mixed21}},
  }};
  StateBlocks<Scalar> out;
  for (const auto &[label, block] : all)
    if (block.weight > 0)
      out.emplace(label, block);
  return out;
}

/// tr(W^{ij} rho^{ij}) per block.
template <typename Scalar> std::map<BlockLabel, Scalar> block_scores(const StateBlocks<Scalar> &s) {
  std::map<BlockLabel, Scalar> out;
  for (const auto &[label, block] : s)
    out[label] = (block_observable<Scalar>(label) * block.rho).trace().real();
  return out;
}

template <typename Scalar> Scalar total_score(const StateBlocks<Scalar> &s) {
  Scalar total = 0;
  for (const auto &[label, score] : block_scores(s))
    total += s.at(label).weight * score;
  return total;
}

/// One extremal channel per register and party.
template <typename Scalar> struct Strategy {
  std::array<ExtremalChannelParams<Scalar>, 3> alice;
  std::array<ExtremalChannelParams<Scalar>, 3> bob;
};

template <typename Scalar> Strategy<Scalar> identity_strategy() {
  Strategy<Scalar> s;
  s.alice.fill(ExtremalChannelParams<Scalar>::identity());
  s.bob.fill(ExtremalChannelParams<Scalar>::identity());
  return s;
}

/// Every register discards its input and prepares |0>.
template <typename Scalar> Strategy<Scalar> discard_and_prepare_strategy() {
  Strategy<Scalar> s;
  s.alice.fill(ExtremalChannelParams<Scalar>::amplitude_damping());
  s.bob.fill(ExtremalChannelParams<Scalar>::amplitude_damping());
  return s;
}

/// sum_ij w_ij <Phi+| (L_A^i (x) L_B^j)[rho^ij] |Phi+>.
template <typename Scalar>
Scalar oracle_fidelity(const StateFamilyParams<Scalar> &p, const Strategy<Scalar> &strat) {
  std::array<KrausPair<Scalar>, 3> ka, kb;
  for (int r = 0; r < 3; ++r) {
    ka[r] = kraus_from_params(strat.alice[r]);
    kb[r] = kraus_from_params(strat.bob[r]);
  }
  Scalar f = 0;
  for (const auto &[label, block] : build_state(p))
    f += block.weight * extracted_block_fidelity(ka[label.i], kb[label.j], block.rho);
  return f;
}

template <typename Scalar> struct ReducedStrategy {
  ReducedPoint<Scalar> point;
  Branch branch;
};

/// Angles of Alice's and Bob's register-1 channels, the saturation angle of
/// Alice's register-2 channel, and the sign of lambda2^A lambda2^B.
template <typename Scalar> ReducedStrategy<Scalar> reduce_strategy(const Strategy<Scalar> &strat) {
  auto angles = [](const ExtremalChannelParams<Scalar> &c) {
    validate(c);
    const Scalar hi = std::max(c.s0, c.s1), lo = std::min(c.s0, c.s1);
    return std::pair{std::acos(std::min(hi, Scalar(1))), std::acos(std::min(lo, Scalar(1)))};
  };
  const auto [a0, a1] = angles(strat.alice[1]);
  const auto [b0, b1] = angles(strat.bob[1]);
  const auto &c2 = strat.alice[2];
  const Scalar a2 = std::abs(c2.s0 * c2.s0 - c2.s1 * c2.s1);

  const Scalar l2a = channel_singular_values(strat.alice[1].s0, strat.alice[1].s1)(1);
  const Scalar l2b = channel_singular_values(strat.bob[1].s0, strat.bob[1].s1)(1);

  ReducedStrategy<Scalar> out;
  out.point << a0, a1, b0, b1, std::acos(std::min(a2, Scalar(1)));
  out.branch = l2a * l2b >= 0 ? Branch::plus : Branch::minus;
  return out;
}

using Strategyd = Strategy<double>;
using StateBlocksd = StateBlocks<double>;

} // namespace chshcert
