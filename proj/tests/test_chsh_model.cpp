#include <doctest.h>

#include <random>

#include "chshcert/chsh_model.hpp"
#include "chshcert/sampling.hpp"
#include "oracles.hpp"

using namespace chshcert;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kR = 1 / kSqrt2;

template <typename Derived> double max_abs(const Eigen::MatrixBase<Derived> &m) { return m.cwiseAbs().maxCoeff(); }

Strategyd random_strategy(std::mt19937_64 &rng) {
  Strategyd s;
  for (int r = 0; r < 3; ++r) {
    s.alice[r] = random_extremal_params<double>(rng);
    s.bob[r] = random_extremal_params<double>(rng);
  }
  return s;
}

} // namespace

TEST_CASE("chsh_score") {
  CHECK(chsh_score(0.0) == 2);
  CHECK(chsh_score(1.0) == doctest::Approx(2 * kSqrt2).epsilon(1e-15));
  CHECK(chsh_score(0.061) == doctest::Approx(2.050534).epsilon(1e-6));
  CHECK_THROWS_AS(chsh_score(1.5), InvalidParameter);
  CHECK_THROWS_AS(chsh_score(-0.1), InvalidParameter);
}

TEST_CASE("block labels are range checked and ordered") {
  CHECK_THROWS_AS(BlockLabel(3, 0), InvalidParameter);
  CHECK_THROWS_AS(BlockLabel(0, -1), InvalidParameter);
  CHECK(BlockLabel(0, 2) < BlockLabel(1, 0));
}

TEST_CASE("block observables") {
  const auto w = block_observables<double>();
  REQUIRE(w.size() == 9);
  const auto X = pauli<double>(1), Z = pauli<double>(3);
  const auto hp = h_plus<double>(), hm = h_minus<double>();
  const TwoQubitOperatord zhp = 2.0 * kron<double>(Z, hp);
  CHECK(max_abs(w.at({1, 1}) - kSqrt2 * (kron<double>(X, X) + kron<double>(Z, Z))) < 1e-15);
  CHECK(max_abs(w.at({0, 0}) - zhp) < 1e-15);
  CHECK(max_abs(w.at({0, 1}) - zhp) < 1e-15);
  CHECK(max_abs(w.at({0, 2}) - zhp) < 1e-15);
  CHECK(max_abs(w.at({1, 0}) - zhp) < 1e-15);
  CHECK(max_abs(w.at({1, 2}) - 2.0 * kron<double>(X, hp)) < 1e-15);
  CHECK(max_abs(w.at({2, 0}) - zhp) < 1e-15);
  CHECK(max_abs(w.at({2, 1}) - 2.0 * kron<double>(Z, hm)) < 1e-15);
  CHECK(max_abs(w.at({2, 2}) + zhp) < 1e-15);
}

TEST_CASE("build_state") {
  const auto only_phi = build_state<double>({1, 0.3, 0.5});
  REQUIRE(only_phi.size() == 1);
  CHECK(only_phi.begin()->first == BlockLabel(1, 1));
  CHECK(max_abs(only_phi.begin()->second.rho - phi_plus<double>()) < 1e-16);

  const auto s = build_state(reference_parameters<double>());
  REQUIRE(s.size() == 6);
  CHECK(s.at({0, 0}).weight == doctest::Approx(0.939 * 0.61381508 * 0.25).epsilon(1e-14));
  CHECK(s.at({0, 0}).weight == doctest::Approx(0.144093).epsilon(1e-6));
  double total = 0;
  for (const auto &[l, b] : s) {
    total += b.weight;
    CHECK(b.weight >= 0);
    CHECK(is_valid_state(b.rho));
  }
  CHECK(std::abs(total - 1) < 1e-12);
  CHECK_THROWS_AS(build_state<double>({0.5, 1.2, 0.5}), InvalidParameter);
}

TEST_CASE("block score contributions") {
  const auto scores = block_scores(build_state(reference_parameters<double>()));
  CHECK(std::abs(scores.at({1, 1}) - 2 * kSqrt2) < 1e-12);
  for (BlockLabel l : {BlockLabel(0, 0), BlockLabel(0, 2), BlockLabel(2, 0), BlockLabel(2, 2), BlockLabel(2, 1)})
    CHECK(std::abs(scores.at(l) - 2) < 1e-12);
}

TEST_CASE("score is independent of p_c and q") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int t = 0; t < 100; ++t) {
    const StateFamilyParamsd p{unit(rng), unit(rng), unit(rng)};
    CHECK(std::abs(total_score(build_state(p)) - chsh_score(p.nu)) < 1e-12);
  }
}

TEST_CASE("dense 36x36 assembly reproduces the block score") {
  const auto w = oracle::dense_chsh_operator();
  CHECK((w - w.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  for (const StateFamilyParamsd p : {reference_parameters<double>(), StateFamilyParamsd{0.4, 0.2, 0.9}}) {
    const auto s = build_state(p);
    const auto rho = oracle::dense_state(s);
    CHECK(std::abs(rho.trace().real() - 1) < 1e-12);
    CHECK(std::abs((w * rho).trace().real() - total_score(s)) < 1e-12);
  }
}

TEST_CASE("oracle fidelity examples") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int t = 0; t < 50; ++t) {
    const StateFamilyParamsd p{unit(rng), unit(rng), unit(rng)};
    CHECK(oracle_fidelity(p, discard_and_prepare_strategy<double>()) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }
  const auto p = reference_parameters<double>();
  const double up = 0.25 * (1 + kR), down = 0.25 * (1 - kR);
  const double rest = 1 - p.nu;
  const double expected = p.nu + rest * p.p_c * (0.75 * up + 0.25 * down) + rest * (1 - p.p_c) * up;
  const double f = oracle_fidelity(p, identity_strategy<double>());
  CHECK(std::abs(f - expected) < 1e-12);
  CHECK(f == doctest::Approx(0.411).epsilon(1e-3));
  CHECK(oracle_fidelity<double>({1, 0.5, 0.5}, identity_strategy<double>()) ==
        doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("reduce_strategy examples") {
  auto s = identity_strategy<double>();
  auto r = reduce_strategy(s);
  CHECK(r.point.head<4>().norm() < 1e-7);
  CHECK(r.point(kTheta) == doctest::Approx(M_PI / 2));
  CHECK(r.branch == Branch::plus);

  s.alice[1] = ExtremalChannelParamsd::amplitude_damping();
  r = reduce_strategy(s);
  CHECK(r.point(kA0) == doctest::Approx(0));
  CHECK(r.point(kA1) == doctest::Approx(M_PI / 2));

  s.alice[2].s0 = 0.8;
  s.alice[2].s1 = 0.8;
  CHECK(reduce_strategy(s).point(kTheta) == doctest::Approx(M_PI / 2));

  // s1 > s0 is reordered so that a0t <= a1t.
  s.bob[1].s0 = 0.2;
  s.bob[1].s1 = 0.9;
  r = reduce_strategy(s);
  CHECK(r.point(kB0) == doctest::Approx(std::acos(0.9)));
  CHECK(r.point(kB1) == doctest::Approx(std::acos(0.2)));
  CHECK(is_canonical(r.point));
}

TEST_CASE("dominance: oracle fidelity never exceeds the bound") {
  const auto p = reference_parameters<double>();
  std::mt19937_64 rng(31);
  int violations = 0, branch_violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto s = random_strategy(rng);
    const double lhs = 4 * oracle_fidelity(p, s) - 1;
    const auto r = reduce_strategy(s);
    violations += lhs > epsilon_rho_max(r.point, p) + 1e-9;
    branch_violations += lhs > epsilon_rho(r.point, p, r.branch) + 1e-9;
  }
  CHECK(violations == 0);
  CHECK(branch_violations == 0);
}
