#include <doctest.h>

#include <random>

#include "chshcert/bounds.hpp"
#include "chshcert/qubit_algebra.hpp"
#include "oracles.hpp"

using namespace chshcert;

namespace {

const double kHalfPi = M_PI / 2;

ReducedPointd random_point(std::mt19937_64 &rng, double lo = 0, double hi = kHalfPi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return ReducedPointd(u(rng), u(rng), u(rng), u(rng), u(rng));
}

ReducedPointd random_canonical_point(std::mt19937_64 &rng) {
  ReducedPointd x = random_point(rng);
  if (x(kA0) > x(kA1))
    std::swap(x(kA0), x(kA1));
  if (x(kB0) > x(kB1))
    std::swap(x(kB0), x(kB1));
  return x;
}

ReducedPointd random_cube_point(std::mt19937_64 &rng) {
  const auto cube = excluded_cube<double>();
  std::uniform_real_distribution<double> u(0, 1);
  ReducedPointd x;
  for (int i = 0; i < 5; ++i)
    x(i) = cube.lower(i) + u(rng) * (cube.upper(i) - cube.lower(i));
  return x;
}

} // namespace

TEST_CASE("epsilon_corner") {
  CHECK(epsilon_corner(0.5, 0.0, 1.0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(epsilon_corner(1.0, 0.3, 0.4) == doctest::Approx(1));
  CHECK(epsilon_corner(0.5, 1.0, 0.0) == doctest::Approx(1));
  CHECK_THROWS_AS(epsilon_corner(0.5, 0.9, 0.9), InvalidParameter);
  CHECK_THROWS_AS(epsilon_corner(1.2, 0.1, 0.1), InvalidParameter);
  CHECK_THROWS_AS(epsilon_corner(0.5, -0.1, 0.1), InvalidParameter);
}

TEST_CASE("q = 1/2 minimises the saturated corner bound") {
  for (int it = 0; it <= 100; ++it) {
    const double th = kHalfPi * it / 100;
    const double at_half = std::sqrt(1 - std::pow(std::sin(th / 2), 2));
    CHECK(epsilon_corner(0.5, std::cos(th), std::sin(th)) == doctest::Approx(std::cos(th / 2)).epsilon(1e-14));
    for (int k = 0; k <= 100; ++k) {
      const double q = k / 100.0;
      const double v = std::sqrt(1 - 4 * q * (1 - q) * std::pow(std::sin(th / 2), 2));
      CHECK(v >= at_half - 1e-15);
      CHECK(epsilon_corner(q, std::cos(th), std::sin(th)) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("epsilon_21") {
  CHECK(epsilon_21(1.0, 1.0, 0.0, 0.3) == 1);
  CHECK(epsilon_21(0.0, 0.4, 1.0, 1.0) == 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1), a(0, kHalfPi);
  for (int t = 0; t < 100; ++t) {
    const double th = a(rng), b1 = u(rng), s = u(rng);
    CHECK(epsilon_21(std::cos(th), b1, std::sin(th), s) ==
          doctest::Approx(std::cos(th) * b1 + std::sin(th) * s).epsilon(1e-15));
  }
  CHECK_THROWS_AS(epsilon_21(0.9, 0.5, 0.9, 0.5), InvalidParameter);
  CHECK_THROWS_AS(epsilon_21(0.5, 1.5, 0.5, 0.5), InvalidParameter);
}

TEST_CASE("epsilon_phi") {
  const Eigen::Vector3d ones = Eigen::Vector3d::Ones(), zeros = Eigen::Vector3d::Zero();
  CHECK(epsilon_phi(0.0, 0.0, ones, ones) == 3);
  CHECK(epsilon_phi(1.0, 1.0, zeros, zeros) == 1);
  CHECK_THROWS_AS(epsilon_phi(0.0, 0.0, Eigen::Vector3d(0.1, 0.5, 0.0), ones), InvalidParameter);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    const double s0a = u(rng), s1a = u(rng), s0b = u(rng), s1b = u(rng);
    const auto la = channel_singular_values(s0a, s1a), lb = channel_singular_values(s0b, s1b);
    const double a1 = std::abs(s0a * s0a - s1a * s1a), b1 = std::abs(s0b * s0b - s1b * s1b);
    const double direct = a1 * b1 + std::abs(la(0) * lb(0)) + std::abs(la(1) * lb(1)) + std::abs(la(2) * lb(2));
    CHECK(std::abs(epsilon_phi(a1, b1, la, lb) - direct) < 1e-12);
  }
}

TEST_CASE("epsilon_rho at the amplitude-damping point") {
  const auto p = reference_parameters<double>();
  const auto x = amplitude_damping_point<double>();
  CHECK(std::abs(epsilon_rho(x, p, Branch::plus) - 1) <= 1e-12);
  CHECK(std::abs(epsilon_rho_max(x, p) - 1) <= 1e-12);
  // Same evaluation order, same bits.
  CHECK(epsilon_rho(x, p, Branch::plus) == epsilon_rho(x, p, Branch::plus));
  CHECK_THROWS_AS(epsilon_rho(ReducedPointd(0, 2, 0, 0, 0), p, Branch::plus), InvalidParameter);
}

TEST_CASE("epsilon_rho with nu = 0") {
  const StateFamilyParamsd p{0, 0.4, 0.5};
  std::mt19937_64 rng(4);
  for (int t = 0; t < 1000; ++t)
    CHECK(epsilon_rho(random_point(rng), p, Branch::plus) <= 1 + 1e-12);
  CHECK(epsilon_rho(ReducedPointd(0.3, 0.7, 0, kHalfPi, 0), p, Branch::plus) == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("compositional identity") {
  const auto p = reference_parameters<double>();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10000; ++t) {
    const auto x = random_canonical_point(rng);
    const double s0a = std::cos(x(kA0)), s1a = std::cos(x(kA1));
    const double s0b = std::cos(x(kB0)), s1b = std::cos(x(kB1));
    const auto la = channel_singular_values(s0a, s1a), lb = channel_singular_values(s0b, s1b);
    const double a1 = s0a * s0a - s1a * s1a, b1 = s0b * s0b - s1b * s1b;
    const double th = x(kTheta);
    const double composed =
        p.nu * epsilon_phi(a1, b1, la, lb) +
        (1 - p.nu) * p.p_c * epsilon_corner(0.5, std::cos(th), std::sin(th)) +
        (1 - p.nu) * (1 - p.p_c) * epsilon_21(std::cos(th), b1, std::sin(th), lb(0));
    CHECK(std::abs(epsilon_rho_max(x, p) - composed) < 1e-12);
    const Branch own = la(1) * lb(1) >= 0 ? Branch::plus : Branch::minus;
    CHECK(epsilon_rho(x, p, own) <= epsilon_rho_max(x, p) + 1e-15);
  }
}

TEST_CASE("gradient matches finite differences and the nominal + branch") {
  const auto p = reference_parameters<double>();
  std::mt19937_64 rng(6);
  const double h = 1e-6;
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_point(rng, 0.01, kHalfPi - 0.01);
    for (Branch b : {Branch::plus, Branch::minus}) {
      const auto g = grad_epsilon_rho(x, p, b);
      for (int i = 0; i < 5; ++i) {
        ReducedPointd up = x, dn = x;
        up(i) += h;
        dn(i) -= h;
        const double fd = (epsilon_rho(up, p, b) - epsilon_rho(dn, p, b)) / (2 * h);
        CHECK(std::abs(g(i) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
    const auto g = grad_epsilon_rho(x, p, Branch::plus);
    const auto nominal = oracle::nominal_plus_partials(x, p);
    CHECK(std::abs(g(kA0) - nominal(0)) < 1e-12);
    CHECK(std::abs(g(kA1) - nominal(1)) < 1e-12);
    CHECK(std::abs(g(kB0) - nominal(2)) < 1e-12);
    CHECK(std::abs(g(kTheta) - nominal(3)) < 1e-12);
  }
}

TEST_CASE("gradient at the amplitude-damping point points outward") {
  const auto p = reference_parameters<double>();
  const auto x = amplitude_damping_point<double>();
  for (Branch b : {Branch::plus, Branch::minus}) {
    const auto g = grad_epsilon_rho(x, p, b);
    // Coordinates at 0 may only decrease the value going inward, those at pi/2
    // only increase it toward the boundary.
    CHECK(g(kA0) <= 1e-12);
    CHECK(g(kB0) <= 1e-12);
    CHECK(g(kTheta) <= 1e-12);
    CHECK(g(kA1) >= -1e-12);
    CHECK(g(kB1) >= -1e-12);
  }
}

TEST_CASE("derivative bounds") {
  const auto p = reference_parameters<double>();
  const auto rigorous = rigorous_partial_bounds(p);
  const auto nominal = nominal_partial_bounds(p);
  std::mt19937_64 rng(7);
  Vector5<double> worst_abs = Vector5<double>::Zero(), worst_up = Vector5<double>::Constant(-10);
  double worst_norm = 0;
  for (int t = 0; t < 100000; ++t) {
    const auto x = random_point(rng);
    for (Branch b : {Branch::plus, Branch::minus}) {
      const auto g = grad_epsilon_rho(x, p, b);
      worst_abs = worst_abs.cwiseMax(g.cwiseAbs());
      worst_up = worst_up.cwiseMax(g);
      worst_norm = std::max(worst_norm, g.norm());
    }
  }
  CHECK((worst_abs.array() <= rigorous.array()).all());
  CHECK(worst_abs(kA0) <= 3 * p.nu);
  CHECK(worst_abs(kA1) <= 3 * p.nu);
  CHECK(worst_up(kA0) <= nominal(kA0));
  CHECK(worst_up(kTheta) <= nominal(kTheta));
  CHECK(worst_norm <= iota_sup(p, IotaReading::nominal));
  CHECK(worst_norm <= iota_sup(p, IotaReading::tight));
  CHECK(worst_norm <= iota_sup(p, IotaReading::rigorous));
}

TEST_CASE("iota_sup readings") {
  CHECK(iota_sup<double>({0, 1, 0.5}) == 0);
  CHECK(iota_sup<double>({0, 0, 0.5}) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  const auto p = reference_parameters<double>();
  CHECK(iota_sup(p) == doctest::Approx(1.0015).epsilon(1e-4));
  CHECK(iota_sup(p, IotaReading::tight) < iota_sup(p, IotaReading::nominal));
  CHECK(iota_sup(p, IotaReading::rigorous) > iota_sup(p, IotaReading::nominal));
}

TEST_CASE("trigonometric bounds") {
  const auto c = trig_constants<double>();
  CHECK(c.c1 == doctest::Approx(0.44478).epsilon(1e-5));
  CHECK(c.c2 == doctest::Approx(0.47482).epsilon(1e-5));
  CHECK(c.c3 == doctest::Approx(0.49960).epsilon(1e-4));

  CHECK(trig_cos_bound(0.0, 1.0) == 1);
  CHECK(std::abs(trig_cos_bound(1.3, 1.3) - std::cos(1.3)) < 1e-15);
  CHECK(trig_cos_product_bound(0.0, 0.0, 1.0) == 1);
  CHECK(std::abs(trig_cos_product_bound(kHalfPi, kHalfPi, kHalfPi)) < 1e-15);
  CHECK_THROWS_AS(trig_cos_bound(2.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(trig_cos_bound(0.5, 7.0), InvalidParameter);
  CHECK_THROWS_AS(trig_cos_product_bound(0.5, 0.5, 4.0), InvalidParameter);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  int bad1 = 0, bad2 = 0;
  for (int t = 0; t < 100000; ++t) {
    const double w = 2 * M_PI * u(rng), x = w * u(rng);
    bad1 += trig_cos_bound(x, w) < std::cos(x) - 1e-15;
    const double w2 = M_PI * u(rng), a = w2 * u(rng), b = w2 * u(rng);
    bad2 += trig_cos_product_bound(a, b, w2) < std::cos(a) * std::cos(b) - 1e-15;
  }
  CHECK(bad1 == 0);
  CHECK(bad2 == 0);
}

TEST_CASE("residual cube certificate") {
  const auto p = reference_parameters<double>();
  const auto cert = residual_cube_certificate(p);
  CHECK(cert.valid);
  CHECK(cert.lambda_max <= -0.0146097 + 1e-5);
  CHECK(cert.lambda_max == doctest::Approx(-0.0146097).epsilon(1e-4));

  std::mt19937_64 rng(9);
  int over_eig = 0, over_form = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto x = random_cube_point(rng);
    CHECK(in_excluded_cube(x));
    const double r2 = residual_coordinates(x).squaredNorm();
    const double e = epsilon_rho_max(x, p);
    over_eig += e > 1 + cert.lambda_max * r2 + 1e-9;
    over_form += e > residual_majorant(x, cert.t) + 1e-12;
  }
  CHECK(over_eig == 0);
  CHECK(over_form == 0);
}

TEST_CASE("residual coordinates") {
  const auto r = residual_coordinates(amplitude_damping_point<double>());
  CHECK(r.norm() < 1e-15);
  CHECK(in_excluded_cube(amplitude_damping_point<double>()));
  CHECK_FALSE(in_excluded_cube(ReducedPointd(0.3, kHalfPi, 0, kHalfPi, 0)));
}

TEST_CASE("comparison fidelity bound") {
  CHECK(comparison_fidelity_bound(2 * std::sqrt(2.0)) == doctest::Approx(1));
  CHECK(comparison_fidelity_bound(std::sqrt(2.0)) == doctest::Approx(0.5));
  CHECK(comparison_fidelity_bound(2.0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(comparison_fidelity_bound(3.0), InvalidParameter);
}
