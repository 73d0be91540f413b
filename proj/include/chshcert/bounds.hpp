#pragma once

// Closed-form upper bounds on 4F - 1 for the block-diagonal CHSH family, the
// Lipschitz data used to certify them, and the quadratic majorant that closes
// the excluded cube around the amplitude-damping point.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chshcert/params.hpp"

namespace chshcert {

/// sqrt((q + (1-q) a2)^2 + (1-q)^2 zeta2^2); the corner fidelity is at most (1 + eps_C)/4.
template <typename Scalar> Scalar epsilon_corner(Scalar q, Scalar a2, Scalar zeta2) {
  detail::require(q >= 0 && q <= 1, "epsilon_corner: q must lie in [0, 1]");
  detail::require(a2 >= 0 && zeta2 >= 0, "epsilon_corner: a2, zeta2 must be nonnegative");
  detail::require(a2 * a2 + zeta2 * zeta2 <= 1 + Scalar(1e-12),
                  "epsilon_corner: a2^2 + zeta2^2 must not exceed 1");
  const Scalar x = q + (1 - q) * a2;
  const Scalar y = (1 - q) * zeta2;
  return std::sqrt(x * x + y * y);
}

/// a2 b1 + zeta2 sigma_max(M_B^1) for the (2,1) block.
template <typename Scalar>
Scalar epsilon_21(Scalar a2, Scalar b1, Scalar zeta2, Scalar sigma_max_b1) {
  detail::require(a2 >= 0 && b1 >= 0 && zeta2 >= 0 && sigma_max_b1 >= 0,
                  "epsilon_21: inputs must be nonnegative");
  detail::require(a2 * a2 + zeta2 * zeta2 <= 1 + Scalar(1e-12),
                  "epsilon_21: a2^2 + zeta2^2 must not exceed 1");
  detail::require(b1 <= 1 + Scalar(1e-12) && sigma_max_b1 <= 1 + Scalar(1e-12),
                  "epsilon_21: b1 and sigma_max must not exceed 1");
  return a2 * b1 + zeta2 * sigma_max_b1;
}

/// a1 b1 + Sigma(M_A)^T Sigma(M_B), singular values ordered by magnitude.
template <typename Scalar>
Scalar epsilon_phi(Scalar a1, Scalar b1, const Vector3<Scalar> &sig_a,
                   const Vector3<Scalar> &sig_b) {
  const Scalar tol = Scalar(1e-12);
  auto ordered = [tol](const Vector3<Scalar> &s) {
    return std::abs(s(0)) + tol >= std::abs(s(1)) && std::abs(s(1)) + tol >= std::abs(s(2));
  };
  detail::require(ordered(sig_a) && ordered(sig_b),
                  "epsilon_phi: singular values must be ordered by magnitude");
  return a1 * b1 + sig_a.cwiseAbs().dot(sig_b.cwiseAbs());
}

namespace detail {

/// (a, lambda1, lambda2, lambda3) of an extremal channel with s_k = cos(t_k).
template <typename Scalar> Vector4<Scalar> angle_channel_vector(Scalar t0, Scalar t1) {
  const Scalar c0 = std::cos(t0), c1 = std::cos(t1);
  const Scalar s0 = std::sin(t0), s1 = std::sin(t1);
  return {c0 * c0 - c1 * c1, c0 * c1 + s0 * s1, c0 * c1 - s0 * s1, c0 * c0 + c1 * c1 - 1};
}

/// Derivatives of angle_channel_vector with respect to t0 and t1.
template <typename Scalar>
std::pair<Vector4<Scalar>, Vector4<Scalar>> angle_channel_jacobian(Scalar t0, Scalar t1) {
  const Scalar d = std::sin(t0 - t1), s = std::sin(t0 + t1);
  const Scalar s20 = std::sin(2 * t0), s21 = std::sin(2 * t1);
  return {Vector4<Scalar>(-s20, -d, -s, -s20), Vector4<Scalar>(s21, d, -s, -s21)};
}

template <typename Scalar> struct RhoTerms {
  Scalar even;  // part common to both branches
  Scalar odd;   // part multiplied by the branch sign
};

template <typename Scalar>
RhoTerms<Scalar> rho_terms(const ReducedPoint<Scalar> &x, const StateFamilyParams<Scalar> &p) {
  const Vector4<Scalar> ua = angle_channel_vector(x(kA0), x(kA1));
  const Vector4<Scalar> ub = angle_channel_vector(x(kB0), x(kB1));
  const Scalar th = x(kTheta);
  const Scalar rest =
      p.p_c * std::cos(th / 2) + (1 - p.p_c) * (std::cos(th) * ub(0) + std::sin(th) * ub(1));
  return {p.nu * (ua(0) * ub(0) + ua(1) * ub(1)) + (1 - p.nu) * rest,
          p.nu * (ua(2) * ub(2) + ua(3) * ub(3))};
}

template <typename Scalar>
void check_rho_inputs(const ReducedPoint<Scalar> &x, const StateFamilyParams<Scalar> &p) {
  require(in_reduced_domain(x), "reduced point outside [0, pi/2]^5");
  validate(p);
}

} // namespace detail

/// Angle form of the combined bound eps_rho^{+/-}; q is fixed to 1/2, the
/// most constraining corner split.
template <typename Scalar>
Scalar epsilon_rho(const ReducedPoint<Scalar> &x, const StateFamilyParams<Scalar> &p,
                   Branch branch) {
  detail::check_rho_inputs(x, p);
  const auto t = detail::rho_terms(x, p);
  return t.even + Scalar(sign_of(branch)) * t.odd;
}

/// max(eps_rho^+, eps_rho^-), the function certified to stay below 1.
template <typename Scalar>
Scalar epsilon_rho_max(const ReducedPoint<Scalar> &x, const StateFamilyParams<Scalar> &p) {
  detail::check_rho_inputs(x, p);
  const auto t = detail::rho_terms(x, p);
  return t.even + std::abs(t.odd);
}

/// Exact partial derivatives of epsilon_rho with respect to
/// (a0t, a1t, b0t, b1t, theta).
template <typename Scalar>
Vector5<Scalar> grad_epsilon_rho(const ReducedPoint<Scalar> &x,
                                 const StateFamilyParams<Scalar> &p, Branch branch) {
  detail::check_rho_inputs(x, p);
  const Scalar sg = Scalar(sign_of(branch));
  const Vector4<Scalar> sign_mask(1, 1, sg, sg);
  const Vector4<Scalar> ua = detail::angle_channel_vector(x(kA0), x(kA1)).cwiseProduct(sign_mask);
  const Vector4<Scalar> ub = detail::angle_channel_vector(x(kB0), x(kB1));
  const auto [da0, da1] = detail::angle_channel_jacobian(x(kA0), x(kA1));
  const auto [db0, db1] = detail::angle_channel_jacobian(x(kB0), x(kB1));
  const Scalar th = x(kTheta);
  const Scalar c = std::cos(th), s = std::sin(th);
  const Scalar w21 = (1 - p.nu) * (1 - p.p_c);

  Vector5<Scalar> g;
  g(kA0) = p.nu * da0.cwiseProduct(sign_mask).dot(ub);
  g(kA1) = p.nu * da1.cwiseProduct(sign_mask).dot(ub);
  g(kB0) = p.nu * ua.dot(db0) + w21 * (c * db0(0) + s * db0(1));
  g(kB1) = p.nu * ua.dot(db1) + w21 * (c * db1(0) + s * db1(1));
  g(kTheta) = (1 - p.nu) * (-p.p_c * std::sin(th / 2) / 2) + w21 * (-s * ub(0) + c * ub(1));
  return g;
}

/// Per-variable derivative bounds as obtained by bounding every term of the
/// partials independently: (3nu, 3nu, 3nu + k, 3nu + k, k), k = (1-p_c)(1-nu).
/// These hold as one-sided upper bounds for a0t, a1t and theta only; see
/// rigorous_partial_bounds for magnitudes.
template <typename Scalar>
Vector5<Scalar> nominal_partial_bounds(const StateFamilyParams<Scalar> &p) {
  const Scalar k = (1 - p.p_c) * (1 - p.nu);
  const Scalar a = 3 * p.nu;
  return {a, a, a + k, a + k, k};
}

/// Bounds on |d eps / dx_i| valid on the whole domain for both branches.
/// The (2,1)-block term of the b-partials is a sinusoid in theta with
/// amplitude at most sqrt(2) (1-p_c)(1-nu), and the corner term adds
/// (1-nu) p_c sin(pi/4)/2 to the theta partial.
template <typename Scalar>
Vector5<Scalar> rigorous_partial_bounds(const StateFamilyParams<Scalar> &p) {
  const Scalar k = (1 - p.p_c) * (1 - p.nu);
  const Scalar a = 3 * p.nu;
  const Scalar r2 = std::numbers::sqrt2_v<Scalar>;
  return {a, a, a + r2 * k, a + r2 * k, k + (1 - p.nu) * p.p_c / (2 * r2)};
}

/// Which closed form is used for the gradient-norm bound.
///  nominal:   sqrt(2(3nu)^2 + 2(3nu + k)^2 + (1-p_c)(1-nu)^2)
///  tight:     same with the last term read as k^2
///  rigorous:  norm of rigorous_partial_bounds
enum class IotaReading { nominal, tight, rigorous };

template <typename Scalar>
Scalar iota_sup(const StateFamilyParams<Scalar> &p, IotaReading reading = IotaReading::nominal) {
  validate(p);
  const Scalar a = 3 * p.nu;
  const Scalar k = (1 - p.p_c) * (1 - p.nu);
  switch (reading) {
  case IotaReading::nominal:
    return std::sqrt(2 * a * a + 2 * (a + k) * (a + k) + (1 - p.p_c) * (1 - p.nu) * (1 - p.nu));
  case IotaReading::tight:
    return std::sqrt(2 * a * a + 2 * (a + k) * (a + k) + k * k);
  case IotaReading::rigorous:
    return rigorous_partial_bounds(p).norm();
  }
  return 0;
}

template <typename Scalar> struct TrigConstants {
  Scalar c1;
  Scalar c2;
  Scalar c3;
};

/// C1 = sin^2(3pi/16)/(2(3pi/16)^2), C2 = sin^2(pi/8)/(2(pi/8)^2),
/// C3 = (1 - cos(pi/32))/(pi/32)^2.
template <typename Scalar = double> TrigConstants<Scalar> trig_constants() {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  auto product_coeff = [](Scalar omega) {
    const Scalar s = std::sin(omega);
    return s * s / (2 * omega * omega);
  };
  const Scalar w3 = pi / 32;
  return {product_coeff(3 * pi / 16), product_coeff(pi / 8), (1 - std::cos(w3)) / (w3 * w3)};
}

/// 1 - ((1 - cos W)/W^2) x^2 >= cos x for 0 <= x <= W <= 2pi.
template <typename Scalar> Scalar trig_cos_bound(Scalar x, Scalar omega) {
  detail::require(omega > 0 && omega <= 2 * std::numbers::pi_v<Scalar>,
                  "trig_cos_bound: Omega must lie in (0, 2pi]");
  detail::require(x >= 0 && x <= omega, "trig_cos_bound: x must lie in [0, Omega]");
  return 1 - (1 - std::cos(omega)) / (omega * omega) * x * x;
}

/// 1 - (sin^2 W/(2W^2))(x^2 + y^2) >= cos x cos y for 0 <= x, y <= W <= pi.
template <typename Scalar> Scalar trig_cos_product_bound(Scalar x, Scalar y, Scalar omega) {
  detail::require(omega > 0 && omega <= std::numbers::pi_v<Scalar>,
                  "trig_cos_product_bound: Omega must lie in (0, pi]");
  detail::require(x >= 0 && x <= omega && y >= 0 && y <= omega,
                  "trig_cos_product_bound: x, y must lie in [0, Omega]");
  const Scalar s = std::sin(omega);
  return 1 - s * s / (2 * omega * omega) * (x * x + y * y);
}

/// Axis-aligned corner cube of edge pi/16 with the amplitude-damping point as
/// a vertex: a0t, b0t, theta in [0, pi/16]; a1t, b1t in [7pi/16, pi/2].
template <typename Scalar = double> struct ExcludedCube {
  ReducedPoint<Scalar> lower;
  ReducedPoint<Scalar> upper;
};

template <typename Scalar = double> ExcludedCube<Scalar> excluded_cube() {
  const Scalar e = std::numbers::pi_v<Scalar> / 16;
  const Scalar h = half_pi<Scalar>();
  return {ReducedPoint<Scalar>(0, h - e, 0, h - e, 0), ReducedPoint<Scalar>(e, h, e, h, e)};
}

template <typename Scalar> bool in_excluded_cube(const ReducedPoint<Scalar> &x) {
  const auto cube = excluded_cube<Scalar>();
  return (x.array() >= cube.lower.array()).all() && (x.array() <= cube.upper.array()).all();
}

/// r = (mu_a, mu_b, delta_a, delta_b, theta) with mu = pi/2 - (t1 + t0) and
/// delta = pi/2 - (t1 - t0).
template <typename Scalar>
Vector5<Scalar> residual_coordinates(const ReducedPoint<Scalar> &x) {
  const Scalar h = half_pi<Scalar>();
  return {h - (x(kA1) + x(kA0)), h - (x(kB1) + x(kB0)), h - (x(kA1) - x(kA0)),
          h - (x(kB1) - x(kB0)), x(kTheta)};
}

/// Quadratic-form matrix T of the majorant on the excluded cube.
template <typename Scalar> Matrix5<Scalar> residual_matrix(const StateFamilyParams<Scalar> &p) {
  validate(p);
  const auto c = trig_constants<Scalar>();
  const Scalar nu = p.nu, pc = p.p_c;
  const Scalar sum = c.c1 + c.c2, diff = c.c2 - c.c1;
  const Scalar k = 1 - (1 - nu) * pc;
  const Scalar w21 = (1 - nu) * (1 - pc);
  Matrix5<Scalar> t;
  // clang-format off
  t << -nu * sum,  nu,        nu * diff,  0,         0,
        nu,       -sum * k,   0,          diff * k,  0,
        nu * diff, 0,        -nu * sum,   nu,        0,
        0,         diff * k,  nu,        -sum * k,   w21,
        0,         0,         0,          w21,       (1 - nu) * (sum * (2 * pc - 2) - c.c3 * pc) / 2;
  // clang-format on
  return t;
}

template <typename Scalar> struct ResidualCertificate {
  Matrix5<Scalar> t;
  Scalar lambda_max;
  bool valid;
};

/// Negative definiteness of T proves eps_rho <= 1 on the excluded cube: there
/// eps_rho^+ <= 1 + r^T T r / 2 <= 1 + lambda_max |r|^2 / 2 with
/// r = (|mu_a|, |mu_b|, delta_a, delta_b, theta); eps_rho^- maps to eps_rho^+
/// under mu_a -> -mu_a.
template <typename Scalar>
ResidualCertificate<Scalar> residual_cube_certificate(const StateFamilyParams<Scalar> &p) {
  ResidualCertificate<Scalar> cert;
  cert.t = residual_matrix(p);
  const Matrix5<Scalar> sym = (cert.t + cert.t.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Matrix5<Scalar>> es(sym, Eigen::EigenvaluesOnly);
  cert.lambda_max = es.eigenvalues().maxCoeff();
  cert.valid = cert.lambda_max < 0;
  return cert;
}

/// 1 + r^T T r / 2 at a point of the excluded cube.
template <typename Scalar>
Scalar residual_majorant(const ReducedPoint<Scalar> &x, const Matrix5<Scalar> &t) {
  Vector5<Scalar> r = residual_coordinates(x);
  r(0) = std::abs(r(0));
  r(1) = std::abs(r(1));
  return 1 + r.dot(t * r) / 2;
}

/// Device-dependent fidelity floor S/(2 sqrt 2) when the measurements are
/// trusted to be orthogonal Paulis.
template <typename Scalar> Scalar comparison_fidelity_bound(Scalar chsh) {
  const Scalar tsirelson = 2 * std::numbers::sqrt2_v<Scalar>;
  detail::require(chsh >= -tsirelson - Scalar(1e-12) && chsh <= tsirelson + Scalar(1e-12),
                  "CHSH value must lie in [-2sqrt2, 2sqrt2]");
  return chsh / tsirelson;
}

using ResidualCertificated = ResidualCertificate<double>;

} // namespace chshcert
