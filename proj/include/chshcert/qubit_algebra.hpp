#pragma once

// Qubit channels in Kraus and affine (Bloch-ball) form, and singlet
// fidelities of two-qubit blocks.

#include <array>
#include <cmath>

#include <Eigen/Geometry>
#include <unsupported/Eigen/KroneckerProduct>

#include "chshcert/types.hpp"

namespace chshcert {

/// Pauli matrix sigma_k with k = 0 (identity), 1 (X), 2 (Y), 3 (Z).
template <typename Scalar> Matrix2c<Scalar> pauli(int k) {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  switch (k) {
  case 0:
    m << C(1), C(0), C(0), C(1);
    break;
  case 1:
    m << C(0), C(1), C(1), C(0);
    break;
  case 2:
    m << C(0), C(0, -1), C(0, 1), C(0);
    break;
  case 3:
    m << C(1), C(0), C(0), C(-1);
    break;
  default:
    throw InvalidParameter("pauli index must be in 0..3");
  }
  return m;
}

/// H+ = (Z + X)/sqrt(2) and H- = (Z - X)/sqrt(2).
template <typename Scalar> Matrix2c<Scalar> h_plus() {
  return (pauli<Scalar>(3) + pauli<Scalar>(1)) / std::sqrt(Scalar(2));
}
template <typename Scalar> Matrix2c<Scalar> h_minus() {
  return (pauli<Scalar>(3) - pauli<Scalar>(1)) / std::sqrt(Scalar(2));
}

template <typename Scalar>
Matrix4c<Scalar> kron(const Matrix2c<Scalar> &a, const Matrix2c<Scalar> &b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

/// |Phi+> = (|00> + |11>)/sqrt(2).
template <typename Scalar> Vector4c<Scalar> phi_plus_vector() {
  Vector4c<Scalar> v = Vector4c<Scalar>::Zero();
  v(0) = v(3) = std::complex<Scalar>(1 / std::sqrt(Scalar(2)));
  return v;
}

template <typename Scalar> TwoQubitOperator<Scalar> phi_plus() {
  const Vector4c<Scalar> v = phi_plus_vector<Scalar>();
  return v * v.adjoint();
}

/// Signature matrix J = diag(1, -1, 1) relating Bloch vectors to Phi+.
template <typename Scalar> Matrix3<Scalar> signature_matrix() {
  return Vector3<Scalar>(1, -1, 1).asDiagonal();
}

template <typename Scalar>
Matrix2c<Scalar> density_from_bloch(const BlochVector<Scalar> &v) {
  return (pauli<Scalar>(0) + v(0) * pauli<Scalar>(1) + v(1) * pauli<Scalar>(2) +
          v(2) * pauli<Scalar>(3)) /
         Scalar(2);
}

/// v_k = tr(rho sigma_k); for a density matrix this inverts density_from_bloch.
template <typename Scalar>
BlochVector<Scalar> bloch_from_density(const Matrix2c<Scalar> &rho) {
  BlochVector<Scalar> v;
  for (int k = 0; k < 3; ++k)
    v(k) = (rho * pauli<Scalar>(k + 1)).trace().real();
  return v;
}

template <typename Scalar>
bool is_rotation(const Matrix3<Scalar> &r, Scalar tol = Scalar(1e-12)) {
  const Matrix3<Scalar> gram = r.transpose() * r - Matrix3<Scalar>::Identity();
  return gram.cwiseAbs().maxCoeff() <= tol &&
         std::abs(r.determinant() - Scalar(1)) <= tol;
}

/// One of the two SU(2) preimages of a rotation, U sigma_k U^dag = sum_j R_jk sigma_j.
template <typename Scalar>
Matrix2c<Scalar> su2_from_rotation(const Matrix3<Scalar> &r) {
  const Eigen::Quaternion<Scalar> q(r);
  const std::complex<Scalar> i(0, 1);
  return q.w() * pauli<Scalar>(0) -
         i * (q.x() * pauli<Scalar>(1) + q.y() * pauli<Scalar>(2) +
              q.z() * pauli<Scalar>(3));
}

/// R_jk = tr(sigma_j U sigma_k U^dag)/2.
template <typename Scalar>
Matrix3<Scalar> rotation_from_su2(const Matrix2c<Scalar> &u) {
  Matrix3<Scalar> r;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      r(j, k) = (pauli<Scalar>(j + 1) * u * pauli<Scalar>(k + 1) * u.adjoint())
                    .trace()
                    .real() /
                Scalar(2);
  return r;
}

/// Extremal qubit channel: singular parameters s0, s1 and the rotation images
/// of the unitaries U, V in K0 = U diag(s0, s1) V^dag.
template <typename Scalar> struct ExtremalChannelParams {
  Scalar s0 = 1;
  Scalar s1 = 1;
  Matrix3<Scalar> rot_u = Matrix3<Scalar>::Identity();
  Matrix3<Scalar> rot_v = Matrix3<Scalar>::Identity();

  static ExtremalChannelParams identity() { return {}; }

  /// Sends every input to |0><0| (Bloch vector +z) when both rotations are I.
  static ExtremalChannelParams amplitude_damping() {
    ExtremalChannelParams p;
    p.s0 = 1;
    p.s1 = 0;
    return p;
  }
};

template <typename Scalar>
void validate(const ExtremalChannelParams<Scalar> &p) {
  detail::require(p.s0 >= 0 && p.s0 <= 1 && p.s1 >= 0 && p.s1 <= 1,
                  "channel parameters s0, s1 must lie in [0, 1]");
  detail::require(is_rotation(p.rot_u) && is_rotation(p.rot_v),
                  "channel rotations must be special orthogonal");
}

template <typename Scalar> struct KrausPair {
  Matrix2c<Scalar> k0;
  Matrix2c<Scalar> k1;
};

/// v -> a + M v on Bloch vectors.
template <typename Scalar> struct AffineChannel {
  BlochVector<Scalar> a = BlochVector<Scalar>::Zero();
  Matrix3<Scalar> m = Matrix3<Scalar>::Identity();
};

template <typename Scalar>
Scalar completeness_error(const KrausPair<Scalar> &k) {
  const Matrix2c<Scalar> sum =
      k.k0.adjoint() * k.k0 + k.k1.adjoint() * k.k1 - Matrix2c<Scalar>::Identity();
  return sum.cwiseAbs().maxCoeff();
}

template <typename Scalar>
KrausPair<Scalar> kraus_from_params(const ExtremalChannelParams<Scalar> &p) {
  validate(p);
  using C = std::complex<Scalar>;
  const Matrix2c<Scalar> u = su2_from_rotation(p.rot_u);
  const Matrix2c<Scalar> v = su2_from_rotation(p.rot_v);
  Matrix2c<Scalar> d0, d1;
  d0 << C(p.s0), C(0), C(0), C(p.s1);
  d1 << C(0), C(std::sqrt(1 - p.s1 * p.s1)), C(std::sqrt(1 - p.s0 * p.s0)), C(0);
  return {u * d0 * v.adjoint(), u * d1 * v.adjoint()};
}

template <typename Scalar>
Matrix2c<Scalar> apply_kraus(const KrausPair<Scalar> &k, const Matrix2c<Scalar> &rho) {
  return k.k0 * rho * k.k0.adjoint() + k.k1 * rho * k.k1.adjoint();
}

/// Reads the translation off the image of the identity and the columns of M
/// off the images of (I + sigma_k)/2.
template <typename Scalar>
AffineChannel<Scalar> affine_from_kraus(const KrausPair<Scalar> &k,
                                        Scalar tol = Scalar(1e-10)) {
  if (!(completeness_error(k) <= tol))
    throw InvalidChannel("Kraus pair is not trace preserving");
  AffineChannel<Scalar> c;
  c.a = bloch_from_density<Scalar>(apply_kraus<Scalar>(k, pauli<Scalar>(0))) / Scalar(2);
  for (int j = 0; j < 3; ++j) {
    BlochVector<Scalar> e = BlochVector<Scalar>::Zero();
    e(j) = 1;
    c.m.col(j) =
        bloch_from_density<Scalar>(apply_kraus<Scalar>(k, density_from_bloch<Scalar>(e))) -
        c.a;
  }
  return c;
}

/// (lambda1, lambda2, lambda3) of the linear part, ordered by absolute value.
template <typename Scalar>
Vector3<Scalar> channel_singular_values(Scalar s0, Scalar s1) {
  detail::require(s0 >= 0 && s0 <= 1 && s1 >= 0 && s1 <= 1,
                  "channel parameters s0, s1 must lie in [0, 1]");
  const Scalar root = std::sqrt((1 - s0 * s0) * (1 - s1 * s1));
  return {s0 * s1 + root, s0 * s1 - root, s0 * s0 + s1 * s1 - 1};
}

template <typename Scalar>
AffineChannel<Scalar> affine_from_params(const ExtremalChannelParams<Scalar> &p) {
  validate(p);
  AffineChannel<Scalar> c;
  c.a = p.rot_u * BlochVector<Scalar>(0, 0, p.s0 * p.s0 - p.s1 * p.s1);
  c.m = p.rot_u * channel_singular_values(p.s0, p.s1).asDiagonal() *
        p.rot_v.transpose();
  return c;
}

template <typename Scalar>
BlochVector<Scalar> apply_affine(const AffineChannel<Scalar> &c,
                                 const BlochVector<Scalar> &v) {
  return c.a + c.m * v;
}

/// F(rho_a (x) rho_b, Phi+) = (1 + a^T J b)/4.
template <typename Scalar>
Scalar product_singlet_fidelity(const BlochVector<Scalar> &a,
                                const BlochVector<Scalar> &b) {
  return (1 + a.dot(signature_matrix<Scalar>() * b)) / 4;
}

template <typename Scalar>
Scalar singlet_fidelity(const TwoQubitOperator<Scalar> &rho) {
  const Vector4c<Scalar> v = phi_plus_vector<Scalar>();
  return (v.adjoint() * rho * v)(0, 0).real();
}

struct StateTolerance {
  double hermitian = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

template <typename Scalar>
bool is_hermitian(const TwoQubitOperator<Scalar> &op, Scalar tol = Scalar(1e-12)) {
  return (op - op.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
bool is_valid_state(const TwoQubitOperator<Scalar> &rho, StateTolerance tol = {}) {
  if (!is_hermitian(rho, Scalar(tol.hermitian)))
    return false;
  if (std::abs(rho.trace() - std::complex<Scalar>(1)) > tol.trace)
    return false;
  const TwoQubitOperator<Scalar> herm = (rho + rho.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<TwoQubitOperator<Scalar>> es(herm,
                                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= tol.min_eigenvalue;
}

/// <Phi+| (L_A (x) L_B)[rho] |Phi+>, summed over the four Kraus products.
template <typename Scalar>
Scalar extracted_block_fidelity(const KrausPair<Scalar> &ka,
                                const KrausPair<Scalar> &kb,
                                const TwoQubitOperator<Scalar> &rho) {
  if (!is_valid_state(rho))
    throw InvalidState("extracted_block_fidelity needs a valid two-qubit state");
  const std::array<const Matrix2c<Scalar> *, 2> as{&ka.k0, &ka.k1};
  const std::array<const Matrix2c<Scalar> *, 2> bs{&kb.k0, &kb.k1};
  const Vector4c<Scalar> phi = phi_plus_vector<Scalar>();
  Scalar f = 0;
  for (const auto *a : as)
    for (const auto *b : bs) {
      const Vector4c<Scalar> psi = kron<Scalar>(*a, *b).adjoint() * phi;
      f += (psi.adjoint() * rho * psi)(0, 0).real();
    }
  return f;
}

using ExtremalChannelParamsd = ExtremalChannelParams<double>;
using KrausPaird = KrausPair<double>;
using AffineChanneld = AffineChannel<double>;
using BlochVectord = BlochVector<double>;
using TwoQubitOperatord = TwoQubitOperator<double>;

} // namespace chshcert
