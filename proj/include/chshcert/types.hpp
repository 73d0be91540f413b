#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chshcert {

template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar> using Vector5 = Eigen::Matrix<Scalar, 5, 1>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Matrix5 = Eigen::Matrix<Scalar, 5, 5>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Vector4c = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

/// Pauli-expansion coefficients of a qubit state, rho = (I + v.sigma)/2.
template <typename Scalar> using BlochVector = Vector3<Scalar>;

/// Dense 4x4 operator in the basis |00>, |01>, |10>, |11>.
template <typename Scalar> using TwoQubitOperator = Matrix4c<Scalar>;

class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InvalidChannel : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InvalidState : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ConfigMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const std::string &what) {
  if (!ok)
    throw InvalidParameter(what);
}
} // namespace detail

} // namespace chshcert
