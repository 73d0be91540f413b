#pragma once

#include <random>

#include "chshcert/qubit_algebra.hpp"

namespace chshcert {

template <typename Scalar, typename Rng> Vector3<Scalar> random_unit_vector(Rng &rng) {
  std::normal_distribution<Scalar> normal;
  Vector3<Scalar> v;
  do {
    v = Vector3<Scalar>(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < Scalar(1e-12));
  return v.normalized();
}

/// Haar-random rotation from a uniformly distributed unit quaternion.
template <typename Scalar, typename Rng> Matrix3<Scalar> random_rotation(Rng &rng) {
  std::normal_distribution<Scalar> normal;
  Eigen::Quaternion<Scalar> q;
  do {
    q = Eigen::Quaternion<Scalar>(normal(rng), normal(rng), normal(rng), normal(rng));
  } while (q.norm() < Scalar(1e-12));
  return q.normalized().toRotationMatrix();
}

template <typename Scalar, typename Rng>
ExtremalChannelParams<Scalar> random_extremal_params(Rng &rng) {
  std::uniform_real_distribution<Scalar> unit(0, 1);
  ExtremalChannelParams<Scalar> p;
  p.s0 = unit(rng);
  p.s1 = unit(rng);
  p.rot_u = random_rotation<Scalar>(rng);
  p.rot_v = random_rotation<Scalar>(rng);
  return p;
}

} // namespace chshcert
