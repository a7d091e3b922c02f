#pragma once

// Rigid (rotation/reflection + translation, no scaling) Procrustes matching
// of two-dimensional point configurations.

#include "lsinf/types.hpp"

#include <cmath>

namespace lsinf {

template <typename Scalar>
struct RigidMotion {
  using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
  using Row2 = Eigen::Matrix<Scalar, 1, 2>;

  Matrix2 rotation = Matrix2::Identity();  // orthogonal, det +-1; acts on row vectors
  Row2 translation = Row2::Zero();

  /// Maps every row x to x * rotation + translation.
  template <typename Derived>
  Positions<Scalar> apply(const Eigen::MatrixBase<Derived>& points) const {
    Positions<Scalar> out = points * rotation;
    out.rowwise() += translation;
    return out;
  }

  bool is_reflection() const { return rotation.determinant() < Scalar(0); }
};

using ProcrustesTransform = RigidMotion<double>;

template <typename Scalar>
struct ProcrustesResult {
  Positions<Scalar> aligned;
  RigidMotion<Scalar> transform;
  Scalar residual;  // Frobenius distance between aligned and reference
};

/// Optimal orthogonal factor for maximizing tr(Q^T C) over 2x2 orthogonal Q.
/// Closed form: the best rotation and the best reflection each have a
/// one-angle parameterization; keep whichever scores higher.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> orthogonal_polar_2x2(const Eigen::Matrix<Scalar, 2, 2>& c) {
  using std::atan2;
  using std::cos;
  using std::hypot;
  using std::sin;
  const Scalar rot_score = hypot(c(0, 0) + c(1, 1), c(1, 0) - c(0, 1));
  const Scalar ref_score = hypot(c(0, 0) - c(1, 1), c(1, 0) + c(0, 1));
  Eigen::Matrix<Scalar, 2, 2> q;
  if (rot_score >= ref_score) {
    const Scalar phi = atan2(c(1, 0) - c(0, 1), c(0, 0) + c(1, 1));
    q << cos(phi), -sin(phi), sin(phi), cos(phi);
  } else {
    const Scalar phi = atan2(c(1, 0) + c(0, 1), c(0, 0) - c(1, 1));
    q << cos(phi), sin(phi), sin(phi), -cos(phi);
  }
  return q;
}

/// Rigid motion of `target` closest to `reference` in Frobenius norm.
/// Throws InputError on size mismatch or when every reference point coincides.
template <typename DerivedT, typename DerivedR>
ProcrustesResult<typename DerivedT::Scalar> procrustes_align(
    const Eigen::MatrixBase<DerivedT>& target, const Eigen::MatrixBase<DerivedR>& reference) {
  using Scalar = typename DerivedT::Scalar;
  if (target.rows() != reference.rows() || target.cols() != kLatentDim ||
      reference.cols() != kLatentDim)
    throw InputError("procrustes: configurations differ in size");
  if (target.rows() == 0) throw InputError("procrustes: empty configuration");

  const Eigen::Matrix<Scalar, 1, 2> target_mean = target.colwise().mean();
  const Eigen::Matrix<Scalar, 1, 2> reference_mean = reference.colwise().mean();
  const Positions<Scalar> a = target.rowwise() - target_mean;
  const Positions<Scalar> b = reference.rowwise() - reference_mean;

  const Scalar scale = Scalar(1) + reference_mean.cwiseAbs().maxCoeff();
  if (b.cwiseAbs().maxCoeff() <= Scalar(1e-12) * scale)
    throw InputError("procrustes: degenerate reference (all points coincide)");

  ProcrustesResult<Scalar> result;
  result.transform.rotation = orthogonal_polar_2x2<Scalar>(a.transpose() * b);
  result.transform.translation = reference_mean - target_mean * result.transform.rotation;
  result.aligned = result.transform.apply(target);
  result.residual = (result.aligned - reference).norm();
  return result;
}

}  // namespace lsinf
