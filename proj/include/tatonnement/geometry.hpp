#pragma once

#include <cmath>

#include "tatonnement/price_vector.hpp"

namespace tatonnement::geometry {

/// A vector in the tangent plane of the hypersphere at `base`.
struct TangentVector {
  Vector components;
  Vector base;

  double norm() const { return components.norm(); }
};

/// Removes the component of `v` along `p`: (I - p pᵀ/|p|²) v.
inline TangentVector project_tangent(const Vector& v, const Vector& p) {
  require_same_size(v, p, "project_tangent");
  const double pp = p.squaredNorm();
  if (!(pp > 0.0)) throw DegenerateVector("project_tangent: base point has zero norm");
  return {v - p * (p.dot(v) / pp), p};
}

inline TangentVector project_tangent(const Vector& v, const PriceVector& p) {
  return project_tangent(v, p.values());
}

/// Unsigned angle in [0, pi] between the directions of p and q.
///
/// Uses 2·atan2(|p̂ − q̂|, |p̂ + q̂|), which agrees with arccos(p̂·q̂) but keeps
/// full relative precision for angles near 0 and pi.
inline double angle_between(const Vector& p, const Vector& q) {
  require_same_size(p, q, "angle_between");
  const double np = p.norm();
  const double nq = q.norm();
  if (!(np > 0.0) || !(nq > 0.0)) throw DegenerateVector("angle_between: zero vector");
  const Vector a = p / np;
  const Vector b = q / nq;
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

inline double angle_between(const PriceVector& p, const PriceVector& q) {
  return angle_between(p.values(), q.values());
}

struct Renormalized {
  PriceVector point;
  double scale;  // 1/|p_tilde|
};

inline constexpr double kDegenerateNorm = 1e-14;

/// Scales `p_tilde` back onto the unit sphere. Throws DomainError when the
/// result is not strictly positive.
inline Renormalized renormalize(const Vector& p_tilde) {
  const double norm = p_tilde.norm();
  if (!(norm >= kDegenerateNorm) || !std::isfinite(norm)) {
    throw DegenerateVector("renormalize: vector norm below 1e-14");
  }
  const Vector unit = p_tilde / norm;
  if (!is_strictly_positive(unit)) {
    throw DomainError("renormalize: result leaves the positive orthant", to_std(unit));
  }
  return {PriceVector(unit), 1.0 / norm};
}

}  // namespace tatonnement::geometry

namespace tatonnement::geometry {

/// Orthonormal basis (n × n−1) of the plane perpendicular to p.
inline Matrix tangent_basis(const Vector& p) {
  const Eigen::Index n = p.size();
  if (n < 2) throw DimensionMismatch("tangent_basis: need at least two dimensions");
  Eigen::HouseholderQR<Matrix> qr{Matrix(p)};
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

}  // namespace tatonnement::geometry
