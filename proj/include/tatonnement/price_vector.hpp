#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tatonnement/errors.hpp"

namespace tatonnement {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline void require_same_size(const Vector& a, const Vector& b, const char* where) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(where) + ": sizes " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
}

/// A strictly positive price point with at least two commodities.
///
/// The plain constructor keeps the norm of its input (homogeneity checks need
/// scaled points); `normalized` puts the point on the unit hypersphere, which
/// is the convention every dynamics routine uses.
class PriceVector {
 public:
  explicit PriceVector(Vector values) : values_(std::move(values)) { validate(); }
  PriceVector(std::initializer_list<double> values)
      : values_(from_std(std::vector<double>(values))) {
    validate();
  }

  static PriceVector normalized(const Vector& values) {
    const double norm = values.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DegenerateVector("price vector has zero or non-finite norm");
    }
    return PriceVector(values / norm);
  }

  const Vector& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  double norm() const { return values_.norm(); }
  double min_component() const { return values_.minCoeff(); }

  PriceVector unit() const { return normalized(values_); }
  PriceVector scaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("price scale factor must be positive");
    return PriceVector(values_ * factor);
  }

 private:
  void validate() const {
    if (values_.size() < 2) throw DimensionMismatch("price vector needs at least two commodities");
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]) || !(values_[i] > 0.0)) {
        throw DomainError("price component " + std::to_string(i) + " is not strictly positive");
      }
    }
  }

  Vector values_;
};

inline bool is_strictly_positive(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !(v[i] > 0.0)) return false;
  }
  return true;
}

}  // namespace tatonnement
