#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tatonnement/geometry.hpp"
#include "tatonnement/price_vector.hpp"

namespace tatonnement {

using JacobianMatrix = Matrix;

/// Preferences and holdings of one consumer.
///
/// For Cobb-Douglas consumers `weights` are expenditure shares (non-negative,
/// summing to one). For Leontief consumers they are the fixed proportions in
/// which goods are consumed (non-negative, at least one positive).
struct Consumer {
  Vector weights;
  Vector endowments;
};

enum class EconomyKind { CobbDouglas, Leontief, Linearized };

inline const char* to_string(EconomyKind kind) {
  switch (kind) {
    case EconomyKind::CobbDouglas: return "cobb_douglas";
    case EconomyKind::Leontief: return "leontief";
    case EconomyKind::Linearized: return "linearized";
  }
  return "unknown";
}

/// Excess demand given directly by its Jacobian at a known equilibrium.
///
/// With `projected` set (the normal case) the supplied matrix is replaced by
/// P·J·P with P = I − p*p*ᵀ, and excess demand is evaluated on the sphere as
/// ξ(p) = (I − uuᵀ)·J·(u − p*), u = p/|p|. That form is exactly homogeneous of
/// degree zero, satisfies Walras' law everywhere, and has Jacobian P·J·P at p*.
/// With `projected` cleared ξ(p) = J·(p − p*) verbatim; it violates the
/// excess-demand axioms and exists as a negative control.
struct LinearizedSpec {
  Vector p_star;
  Matrix supplied_jacobian;
  Matrix jacobian;
  bool projected = true;
};

class Economy {
 public:
  static Economy cobb_douglas(std::vector<Consumer> consumers, std::string name = {}) {
    validate_consumers(consumers, EconomyKind::CobbDouglas);
    return Economy(EconomyKind::CobbDouglas, std::move(consumers), std::move(name));
  }

  static Economy leontief(std::vector<Consumer> consumers, std::string name = {}) {
    validate_consumers(consumers, EconomyKind::Leontief);
    return Economy(EconomyKind::Leontief, std::move(consumers), std::move(name));
  }

  static Economy linearized(const Vector& p_star, const Matrix& jacobian, bool projected = true,
                            std::string name = {}) {
    if (jacobian.rows() != p_star.size() || jacobian.cols() != p_star.size()) {
      throw DimensionMismatch("linearized economy: Jacobian must be n x n with n = |p*|");
    }
    if (!jacobian.allFinite()) throw DomainError("linearized economy: non-finite Jacobian entry");
    LinearizedSpec spec;
    spec.p_star = PriceVector(p_star).values();
    // re-normalizing a unit vector can move it by an ulp; keep stored p* stable
    if (std::abs(spec.p_star.norm() - 1.0) > 4 * std::numeric_limits<double>::epsilon()) {
      spec.p_star.normalize();
    }
    spec.supplied_jacobian = jacobian;
    spec.projected = projected;
    if (projected) {
      const Eigen::Index n = p_star.size();
      const Matrix proj = Matrix::Identity(n, n) - spec.p_star * spec.p_star.transpose();
      spec.jacobian = proj * jacobian * proj;
    } else {
      spec.jacobian = jacobian;
    }
    Economy e(EconomyKind::Linearized, {}, std::move(name));
    e.n_ = p_star.size();
    e.linear_ = std::move(spec);
    return e;
  }

  EconomyKind kind() const noexcept { return kind_; }
  Eigen::Index n_commodities() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Consumer>& consumers() const noexcept { return consumers_; }
  const LinearizedSpec& linearized_spec() const {
    if (kind_ != EconomyKind::Linearized) throw Error("economy is not linearized");
    return linear_;
  }

  /// ξ(p). Requires a strictly positive p of matching dimension; does not
  /// require |p| = 1.
  Vector excess_demand(const PriceVector& p) const {
    if (p.size() != n_) {
      throw DimensionMismatch("excess_demand: economy has " + std::to_string(n_) +
                              " commodities, price vector has " + std::to_string(p.size()));
    }
    const Vector& prices = p.values();
    switch (kind_) {
      case EconomyKind::CobbDouglas: {
        Vector xi = Vector::Zero(n_);
        for (const auto& c : consumers_) {
          const double income = prices.dot(c.endowments);
          xi += (c.weights.array() * income / prices.array()).matrix() - c.endowments;
        }
        return xi;
      }
      case EconomyKind::Leontief: {
        Vector xi = Vector::Zero(n_);
        for (const auto& c : consumers_) {
          const double income = prices.dot(c.endowments);
          const double bundle_cost = prices.dot(c.weights);
          xi += c.weights * (income / bundle_cost) - c.endowments;
        }
        return xi;
      }
      case EconomyKind::Linearized: {
        if (!linear_.projected) return linear_.jacobian * (prices - linear_.p_star);
        const Vector u = prices / prices.norm();
        const Vector raw = linear_.jacobian * (u - linear_.p_star);
        return raw - u * u.dot(raw);
      }
    }
    return Vector::Zero(n_);
  }

 private:
  Economy(EconomyKind kind, std::vector<Consumer> consumers, std::string name)
      : kind_(kind), consumers_(std::move(consumers)), name_(std::move(name)) {
    if (!consumers_.empty()) n_ = consumers_.front().weights.size();
  }

  static void validate_consumers(const std::vector<Consumer>& consumers, EconomyKind kind) {
    if (consumers.empty()) throw DomainError("economy needs at least one consumer");
    const Eigen::Index n = consumers.front().weights.size();
    if (n < 2) throw DimensionMismatch("economy needs at least two commodities");
    Vector supply = Vector::Zero(n);
    for (std::size_t j = 0; j < consumers.size(); ++j) {
      const auto& c = consumers[j];
      const std::string who = "consumer " + std::to_string(j);
      if (c.weights.size() != n || c.endowments.size() != n) {
        throw DimensionMismatch(who + ": weights and endowments must both have length " +
                                std::to_string(n));
      }
      if (!c.weights.allFinite() || !c.endowments.allFinite() || c.weights.minCoeff() < 0.0 ||
          c.endowments.minCoeff() < 0.0) {
        throw DomainError(who + ": weights and endowments must be finite and non-negative");
      }
      if (kind == EconomyKind::CobbDouglas && std::abs(c.weights.sum() - 1.0) > 1e-12) {
        throw DomainError(who + ": Cobb-Douglas weights must sum to 1");
      }
      if (kind == EconomyKind::Leontief && !(c.weights.maxCoeff() > 0.0)) {
        throw DomainError(who + ": Leontief proportions need a positive entry");
      }
      supply += c.endowments;
    }
    if (!(supply.minCoeff() > 0.0)) {
      throw DomainError("every commodity must be held in positive total supply");
    }
  }

  EconomyKind kind_;
  Eigen::Index n_ = 0;
  std::vector<Consumer> consumers_;
  LinearizedSpec linear_;
  std::string name_;
};

inline Vector excess_demand(const Economy& economy, const PriceVector& p) {
  return economy.excess_demand(p);
}

/// |p̂·ξ(p)| ≤ tol·max(1, |ξ(p)|) with p̂ = p/|p|.
inline bool check_walras(const Economy& economy, const PriceVector& p, double tol) {
  const Vector xi = economy.excess_demand(p);
  const double value = std::abs(p.values().dot(xi)) / p.norm();
  return value <= tol * std::max(1.0, xi.norm());
}

inline bool check_homogeneity(const Economy& economy, const PriceVector& p, double scale,
                              double tol) {
  if (!(scale > 0.0)) throw DomainError("check_homogeneity: scale must be positive");
  const Vector base = economy.excess_demand(p);
  const Vector scaled = economy.excess_demand(p.scaled(scale));
  return (scaled - base).cwiseAbs().maxCoeff() <= tol;
}

inline double default_fd_step(const PriceVector& p) { return 1e-5 * p.min_component(); }

/// Central finite-difference Jacobian Dξ(p), columns ∂ξ/∂p_i.
inline JacobianMatrix jacobian(const Economy& economy, const PriceVector& p, double h) {
  if (!(h > 0.0)) throw DomainError("jacobian: step must be positive");
  if (!(h < p.min_component())) {
    throw DomainError("jacobian: p - h e_i leaves the positive orthant", to_std(p.values()));
  }
  const Eigen::Index n = p.size();
  JacobianMatrix jac(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector up = p.values();
    Vector down = p.values();
    up[i] += h;
    down[i] -= h;
    jac.col(i) =
        (economy.excess_demand(PriceVector(up)) - economy.excess_demand(PriceVector(down))) /
        (2.0 * h);
  }
  return jac;
}

inline JacobianMatrix jacobian(const Economy& economy, const PriceVector& p) {
  return jacobian(economy, p, default_fd_step(p));
}

/// Newton's method on the tangent plane of the unit sphere, with backtracking
/// that keeps iterates in the positive orthant. Returns a unit-norm p* with
/// |ξ(p*)| ≤ tol.
inline PriceVector find_equilibrium(const Economy& economy, const PriceVector& p0, double tol,
                                    int max_iter) {
  PriceVector p = p0.unit();
  Vector xi = economy.excess_demand(p);
  for (int iter = 0; iter < max_iter; ++iter) {
    double residual = xi.norm();
    if (residual <= tol) return p;

    const Matrix basis = geometry::tangent_basis(p.values());
    const Matrix reduced = basis.transpose() * jacobian(economy, p) * basis;
    Vector delta = reduced.fullPivLu().solve(-basis.transpose() * xi);
    if (!delta.allFinite()) delta = basis.transpose() * xi;  // fall back to a tâtonnement step
    const Vector step = basis * delta;

    bool stayed_positive = false;
    bool accepted = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const Vector candidate = p.values() + t * step;
      if (!is_strictly_positive(candidate)) continue;
      stayed_positive = true;
      PriceVector next = PriceVector::normalized(candidate);
      Vector next_xi = economy.excess_demand(next);
      if (next_xi.norm() < residual) {
        p = std::move(next);
        xi = std::move(next_xi);
        accepted = true;
        break;
      }
    }
    if (!stayed_positive) {
      throw DomainError("find_equilibrium: every Newton step leaves the positive orthant",
                        to_std(p.values()));
    }
    if (!accepted) {
      if (residual <= tol) return p;
      throw NoConvergence("find_equilibrium: line search stalled at |xi| = " +
                              std::to_string(residual),
                          to_std(p.values()));
    }
  }
  if (xi.norm() <= tol) return p;
  throw NoConvergence("find_equilibrium: no convergence after " + std::to_string(max_iter) +
                          " iterations",
                      to_std(p.values()));
}

// ---------------------------------------------------------------------------
// Constructors for the economies used throughout the tests and presets.

/// Two goods, two consumers with equal shares, each endowed with one good.
/// Equilibrium at p1 = p2.
inline Economy symmetric_cobb_douglas_2good() {
  Vector half(2);
  half << 0.5, 0.5;
  Vector e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  return Economy::cobb_douglas({{half, e1}, {half, e2}}, "cobb-douglas-2good");
}

/// Scarf's exchange economy: consumer j owns one unit of good j and consumes
/// goods j and j+1 (mod n) in equal proportion.
inline Economy scarf_economy(Eigen::Index n = 3) {
  std::vector<Consumer> consumers;
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector weights = Vector::Zero(n);
    Vector endowment = Vector::Zero(n);
    weights[j] = 1.0;
    weights[(j + 1) % n] = 1.0;
    endowment[j] = 1.0;
    consumers.push_back({weights, endowment});
  }
  return Economy::leontief(std::move(consumers), "scarf");
}

/// Linearized economy whose tangent-space Jacobian at p* has the given
/// eigenvalues (n−1 of them) along an orthonormal tangent basis.
inline Economy linearized_from_spectrum(const Vector& p_star, const std::vector<double>& eigenvalues,
                                        std::string name = {}) {
  if (static_cast<Eigen::Index>(eigenvalues.size()) + 1 != p_star.size()) {
    throw DimensionMismatch("linearized_from_spectrum: need n-1 tangent eigenvalues");
  }
  const Vector unit = PriceVector::normalized(PriceVector(p_star).values()).values();
  const Matrix basis = geometry::tangent_basis(unit);
  Matrix jac = Matrix::Zero(unit.size(), unit.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const auto col = basis.col(static_cast<Eigen::Index>(i));
    jac += eigenvalues[i] * col * col.transpose();
  }
  return Economy::linearized(unit, jac, true, std::move(name));
}

}  // namespace tatonnement
