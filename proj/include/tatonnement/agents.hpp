#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "tatonnement/dynamics.hpp"
#include "tatonnement/economy.hpp"
#include "tatonnement/trajectory.hpp"

namespace tatonnement {

enum class SellerType { InventoryWatcher, TrendFollower };  // type a, type b

struct Seller {
  SellerType type;
  Vector price;
  Vector last_change;
};

/// Sellers of two behavioural types. Type-a sellers move their price by
/// μ·ξ; type-b sellers repeat ν times the previous period's mean price change.
class SellerPopulation {
 public:
  SellerPopulation(std::vector<Seller> sellers, double mu, double nu, Vector last_mean_change,
                   AgentPricing pricing = AgentPricing::ExcessAtMeanPrice)
      : sellers_(std::move(sellers)),
        mu_(mu),
        nu_(nu),
        last_mean_change_(std::move(last_mean_change)),
        pricing_(pricing) {
    if (sellers_.empty()) throw DomainError("seller population must be nonempty");
    if (!(mu_ >= 0.0) || !(nu_ >= 0.0)) throw DomainError("mu and nu must be non-negative");
    const Eigen::Index n = sellers_.front().price.size();
    if (last_mean_change_.size() != n) throw DimensionMismatch("mean change has wrong length");
    for (const auto& s : sellers_) {
      if (s.price.size() != n || s.last_change.size() != n) {
        throw DimensionMismatch("all sellers must price the same commodities");
      }
    }
  }

  /// `type_a` inventory watchers and `type_b` trend followers, all at p0,
  /// with no price history.
  static SellerPopulation uniform(const PriceVector& p0, int type_a, int type_b, double mu,
                                  double nu,
                                  AgentPricing pricing = AgentPricing::ExcessAtMeanPrice) {
    if (type_a < 0 || type_b < 0) throw DomainError("seller counts must be non-negative");
    const Vector zero = Vector::Zero(p0.size());
    std::vector<Seller> sellers;
    for (int i = 0; i < type_a; ++i) sellers.push_back({SellerType::InventoryWatcher, p0.values(), zero});
    for (int i = 0; i < type_b; ++i) sellers.push_back({SellerType::TrendFollower, p0.values(), zero});
    return SellerPopulation(std::move(sellers), mu, nu, zero, pricing);
  }

  const std::vector<Seller>& sellers() const noexcept { return sellers_; }
  double mu() const noexcept { return mu_; }
  double nu() const noexcept { return nu_; }
  AgentPricing pricing() const noexcept { return pricing_; }
  const Vector& last_mean_change() const noexcept { return last_mean_change_; }
  std::size_t period() const noexcept { return period_; }

  std::size_t count(SellerType type) const {
    return static_cast<std::size_t>(std::count_if(
        sellers_.begin(), sellers_.end(), [type](const Seller& s) { return s.type == type; }));
  }
  double f_a() const {
    return static_cast<double>(count(SellerType::InventoryWatcher)) / sellers_.size();
  }
  double f_b() const { return static_cast<double>(count(SellerType::TrendFollower)) / sellers_.size(); }

  Vector mean_price() const {
    Vector sum = Vector::Zero(sellers_.front().price.size());
    for (const auto& s : sellers_) sum += s.price;
    return sum / static_cast<double>(sellers_.size());
  }

 private:
  friend SellerPopulation step_agent_model(const SellerPopulation&, const Economy&);

  std::vector<Seller> sellers_;
  double mu_;
  double nu_;
  Vector last_mean_change_;
  AgentPricing pricing_;
  std::size_t period_ = 0;
};

/// One period of individual price setting:
///   type a: Δp_{a,t} = μ ξ(p̄_{t−1})   (or μ ξ(p_{i,t−1}) in own-price mode)
///   type b: Δp_{b,t} = ν Δp̄_{t−1}
inline SellerPopulation step_agent_model(const SellerPopulation& pop, const Economy& economy) {
  const Vector mean = pop.mean_price();
  if (!is_strictly_positive(mean)) {
    throw DomainError("agent model: mean price left the positive orthant", to_std(mean));
  }
  const Vector xi_mean = economy.excess_demand(PriceVector(mean));
  const Vector follow = pop.nu_ * pop.last_mean_change_;

  SellerPopulation next = pop;
  Vector change_sum = Vector::Zero(mean.size());
  for (auto& s : next.sellers_) {
    if (s.type == SellerType::InventoryWatcher) {
      if (pop.pricing_ == AgentPricing::ExcessAtOwnPrice) {
        if (!is_strictly_positive(s.price)) {
          throw DomainError("agent model: a seller price left the positive orthant", to_std(mean));
        }
        s.last_change = pop.mu_ * economy.excess_demand(PriceVector(s.price));
      } else {
        s.last_change = pop.mu_ * xi_mean;
      }
    } else {
      s.last_change = follow;
    }
    s.price += s.last_change;
    change_sum += s.last_change;
  }
  next.last_mean_change_ = change_sum / static_cast<double>(next.sellers_.size());
  next.period_ = pop.period_ + 1;
  if (!is_strictly_positive(next.mean_price())) {
    throw DomainError("agent model: mean price left the positive orthant", to_std(mean));
  }
  return next;
}

/// Runs the individual sellers and the aggregate recurrence
///   Δp̄_t − Δp̄_{t−1} = f_a μ ξ(p̄_{t−1}) − (1 − f_b ν) Δp̄_{t−1}
/// side by side; returns the largest componentwise gap between mean prices.
inline double aggregate_equivalence_check(const SellerPopulation& pop, const Economy& economy,
                                          std::size_t steps) {
  const double fa_mu = pop.f_a() * pop.mu();
  const double damping = 1.0 - pop.f_b() * pop.nu();

  SellerPopulation individuals = pop;
  Vector mean = pop.mean_price();
  Vector change = pop.last_mean_change();
  double worst = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    individuals = step_agent_model(individuals, economy);
    const Vector xi = economy.excess_demand(PriceVector(mean));
    change = change + fa_mu * xi - damping * change;
    mean += change;
    worst = std::max(worst, (individuals.mean_price() - mean).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// |mean over type-a sellers of ξ(p_i) − ξ(p̄)|: the gap between the
/// "mean of excess demand" and "excess demand at the mean price" readings.
inline double mean_pricing_gap(const SellerPopulation& pop, const Economy& economy) {
  const Vector xi_mean = economy.excess_demand(PriceVector(pop.mean_price()));
  Vector sum = Vector::Zero(xi_mean.size());
  std::size_t count = 0;
  for (const auto& s : pop.sellers()) {
    if (s.type != SellerType::InventoryWatcher) continue;
    sum += economy.excess_demand(PriceVector(s.price));
    ++count;
  }
  if (count == 0) return 0.0;
  return (sum / static_cast<double>(count) - xi_mean).norm();
}

inline Trajectory run_agent_model(const PriceVector& p0, const Economy& economy,
                                  const AgentParams& params, std::size_t steps, double dt = 1.0,
                                  std::optional<Vector> p_star = std::nullopt,
                                  std::size_t record_stride = 1) {
  const int type_a = static_cast<int>(std::lround(params.f_a * params.sellers));
  SellerPopulation pop = SellerPopulation::uniform(p0.unit(), type_a, params.sellers - type_a,
                                                   params.mu, params.nu, params.pricing);
  Trajectory traj;
  traj.equilibrium = std::move(p_star);
  const auto mean_direction = [&pop]() {
    const Vector m = pop.mean_price();
    return Vector(m / m.norm());
  };
  traj.record(0, 0.0, mean_direction(), economy);
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      pop = step_agent_model(pop, economy);
    } catch (const DomainError& e) {
      throw RunAborted(std::string("agent_model: ") + e.what() + " at step " + std::to_string(n),
                       std::move(traj));
    }
    if (n % record_stride == 0 || n == steps) traj.record(n, n * dt, mean_direction(), economy);
  }
  return traj;
}

}  // namespace tatonnement
