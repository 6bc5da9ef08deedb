#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "tatonnement/economy.hpp"
#include "tatonnement/geometry.hpp"
#include "tatonnement/trajectory.hpp"

namespace tatonnement {

enum class Mechanism {
  ClassicalContinuous,
  ClassicalDiscrete,
  SecondOrderContinuous,
  SecondOrderDiscrete,
  AgentModel,
};

inline const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::ClassicalContinuous: return "classical_continuous";
    case Mechanism::ClassicalDiscrete: return "classical_discrete";
    case Mechanism::SecondOrderContinuous: return "second_order_continuous";
    case Mechanism::SecondOrderDiscrete: return "second_order_discrete";
    case Mechanism::AgentModel: return "agent_model";
  }
  return "unknown";
}

inline std::optional<Mechanism> parse_mechanism(const std::string& name) {
  for (Mechanism m : {Mechanism::ClassicalContinuous, Mechanism::ClassicalDiscrete,
                      Mechanism::SecondOrderContinuous, Mechanism::SecondOrderDiscrete,
                      Mechanism::AgentModel}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

enum class AgentPricing {
  ExcessAtMeanPrice,  // type-a sellers respond to ξ(p̄), as in the aggregate model
  ExcessAtOwnPrice,   // type-a seller i responds to ξ(p_i); diagnostic mode
};

struct AgentParams {
  double mu = 0.1;
  double nu = 0.5;
  double f_a = 0.5;
  int sellers = 100;
  AgentPricing pricing = AgentPricing::ExcessAtMeanPrice;
};

struct DynamicsConfig {
  Mechanism mechanism = Mechanism::SecondOrderDiscrete;
  double k = 1.0;                    // [demand]^-1 [T]^-1
  std::optional<double> gamma;       // continuous damping, [T]^-1
  std::optional<double> gamma_hat;   // discrete damping, γΔt
  double dt = 0.01;
  std::size_t steps = 1000;
  bool normalize_classical = false;  // raw iterate unless set
  std::size_t record_stride = 1;
  AgentParams agents;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (record_stride == 0) throw ConfigError("record_stride must be at least 1");
    const bool needs_k = mechanism != Mechanism::AgentModel;
    if (needs_k && !(k > 0.0)) throw ConfigError("k must be positive");
    switch (mechanism) {
      case Mechanism::SecondOrderContinuous:
        if (!gamma || gamma_hat) throw ConfigError("second_order_continuous takes gamma only");
        if (!(*gamma >= 0.0)) throw ConfigError("gamma must be non-negative");
        break;
      case Mechanism::SecondOrderDiscrete:
        if (!gamma_hat || gamma) throw ConfigError("second_order_discrete takes gamma_hat only");
        if (!(*gamma_hat >= 0.0)) throw ConfigError("gamma_hat must be non-negative");
        break;
      case Mechanism::AgentModel:
        if (gamma || gamma_hat) throw ConfigError("agent_model takes no damping constant");
        if (!(agents.mu >= 0.0) || !(agents.nu >= 0.0)) throw ConfigError("mu, nu must be >= 0");
        if (!(agents.f_a >= 0.0 && agents.f_a <= 1.0)) throw ConfigError("f_a must lie in [0,1]");
        if (agents.sellers < 1) throw ConfigError("agent_model needs at least one seller");
        break;
      default:
        if (gamma || gamma_hat) throw ConfigError("first-order mechanisms take no damping");
        break;
    }
  }
};

// ---------------------------------------------------------------------------
// Classical discrete: p_{N+1} = p_N + k|p_N| ξ(p_N) Δt

/// Unprojected classical step; the result keeps whatever norm the update produces.
inline PriceVector step_classical_discrete_raw(const PriceVector& p, const Economy& economy,
                                               double k, double dt) {
  const Vector next = p.values() + k * p.norm() * dt * economy.excess_demand(p);
  if (!is_strictly_positive(next)) {
    throw DomainError("classical step leaves the positive orthant", to_std(p.values()));
  }
  return PriceVector(next);
}

inline PriceVector step_classical_discrete(const PriceVector& p, const Economy& economy, double k,
                                           double dt) {
  return step_classical_discrete_raw(p, economy, k, dt).unit();
}

// ---------------------------------------------------------------------------
// Discrete second order

struct SecondOrderParams {
  double k = 1.0;
  double dt = 1.0;
  double gamma_hat = 0.0;

  double xi_hat_scale() const { return dt * dt; }
};

/// (p_N, p_{N−1}) pair of the discrete second-order recurrence.
struct DynamicsState {
  PriceVector current;
  PriceVector previous;
  std::size_t step_index = 0;

  /// Zero initial velocity: p_{−1} = p_0.
  static DynamicsState at_rest(const PriceVector& p0) {
    const PriceVector unit = p0.unit();
    return {unit, unit, 0};
  }
};

struct SecondOrderStep {
  DynamicsState state;
  Vector p_tilde;
  double scale = 1.0;                // A = |p_N| / |p̃_{N+1}|
  double cos_theta = 1.0;            // p_N·p_{N−1} / |p_N|²
  double magnitude_direct = 0.0;     // |p̃_{N+1}|
  double magnitude_closed_form = 0.0;
  bool velocity_reversal = false;    // γ̂ > 1

  double closed_form_residual() const { return std::abs(magnitude_direct - magnitude_closed_form); }
  bool magnitude_consistent(double tol = 1e-10) const { return closed_form_residual() <= tol; }
};

inline SecondOrderStep step_second_order_discrete(const DynamicsState& s, const Economy& economy,
                                                  const SecondOrderParams& params) {
  const Vector& pn = s.current.values();
  const Vector& pm = s.previous.values();
  const double norm_n = pn.norm();
  const double cos_theta = pn.dot(pm) / (norm_n * norm_n);
  const Vector xi_hat = params.xi_hat_scale() * economy.excess_demand(s.current);

  const Vector naive = (1.0 - params.gamma_hat) * (pn - pm) + params.k * norm_n * xi_hat;
  const geometry::TangentVector step = geometry::project_tangent(naive, pn);
  const Vector p_tilde = pn + step.components;

  const double damping = 1.0 - params.gamma_hat;
  const double sin2 = std::max(0.0, 1.0 - cos_theta * cos_theta);
  const double under_root = 1.0 + damping * damping * sin2 +
                            params.k * params.k * xi_hat.squaredNorm() -
                            2.0 * damping * params.k * (pm / norm_n).dot(xi_hat);

  SecondOrderStep out{s, p_tilde};
  out.cos_theta = cos_theta;
  out.magnitude_direct = p_tilde.norm();
  out.magnitude_closed_form = norm_n * std::sqrt(std::max(0.0, under_root));
  out.scale = norm_n / out.magnitude_direct;
  out.velocity_reversal = params.gamma_hat > 1.0;

  const Vector next = out.scale * p_tilde;
  if (!is_strictly_positive(next)) {
    throw DomainError("second-order step leaves the positive orthant", to_std(pn));
  }
  out.state = {PriceVector(next), s.current, s.step_index + 1};
  return out;
}

// ---------------------------------------------------------------------------
// Continuous-time integrators (fixed-step RK4)

namespace detail {

inline std::size_t step_count(double dt, double t_end) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

inline Vector classical_rhs(const Economy& economy, double k, const Vector& p) {
  if (!is_strictly_positive(p)) throw DomainError("integration stage leaves the positive orthant");
  const PriceVector price(p);
  return k * price.norm() * economy.excess_demand(price);
}

}  // namespace detail

/// dp/dt = k|p| ξ(p), no renormalization (norm conservation is a diagnostic).
inline Trajectory integrate_classical_continuous(const PriceVector& p0, const Economy& economy,
                                                 double k, double dt, double t_end,
                                                 std::optional<Vector> p_star = std::nullopt,
                                                 std::size_t record_stride = 1) {
  const std::size_t steps = detail::step_count(dt, t_end);
  Trajectory traj;
  traj.equilibrium = std::move(p_star);
  Vector p = p0.values();
  traj.record(0, 0.0, p, economy);
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      const Vector k1 = detail::classical_rhs(economy, k, p);
      const Vector k2 = detail::classical_rhs(economy, k, p + 0.5 * dt * k1);
      const Vector k3 = detail::classical_rhs(economy, k, p + 0.5 * dt * k2);
      const Vector k4 = detail::classical_rhs(economy, k, p + dt * k3);
      const Vector next = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!is_strictly_positive(next)) throw DomainError("state leaves the positive orthant");
      p = next;
    } catch (const DomainError& e) {
      throw RunAborted(std::string("classical_continuous: ") + e.what() + " at step " +
                           std::to_string(n),
                       std::move(traj));
    }
    if (n % record_stride == 0 || n == steps) traj.record(n, n * dt, p, economy);
  }
  return traj;
}

/// d²p/dt² + p|ṗ|²/|p|² = k|p|ξ(p) − γ dp/dt, integrated as a first-order
/// system in (p, v). v0 is projected onto the tangent plane at p0.
inline Trajectory integrate_second_order_continuous(const PriceVector& p0, const Vector& v0,
                                                    const Economy& economy, double k,
                                                    double gamma, double dt, double t_end,
                                                    std::optional<Vector> p_star = std::nullopt,
                                                    std::size_t record_stride = 1) {
  const std::size_t steps = detail::step_count(dt, t_end);
  require_same_size(p0.values(), v0, "integrate_second_order_continuous");
  Trajectory traj;
  traj.equilibrium = std::move(p_star);
  Vector p = p0.values();
  Vector v = geometry::project_tangent(v0, p).components;

  const auto accel = [&](const Vector& pos, const Vector& vel) -> Vector {
    if (!is_strictly_positive(pos)) {
      throw DomainError("integration stage leaves the positive orthant");
    }
    const PriceVector price(pos);
    return k * price.norm() * economy.excess_demand(price) - gamma * vel -
           pos * (vel.squaredNorm() / pos.squaredNorm());
  };

  traj.record(0, 0.0, p, economy);
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      const Vector a1 = accel(p, v);
      const Vector p2 = p + 0.5 * dt * v, v2 = v + 0.5 * dt * a1;
      const Vector a2 = accel(p2, v2);
      const Vector p3 = p + 0.5 * dt * v2, v3 = v + 0.5 * dt * a2;
      const Vector a3 = accel(p3, v3);
      const Vector p4 = p + dt * v3, v4 = v + dt * a3;
      const Vector a4 = accel(p4, v4);
      const Vector next_p = p + (dt / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
      const Vector next_v = v + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      if (!is_strictly_positive(next_p)) throw DomainError("state leaves the positive orthant");
      p = next_p;
      v = next_v;
    } catch (const DomainError& e) {
      throw RunAborted(std::string("second_order_continuous: ") + e.what() + " at step " +
                           std::to_string(n),
                       std::move(traj));
    }
    if (n % record_stride == 0 || n == steps) traj.record(n, n * dt, p, economy);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Discrete runs

inline Trajectory run_classical_discrete(const PriceVector& p0, const Economy& economy, double k,
                                         double dt, std::size_t steps, bool normalize = false,
                                         std::optional<Vector> p_star = std::nullopt,
                                         std::size_t record_stride = 1) {
  Trajectory traj;
  traj.equilibrium = std::move(p_star);
  PriceVector p = p0.unit();
  traj.record(0, 0.0, p.values(), economy);
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      p = normalize ? step_classical_discrete(p, economy, k, dt)
                    : step_classical_discrete_raw(p, economy, k, dt);
    } catch (const DomainError& e) {
      throw RunAborted(std::string("classical_discrete: ") + e.what() + " at step " +
                           std::to_string(n),
                       std::move(traj));
    }
    if (n % record_stride == 0 || n == steps) {
      traj.record(n, n * dt, p.values() / p.norm(), economy);
    }
  }
  return traj;
}

inline Trajectory run_second_order_discrete(const DynamicsState& initial, const Economy& economy,
                                            const SecondOrderParams& params, std::size_t steps,
                                            std::optional<Vector> p_star = std::nullopt,
                                            std::size_t record_stride = 1) {
  Trajectory traj;
  traj.equilibrium = std::move(p_star);
  DynamicsState state = initial;
  traj.record(0, 0.0, state.current.values(), economy, 1.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    double scale = 1.0;
    try {
      SecondOrderStep step = step_second_order_discrete(state, economy, params);
      scale = step.scale;
      state = std::move(step.state);
    } catch (const DomainError& e) {
      throw RunAborted(std::string("second_order_discrete: ") + e.what() + " at step " +
                           std::to_string(n),
                       std::move(traj));
    }
    if (n % record_stride == 0 || n == steps) {
      traj.record(n, n * params.dt, state.current.values(), economy, scale);
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------

/// Slowest decay exponent of the linearized damped oscillator:
/// r = −γ/2 + sqrt((γ/2)² − kλ_m), complex when underdamped.
inline std::complex<double> decay_rate(double gamma, double k, double lambda_m) {
  const double half = gamma / 2.0;
  const double disc = half * half - k * lambda_m;
  return std::complex<double>(-half, 0.0) + std::sqrt(std::complex<double>(disc, 0.0));
}

}  // namespace tatonnement
