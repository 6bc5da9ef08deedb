#pragma once

#include <optional>

#include "tatonnement/agents.hpp"
#include "tatonnement/dynamics.hpp"

namespace tatonnement {

struct RunOptions {
  std::optional<Vector> previous;  // p_{−1} for the discrete second-order stepper
  std::optional<Vector> velocity;  // v0 for the continuous second-order integrator
  std::optional<Vector> equilibrium;
};

/// Runs `config.steps` steps of the configured mechanism from p0. Continuous
/// mechanisms integrate to t = steps·dt. Throws RunAborted when prices leave
/// the positive orthant.
inline Trajectory run_dynamics(const DynamicsConfig& config, const Economy& economy,
                               const PriceVector& p0, const RunOptions& options = {}) {
  config.validate();
  const auto& eq = options.equilibrium;
  const std::size_t stride = config.record_stride;
  switch (config.mechanism) {
    case Mechanism::ClassicalContinuous:
      return integrate_classical_continuous(p0.unit(), economy, config.k, config.dt,
                                            config.dt * config.steps, eq, stride);
    case Mechanism::ClassicalDiscrete:
      return run_classical_discrete(p0, economy, config.k, config.dt, config.steps,
                                    config.normalize_classical, eq, stride);
    case Mechanism::SecondOrderContinuous: {
      const Vector v0 = options.velocity.value_or(Vector::Zero(p0.size()));
      return integrate_second_order_continuous(p0.unit(), v0, economy, config.k, *config.gamma,
                                               config.dt, config.dt * config.steps, eq, stride);
    }
    case Mechanism::SecondOrderDiscrete: {
      DynamicsState state = DynamicsState::at_rest(p0);
      if (options.previous) state.previous = PriceVector::normalized(*options.previous);
      return run_second_order_discrete(state, economy, {config.k, config.dt, *config.gamma_hat},
                                       config.steps, eq, stride);
    }
    case Mechanism::AgentModel:
      return run_agent_model(p0, economy, config.agents, config.steps, config.dt, eq, stride);
  }
  throw ConfigError("unknown mechanism");
}

}  // namespace tatonnement
