// Classical vs damped second-order tatonnement on a two-good economy where
// the classical discrete step overshoots into a two-point cycle.
//
//   damping_contrast [k] [dt]

#include <cstdio>
#include <cstdlib>

#include "tatonnement/tatonnement.hpp"

using namespace tatonnement;

int main(int argc, char** argv) {
  const double k = argc > 1 ? std::atof(argv[1]) : 4.0;
  const double dt = argc > 2 ? std::atof(argv[2]) : 0.5;
  const std::size_t steps = 5000;

  const Economy economy = Economy::cobb_douglas(
      {{from_std({0.9, 0.1}), from_std({1.0, 0.0})}, {from_std({0.3, 0.7}), from_std({0.0, 1.0})}},
      "cobb-douglas-cycling");
  const PriceVector p_star = find_equilibrium(economy, PriceVector({1.0, 1.0}), 1e-12, 100);
  const PriceVector p0({1.0, 1.1});
  std::printf("p* = (%.6f, %.6f), k = %g, dt = %g\n", p_star[0], p_star[1], k, dt);

  const auto describe = [&](const char* label, const Trajectory& traj) {
    if (auto cycle = analysis::detect_two_point_cycle(traj)) {
      std::printf("%-26s two-point cycle, alpha = %.6g\n", label, cycle->alpha);
    } else {
      std::printf("%-26s final angle to p* = %.3g\n", label, traj.back().angle_eq);
    }
  };

  try {
    describe("classical", run_classical_discrete(p0, economy, k, dt, steps, false, p_star.values()));
  } catch (const RunAborted& e) {
    std::printf("%-26s left the orthant: %s\n", "classical", e.what());
  }
  for (double gamma_hat : {0.5, 1.0, 1.2, 1.5, 2.0, 3.0}) {
    char label[40];
    std::snprintf(label, sizeof label, "second order, gamma_hat=%g", gamma_hat);
    try {
      describe(label, run_second_order_discrete(DynamicsState::at_rest(p0), economy,
                                                {k, dt, gamma_hat}, steps, p_star.values()));
    } catch (const RunAborted& e) {
      std::printf("%-26s left the orthant: %s\n", label, e.what());
    }
  }
  return 0;
}
