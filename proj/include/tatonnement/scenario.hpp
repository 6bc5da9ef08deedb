#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tatonnement/analysis.hpp"
#include "tatonnement/io.hpp"
#include "tatonnement/simulation.hpp"

namespace tatonnement::scenario {

namespace fs = std::filesystem;
using io::json;

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kDomainError = 3,
};

struct AnalysisRequests {
  bool stability = false;
  bool cycles = false;
  std::vector<double> sweep;  // γ̂ values
};

struct ScenarioConfig {
  fs::path economy_path;
  DynamicsConfig dynamics;
  std::optional<Vector> initial_prices;
  std::optional<Vector> previous_prices;
  std::optional<Vector> initial_velocity;
  AnalysisRequests analysis;
  fs::path output_dir = "out";
  std::uint64_t seed = 0;
  double cycle_tolerance = analysis::kCycleTolerance;
  std::size_t cycle_repeats = analysis::kCycleRepeats;
};

/// Uniform direction on the positive part of the unit sphere: normalized
/// absolute Gaussian draws.
inline PriceVector random_unit_prices(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = 0.0;
    while (!(x > 1e-12)) x = std::abs(normal(rng));
    v[i] = x;
  }
  return PriceVector::normalized(v);
}

inline PriceVector random_unit_prices(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unit_prices(n, rng);
}

inline std::optional<Vector> optional_vector(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return io::vector_from_json(j[key], key);
}

inline DynamicsConfig dynamics_from_json(const json& j) {
  DynamicsConfig cfg;
  if (!j.is_object()) throw ConfigError("'dynamics' must be an object");
  const auto mech = parse_mechanism(j.value("mechanism", std::string{}));
  if (!mech) throw ConfigError("dynamics.mechanism must name exactly one known mechanism");
  cfg.mechanism = *mech;
  cfg.k = j.value("k", cfg.k);
  cfg.dt = j.value("dt", cfg.dt);
  cfg.steps = j.value("steps", cfg.steps);
  cfg.normalize_classical = j.value("normalize", cfg.normalize_classical);
  cfg.record_stride = j.value("record_stride", cfg.record_stride);
  if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
  if (j.contains("gamma_hat")) cfg.gamma_hat = j["gamma_hat"].get<double>();
  cfg.agents.mu = j.value("mu", cfg.agents.mu);
  cfg.agents.nu = j.value("nu", cfg.agents.nu);
  cfg.agents.f_a = j.value("f_a", cfg.agents.f_a);
  cfg.agents.sellers = j.value("sellers", cfg.agents.sellers);
  const std::string pricing = j.value("agent_pricing", std::string("mean_price"));
  if (pricing == "own_price") {
    cfg.agents.pricing = AgentPricing::ExcessAtOwnPrice;
  } else if (pricing != "mean_price") {
    throw ConfigError("agent_pricing must be 'mean_price' or 'own_price'");
  }
  cfg.validate();
  return cfg;
}

/// Parses a scenario file. Relative economy paths resolve against the
/// directory holding the scenario file.
inline ScenarioConfig load_scenario(const fs::path& path) {
  const json j = io::read_json(path);
  ScenarioConfig cfg;
  try {
    if (!j.contains("economy") || !j["economy"].is_string()) {
      throw ConfigError("scenario: missing string field 'economy'");
    }
    fs::path economy = j["economy"].get<std::string>();
    if (economy.is_relative()) economy = path.parent_path() / economy;
    cfg.economy_path = economy;
    if (!j.contains("dynamics")) throw ConfigError("scenario: missing 'dynamics'");
    cfg.dynamics = dynamics_from_json(j["dynamics"]);
    cfg.initial_prices = optional_vector(j, "initial_prices");
    cfg.previous_prices = optional_vector(j, "previous_prices");
    cfg.initial_velocity = optional_vector(j, "initial_velocity");
    if (j.contains("analysis")) {
      const auto& a = j["analysis"];
      cfg.analysis.stability = a.value("stability", false);
      cfg.analysis.cycles = a.value("cycles", false);
      if (a.contains("sweep")) cfg.analysis.sweep = a["sweep"].get<std::vector<double>>();
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.cycle_tolerance = j.value("cycle_tolerance", cfg.cycle_tolerance);
    cfg.cycle_repeats = j.value("cycle_repeats", cfg.cycle_repeats);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return cfg;
}

/// Stored p* for linearized economies; otherwise a tangent-space Newton solve
/// from the uniform price vector, then from `hint`.
inline std::optional<PriceVector> locate_equilibrium(const Economy& economy,
                                                     const std::optional<PriceVector>& hint = {}) {
  if (economy.kind() == EconomyKind::Linearized) {
    return PriceVector(economy.linearized_spec().p_star);
  }
  std::vector<PriceVector> starts{
      PriceVector::normalized(Vector::Ones(economy.n_commodities()))};
  if (hint) starts.push_back(*hint);
  for (const auto& start : starts) {
    try {
      return find_equilibrium(economy, start, 1e-12, 200);
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

namespace detail {

struct Prepared {
  Economy economy;
  PriceVector p0;
  std::optional<PriceVector> equilibrium;
};

inline Prepared prepare(const ScenarioConfig& cfg) {
  if (!fs::exists(cfg.economy_path)) {
    throw ConfigError("economy file not found: " + cfg.economy_path.string());
  }
  Economy economy = io::load_economy(cfg.economy_path);
  std::optional<PriceVector> p0;
  if (cfg.initial_prices) {
    if (cfg.initial_prices->size() != economy.n_commodities()) {
      throw ConfigError("initial_prices has the wrong number of commodities");
    }
    try {
      p0 = PriceVector::normalized(*cfg.initial_prices);
    } catch (const Error& e) {
      throw ConfigError(std::string("initial_prices: ") + e.what());
    }
  } else {
    p0 = random_unit_prices(economy.n_commodities(), cfg.seed);
  }
  auto eq = locate_equilibrium(economy, p0);
  return {std::move(economy), *p0, std::move(eq)};
}

inline void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

}  // namespace detail

inline int run_simulate(const ScenarioConfig& cfg, std::ostream& log = std::cerr) {
  std::optional<detail::Prepared> prep;
  try {
    prep = detail::prepare(cfg);
    detail::prepare_output(cfg.output_dir);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const auto& economy = prep->economy;

  RunOptions options;
  options.previous = cfg.previous_prices;
  options.velocity = cfg.initial_velocity;
  if (prep->equilibrium) options.equilibrium = prep->equilibrium->values();

  Trajectory traj;
  std::string status = "ok";
  std::string message;
  try {
    traj = run_dynamics(cfg.dynamics, economy, prep->p0, options);
  } catch (const RunAborted& e) {
    traj = e.partial();
    status = "domain_error";
    message = e.what();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    status = "domain_error";
    message = e.what();
  }

  io::write_text(cfg.output_dir / "trajectory.csv", io::trajectory_csv(traj));

  json summary;
  summary["mechanism"] = to_string(cfg.dynamics.mechanism);
  summary["economy"] = economy.name();
  summary["seed"] = cfg.seed;
  summary["status"] = status;
  summary["message"] = message;
  summary["steps_completed"] = traj.empty() ? 0 : traj.back().step;
  summary["equilibrium"] = prep->equilibrium ? io::to_json(prep->equilibrium->values()) : json(nullptr);
  if (!traj.empty()) {
    const auto& last = traj.back();
    summary["final_prices"] = io::to_json(last.prices);
    summary["final_xi_norm"] = last.xi_norm;
    summary["final_angle_to_equilibrium"] = io::number_or_null(last.angle_eq);
    summary["converged"] = std::isfinite(last.angle_eq) ? last.angle_eq < 1e-6 : last.xi_norm <= 1e-8;
  } else {
    summary["final_prices"] = nullptr;
    summary["final_xi_norm"] = nullptr;
    summary["final_angle_to_equilibrium"] = nullptr;
    summary["converged"] = false;
  }
  summary["cycle"] = nullptr;
  if (cfg.analysis.cycles) {
    if (auto cycle = analysis::detect_two_point_cycle(traj, cfg.cycle_tolerance, cfg.cycle_repeats)) {
      if (cfg.dynamics.mechanism == Mechanism::SecondOrderDiscrete) {
        *cycle = analysis::annotate_cycle(
            *cycle, economy, {cfg.dynamics.k, cfg.dynamics.dt, *cfg.dynamics.gamma_hat});
      }
      summary["cycle"] = io::to_json(*cycle);
    }
  }
  io::write_text(cfg.output_dir / "summary.json", summary.dump(2) + "\n");
  if (status != "ok") {
    log << "domain error: " << message << '\n';
    return kDomainError;
  }
  return kSuccess;
}

inline int run_sweep(const ScenarioConfig& cfg, std::ostream& log = std::cerr) {
  std::optional<detail::Prepared> prep;
  try {
    prep = detail::prepare(cfg);
    detail::prepare_output(cfg.output_dir);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  analysis::SweepSettings settings;
  settings.k = cfg.dynamics.k;
  settings.dt = cfg.dynamics.dt;
  settings.steps = cfg.dynamics.steps;
  settings.tol = cfg.cycle_tolerance;
  settings.min_repeats = cfg.cycle_repeats;
  const auto rows = analysis::cycle_angle_sweep(prep->economy, cfg.analysis.sweep, prep->p0, settings);

  io::write_text(cfg.output_dir / "sweep.csv", io::sweep_csv(rows));
  json out = json::array();
  for (const auto& r : rows) out.push_back(io::to_json(r));
  io::write_text(cfg.output_dir / "sweep.json", json{{"rows", out}}.dump(2) + "\n");
  return kSuccess;
}

struct VerifyResult {
  std::string property;
  bool passed;
  std::string detail;
};

/// Walras' law, homogeneity, zero mode and sphere preservation for one economy.
inline std::vector<VerifyResult> verify_economy(const Economy& economy, std::uint64_t seed) {
  std::vector<VerifyResult> results;
  std::mt19937_64 rng(seed);
  const Eigen::Index n = economy.n_commodities();

  {
    int failures = 0;
    int homog_failures = 0;
    for (int i = 0; i < 1000; ++i) {
      const PriceVector p = random_unit_prices(n, rng);
      if (!check_walras(economy, p, 1e-10)) ++failures;
      const double tol = 1e-10 * std::max(1.0, economy.excess_demand(p).norm());
      for (double c : {1e-3, 1e3}) {
        if (!check_homogeneity(economy, p, c, tol)) ++homog_failures;
      }
    }
    results.push_back({"walras", failures == 0, std::to_string(failures) + "/1000 violations"});
    results.push_back(
        {"homogeneity", homog_failures == 0, std::to_string(homog_failures) + "/2000 violations"});
  }

  const auto eq = locate_equilibrium(economy);
  if (!eq) {
    results.push_back({"zero_mode", false, "no equilibrium found"});
  } else {
    const double h = std::min(1e-5, 0.5 * eq->min_component());
    const JacobianMatrix jac = jacobian(economy, *eq, h);
    const double residual = (jac * eq->values()).norm();
    const bool ok = economy.excess_demand(*eq).norm() <= 1e-10 &&
                    residual <= 1e-6 * std::max(jac.norm(), 1e-300);
    results.push_back({"zero_mode", ok, "|J p*| = " + io::format_number(residual) +
                                            ", |J| = " + io::format_number(jac.norm())});
  }

  {
    const Vector centre =
        eq ? eq->values() : Vector(Vector::Ones(n) / std::sqrt(static_cast<double>(n)));
    const Matrix basis = geometry::tangent_basis(centre);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector offset(n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) offset[i] = normal(rng);
    const Vector start = centre + 0.05 * std::min(1.0, centre.minCoeff()) * basis * offset.normalized();
    DynamicsState state = DynamicsState::at_rest(PriceVector::normalized(start));
    const SecondOrderParams params{1.0, 0.1, 0.5};
    double worst_norm = 0.0;
    double worst_closed = 0.0;
    std::string detail;
    try {
      for (int step = 0; step < 100; ++step) {
        const SecondOrderStep s = step_second_order_discrete(state, economy, params);
        worst_closed = std::max(worst_closed, s.closed_form_residual());
        state = s.state;
        worst_norm = std::max(worst_norm, std::abs(state.current.norm() - 1.0));
      }
      detail = "max | |p|-1 | = " + io::format_number(worst_norm) +
               ", max closed-form residual = " + io::format_number(worst_closed);
    } catch (const DomainError& e) {
      worst_norm = 1.0;
      detail = e.what();
    }
    results.push_back({"sphere_preservation", worst_norm <= 1e-12 && worst_closed <= 1e-10, detail});
  }
  return results;
}

inline int run_verify(const fs::path& economy_path, std::uint64_t seed, std::ostream& out,
                      std::ostream& log = std::cerr) {
  std::optional<Economy> economy;
  try {
    if (!fs::exists(economy_path)) throw ConfigError("economy file not found: " + economy_path.string());
    economy = io::load_economy(economy_path);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  bool all = true;
  for (const auto& r : verify_economy(*economy, seed)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.property << "  " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kSuccess : kVerificationFailed;
}

inline int run_analyze(const ScenarioConfig& cfg, std::ostream& log = std::cerr) {
  std::optional<detail::Prepared> prep;
  try {
    prep = detail::prepare(cfg);
    detail::prepare_output(cfg.output_dir);
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (!prep->equilibrium) {
    log << "domain error: no equilibrium found\n";
    return kDomainError;
  }
  std::optional<double> gamma = cfg.dynamics.gamma;
  if (!gamma && cfg.dynamics.gamma_hat) gamma = *cfg.dynamics.gamma_hat / cfg.dynamics.dt;
  try {
    const auto& p_star = *prep->equilibrium;
    const auto report =
        analysis::eigen_analysis(prep->economy, p_star, default_fd_step(p_star), cfg.dynamics.k, gamma);
    io::write_text(cfg.output_dir / "report.json", io::to_json(report).dump(2) + "\n");
  } catch (const Error& e) {
    log << "domain error: " << e.what() << '\n';
    return kDomainError;
  }
  return kSuccess;
}

}  // namespace tatonnement::scenario
