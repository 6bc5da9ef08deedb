#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tatonnement/dynamics.hpp"
#include "tatonnement/economy.hpp"
#include "tatonnement/geometry.hpp"
#include "tatonnement/trajectory.hpp"

namespace tatonnement::analysis {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Stability

struct StabilityReport {
  Vector equilibrium;
  double fd_step = 0.0;
  std::vector<Complex> eigenvalues;          // full spectrum of Dξ(p*)
  std::vector<Complex> tangent_eigenvalues;  // spectrum with the p* direction deflated
  double zero_mode_residual = 0.0;           // |Dξ(p*)·p*|, before deflation
  double jacobian_norm = 0.0;                // Frobenius
  bool stable = false;                       // every tangent mode has Re < 0
  bool has_complex_modes = false;
  std::optional<double> lambda_m;            // set only when stable
  std::optional<Complex> predicted_rate;
  std::optional<double> fitted_rate;
};

inline constexpr double kEquilibriumTolerance = 1e-8;

inline std::vector<Complex> eigenvalues_of(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error("eigen-solver failed");
  const auto values = solver.eigenvalues();
  std::vector<Complex> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

/// Spectrum of the finite-difference Jacobian at p*. λ_m is the smallest |Re|
/// of the tangent modes scaled by |p*|, reported only when all of them are
/// negative. Optional (k, γ) fill in the predicted decay rate.
inline StabilityReport eigen_analysis(const Economy& economy, const PriceVector& p_star, double h,
                                      std::optional<double> k = std::nullopt,
                                      std::optional<double> gamma = std::nullopt) {
  const double residual = economy.excess_demand(p_star).norm();
  if (residual > kEquilibriumTolerance) {
    throw NotAnEquilibrium("eigen_analysis: |xi(p*)| = " + std::to_string(residual));
  }
  StabilityReport report;
  report.equilibrium = p_star.values();
  report.fd_step = h;
  const JacobianMatrix jac = jacobian(economy, p_star, h);
  report.jacobian_norm = jac.norm();
  report.zero_mode_residual = (jac * p_star.values()).norm();
  report.eigenvalues = eigenvalues_of(jac);

  const Matrix basis = geometry::tangent_basis(p_star.values());
  report.tangent_eigenvalues = eigenvalues_of(basis.transpose() * jac * basis);

  const double scale = std::max(1.0, report.jacobian_norm);
  report.stable = true;
  double slowest = std::numeric_limits<double>::infinity();
  for (const Complex& z : report.tangent_eigenvalues) {
    if (!(z.real() < 0.0)) report.stable = false;
    if (std::abs(z.imag()) > 1e-12 * scale) report.has_complex_modes = true;
    slowest = std::min(slowest, std::abs(z.real()));
  }
  if (report.stable) {
    report.lambda_m = slowest * p_star.norm();
    if (k && gamma) report.predicted_rate = decay_rate(*gamma, *k, *report.lambda_m);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Decay and frequency fitting

inline constexpr double kNoiseFloor = 1e-12;

namespace detail {

struct Peak {
  double time;
  double value;
};

/// Interior local maxima, refined by a parabola through the three samples.
inline std::vector<Peak> local_maxima(const std::vector<double>& t, const std::vector<double>& v) {
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > kNoiseFloor)) continue;
    const double curvature = v[i - 1] - 2.0 * v[i] + v[i + 1];
    double offset = 0.0;
    if (curvature < 0.0) offset = std::clamp(0.5 * (v[i - 1] - v[i + 1]) / curvature, -0.5, 0.5);
    const double spacing = offset >= 0.0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
    peaks.push_back({t[i] + offset * spacing, v[i] - 0.25 * (v[i - 1] - v[i + 1]) * offset});
  }
  return peaks;
}

/// Least-squares slope of y against x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

/// Exponential decay constant of a positive series (returns +0.5 for
/// 0.1·e^{−0.5t}). Fits log(value) against time over the tail half; when the
/// series oscillates (three or more local maxima) the fit runs through the
/// envelope of successive maxima instead.
inline double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || values.size() < 3) {
    throw NotConverging("fit_decay_rate: need at least three samples");
  }
  if (!(values.back() < values.front())) {
    throw NotConverging("fit_decay_rate: series does not decrease");
  }
  const double t_mid = 0.5 * (times.front() + times.back());
  std::vector<double> xs, ys;

  const auto peaks = detail::local_maxima(times, values);
  if (peaks.size() >= 3) {
    for (const auto& pk : peaks) {
      if (pk.time >= t_mid) {
        xs.push_back(pk.time);
        ys.push_back(std::log(pk.value));
      }
    }
    if (xs.size() < 2) {
      xs.clear();
      ys.clear();
      for (const auto& pk : peaks) {
        xs.push_back(pk.time);
        ys.push_back(std::log(pk.value));
      }
    }
  } else {
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] >= t_mid && values[i] > kNoiseFloor) {
        xs.push_back(times[i]);
        ys.push_back(std::log(values[i]));
      }
    }
  }
  if (xs.size() < 2) throw NotConverging("fit_decay_rate: tail is below the noise floor");
  return -detail::slope(xs, ys);
}

inline double fit_decay_rate(const Trajectory& trajectory, const Vector& p_star) {
  return fit_decay_rate(trajectory.times(), trajectory.angles_to(p_star));
}

/// Angular frequency ω of an oscillating angle series |θ(t)| with
/// θ ∝ cos(ωt): its maxima repeat every half period π/ω.
inline double fit_angle_oscillation_frequency(const std::vector<double>& times,
                                              const std::vector<double>& values) {
  const auto peaks = detail::local_maxima(times, values);
  if (peaks.size() < 2) throw NotConverging("fit_angle_oscillation_frequency: fewer than two peaks");
  std::vector<double> index, at;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    index.push_back(static_cast<double>(i));
    at.push_back(peaks[i].time);
  }
  return M_PI / detail::slope(index, at);
}

inline double fit_angle_oscillation_frequency(const Trajectory& trajectory, const Vector& p_star) {
  return fit_angle_oscillation_frequency(trajectory.times(), trajectory.angles_to(p_star));
}

// ---------------------------------------------------------------------------
// Two-point cycles

struct CycleReport {
  Vector a;  // last point of the trajectory
  Vector b;  // the point before it
  double alpha = 0.0;
  std::size_t repeats = 0;
  double max_return_distance = 0.0;  // max angle(p_{N+2}, p_N) over the window
  double xi_hat_scale = kNotApplicable;
  double xi_norm_at_a = kNotApplicable;
  double eq21_residual = kNotApplicable;
  double alpha_predicted = kNotApplicable;
};

inline constexpr double kCycleTolerance = 1e-9;
inline constexpr std::size_t kCycleRepeats = 10;

/// Looks for p_{N+2} ≈ p_N with p_{N+1} ≉ p_N over the last 2·min_repeats
/// steps of the trajectory (which must be recorded with stride 1).
inline std::optional<CycleReport> detect_two_point_cycle(const Trajectory& trajectory,
                                                         double tol = kCycleTolerance,
                                                         std::size_t min_repeats = kCycleRepeats) {
  const std::size_t len = trajectory.size();
  if (min_repeats == 0 || len < 2 * min_repeats + 2) return std::nullopt;
  double worst = 0.0;
  for (std::size_t i = len - 2 * min_repeats; i < len; ++i) {
    const Vector& p = trajectory[i].prices;
    const double back_two = geometry::angle_between(p, trajectory[i - 2].prices);
    const double back_one = geometry::angle_between(p, trajectory[i - 1].prices);
    if (!(back_two <= tol) || !(back_one > tol)) return std::nullopt;
    worst = std::max(worst, back_two);
  }
  CycleReport report;
  report.a = trajectory[len - 1].prices.normalized();
  report.b = trajectory[len - 2].prices.normalized();
  report.alpha = geometry::angle_between(report.a, report.b);
  report.repeats = min_repeats;
  report.max_return_distance = worst;
  return report;
}

/// (1 − cos²α)[1 + (1 − γ̂)cos α]² − k² cos²α |ξ̂(a)|², with ξ̂ = xi_hat_scale·ξ.
/// Vanishes on a two-point cycle of the discrete second-order stepper.
inline double eq21_residual(const PriceVector& a, double alpha, double k, double gamma_hat,
                            const Economy& economy, double xi_hat_scale) {
  const double c = std::cos(alpha);
  const double xi_hat = xi_hat_scale * economy.excess_demand(a).norm();
  const double bracket = 1.0 + (1.0 - gamma_hat) * c;
  return (1.0 - c * c) * bracket * bracket - k * k * c * c * xi_hat * xi_hat;
}

struct CycleAnglePrediction {
  double alpha;
  bool large_damping;  // γ̂ ≥ 5; below that the approximation is not meant to hold
};

/// Large-damping cycle angle α ≈ (k/γ̂)|ξ̂(a)|.
inline CycleAnglePrediction predicted_cycle_angle(double k, double gamma_hat, double xi_hat_norm) {
  return {k * xi_hat_norm / gamma_hat, gamma_hat >= 5.0};
}

/// Smallest positive α solving the two-point cycle condition for given k, γ̂
/// and |ξ̂|, found by bracketing in c = cos α downward from c = 1 and
/// bisecting. Throws NoConvergence when no root exists in (0, π/2].
inline double solve_cycle_angle(double k, double gamma_hat, double xi_hat_norm) {
  if (!(k > 0.0) || !(xi_hat_norm > 0.0)) throw DomainError("solve_cycle_angle: need k, |xi_hat| > 0");
  const auto f = [&](double c) {
    const double bracket = 1.0 + (1.0 - gamma_hat) * c;
    return (1.0 - c * c) * bracket * bracket - k * k * c * c * xi_hat_norm * xi_hat_norm;
  };
  // f(1) < 0; walk toward c = 0 until the sign changes
  constexpr int kGrid = 200000;
  double hi = 1.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double lo = 1.0 - static_cast<double>(i) / kGrid;
    if (f(lo) >= 0.0) {
      double a = lo, b = hi;  // f(a) >= 0 > f(b)
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        (f(mid) >= 0.0 ? a : b) = mid;
      }
      return std::acos(0.5 * (a + b));
    }
    hi = lo;
  }
  throw NoConvergence("solve_cycle_angle: no root in (0, pi/2]", {});
}

/// Fills the cycle-condition residual and the large-damping prediction of a detected cycle.
inline CycleReport annotate_cycle(CycleReport report, const Economy& economy,
                                  const SecondOrderParams& params) {
  const PriceVector a(report.a);
  report.xi_hat_scale = params.xi_hat_scale();
  report.xi_norm_at_a = economy.excess_demand(a).norm();
  report.eq21_residual =
      eq21_residual(a, report.alpha, params.k, params.gamma_hat, economy, report.xi_hat_scale);
  report.alpha_predicted =
      predicted_cycle_angle(params.k, params.gamma_hat, report.xi_hat_scale * report.xi_norm_at_a)
          .alpha;
  return report;
}

// ---------------------------------------------------------------------------
// Damping sweep

enum class SweepOutcome { Cycle, Converged, NoCycle, DomainExit };

inline const char* to_string(SweepOutcome o) {
  switch (o) {
    case SweepOutcome::Cycle: return "cycle";
    case SweepOutcome::Converged: return "converged";
    case SweepOutcome::NoCycle: return "no_cycle";
    case SweepOutcome::DomainExit: return "domain_error";
  }
  return "unknown";
}

struct SweepRow {
  double gamma_hat = 0.0;
  SweepOutcome outcome = SweepOutcome::NoCycle;
  double alpha_measured = kNotApplicable;
  double alpha_predicted = kNotApplicable;
  double eq21_residual = kNotApplicable;
  bool converged = false;
  std::string message;
};

struct SweepSettings {
  double k = 1.0;
  double dt = 1.0;
  std::size_t steps = 20000;
  double tol = kCycleTolerance;
  std::size_t min_repeats = kCycleRepeats;
};

inline SweepRow sweep_row(const Economy& economy, const PriceVector& p0, double gamma_hat,
                          const SweepSettings& settings) {
  SweepRow row;
  row.gamma_hat = gamma_hat;
  const SecondOrderParams params{settings.k, settings.dt, gamma_hat};
  try {
    const Trajectory traj = run_second_order_discrete(DynamicsState::at_rest(p0), economy, params,
                                                      settings.steps);
    if (auto cycle = detect_two_point_cycle(traj, settings.tol, settings.min_repeats)) {
      const CycleReport annotated = annotate_cycle(*cycle, economy, params);
      row.outcome = SweepOutcome::Cycle;
      row.alpha_measured = annotated.alpha;
      row.alpha_predicted = annotated.alpha_predicted;
      row.eq21_residual = annotated.eq21_residual;
    } else {
      const std::size_t len = traj.size();
      const bool settled = len >= 3 && traj[len - 1].angle_prev <= settings.tol &&
                           geometry::angle_between(traj[len - 1].prices, traj[len - 3].prices) <=
                               settings.tol;
      row.outcome = settled ? SweepOutcome::Converged : SweepOutcome::NoCycle;
      row.converged = settled;
    }
  } catch (const DomainError& e) {
    row.outcome = SweepOutcome::DomainExit;
    row.message = e.what();
  }
  return row;
}

/// One discrete second-order run per γ̂, rows evaluated concurrently and
/// returned in input order.
inline std::vector<SweepRow> cycle_angle_sweep(const Economy& economy,
                                               const std::vector<double>& gamma_hats,
                                               const PriceVector& p0,
                                               const SweepSettings& settings = {}) {
  std::vector<std::future<SweepRow>> pending;
  pending.reserve(gamma_hats.size());
  for (double g : gamma_hats) {
    pending.push_back(std::async(std::launch::async, [&economy, &p0, g, &settings] {
      return sweep_row(economy, p0, g, settings);
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(pending.size());
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

}  // namespace tatonnement::analysis
