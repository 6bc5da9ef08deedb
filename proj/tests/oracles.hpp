#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

struct Agent {
  Vec weights;
  Vec endowments;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Consumer-by-consumer Cobb-Douglas excess demand: each consumer spends the
/// share w_i of income p·ω on good i.
inline Vec cobb_douglas_excess(const std::vector<Agent>& agents, const Vec& p) {
  Vec xi(p.size(), 0.0);
  for (const auto& a : agents) {
    double income = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) income += p[i] * a.endowments[i];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double demand = a.weights[i] * income / p[i];
      xi[i] += demand - a.endowments[i];
    }
  }
  return xi;
}

/// Leontief excess demand found numerically: the consumer buys t·a with the
/// largest affordable t, located by bisection on the budget constraint.
inline Vec leontief_excess_bisection(const std::vector<Agent>& agents, const Vec& p) {
  Vec xi(p.size(), 0.0);
  for (const auto& a : agents) {
    const double income = dot(p, a.endowments);
    double lo = 0.0, hi = 1.0;
    while (dot(p, a.weights) * hi <= income) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dot(p, a.weights) * mid <= income ? lo : hi) = mid;
    }
    for (std::size_t i = 0; i < p.size(); ++i) xi[i] += lo * a.weights[i] - a.endowments[i];
  }
  return xi;
}

/// Characteristic polynomial coefficients c[0..n] of det(λI − A) (c[0] = 1)
/// by Faddeev–LeVerrier.
inline Vec characteristic_polynomial(const Mat& a) {
  const std::size_t n = a.size();
  Vec c(n + 1, 0.0);
  c[0] = 1.0;
  Mat m(n, Vec(n, 0.0));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    Mat next(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s + (i == j ? c[k - 1] : 0.0);
      }
    }
    m = next;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) trace += a[i][l] * m[l][i];
    }
    c[k] = -trace / static_cast<double>(k);
  }
  return c;
}

/// All roots of the monic polynomial with coefficients c (highest first) by
/// Durand–Kerner iteration.
inline std::vector<Complex> polynomial_roots(const Vec& c) {
  const std::size_t n = c.size() - 1;
  std::vector<Complex> z(n);
  double bound = 0.0;
  for (std::size_t i = 1; i <= n; ++i) bound = std::max(bound, std::abs(c[i]));
  const Complex seed(0.4, 0.9);
  for (std::size_t i = 0; i < n; ++i) z[i] = (1.0 + bound) * std::pow(seed, static_cast<double>(i));
  const auto eval = [&c](Complex x) {
    Complex v = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) v = v * x + c[i];
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      const Complex step = eval(z[i]) / denom;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15) break;
  }
  return z;
}

inline std::vector<Complex> eigenvalues_by_charpoly(const Mat& a) {
  return polynomial_roots(characteristic_polynomial(a));
}

/// Largest distance between two spectra under greedy nearest matching.
inline double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const auto& x : a) {
    auto best = std::min_element(b.begin(), b.end(), [&x](const Complex& u, const Complex& v) {
      return std::abs(u - x) < std::abs(v - x);
    });
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

/// Smallest root in (0, π/2) of
///   (1 − cos²α)(1 + (1 − γ̂)cosα)² − (k X cos α)²,
/// located by a fine scan and refined by bisection. Returns NaN if none.
inline double smallest_cycle_angle(double k, double gamma_hat, double xi_hat_norm) {
  const auto f = [&](double a) {
    const double c = std::cos(a);
    const double br = 1.0 + (1.0 - gamma_hat) * c;
    return (1.0 - c * c) * br * br - k * k * c * c * xi_hat_norm * xi_hat_norm;
  };
  const int samples = 200000;
  const double hi_end = M_PI / 2.0;
  double prev_a = 1e-12, prev_f = f(prev_a);
  for (int i = 1; i <= samples; ++i) {
    const double a = hi_end * i / samples;
    const double fa = f(a);
    if ((fa > 0.0) != (prev_f > 0.0)) {
      double lo = prev_a, hi = a;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) > 0.0) == (prev_f > 0.0) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_a = a;
    prev_f = fa;
  }
  return std::nan("");
}

/// Random Cobb-Douglas agents with positive shares and endowments.
inline std::vector<Agent> random_cobb_douglas(std::size_t goods, std::size_t consumers,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<Agent> out;
  for (std::size_t j = 0; j < consumers; ++j) {
    Agent a{Vec(goods), Vec(goods)};
    double total = 0.0;
    for (std::size_t i = 0; i < goods; ++i) {
      a.weights[i] = u(rng);
      total += a.weights[i];
      a.endowments[i] = u(rng);
    }
    for (auto& w : a.weights) w /= total;
    out.push_back(a);
  }
  return out;
}

/// Random strictly positive unit vector.
inline Vec random_positive_unit(std::size_t n, std::mt19937_64& rng, double floor = 0.02) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  Vec v(n);
  for (auto& x : v) x = u(rng);
  const double s = norm(v);
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace oracle
