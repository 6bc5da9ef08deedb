#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tatonnement/economy.hpp"

using namespace tatonnement;

namespace {

Vector vec(std::initializer_list<double> xs) { return from_std(std::vector<double>(xs)); }

std::vector<Consumer> to_consumers(const std::vector<oracle::Agent>& agents) {
  std::vector<Consumer> out;
  for (const auto& a : agents) out.push_back({from_std(a.weights), from_std(a.endowments)});
  return out;
}

const double kRoot2 = std::sqrt(2.0);

}  // namespace

TEST(PriceVector, RejectsNonPositiveAndShortVectors) {
  EXPECT_THROW(PriceVector({1.0, 0.0}), DomainError);
  EXPECT_THROW(PriceVector({1.0, -2.0}), DomainError);
  EXPECT_THROW(PriceVector({1.0}), DimensionMismatch);
  EXPECT_THROW(PriceVector({1.0, std::nan("")}), DomainError);
}

TEST(PriceVector, NormalizedHasUnitNorm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int i = 0; i < 200; ++i) {
    Vector v(4);
    for (int j = 0; j < 4; ++j) v[j] = u(rng);
    EXPECT_NEAR(PriceVector::normalized(v).norm(), 1.0, 1e-12);
  }
}

TEST(ExcessDemand, SymmetricCobbDouglasAtEquilibriumIsZero) {
  const Economy e = symmetric_cobb_douglas_2good();
  const Vector xi = e.excess_demand(PriceVector({1.0 / kRoot2, 1.0 / kRoot2}));
  EXPECT_NEAR(xi[0], 0.0, 1e-15);
  EXPECT_NEAR(xi[1], 0.0, 1e-15);
}

TEST(ExcessDemand, MatchesAnalyticFormulaAndIsScaleFree) {
  // ξ1 = 0.5 (p2 − p1)/p1, ξ2 = 0.5 (p1 − p2)/p2
  const Economy e = symmetric_cobb_douglas_2good();
  const Vector raw = e.excess_demand(PriceVector({2.0, 1.0}));
  EXPECT_NEAR(raw[0], -0.25, 1e-15);
  EXPECT_NEAR(raw[1], 0.5, 1e-15);
  const Vector unit = e.excess_demand(PriceVector::normalized(vec({2.0, 1.0})));
  EXPECT_NEAR(unit[0], -0.25, 1e-15);
  EXPECT_NEAR(unit[1], 0.5, 1e-15);
}

TEST(ExcessDemand, CobbDouglasMatchesConsumerByConsumerOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto agents = oracle::random_cobb_douglas(2 + trial % 5, 1 + trial % 4, rng);
    const Economy e = Economy::cobb_douglas(to_consumers(agents));
    for (int s = 0; s < 20; ++s) {
      const auto p = oracle::random_positive_unit(agents.front().weights.size(), rng);
      const Vector got = e.excess_demand(PriceVector(from_std(p)));
      const auto want = oracle::cobb_douglas_excess(agents, p);
      for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], 1e-12 * std::max(1.0, std::abs(want[i])));
      }
    }
  }
}

TEST(ExcessDemand, LeontiefMatchesBisectionOracle) {
  const Economy e = scarf_economy(3);
  std::vector<oracle::Agent> agents;
  for (const auto& c : e.consumers()) agents.push_back({to_std(c.weights), to_std(c.endowments)});
  std::mt19937_64 rng(3);
  for (int s = 0; s < 100; ++s) {
    const auto p = oracle::random_positive_unit(3, rng);
    const Vector got = e.excess_demand(PriceVector(from_std(p)));
    const auto want = oracle::leontief_excess_bisection(agents, p);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(ExcessDemand, ErrorsOnDimensionMismatch) {
  const Economy e = scarf_economy(3);
  EXPECT_THROW(e.excess_demand(PriceVector({1.0, 1.0})), DimensionMismatch);
}

TEST(EconomyConstruction, ValidatesConsumers) {
  EXPECT_THROW(Economy::cobb_douglas({{vec({0.6, 0.6}), vec({1.0, 1.0})}}), DomainError);
  EXPECT_THROW(Economy::cobb_douglas({{vec({0.5, 0.5}), vec({1.0, 0.0})}}), DomainError);
  EXPECT_THROW(Economy::cobb_douglas({{vec({-0.5, 1.5}), vec({1.0, 1.0})}}), DomainError);
  EXPECT_THROW(Economy::cobb_douglas({{vec({0.5, 0.5}), vec({1.0, 1.0, 1.0})}}), DimensionMismatch);
  EXPECT_THROW(Economy::leontief({{vec({0.0, 0.0}), vec({1.0, 1.0})}}), DomainError);
  EXPECT_THROW(Economy::cobb_douglas({}), DomainError);
}

TEST(CheckWalras, HoldsForEveryKindAndFailsForCorruptedLinearization) {
  std::mt19937_64 rng(17);
  const Economy cd = symmetric_cobb_douglas_2good();
  const Economy scarf = scarf_economy(3);
  const Economy lin = linearized_from_spectrum(vec({1.0, 2.0, 3.0}), {-2.0, -5.0});
  for (int s = 0; s < 1000; ++s) {
    EXPECT_TRUE(check_walras(cd, PriceVector(from_std(oracle::random_positive_unit(2, rng))), 1e-10));
    EXPECT_TRUE(check_walras(scarf, PriceVector(from_std(oracle::random_positive_unit(3, rng))), 1e-10));
    EXPECT_TRUE(check_walras(lin, PriceVector(from_std(oracle::random_positive_unit(3, rng))), 1e-10));
  }
  Matrix j(2, 2);
  j << -1.0, 0.2, 0.3, -1.0;
  const Economy corrupted = Economy::linearized(vec({1.0, 1.0}), j, /*projected=*/false);
  EXPECT_FALSE(check_walras(corrupted, PriceVector({0.9, 0.4}), 1e-10));
}

TEST(CheckHomogeneity, ScaleInvariance) {
  const Economy cd = symmetric_cobb_douglas_2good();
  const PriceVector p({0.3, 0.7});
  EXPECT_TRUE(check_homogeneity(cd, p, 1.0, 0.0));
  EXPECT_TRUE(check_homogeneity(cd, p, 2.0, 1e-14));
  EXPECT_TRUE(check_homogeneity(cd, p, 1e6, 1e-8));
  EXPECT_THROW(check_homogeneity(cd, p, 0.0, 1e-8), DomainError);
  EXPECT_THROW(check_homogeneity(cd, p, -1.0, 1e-8), DomainError);

  std::mt19937_64 rng(23);
  const Economy scarf = scarf_economy(4);
  const Economy lin = linearized_from_spectrum(vec({1.0, 1.0, 2.0}), {-1.0, -3.0});
  for (int s = 0; s < 200; ++s) {
    for (double c : {1e-3, 1.0, 1e3}) {
      const PriceVector p4(from_std(oracle::random_positive_unit(4, rng)));
      EXPECT_TRUE(check_homogeneity(scarf, p4, c, 1e-12));
      const PriceVector p3(from_std(oracle::random_positive_unit(3, rng)));
      EXPECT_TRUE(check_homogeneity(lin, p3, c, 1e-12));
    }
  }
}

TEST(Jacobian, RecoversStoredLinearizedJacobian) {
  Matrix j(3, 3);
  j << -1.0, 0.4, 0.2, 0.3, -2.0, 0.1, 0.5, 0.6, -1.5;
  const Economy lin = Economy::linearized(vec({1.0, 2.0, 2.0}), j);
  const PriceVector p_star(lin.linearized_spec().p_star);
  const Matrix fd = jacobian(lin, p_star, 1e-5);
  EXPECT_LT((fd - lin.linearized_spec().jacobian).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((lin.linearized_spec().jacobian * p_star.values()).norm(), 1e-14);
}

TEST(Jacobian, CobbDouglasEntriesAndZeroMode) {
  // ∂ξ1/∂p1 = −0.5 p2/p1², ∂ξ1/∂p2 = 0.5/p1 at p = (1/√2, 1/√2).
  const Economy e = symmetric_cobb_douglas_2good();
  const PriceVector p_star({1.0 / kRoot2, 1.0 / kRoot2});
  const Matrix jac = jacobian(e, p_star);
  EXPECT_NEAR(jac(0, 0), -1.0 / kRoot2, 1e-8);
  EXPECT_NEAR(jac(0, 1), 1.0 / kRoot2, 1e-8);
  EXPECT_NEAR(jac(1, 0), 1.0 / kRoot2, 1e-8);
  EXPECT_NEAR(jac(1, 1), -1.0 / kRoot2, 1e-8);
  EXPECT_LT((jac * p_star.values()).norm(), 1e-6);
}

TEST(Jacobian, StepMustStayInsideOrthant) {
  const Economy e = symmetric_cobb_douglas_2good();
  EXPECT_THROW(jacobian(e, PriceVector({0.01, 1.0}), 0.02), DomainError);
  EXPECT_THROW(jacobian(e, PriceVector({0.5, 1.0}), 0.0), DomainError);
}

TEST(Jacobian, ZeroModeAtRandomCobbDouglasEquilibria) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto agents = oracle::random_cobb_douglas(3 + trial % 3, 3, rng);
    const Economy e = Economy::cobb_douglas(to_consumers(agents));
    const PriceVector p_star =
        find_equilibrium(e, PriceVector::normalized(Vector::Ones(e.n_commodities())), 1e-12, 100);
    ASSERT_LE(e.excess_demand(p_star).norm(), 1e-10);
    const Matrix jac = jacobian(e, p_star);
    EXPECT_LE((jac * p_star.values()).norm(), 1e-6 * jac.norm());
  }
}

TEST(FindEquilibrium, SymmetricCobbDouglas) {
  const Economy e = symmetric_cobb_douglas_2good();
  const PriceVector p = find_equilibrium(e, PriceVector({2.0, 1.0}), 1e-12, 50);
  EXPECT_NEAR(p[0], 1.0 / kRoot2, 1e-10);
  EXPECT_NEAR(p[1], 1.0 / kRoot2, 1e-10);
  EXPECT_NEAR(p.norm(), 1.0, 1e-14);
}

TEST(FindEquilibrium, AsymmetricCobbDouglasHasAnalyticRatio) {
  // ξ1 = 0.3 p2/p1 − 0.1 = 0  ⇒  p1 = 3 p2
  const Economy e = Economy::cobb_douglas(
      {{vec({0.9, 0.1}), vec({1.0, 0.0})}, {vec({0.3, 0.7}), vec({0.0, 1.0})}});
  const PriceVector p = find_equilibrium(e, PriceVector({1.0, 1.0}), 1e-12, 50);
  EXPECT_NEAR(p[0] / p[1], 3.0, 1e-10);
}

TEST(FindEquilibrium, ScarfSymmetricPoint) {
  const Economy e = scarf_economy(3);
  const PriceVector p = find_equilibrium(e, PriceVector({1.3, 1.0, 0.8}), 1e-12, 100);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], 1.0 / std::sqrt(3.0), 1e-10);
}

TEST(FindEquilibrium, LinearizedReturnsStoredPoint) {
  const Economy e = linearized_from_spectrum(vec({1.0, 2.0, 2.0}), {-2.0, -5.0});
  const Vector& p_star = e.linearized_spec().p_star;
  const Vector start = p_star + 0.05 * vec({1.0, -1.0, 0.5});
  const PriceVector p = find_equilibrium(e, PriceVector::normalized(start), 1e-13, 50);
  EXPECT_LT((p.values() - p_star).norm(), 1e-12);
}

TEST(FindEquilibrium, ReportsNoConvergence) {
  const Economy e = symmetric_cobb_douglas_2good();
  try {
    find_equilibrium(e, PriceVector({5.0, 1.0}), 1e-14, 1);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& err) {
    EXPECT_EQ(err.last_iterate().size(), 2u);
  }
}

TEST(LinearizedFromSpectrum, TangentSpectrumIsAsRequested) {
  const Economy e = linearized_from_spectrum(vec({1.0, 1.0, 1.0}), {-2.0, -5.0});
  const auto& spec = e.linearized_spec();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(spec.jacobian);
  const Vector ev = solver.eigenvalues();
  EXPECT_NEAR(ev[0], -5.0, 1e-12);
  EXPECT_NEAR(ev[1], -2.0, 1e-12);
  EXPECT_NEAR(ev[2], 0.0, 1e-12);
}
