#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tatonnement/io.hpp"

using namespace tatonnement;

namespace {
Vector vec(std::initializer_list<double> xs) { return from_std(std::vector<double>(xs)); }
}  // namespace

TEST(FormatNumber, SeventeenSignificantDigitsRoundTrip) {
  EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_number(1.0), "1");
  EXPECT_EQ(io::format_number(kNotApplicable), "");
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(std::stod(io::format_number(x)), x);
  }
}

TEST(EconomyJson, RoundTripPreservesExcessDemand) {
  std::mt19937_64 rng(47);
  std::vector<Economy> economies = {symmetric_cobb_douglas_2good(), scarf_economy(4),
                                    linearized_from_spectrum(vec({1.0, 2.0, 3.0}), {-2.0, -5.0})};
  Matrix j(2, 2);
  j << -1.0, 0.2, 0.3, -1.0;
  economies.push_back(Economy::linearized(vec({1.0, 1.0}), j, false, "corrupted"));
  for (int t = 0; t < 20; ++t) {
    std::vector<Consumer> cs;
    for (const auto& a : oracle::random_cobb_douglas(2 + t % 4, 1 + t % 3, rng)) {
      cs.push_back({from_std(a.weights), from_std(a.endowments)});
    }
    economies.push_back(Economy::cobb_douglas(cs, "random"));
  }
  for (const auto& e : economies) {
    const io::json j1 = io::economy_to_json(e);
    const Economy back = io::economy_from_json(io::json::parse(j1.dump()));
    EXPECT_EQ(back.kind(), e.kind());
    EXPECT_EQ(back.name(), e.name());
    EXPECT_EQ(io::economy_to_json(back), j1);
    for (int s = 0; s < 20; ++s) {
      const PriceVector p(from_std(oracle::random_positive_unit(e.n_commodities(), rng)));
      EXPECT_EQ(back.excess_demand(p), e.excess_demand(p));
    }
  }
}

TEST(EconomyJson, RejectsMalformedInput) {
  EXPECT_THROW(io::economy_from_json(io::json::parse(R"({"kind":"ces"})")), ConfigError);
  EXPECT_THROW(io::economy_from_json(io::json::parse(R"({"consumers":[]})")), ConfigError);
  EXPECT_THROW(io::economy_from_json(io::json::parse(
                   R"({"kind":"cobb_douglas","consumers":[{"alphas":[0.5,"x"],"endowments":[1,1]}]})")),
               Error);
  EXPECT_THROW(io::economy_from_json(io::json::parse(
                   R"({"kind":"cobb_douglas","consumers":[{"alphas":[0.7,0.7],"endowments":[1,1]}]})")),
               Error);
}

TEST(TrajectoryCsv, HeaderAndRows) {
  const Economy e = symmetric_cobb_douglas_2good();
  Trajectory traj;
  traj.equilibrium = vec({1.0, 1.0}).normalized();
  traj.record(0, 0.0, vec({0.8, 0.6}), e, 1.0);
  traj.record(1, 0.5, vec({0.6, 0.8}), e);
  const std::string csv = io::trajectory_csv(traj);
  std::istringstream in(csv);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  EXPECT_EQ(header, "step,time,p_1,p_2,xi_norm,angle_prev,angle_eq,A");
  EXPECT_EQ(row0.rfind("0,0,0.80000000000000004,0.59999999999999998,", 0), 0u) << row0;
  EXPECT_EQ(row0.back(), '1');
  EXPECT_EQ(row1.back(), ',');  // A is not applicable
  EXPECT_EQ(std::count(row1.begin(), row1.end(), ','), 7);
}

TEST(SweepCsv, Header) {
  analysis::SweepRow row;
  row.gamma_hat = 2.0;
  row.outcome = analysis::SweepOutcome::Converged;
  row.converged = true;
  const std::string csv = io::sweep_csv({row});
  EXPECT_EQ(csv, "gamma_hat,alpha_measured,alpha_predicted,eq21_residual,converged\n2,,,,true\n");
}
