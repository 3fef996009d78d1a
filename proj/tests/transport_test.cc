// Copyright 2026 The Pufferfish Calibration Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pufferfish/transport.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace pufferfish {
namespace {

using ::testing::HasSubstr;

SecretPairScenario Scenario(std::vector<double> p_i, std::vector<double> p_j) {
  return MakeInstance(std::move(p_i), std::move(p_j))->scenarios().front();
}

SecretPairScenario NearUniform() { return Scenario({0.52, 0.48}, {0.5, 0.5}); }

SecretPairScenario EndHeavy() {
  return Scenario({0.50001, 0.0, 0.00001, 0.49998},
                  {0.49996, 0.00001, 0.0, 0.50003});
}

void ExpectPlan(const TransportPlan& plan,
                const std::vector<std::vector<double>>& expected) {
  ASSERT_EQ(plan.size(), expected.size());
  for (size_t x = 0; x < plan.size(); ++x) {
    for (size_t xp = 0; xp < plan.size(); ++xp) {
      EXPECT_NEAR(plan(x, xp), expected[x][xp], 1e-12)
          << "at (" << x << ", " << xp << ")";
    }
  }
}

TEST(KantorovichPlanTest, NearUniform) {
  const TransportPlan plan = KantorovichPlan(NearUniform());
  ExpectPlan(plan, {{0.5, 0.02}, {0.0, 0.48}});
  EXPECT_EQ(plan.max_distance(), 1u);
  EXPECT_EQ(plan.support().size(), 3u);
  // Brute-force check: the only free parameter of a 2x2 coupling is
  // pi(0,1) in [0.02, 0.5]; its cost is pi(0,1) + pi(1,0) = 2 pi(0,1) - 0.02.
  EXPECT_NEAR(plan.TransportCost(),
              testing::MinCouplingCostOracle({0.52, 0.48}, {0.5, 0.5}), 1e-12);
  EXPECT_NEAR(plan.TransportCost(), 0.02, 1e-15);
}

TEST(KantorovichPlanTest, IdenticalPriorsGiveDiagonalPlan) {
  const TransportPlan plan =
      KantorovichPlan(Scenario({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}));
  ExpectPlan(plan, {{0.2, 0, 0}, {0, 0.3, 0}, {0, 0, 0.5}});
  EXPECT_EQ(plan.max_distance(), 0u);
}

TEST(KantorovichPlanTest, EndHeavy) {
  const TransportPlan plan = KantorovichPlan(EndHeavy());
  ExpectPlan(plan, {{0.49996, 0.00001, 0, 0.00004},
                    {0, 0, 0, 0},
                    {0, 0, 0, 0.00001},
                    {0, 0, 0, 0.49998}});
  EXPECT_EQ(plan.max_distance(), 3u);
}

TEST(WorstCaseTest, Condition) {
  EXPECT_TRUE(WorstCaseCondition(EndHeavy()));
  // 0.52 > 1 - 0.5.
  EXPECT_TRUE(WorstCaseCondition(NearUniform()));
  const double third = 1.0 / 3.0;
  EXPECT_FALSE(WorstCaseCondition(
      Scenario({third, third, 1 - 2 * third}, {third, third, 1 - 2 * third})));
  // Equality is not enough.
  EXPECT_FALSE(WorstCaseCondition(Scenario({0.5, 0.5}, {0.5, 0.5})));
}

TEST(WorstCaseTest, ClosedFormPlans) {
  auto end_heavy = WorstCasePlan(EndHeavy());
  ASSERT_TRUE(end_heavy.ok()) << end_heavy.status();
  ExpectPlan(*end_heavy, {{0.49996, 0.00001, 0, 0.00004},
                       {0, 0, 0, 0},
                       {0, 0, 0, 0.00001},
                       {0, 0, 0, 0.49998}});

  auto small = WorstCasePlan(Scenario({0.6, 0.4}, {0.3, 0.7}));
  ASSERT_TRUE(small.ok());
  ExpectPlan(*small, {{0.3, 0.3}, {0.0, 0.4}});
  ExpectPlan(KantorovichPlan(Scenario({0.6, 0.4}, {0.3, 0.7})),
             {{0.3, 0.3}, {0.0, 0.4}});

  auto near_uniform = WorstCasePlan(NearUniform());
  ASSERT_TRUE(near_uniform.ok());
  ExpectPlan(*near_uniform, {{0.5, 0.02}, {0.0, 0.48}});
}

TEST(WorstCaseTest, ConditionNotMet) {
  auto plan = WorstCasePlan(Scenario({0.2, 0.8}, {0.5, 0.5}));
  EXPECT_FALSE(plan.ok());
  EXPECT_THAT(plan.status().message(), HasSubstr("ConditionNotMet"));
}

TEST(MassSplitTest, Columns) {
  const TransportPlan plan = KantorovichPlan(NearUniform());
  MassSplit one = SplitColumnMass(plan, 1);
  EXPECT_NEAR(one.diagonal, 0.48, 1e-15);
  EXPECT_NEAR(one.off_diagonal, 0.02, 1e-15);
  MassSplit zero = SplitColumnMass(plan, 0);
  EXPECT_DOUBLE_EQ(zero.diagonal, 0.5);
  EXPECT_DOUBLE_EQ(zero.off_diagonal, 0.0);

  const TransportPlan diagonal =
      KantorovichPlan(Scenario({0.1, 0.9}, {0.1, 0.9}));
  EXPECT_DOUBLE_EQ(SplitColumnMass(diagonal, 1).diagonal, 0.9);
  EXPECT_DOUBLE_EQ(SplitColumnMass(diagonal, 1).off_diagonal, 0.0);
}

TEST(TransportPlanTest, FromMatrixValidates) {
  EXPECT_FALSE(TransportPlan::FromMatrix(2, {0.5, 0.5, 0.5}).ok());
  EXPECT_FALSE(TransportPlan::FromMatrix(2, {0.5, 0.5, 0.5, 0.5}).ok());
  EXPECT_FALSE(TransportPlan::FromMatrix(2, {1.5, -0.5, 0.0, 0.0}).ok());
  auto plan = TransportPlan::FromMatrix(2, {0.5, 1e-13, 0.0, 0.5});
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(plan->max_distance(), 0u);
  EXPECT_EQ((*plan)(0, 1), 0.0);
}

TEST(TransportPlanTest, JsonAndCsvExports) {
  const TransportPlan plan = KantorovichPlan(NearUniform());
  const nlohmann::json doc = PlanToJson(plan);
  EXPECT_EQ(doc["max_distance"], 1);
  EXPECT_EQ(doc["support"].size(), 3u);
  EXPECT_DOUBLE_EQ(doc["matrix"][0][1].get<double>(), plan(0, 1));
  EXPECT_THAT(PlanToCsv(plan), HasSubstr("x,0,1\n0,0.5,"));
}

// Marginals, optimality against the flow oracle and the closed form
// W1 = sum |F_i - F_j|, monotone support, and closed-form agreement.
TEST(KantorovichPlanPropertyTest, RandomPriors) {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t size = 1 + trial % 5;
    const bool full = trial % 3 != 0;
    const auto p_i = testing::RandomPmf(rng, size, full);
    const auto p_j = testing::RandomPmf(rng, size, full);
    const SecretPairScenario scenario = Scenario(p_i, p_j);
    const TransportPlan plan = KantorovichPlan(scenario);

    for (size_t x = 0; x < size; ++x) {
      EXPECT_NEAR(plan.row_marginal()[x], p_i[x], 1e-9);
      EXPECT_NEAR(plan.col_marginal()[x], p_j[x], 1e-9);
    }
    EXPECT_NEAR(plan.TransportCost(), testing::MinCouplingCostOracle(p_i, p_j),
                1e-9);
    double cdf_gap = 0.0, f_i = 0.0, f_j = 0.0;
    for (size_t x = 0; x < size; ++x) {
      f_i += p_i[x];
      f_j += p_j[x];
      cdf_gap += std::abs(f_i - f_j);
    }
    EXPECT_NEAR(plan.TransportCost(), cdf_gap, 1e-9);
    EXPECT_LE(plan.max_distance(), size - 1);

    for (auto [x1, y1] : plan.support()) {
      for (auto [x2, y2] : plan.support()) {
        EXPECT_FALSE(x1 < x2 && y1 > y2)
            << "crossing support (" << x1 << "," << y1 << ") (" << x2 << ","
            << y2 << ")";
      }
    }

    if (WorstCaseCondition(scenario)) {
      auto closed = WorstCasePlan(scenario);
      ASSERT_TRUE(closed.ok());
      for (size_t k = 0; k < size * size; ++k) {
        EXPECT_NEAR(closed->matrix()[k], plan.matrix()[k], 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace pufferfish
