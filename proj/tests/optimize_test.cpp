// Copyright 2026 The CurriAlign Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "currialign/optimize.hpp"
#include "test_util.hpp"

namespace currialign {
namespace {

using testing::DataPath;
using testing::Pct;

ElectiveEntry Elective(std::string id, KaVector pct, double credits = 7.5) {
  return {id, "Course " + id, NormalizeCounts(pct), credits};
}

SelectionProblem Problem(KaVector mandatory, double mandatory_credits,
                         std::vector<ElectiveEntry> electives, KaVector target, std::size_t k) {
  SelectionProblem p;
  p.profile.mandatory = NormalizeCounts(mandatory);
  p.profile.mandatory_credits = mandatory_credits;
  p.profile.electives = std::move(electives);
  p.profile.k = k;
  p.target = NormalizeCounts(target);
  p.k = k;
  return p;
}

SelectionProblem AliceProblem() {
  const auto courses = LoadCourses(DataPath("kth_curriculum.jsonl"));
  const auto roles = LoadRoleTable(DataPath("roles_nice2025.csv"));
  const auto va = std::find_if(roles.begin(), roles.end(),
                               [](const WorkRoleRecord& r) { return r.name == "Vulnerability Analysis"; });
  return {BuildCurriculumProfile(courses, 4), *va->distribution, 4};
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

// ---- objective -----------------------------------------------------------------

TEST(Objective, ZeroWhenTargetIsTheBlend) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 10,
                   {Elective("a", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0}), 10),
                    Elective("b", Pct({0, 0, 1, 0, 0, 0, 0, 0, 0}), 10)},
                   Pct({1, 1, 0, 0, 0, 0, 0, 0, 0}), 1);
  const std::vector<std::string> sel = {"a"};
  EXPECT_NEAR(Objective(p, sel), 0.0, 1e-15);
}

TEST(Objective, CardinalityAndIdChecks) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 10,
                   {Elective("a", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0})),
                    Elective("b", Pct({0, 0, 1, 0, 0, 0, 0, 0, 0}))},
                   Pct({1, 1, 0, 0, 0, 0, 0, 0, 0}), 1);
  const std::vector<std::string> two = {"a", "b"};
  const std::vector<std::string> unknown = {"zz"};
  EXPECT_EQ(CodeOf([&] { Objective(p, two); }), ErrorCode::kWrongCardinality);
  EXPECT_EQ(CodeOf([&] { Objective(p, unknown); }), ErrorCode::kUnknownElectiveId);
}

TEST(Objective, ReferenceSelectionMatchesStraightLineEvaluation) {
  const auto p = AliceProblem();
  // Raw pie percentages, blended by hand: 39.5 ECTS core plus four 7.5 ECTS electives.
  const double core[9] = {7.7, 18.4, 4.9, 4.9, 5.2, 12.5, 5.3, 24.2, 17.0};
  const double nss[9] = {12.5, 0, 0, 0, 50, 37.5, 0, 0, 0};
  const double anss[9] = {10, 0, 20, 0, 40, 20, 0, 10, 0};
  const double bnss[9] = {12.5, 0, 0, 0, 12.5, 12.5, 0, 62.5, 0};
  const double pet[9] = {0, 21.4, 0, 0, 0, 0, 21.4, 28.6, 28.6};
  const double va[9] = {9, 10, 4, 0, 14, 6, 9, 36, 14};
  auto sum = [](const double* v) {
    double s = 0;
    for (int i = 0; i < 9; ++i) s += v[i];
    return s;
  };
  double expected = 0.0;
  for (int j = 0; j < 9; ++j) {
    const double blend = (39.5 * core[j] / sum(core) + 7.5 * nss[j] / sum(nss) +
                          7.5 * anss[j] / sum(anss) + 7.5 * bnss[j] / sum(bnss) +
                          7.5 * pet[j] / sum(pet)) /
                         69.5;
    expected += std::abs(blend - va[j] / sum(va));
  }
  const std::vector<std::string> sel = {"nss", "anss", "bnss", "pet"};
  EXPECT_NEAR(Objective(p, sel), expected, 1e-9);
}

// ---- exhaustive ---------------------------------------------------------------

TEST(SolveExhaustive, FullSetWhenKEqualsN) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 10,
                   {Elective("b", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0})),
                    Elective("a", Pct({0, 0, 1, 0, 0, 0, 0, 0, 0}))},
                   Pct({1, 1, 1, 1, 1, 1, 1, 1, 1}), 2);
  const auto r = SolveExhaustive(p);
  EXPECT_EQ(r.chosen, (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(r.proven_optimal);
  const auto bnb = SolveBranchAndBound(p);
  EXPECT_EQ(bnb.chosen, r.chosen);
}

TEST(SolveExhaustive, PicksTheTargetAlignedElective) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 7.5,
                   {Elective("zero", Pct({1, 0, 0, 0, 0, 0, 0, 0, 0})),
                    Elective("seven", Pct({0, 0, 0, 0, 0, 0, 0, 1, 0}))},
                   Pct({0, 0, 0, 0, 0, 0, 0, 1, 0}), 1);
  // Choosing "zero" leaves the blend at e_0 (objective 2); "seven" gives a
  // half/half blend (objective 1).
  const auto r = SolveExhaustive(p);
  EXPECT_EQ(r.chosen, (std::vector<std::string>{"seven"}));
  EXPECT_NEAR(r.objective, 1.0, 1e-15);
}

TEST(SolveExhaustive, TiesGoToSmallestIdSequence) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 10,
                   {Elective("m", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0})),
                    Elective("c", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0})),
                    Elective("x", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0}))},
                   Pct({0, 1, 0, 0, 0, 0, 0, 0, 0}), 2);
  for (auto method : {SolveMethod::kExhaustive, SolveMethod::kBranchAndBound}) {
    EXPECT_EQ(Solve(p, method).chosen, (std::vector<std::string>{"c", "m"}));
  }
}

TEST(SolveExhaustive, TooLargeDirectsToHeuristic) {
  std::mt19937_64 rng(3);
  SelectionProblem p;
  p.profile.mandatory = testing::RandomDistribution(rng);
  p.profile.mandatory_credits = 30;
  for (int i = 0; i < 30; ++i) {
    p.profile.electives.push_back({"e" + std::to_string(100 + i), "t", testing::RandomDistribution(rng), 5});
  }
  p.k = 15;
  p.profile.k = 15;
  p.target = KaDistribution::Uniform();
  EXPECT_EQ(CodeOf([&] { SolveExhaustive(p); }), ErrorCode::kTooLarge);
  EXPECT_EQ(CodeOf([&] { SolveExhaustive(p, 1000); }), ErrorCode::kTooLarge);
  const auto h = SolveHeuristic(p, kDefaultSwapRounds);
  EXPECT_EQ(h.chosen.size(), 15u);
  EXPECT_FALSE(h.proven_optimal);
}

TEST(SolveExhaustive, AliceOptimumIsNoWorseThanReferenceSelection) {
  const auto p = AliceProblem();
  const auto r = SolveExhaustive(p);
  const std::vector<std::string> reference = {"anss", "bnss", "nss", "pet"};
  EXPECT_LE(r.objective, Objective(p, reference) + 1e-12);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_EQ(r.nodes_visited, 495u);
  EXPECT_EQ(r.chosen.size(), 4u);
  EXPECT_NEAR(r.objective, L1Distance(r.blended, p.target), 1e-9);
}

TEST(Solvers, AliceAgreeAcrossMethods) {
  const auto p = AliceProblem();
  const auto ex = SolveExhaustive(p);
  const auto bnb = SolveBranchAndBound(p);
  const auto h = SolveHeuristic(p, kDefaultSwapRounds);
  EXPECT_EQ(bnb.chosen, ex.chosen);
  EXPECT_EQ(h.chosen, ex.chosen);
  EXPECT_TRUE(bnb.proven_optimal);
  EXPECT_FALSE(h.proven_optimal);
}

// ---- branch and bound -------------------------------------------------------------

TEST(SolveBranchAndBound, SingletonMatchesLinearScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = testing::RandomProblem(rng, 3, 12);
    p.k = 1;
    p.profile.k = 1;
    double best = 1e9;
    std::string best_id;
    std::vector<ElectiveEntry> sorted = p.profile.electives;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& e : sorted) {
      const std::vector<std::string> sel = {e.id};
      const double obj = Objective(p, sel);
      if (obj < best - 1e-12) {
        best = obj;
        best_id = e.id;
      }
    }
    const auto r = SolveBranchAndBound(p);
    EXPECT_EQ(r.chosen, (std::vector<std::string>{best_id}));
    EXPECT_NEAR(r.objective, best, 1e-12);
  }
}

TEST(SolveBranchAndBound, EqualsExhaustiveOnRandomInstances) {
  std::mt19937_64 rng(20250101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing::RandomProblem(rng);
    const auto ex = SolveExhaustive(p);
    const auto bnb = SolveBranchAndBound(p);
    ASSERT_EQ(bnb.chosen, ex.chosen) << "trial " << trial;
    ASSERT_EQ(bnb.objective, ex.objective) << "trial " << trial;
  }
}

// ---- heuristic ----------------------------------------------------------------------

TEST(SolveHeuristic, ZeroObjectiveSeedIsKept) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 10,
                   {Elective("a", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0}), 10),
                    Elective("b", Pct({0, 0, 1, 0, 0, 0, 0, 0, 0}), 10)},
                   Pct({1, 1, 0, 0, 0, 0, 0, 0, 0}), 1);
  const auto r = SolveHeuristic(p, kDefaultSwapRounds);
  EXPECT_EQ(r.chosen, (std::vector<std::string>{"a"}));
  EXPECT_NEAR(r.objective, 0.0, 1e-15);
}

TEST(SolveHeuristic, NeverBeatsExactAndUsuallyMatches) {
  std::mt19937_64 rng(20250101);
  int matched = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const auto p = testing::RandomProblem(rng);
    const auto ex = SolveExhaustive(p);
    const auto h = SolveHeuristic(p, kDefaultSwapRounds);
    ASSERT_GE(h.objective, ex.objective - 1e-12);
    ASSERT_EQ(h.chosen.size(), p.k);
    if (std::abs(h.objective - ex.objective) <= 1e-12) ++matched;
  }
  EXPECT_GE(matched, trials * 8 / 10) << matched << "/" << trials;
}

TEST(SolveHeuristic, SwapsNeverWorsenGreedySeed) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::RandomProblem(rng);
    const auto greedy = SolveHeuristic(p, 1);
    const auto full = SolveHeuristic(p, kDefaultSwapRounds);
    EXPECT_LE(full.objective, greedy.objective + 1e-15);
  }
}

// ---- validation -----------------------------------------------------------------------

TEST(Solvers, RejectInvalidProblems) {
  auto p = Problem(Pct({1, 0, 0, 0, 0, 0, 0, 0, 0}), 10,
                   {Elective("a", Pct({0, 1, 0, 0, 0, 0, 0, 0, 0}))}, Pct({1, 1, 0, 0, 0, 0, 0, 0, 0}), 2);
  EXPECT_EQ(CodeOf([&] { SolveExhaustive(p); }), ErrorCode::kWrongCardinality);
  p.k = 0;
  EXPECT_THROW(SolveBranchAndBound(p), Error);
  p.k = 1;
  p.profile.electives.push_back(Elective("a", Pct({0, 0, 1, 0, 0, 0, 0, 0, 0})));
  EXPECT_EQ(CodeOf([&] { SolveHeuristic(p, 10); }), ErrorCode::kDuplicateId);
  EXPECT_EQ(ParseSolveMethod("bnb"), SolveMethod::kBranchAndBound);
  EXPECT_EQ(ParseSolveMethod("heuristic"), SolveMethod::kLocalSearch);
  EXPECT_THROW(ParseSolveMethod("simplex"), Error);
}

}  // namespace
}  // namespace currialign
