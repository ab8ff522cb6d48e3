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

// Randomized property checks for every module invariant. Seeds are fixed so
// failures reproduce.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "currialign/analysis.hpp"
#include "currialign/classify.hpp"
#include "currialign/domain.hpp"
#include "currialign/ingest.hpp"
#include "currialign/metrics.hpp"
#include "currialign/model_client.hpp"
#include "currialign/optimize.hpp"
#include "test_util.hpp"

namespace currialign {
namespace {

using testing::DataPath;
using testing::RandomDistribution;
using testing::RandomLabels;

constexpr int kTrials = 1000;

// ---- domain -----------------------------------------------------------------------

TEST(DomainProperties, NormalizationIsIdempotentUnderScaling) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int t = 0; t < kTrials; ++t) {
    const auto d = RandomDistribution(rng);
    const double s = scale(rng);
    KaVector scaled;
    for (std::size_t i = 0; i < kNumAreas; ++i) scaled[i] = d[i] * s;
    EXPECT_TRUE(NormalizeCounts(scaled).ApproxEquals(d, 1e-12));
    EXPECT_EQ(NormalizeCounts(d.weights()), d);
  }
}

TEST(DomainProperties, L1TriangleInequality) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < kTrials; ++t) {
    const auto a = RandomDistribution(rng);
    const auto b = RandomDistribution(rng);
    const auto c = RandomDistribution(rng);
    EXPECT_LE(L1Distance(a, c), L1Distance(a, b) + L1Distance(b, c) + 1e-12);
    EXPECT_NEAR(L1Distance(a, b), L1Distance(b, a), 1e-15);
    EXPECT_LE(L1Distance(a, b), 2.0 + 1e-12);
  }
}

TEST(DomainProperties, KlIsNonNegative) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < kTrials; ++t) {
    const auto p = RandomDistribution(rng);
    const auto q = RandomDistribution(rng);
    EXPECT_GE(KlDivergence(p, q), 0.0);
    EXPECT_NEAR(KlDivergence(p, p), 0.0, 1e-12);
  }
}

TEST(DomainProperties, GapDeltasSumToZero) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < kTrials; ++t) {
    const auto g = MakeGapReport(RandomDistribution(rng), RandomDistribution(rng));
    double s = 0.0;
    for (double d : g.deltas) s += d;
    EXPECT_NEAR(s, 0.0, 1e-9);
  }
}

TEST(DomainProperties, SingletonIndicatorNormalizesToUniformOverSet) {
  for (std::uint16_t mask = 1; mask <= LabelSet::kFullMask; ++mask) {
    const auto set = LabelSet::FromMask(mask);
    const auto d = NormalizeCounts(LabelSetToIndicator(set));
    const double share = 1.0 / static_cast<double>(set.indices().size());
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      EXPECT_NEAR(d[i], set.contains(i) ? share : 0.0, 1e-15);
    }
  }
}

// ---- ingest ------------------------------------------------------------------------

TEST(IngestProperties, RangeExpansionIsOrderInsensitive) {
  EXPECT_EQ(ParseLabelCell("3--5,7"), ParseLabelCell("7,3--5"));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    auto idx = RandomLabels(rng, 0.4).indices();
    std::vector<std::string> parts;
    for (int i : idx) parts.push_back(std::to_string(i));
    std::shuffle(parts.begin(), parts.end(), rng);
    std::string cell;
    for (const auto& p : parts) cell += (cell.empty() ? "" : ",") + p;
    EXPECT_EQ(*ParseLabelCell(cell), LabelSet::Of(idx)) << cell;
    EXPECT_EQ(*ParseLabelCell(FormatLabelCell(LabelSet::Of(idx))), LabelSet::Of(idx));
  }
}

// ---- classify ------------------------------------------------------------------------

class ClassifyProperties : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new std::vector<LabeledText>(LoadCorpus(DataPath("finetune_corpus.jsonl")));
  }
  static void TearDownTestSuite() { delete corpus_; }
  static std::vector<LabeledText>* corpus_;
};
std::vector<LabeledText>* ClassifyProperties::corpus_ = nullptr;

TEST_F(ClassifyProperties, ThresholdMonotoneShrinkage) {
  const auto model = TrainBaseline(*corpus_, 0.5);
  const double thresholds[] = {0.1, 0.3, 0.5, 0.6, 0.75, 0.9, 0.99, 1.0};
  for (std::size_t i = 0; i < corpus_->size(); i += 11) {
    const auto& text = (*corpus_)[i].text;
    std::uint16_t prev = LabelSet::kFullMask;
    for (double th : thresholds) {
      BaselineModel m = model;
      m.relative_threshold = th;
      const auto labels = ClassifyBaseline(m, text);
      EXPECT_EQ(labels.mask() & ~prev, 0) << text << " at " << th;
      EXPECT_FALSE(labels.indices().empty());
      prev = labels.mask();
    }
  }
}

TEST_F(ClassifyProperties, BaselineIsDeterministic) {
  const auto a = TrainBaseline(*corpus_);
  const auto b = TrainBaseline(*corpus_);
  for (std::size_t i = 0; i < corpus_->size(); i += 17) {
    const auto& text = (*corpus_)[i].text;
    EXPECT_EQ(ClassifyBaseline(a, text), ClassifyBaseline(b, text));
    EXPECT_EQ(ClassifyBaseline(a, text), ClassifyBaseline(a, text));
  }
}

TEST(ClassifyPropertiesNoFixture, StripIsIdempotent) {
  std::vector<std::string> texts;
  for (const auto& kd : LoadKds(DataPath("kds_sample.jsonl"))) texts.push_back(kd.text);
  for (const auto& kd : LoadKds(DataPath("va_sample_kds.jsonl"))) texts.push_back(kd.text);
  texts.insert(texts.end(), {"K0001: Knowledge of X", "  knowledge of  y ", "Z", ""});
  for (const auto& t : texts) {
    const auto once = StripKdPrefix(t);
    EXPECT_EQ(StripKdPrefix(once), once) << t;
  }
}

TEST(ClassifyPropertiesNoFixture, TopicListOutputIsLowercaseAndTrimmed) {
  std::mt19937_64 rng(6);
  const char* pieces[] = {"  ", "\t", "- ", "* ", "\xE2\x80\xA2 ", "1. ", "12) ", "Alpha", "BETA gamma",
                          "Delta-Epsilon", "x", "\r"};
  for (int t = 0; t < 300; ++t) {
    std::string reply;
    const int lines = 1 + static_cast<int>(rng() % 8);
    for (int l = 0; l < lines; ++l) {
      const int n = 1 + static_cast<int>(rng() % 4);
      for (int p = 0; p < n; ++p) reply += pieces[rng() % std::size(pieces)];
      reply += "Topic" + std::to_string(rng() % 5);
      reply += "\n";
    }
    for (const auto& topic : ParseTopicList(reply)) {
      EXPECT_FALSE(topic.empty());
      EXPECT_FALSE(std::isspace(static_cast<unsigned char>(topic.front())));
      EXPECT_FALSE(std::isspace(static_cast<unsigned char>(topic.back())));
      for (char c : topic) EXPECT_FALSE(std::isupper(static_cast<unsigned char>(c))) << topic;
    }
  }
}

// ---- analysis ---------------------------------------------------------------------------

TEST(AnalysisProperties, BlendLiesInConvexHull) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < kTrials; ++t) {
    const auto p = testing::RandomProblem(rng, 2, 8);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < p.k; ++i) ids.push_back(p.profile.electives[i].id);
    const auto blend = CurriculumDistribution(p.profile, ids);
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      double lo = p.profile.mandatory[j];
      double hi = lo;
      for (std::size_t i = 0; i < p.k; ++i) {
        lo = std::min(lo, p.profile.electives[i].distribution[j]);
        hi = std::max(hi, p.profile.electives[i].distribution[j]);
      }
      EXPECT_GE(blend[j], lo - 1e-12);
      EXPECT_LE(blend[j], hi + 1e-12);
    }
  }
}

TEST(AnalysisProperties, BlendIsCreditScaleInvariant) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int t = 0; t < 300; ++t) {
    const auto p = testing::RandomProblem(rng, 2, 8);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < p.k; ++i) ids.push_back(p.profile.electives[i].id);
    auto scaled = p.profile;
    const double s = scale(rng);
    scaled.mandatory_credits *= s;
    for (auto& e : scaled.electives) e.credits *= s;
    EXPECT_TRUE(CurriculumDistribution(p.profile, ids).ApproxEquals(CurriculumDistribution(scaled, ids), 1e-12));
  }
}

TEST(AnalysisProperties, MarketAggregateLiesInConvexHull) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    std::map<std::string, KaDistribution> roles;
    DemandMap demand;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int r = 0; r < n; ++r) {
      const std::string name = "r" + std::to_string(r);
      roles.emplace(name, RandomDistribution(rng));
      demand[name] = static_cast<long long>(rng() % 100000);
    }
    demand["r0"] += 1;
    const auto m = MarketDistribution(roles, demand);
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      double lo = 1.0;
      double hi = 0.0;
      for (const auto& [name, d] : roles) {
        if (demand[name] == 0) continue;
        lo = std::min(lo, d[j]);
        hi = std::max(hi, d[j]);
      }
      EXPECT_GE(m.aggregate[j], lo - 1e-12);
      EXPECT_LE(m.aggregate[j], hi + 1e-12);
    }
  }
}

TEST(AnalysisProperties, CategoryIsPermutationInvariant) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 300; ++t) {
    std::vector<KaDistribution> roles;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int r = 0; r < n; ++r) roles.push_back(RandomDistribution(rng));
    const auto base = CategoryDistribution(roles);
    std::shuffle(roles.begin(), roles.end(), rng);
    EXPECT_TRUE(CategoryDistribution(roles).ApproxEquals(base, 1e-12));
  }
}

TEST(AnalysisProperties, RepeatedLabelSetsAggregateLikeOne) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const auto set = RandomLabels(rng, 0.3);
    const std::vector<LabelSet> one = {set};
    const std::vector<LabelSet> many(1 + rng() % 20, set);
    EXPECT_TRUE(AggregateLabelSets(many).ApproxEquals(AggregateLabelSets(one), 1e-15));
  }
}

// ---- optimize ------------------------------------------------------------------------------

TEST(OptimizeProperties, FeasibilityBoundsAndDeterminism) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 150; ++t) {
    const auto p = testing::RandomProblem(rng);
    for (auto method : {SolveMethod::kExhaustive, SolveMethod::kBranchAndBound, SolveMethod::kLocalSearch}) {
      const auto r = Solve(p, method);
      ASSERT_EQ(r.chosen.size(), p.k);
      EXPECT_TRUE(std::is_sorted(r.chosen.begin(), r.chosen.end()));
      EXPECT_EQ(std::set<std::string>(r.chosen.begin(), r.chosen.end()).size(), p.k);
      for (const auto& id : r.chosen) EXPECT_NO_THROW(p.profile.IndexOf(id));
      EXPECT_GE(r.objective, 0.0);
      EXPECT_LE(r.objective, 2.0);
      const auto again = Solve(p, method);
      EXPECT_EQ(again.chosen, r.chosen);
      EXPECT_EQ(again.objective, r.objective);
    }
  }
}

TEST(OptimizeProperties, CreditScaleInvariance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int t = 0; t < 150; ++t) {
    const auto p = testing::RandomProblem(rng, 4, 12);
    auto scaled = p;
    const double s = scale(rng);
    scaled.profile.mandatory_credits *= s;
    for (auto& e : scaled.profile.electives) e.credits *= s;
    const auto a = SolveBranchAndBound(p);
    const auto b = SolveBranchAndBound(scaled);
    EXPECT_NEAR(a.objective, b.objective, 1e-12);
    // A different set is only acceptable when it ties under the tolerance.
    if (a.chosen != b.chosen) {
      EXPECT_NEAR(Objective(p, b.chosen), a.objective, 1e-12);
    }
  }
}

TEST(OptimizeProperties, ExactSolversAgreeWithinCap) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const auto p = testing::RandomProblem(rng);
    EXPECT_EQ(SolveBranchAndBound(p).objective, SolveExhaustive(p).objective);
  }
}

// ---- metrics ------------------------------------------------------------------------------

std::vector<OptionalLabels> RandomColumn(std::mt19937_64& rng, std::size_t n) {
  std::vector<OptionalLabels> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(rng() % 8 == 0 ? OptionalLabels{} : OptionalLabels{RandomLabels(rng)});
  }
  return out;
}

TEST(MetricsProperties, OverlapSymmetricAndOrderInvariant) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 5 + rng() % 30;
    auto a = RandomColumn(rng, n);
    auto b = RandomColumn(rng, n);
    a[0] = LabelSet::Of({0});
    b[0] = LabelSet::Of({0});
    const double ab = OverlapAgreement(a, b).pct;
    EXPECT_EQ(ab, OverlapAgreement(b, a).pct);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<OptionalLabels> pa;
    std::vector<OptionalLabels> pb;
    for (std::size_t i : perm) {
      pa.push_back(a[i]);
      pb.push_back(b[i]);
    }
    EXPECT_NEAR(OverlapAgreement(pa, pb).pct, ab, 1e-12);
  }
}

TEST(MetricsProperties, KappaBoundsAndSelfAgreement) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 5 + rng() % 30;
    const auto a = RandomColumn(rng, n);
    const auto b = RandomColumn(rng, n);
    try {
      const double k = CohensKappa(a, b);
      EXPECT_GE(k, -1.0 - 1e-12);
      EXPECT_LE(k, 1.0 + 1e-12);
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kUndefined || e.code() == ErrorCode::kNoComparablePairs);
    }
    std::vector<OptionalLabels> varied = a;
    varied.push_back(LabelSet::Of({0}));
    varied.push_back(LabelSet::Of({8}));
    EXPECT_NEAR(CohensKappa(varied, varied), 1.0, 1e-12);
  }
}

TEST(MetricsProperties, MacroF1BetweenPerClassExtremes) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<LabelSet> pred;
    std::vector<LabelSet> gold;
    for (std::size_t i = 0; i < n; ++i) {
      pred.push_back(RandomLabels(rng, 0.3));
      gold.push_back(RandomLabels(rng, 0.3));
    }
    const auto r = MacroMetrics(pred, gold);
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& c : r.per_class) {
      lo = std::min(lo, c.f1);
      hi = std::max(hi, c.f1);
    }
    EXPECT_GE(r.macro.f1, lo - 1e-12);
    EXPECT_LE(r.macro.f1, hi + 1e-12);
    for (double v : {r.macro.precision, r.macro.recall, r.macro.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(MetricsProperties, AddingAnAreaNeverLowersRecall) {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<LabelSet> pred;
    std::vector<LabelSet> gold;
    for (std::size_t i = 0; i < n; ++i) {
      pred.push_back(RandomLabels(rng, 0.2));
      gold.push_back(RandomLabels(rng, 0.2));
    }
    const int area = static_cast<int>(rng() % kNumAreas);
    std::vector<LabelSet> grown;
    for (const auto& p : pred) {
      grown.push_back(LabelSet::FromMask(static_cast<std::uint16_t>(p.mask() | (1u << area))));
    }
    EXPECT_GE(MacroMetrics(grown, gold).macro.recall, MacroMetrics(pred, gold).macro.recall - 1e-15);
  }
}

TEST(MetricsProperties, FoldsPartition) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + rng() % 10;
    const std::size_t n = k + rng() % 500;
    const auto folds = KFoldSplit(n, k, rng());
    std::vector<int> seen(n, 0);
    for (const auto& f : folds) {
      EXPECT_FALSE(f.empty());
      for (std::size_t i : f) ++seen[i];
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  }
}

}  // namespace
}  // namespace currialign
