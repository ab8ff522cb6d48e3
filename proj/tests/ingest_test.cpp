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

#include <set>

#include "currialign/ingest.hpp"
#include "test_util.hpp"

namespace currialign {
namespace {

using ingest_detail::SplitText;
using testing::DataPath;
using testing::TempDir;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

std::size_t LineOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.line();
  }
  return 0;
}

// ---- label cells ------------------------------------------------------------

TEST(LabelCell, FullRangeExpands) {
  EXPECT_EQ(*ParseLabelCell("0--8"), LabelSet::All());
}

TEST(LabelCell, DoubleHyphenAloneIsMissing) {
  EXPECT_FALSE(ParseLabelCell("--").has_value());
  EXPECT_FALSE(ParseLabelCell(" -- ").has_value());
  EXPECT_FALSE(ParseLabelCell("\xE2\x80\x93").has_value());  // en dash
}

TEST(LabelCell, MixedRangeAndList) {
  EXPECT_EQ(*ParseLabelCell("3--5,7"), LabelSet::Of({3, 4, 5, 7}));
  EXPECT_EQ(*ParseLabelCell("3\xE2\x80\x93" "5,7"), LabelSet::Of({3, 4, 5, 7}));
  EXPECT_EQ(*ParseLabelCell("1,4"), LabelSet::Of({1, 4}));
}

TEST(LabelCell, OrderInsensitive) {
  EXPECT_EQ(*ParseLabelCell("7,3--5"), *ParseLabelCell("3--5,7"));
}

TEST(LabelCell, RejectsBadTokens) {
  for (const char* bad : {"9", "1,,2", "a", "5--3", "", "12"}) {
    EXPECT_EQ(CodeOf([&] { ParseLabelCell(bad); }), ErrorCode::kMalformed) << bad;
  }
}

TEST(LabelCell, FormatCompactsRuns) {
  EXPECT_EQ(FormatLabelCell(LabelSet::Of({0, 1, 5, 6, 7, 8})), "0,1,5--8");
  EXPECT_EQ(FormatLabelCell(LabelSet::Of({3, 4})), "3,4");
  EXPECT_EQ(FormatLabelCell(std::nullopt), "--");
}

// ---- courses ----------------------------------------------------------------

TEST(LoadCourses, KthElectivesHaveUniformCredits) {
  const auto courses = LoadCourses(DataPath("kth_electives.jsonl"));
  ASSERT_EQ(courses.size(), 12u);
  for (const auto& c : courses) {
    EXPECT_DOUBLE_EQ(c.credits, 7.5) << c.id;
    EXPECT_EQ(c.kind, CourseKind::kElective);
  }
}

TEST(LoadCourses, EmptyFileGivesEmptyList) {
  TempDir dir;
  EXPECT_TRUE(LoadCourses(dir.Write("empty.jsonl", "")).empty());
}

TEST(LoadCourses, ZeroCreditsIsMalformed) {
  const std::vector<std::string> lines = {
      R"({"id":"a","title":"A","description":"","credits":7.5,"kind":"elective"})",
      R"({"id":"b","title":"B","description":"","credits":0,"kind":"elective"})"};
  EXPECT_EQ(CodeOf([&] { ParseCourses(lines); }), ErrorCode::kMalformed);
  EXPECT_EQ(LineOf([&] { ParseCourses(lines); }), 2u);
}

TEST(LoadCourses, DuplicateIdRejected) {
  const std::vector<std::string> lines = {
      R"({"id":"a","title":"A","description":"","credits":1,"kind":"elective"})",
      R"({"id":"a","title":"A2","description":"","credits":1,"kind":"elective"})"};
  EXPECT_EQ(CodeOf([&] { ParseCourses(lines); }), ErrorCode::kDuplicateId);
}

TEST(LoadCourses, RejectsEmptyTitleAndUnknownKind) {
  EXPECT_EQ(CodeOf([] {
              ParseCourses({R"({"id":"a","title":"","description":"","credits":1,"kind":"elective"})"});
            }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] {
              ParseCourses({R"({"id":"a","title":"A","description":"","credits":1,"kind":"core"})"});
            }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] { ParseCourses({"{not json"}); }), ErrorCode::kMalformed);
}

TEST(LoadCourses, MissingFileIsIo) {
  EXPECT_EQ(CodeOf([] { LoadCourses("/nonexistent/courses.jsonl"); }), ErrorCode::kIo);
}

// ---- knowledge descriptions -------------------------------------------------

TEST(LoadKds, LabeledRow) {
  const auto kds = ParseKds({R"({"id":"K0018","text":"K0018: Knowledge of encryption algorithms","labels":[1]})"});
  ASSERT_EQ(kds.size(), 1u);
  ASSERT_TRUE(kds[0].labels.has_value());
  EXPECT_EQ(*kds[0].labels, LabelSet::Of({1}));
}

TEST(LoadKds, LabelNineIsMalformed) {
  EXPECT_EQ(CodeOf([] { ParseKds({R"({"id":"K1","text":"x","labels":[9]})"}); }),
            ErrorCode::kMalformed);
}

TEST(LoadKds, MultiLabelRow) {
  const auto kds = ParseKds({R"({"id":"S1","text":"software testing","labels":[1,4]})"});
  EXPECT_EQ(*kds[0].labels, LabelSet::Of({1, 4}));
}

TEST(LoadKds, LabelsAreOptional) {
  const auto kds = ParseKds({R"({"id":"K2","text":"Knowledge of x"})"});
  EXPECT_FALSE(kds[0].labels.has_value());
}

TEST(LoadKds, EmptyTextRejected) {
  EXPECT_EQ(CodeOf([] { ParseKds({R"({"id":"K2","text":""})"}); }), ErrorCode::kMalformed);
}

// ---- role table ---------------------------------------------------------------

const char* kRoleHeader = "role,category,ka0,ka1,ka2,ka3,ka4,ka5,ka6,ka7,ka8,demand";

TEST(LoadRoleTable, VulnerabilityAnalysisRenormalized) {
  const auto roles = ParseRoleTable(
      {kRoleHeader, "Vulnerability Analysis,PD,9,10,4,0,14,6,9,36,14,"});
  ASSERT_EQ(roles.size(), 1u);
  const KaVector expected = {.088, .098, .039, 0, .137, .059, .088, .353, .137};
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    EXPECT_NEAR((*roles[0].distribution)[i], expected[i], 1e-3);
  }
  EXPECT_FALSE(roles[0].demand.has_value());
  EXPECT_EQ(roles[0].category, RoleCategory::kPD);
}

TEST(LoadRoleTable, AllZeroRowIsMalformed) {
  EXPECT_EQ(CodeOf([] { ParseRoleTable({kRoleHeader, "Z,OG,0,0,0,0,0,0,0,0,0,"}); }),
            ErrorCode::kMalformed);
}

TEST(LoadRoleTable, RowSummingTo99Accepted) {
  const auto roles = ParseRoleTable({kRoleHeader, "OG row,OG,16,7,3,1,9,3,7,41,12,"});
  double sum = 0.0;
  for (double x : *roles[0].raw_percentages) sum += x;
  EXPECT_EQ(sum, 99.0);
}

TEST(LoadRoleTable, RowSumOutsideBandRejected) {
  EXPECT_EQ(CodeOf([] { ParseRoleTable({kRoleHeader, "Low,OG,10,10,10,10,10,10,10,10,10,"}); }),
            ErrorCode::kRowSumOutOfRange);
  EXPECT_EQ(CodeOf([] { ParseRoleTable({kRoleHeader, "High,OG,20,10,10,10,10,10,10,10,13,"}); }),
            ErrorCode::kRowSumOutOfRange);
}

TEST(LoadRoleTable, DemandColumnAndBadCategory) {
  const auto roles = ParseRoleTable({kRoleHeader, "R,IN,12,21,3,2,9,7,5,28,12,250"});
  EXPECT_EQ(roles[0].demand, 250);
  EXPECT_EQ(CodeOf([] { ParseRoleTable({kRoleHeader, "R,XX,12,21,3,2,9,7,5,28,12,"}); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] { ParseRoleTable({kRoleHeader, "R,IN,12,21,3,2,9,7,5,28,12,-3"}); }),
            ErrorCode::kNegativeCount);
}

TEST(LoadRoleTable, EveryFixtureRowIngests) {
  const auto roles = LoadRoleTable(DataPath("roles_nice2025.csv"));
  EXPECT_EQ(roles.size(), 41u);
  for (const auto& r : roles) {
    double sum = 0.0;
    for (double x : *r.raw_percentages) sum += x;
    EXPECT_GE(sum, 98.0) << r.name;
    EXPECT_LE(sum, 102.0) << r.name;
  }
  EXPECT_EQ(LoadRoleTable(DataPath("categories_nice2025.csv")).size(), 5u);
}

// ---- annotations --------------------------------------------------------------

TEST(LoadAnnotations, CourseFixtureHas79Topics) {
  const auto table = LoadAnnotations(DataPath("annotations_courses.csv"));
  EXPECT_EQ(table.records.size(), 79u);
  std::set<std::string> courses;
  for (const auto& r : table.records) courses.insert(r.course_id);
  EXPECT_EQ(courses.size(), 9u);
  EXPECT_EQ(table.annotators,
            (std::vector<std::string>{"A1", "A2", "A3", "X1", "X2", "X3", "CurricuLLM"}));
}

TEST(LoadAnnotations, FirstBuildingNetworkedRowMatchesTable) {
  const auto table = LoadAnnotations(DataPath("annotations_courses.csv"));
  const auto& r = table.records.front();
  EXPECT_EQ(r.topic, "Building Networked Systems Security");
  EXPECT_EQ(*r.annotations.at("A1"), LabelSet::Of({3, 4, 5, 7}));
  EXPECT_EQ(*r.annotations.at("CurricuLLM"), LabelSet::Of({7}));
}

TEST(LoadAnnotations, MissingCellsArePreserved) {
  const auto table = ParseAnnotations({"course_id,topic,A,B,C", "c,t,1,--,2"});
  EXPECT_FALSE(table.records[0].annotations.at("B").has_value());
}

TEST(LoadAnnotations, NeedsTwoPresentAnnotators) {
  EXPECT_EQ(CodeOf([] { ParseAnnotations({"course_id,topic,A,B", "c,t,1,--"}); }),
            ErrorCode::kMalformed);
  EXPECT_EQ(CodeOf([] { ParseAnnotations({"course_id,topic,A", "c,t,1"}); }),
            ErrorCode::kMalformed);
}

TEST(LoadAnnotations, BadCellReportsLine) {
  EXPECT_EQ(LineOf([] { ParseAnnotations({"course_id,topic,A,B", "c,t,1,2", "c,u,1,x"}); }), 3u);
}

TEST(LoadAnnotations, KdFixtureHas50Rows) {
  EXPECT_EQ(LoadAnnotations(DataPath("annotations_kds.csv")).records.size(), 50u);
}

// ---- demand ---------------------------------------------------------------------

TEST(LoadDemand, SingleEntry) {
  const auto d = ParseDemand({R"({"Vulnerability Analysis": 1000})"});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.at("Vulnerability Analysis"), 1000);
}

TEST(LoadDemand, NegativeCount) {
  EXPECT_EQ(CodeOf([] { ParseDemand({R"({"role":"x","count":-5})"}); }), ErrorCode::kNegativeCount);
  EXPECT_EQ(CodeOf([] { ParseDemand({R"({"role":"x","count":"-5"})"}); }), ErrorCode::kNegativeCount);
}

TEST(LoadDemand, UniformFixtureSkipsRoleWithoutData) {
  const auto d = LoadDemand(DataPath("demand_uniform.jsonl"));
  EXPECT_EQ(d.size(), 40u);
  for (const auto& [role, n] : d) EXPECT_EQ(n, 1) << role;
  EXPECT_FALSE(d.contains("Operational Technology (OT) Cybersecurity Engineering"));
}

// ---- round trips -----------------------------------------------------------------

template <typename Parse, typename Serialize>
void ExpectRoundTrip(const std::string& file, Parse parse, Serialize serialize) {
  const auto first = parse(ingest_detail::ReadLines(DataPath(file)));
  const std::string text = serialize(first);
  const auto second = parse(SplitText(text));
  EXPECT_EQ(serialize(second), text) << file;
}

TEST(RoundTrip, EveryFixtureFile) {
  for (const char* f : {"kth_curriculum.jsonl", "kth_electives.jsonl", "ntu_curriculum.jsonl"}) {
    ExpectRoundTrip(f, ParseCourses, SerializeCourses);
  }
  ExpectRoundTrip("kds_sample.jsonl", ParseKds, SerializeKds);
  ExpectRoundTrip("va_sample_kds.jsonl", ParseKds, SerializeKds);
  ExpectRoundTrip("roles_nice2025.csv", ParseRoleTable, SerializeRoleTable);
  ExpectRoundTrip("categories_nice2025.csv", ParseRoleTable, SerializeRoleTable);
  ExpectRoundTrip("annotations_courses.csv", ParseAnnotations, SerializeAnnotations);
  ExpectRoundTrip("annotations_kds.csv", ParseAnnotations, SerializeAnnotations);
  ExpectRoundTrip("demand_fitted.jsonl", ParseDemand, SerializeDemand);
  ExpectRoundTrip("demand_uniform.jsonl", ParseDemand, SerializeDemand);
  ExpectRoundTrip("va_sample_role_kds.jsonl", ParseRoleKds, SerializeRoleKds);
  ExpectRoundTrip("finetune_corpus.jsonl", ParseCorpus, SerializeCorpus);
}

TEST(RoundTrip, ValuesSurviveForCourses) {
  const auto a = LoadCourses(DataPath("kth_curriculum.jsonl"));
  const auto b = ParseCourses(SplitText(SerializeCourses(a)));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].credits, b[i].credits);
    EXPECT_EQ(a[i].kind, b[i].kind);
    EXPECT_EQ(a[i].degree_project, b[i].degree_project);
    ASSERT_EQ(a[i].distribution.has_value(), b[i].distribution.has_value());
    if (a[i].distribution) {
      EXPECT_TRUE(a[i].distribution->ApproxEquals(*b[i].distribution, 1e-15));
    }
  }
}

TEST(Csv, QuotedFieldsAndEscapes) {
  const auto f = ingest_detail::SplitCsvLine(R"(a,"b,c","d ""q""",)", 1);
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,c", "d \"q\"", ""}));
  EXPECT_EQ(ingest_detail::CsvEscape("x,y"), "\"x,y\"");
  EXPECT_EQ(ingest_detail::CsvEscape("plain"), "plain");
}

}  // namespace
}  // namespace currialign
