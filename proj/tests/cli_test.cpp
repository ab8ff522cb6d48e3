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

// Black-box tests of the command-line tool: the built binary is run as a
// subprocess and its exit code, stdout and written files are inspected.

#include <sys/wait.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "currialign/ingest.hpp"
#include "currialign/metrics.hpp"
#include "test_util.hpp"

namespace currialign {
namespace {

using nlohmann::json;
using testing::DataPath;
using testing::Slurp;
using testing::TempDir;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += (c == '\'') ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Outcome Invoke(const std::vector<std::string>& args) {
  TempDir tmp;
  const auto out_path = tmp.path() / "stdout";
  const auto err_path = tmp.path() / "stderr";
  std::string cmd = Quote(CURRIALIGN_CLI_PATH);
  for (const auto& a : args) cmd += " " + Quote(a);
  cmd += " >" + Quote(out_path.string()) + " 2>" + Quote(err_path.string()) + " </dev/null";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = Slurp(out_path);
  o.err = Slurp(err_path);
  return o;
}

std::string Data(const std::string& name) { return DataPath(name).string(); }

std::vector<std::string> Lines(const std::string& s) {
  std::vector<std::string> lines;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

// ---- exit-code contract -----------------------------------------------------------------------

TEST(CliExitCodes, SuccessIsZero) {
  const Outcome o = Invoke({"ingest", "courses", Data("kth_curriculum.jsonl")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("15"), std::string::npos);
}

TEST(CliExitCodes, MissingFileIsIoError) {
  const Outcome o = Invoke({"ingest", "courses", "/nonexistent/courses.jsonl"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("/nonexistent/courses.jsonl"), std::string::npos);
}

TEST(CliExitCodes, MalformedRecordReportsPathAndLine) {
  TempDir tmp;
  const auto path = tmp.path() / "bad.jsonl";
  {
    std::ofstream f(path);
    f << R"({"id":"a","title":"A","description":"","credits":5,"kind":"elective","distribution":[1,0,0,0,0,0,0,0,0]})"
      << "\n{not json\n";
  }
  const Outcome o = Invoke({"ingest", "courses", path.string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find(path.string() + ":2:"), std::string::npos) << o.err;
}

TEST(CliExitCodes, DuplicateIdIsIoError) {
  TempDir tmp;
  const auto path = tmp.path() / "dup.jsonl";
  {
    std::ofstream f(path);
    const std::string rec =
        R"({"id":"a","title":"A","description":"","credits":5,"kind":"elective","distribution":[1,0,0,0,0,0,0,0,0]})";
    f << rec << "\n" << rec << "\n";
  }
  EXPECT_EQ(Invoke({"ingest", "courses", path.string()}).code, 1);
}

TEST(CliExitCodes, InvariantViolationIsTwo) {
  const Outcome o = Invoke({"eval-kfold", Data("finetune_corpus.jsonl"), "--k", "100000"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("TooFewExamples"), std::string::npos);
}

TEST(CliExitCodes, UsageErrorsAreSixtyFour) {
  EXPECT_EQ(Invoke({}).code, 64);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 64);
  EXPECT_EQ(Invoke({"--format", "yaml", "ingest", "courses", Data("kth_curriculum.jsonl")}).code, 64);
  EXPECT_EQ(Invoke({"optimize", Data("kth_curriculum.jsonl"), "--k", "99", "--target",
                 "1,0,0,0,0,0,0,0,0"}).code,
            64);
  EXPECT_EQ(Invoke({"optimize", Data("kth_curriculum.jsonl"), "--k", "2", "--target", "1,0,0"}).code,
            64);
  EXPECT_EQ(Invoke({"optimize", Data("kth_curriculum.jsonl"), "--k", "2"}).code, 64);
  EXPECT_EQ(Invoke({"optimize", Data("kth_curriculum.jsonl"), "--k", "2", "--roles",
                 Data("roles_nice2025.csv"), "--role", "Nobody"}).code,
            64);
  EXPECT_EQ(Invoke({"agreement", Data("annotations_courses.csv"), "--annotators", "X1,Nobody"}).code,
            64);
  EXPECT_EQ(Invoke({"analyze", Data("kth_curriculum.jsonl"), "--select", "zzz"}).code, 64);
  EXPECT_EQ(Invoke({"classify", "--backend", "remote", "--text", "x"}).code, 64);
}

// ---- analyze ----------------------------------------------------------------------------------

TEST(CliAnalyze, WritesReportAndPieMatchingLibrary) {
  TempDir tmp;
  const Outcome o = Invoke({"analyze", Data("kth_curriculum.jsonl"), "--select", "nss,anss,bnss,pet",
                         "--out", tmp.path().string()});
  ASSERT_EQ(o.code, 0) << o.err;

  const json report = json::parse(Slurp(tmp.path() / "analysis.json"));
  EXPECT_EQ(report["schema_version"], 1);
  ASSERT_EQ(report["courses"].size(), 5u);

  // Oracle: the library blend of the same five courses.
  const auto all = LoadCourses(DataPath("kth_curriculum.jsonl"));
  std::vector<CourseDoc> chosen;
  for (const auto& c : all) {
    if (c.degree_project) continue;
    if (c.kind == CourseKind::kMandatory || c.id == "nss" || c.id == "anss" || c.id == "bnss" ||
        c.id == "pet") {
      chosen.push_back(c);
    }
  }
  ASSERT_EQ(chosen.size(), 5u);
  const KaDistribution blend = CreditWeightedBlend(chosen);
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    EXPECT_NEAR(report["aggregate"]["weights"][i].get<double>(), blend[i], 1e-12) << i;
  }

  const auto pie = Lines(Slurp(tmp.path() / "pie.csv"));
  ASSERT_FALSE(pie.empty());
  EXPECT_EQ(pie.front(), "label,area,percent");
  std::map<std::string, double> totals;
  for (std::size_t i = 1; i < pie.size(); ++i) {
    const auto cells = ingest_detail::SplitCsvLine(pie[i], i + 1);
    ASSERT_EQ(cells.size(), 3u) << pie[i];
    totals[cells[0]] += std::stod(cells[2]);
  }
  EXPECT_EQ(totals.size(), 6u);  // five courses plus the aggregate
  for (const auto& [label, total] : totals) EXPECT_NEAR(total, 100.0, 0.5) << label;
}

TEST(CliAnalyze, CsvFormatStreamsPie) {
  const Outcome o = Invoke({"--format", "csv", "analyze", Data("kth_curriculum.jsonl")});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(Lines(o.out).front(), "label,area,percent");
}

// ---- optimize ---------------------------------------------------------------------------------

TEST(CliOptimize, RoleTargetMatchesLibrarySolver) {
  const Outcome o = Invoke({"--format", "json", "optimize", Data("kth_curriculum.jsonl"), "--k", "4",
                         "--roles", Data("roles_nice2025.csv"), "--role", "Vulnerability Analysis"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json out = json::parse(o.out);

  const auto courses = LoadCourses(DataPath("kth_curriculum.jsonl"));
  const RoleCatalog catalog = BuildRoleCatalog(LoadRoleTable(DataPath("roles_nice2025.csv")), {}, {});
  const SelectionProblem p{BuildCurriculumProfile(courses, 0),
                           CatalogRole(catalog, "Vulnerability Analysis"), 4};
  const SelectionResult r = SolveExhaustive(p);
  EXPECT_EQ(out["chosen"].get<std::vector<std::string>>(), r.chosen);
  EXPECT_NEAR(out["objective"].get<double>(), r.objective, 1e-12);
  EXPECT_TRUE(out["proven_optimal"].get<bool>());
  EXPECT_EQ(out["nodes_visited"].get<std::size_t>(), 495u);
  EXPECT_EQ(out["method"], "exhaustive");
}

TEST(CliOptimize, MethodsAgreeAndCsvHasGapColumns) {
  const std::vector<std::string> base = {"--format", "json", "optimize", Data("kth_curriculum.jsonl"),
                                         "--k", "3", "--roles", Data("roles_nice2025.csv"),
                                         "--category", "IN"};
  double objective = -1.0;
  for (const char* method : {"exhaustive", "branch_and_bound", "bnb"}) {
    auto args = base;
    args.insert(args.end(), {"--method", method});
    const Outcome o = Invoke(args);
    ASSERT_EQ(o.code, 0) << method << ": " << o.err;
    const double got = json::parse(o.out)["objective"].get<double>();
    if (objective < 0) objective = got;
    EXPECT_NEAR(got, objective, 1e-12) << method;
  }
  auto args = base;
  args[1] = "csv";
  const Outcome o = Invoke(args);
  ASSERT_EQ(o.code, 0);
  const auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 1u + kNumAreas);
  EXPECT_EQ(lines.front(), "area,name,current_pct,target_pct,delta_pct");
}

TEST(CliOptimize, UnknownMethodIsRejected) {
  EXPECT_EQ(Invoke({"optimize", Data("kth_curriculum.jsonl"), "--k", "2", "--method", "annealing",
                 "--target", "1,0,0,0,0,0,0,0,0"}).code,
            64);
}

// ---- agreement --------------------------------------------------------------------------------

TEST(CliAgreement, MatrixFilesMatchLibrary) {
  TempDir tmp;
  const Outcome o = Invoke({"agreement", Data("annotations_courses.csv"), "--annotators",
                         "X1,X2,X3,CurricuLLM", "--out", tmp.path().string()});
  ASSERT_EQ(o.code, 0) << o.err;

  const auto table = LoadAnnotations(DataPath("annotations_courses.csv"));
  const std::vector<std::string> names = {"X1", "X2", "X3", "CurricuLLM"};
  const AgreementMatrix m = ComputeAgreementMatrix(table.records, names);
  EXPECT_EQ(Slurp(tmp.path() / "overlap.csv"), MatrixToCsv(names, m.overlap_pct, 1));
  EXPECT_EQ(Slurp(tmp.path() / "kappa.csv"), MatrixToCsv(names, m.kappa, 2));
  EXPECT_EQ(Lines(Slurp(tmp.path() / "overlap.csv")).front(), "annotator,X1,X2,X3,CurricuLLM");
  const json j = json::parse(Slurp(tmp.path() / "agreement.json"));
  EXPECT_EQ(j["items"].get<std::size_t>(), table.records.size());
}

TEST(CliAgreement, DecimalsOption) {
  const Outcome o = Invoke({"--format", "csv", "agreement", Data("annotations_kds.csv"), "--decimals", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  ASSERT_GE(lines.size(), 2u);
  const auto cells = ingest_detail::SplitCsvLine(lines[1], 2);
  ASSERT_GE(cells.size(), 3u);
  const auto dot = cells[2].find('.');
  ASSERT_NE(dot, std::string::npos);
  EXPECT_EQ(cells[2].size() - dot - 1, 3u);
}

// ---- classification ---------------------------------------------------------------------------

TEST(CliClassify, ReplayedExtractionAndLabels) {
  const Outcome o = Invoke({"--format", "json", "--replay", Data("replay"), "classify", "--backend",
                         "remote", "--courses", Data("kth_curriculum.jsonl"), "--course", "bnss"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json out = json::parse(o.out);
  EXPECT_EQ(out["extraction"]["topics"].size(), 8u);
  ASSERT_EQ(out["results"].size(), 8u);
  EXPECT_TRUE(out["errors"].empty());
  for (const auto& r : out["results"]) {
    ASSERT_TRUE(r["labels"].is_array());
    EXPECT_FALSE(r["labels"].empty());
  }
  double total = 0.0;
  for (const auto& w : out["aggregate"]["weights"]) total += w.get<double>();
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(CliClassify, MissingReplayEntryIsReportedPerItem) {
  const Outcome o = Invoke({"--format", "json", "--replay", Data("replay"), "classify", "--backend",
                         "remote", "--text", "a statement nobody recorded"});
  EXPECT_EQ(o.code, 1);
}

TEST(CliClassify, TrainThenClassifyIsDeterministic) {
  TempDir tmp;
  const std::string model = (tmp.path() / "m.json").string();
  ASSERT_EQ(Invoke({"train-baseline", Data("finetune_corpus.jsonl"), "--model", model}).code, 0);
  const std::vector<std::string> args = {"--format", "json", "classify", "--backend", "baseline",
                                         "--model", model, "--text", "firewall rules for network traffic",
                                         "--text", "privacy law and regulation"};
  const Outcome a = Invoke(args);
  const Outcome b = Invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["results"].size(), 2u);
}

// ---- workspace and evaluation -----------------------------------------------------------------

TEST(CliWorkspace, IngestStoresVersionedDatasets) {
  TempDir tmp;
  const std::string ws = (tmp.path() / "ws").string();
  for (int expected : {1, 2}) {
    const Outcome o = Invoke({"--format", "json", "--workspace", ws, "ingest", "courses",
                           Data("kth_curriculum.jsonl"), "--id", "kth"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json out = json::parse(o.out);
    EXPECT_EQ(out["stored"]["version"].get<int>(), expected);
    EXPECT_EQ(out["workspace"], "kth");
  }
}

TEST(CliEval, KFoldIsSeedDeterministic) {
  const std::vector<std::string> args = {"--format", "json", "eval-kfold", Data("finetune_corpus.jsonl"),
                                         "--k", "3", "--seed", "11"};
  const Outcome a = Invoke(args);
  const Outcome b = Invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json out = json::parse(a.out);
  EXPECT_EQ(out["per_fold"].size(), 3u);
  const double f1 = out["macro_f1"].get<double>();
  EXPECT_GE(f1, 0.0);
  EXPECT_LE(f1, 1.0);
}

}  // namespace
}  // namespace currialign
