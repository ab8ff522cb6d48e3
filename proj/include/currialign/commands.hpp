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

// Batch command-line front end. RunCli is the whole program; the executable
// only forwards argv. Keeping it here lets tests drive every subcommand
// in-process and inspect exit codes and output.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 invariant violation,
// 64 usage error.

#ifndef CURRIALIGN_COMMANDS_HPP_
#define CURRIALIGN_COMMANDS_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "currialign/analysis.hpp"
#include "currialign/classify.hpp"
#include "currialign/domain.hpp"
#include "currialign/error.hpp"
#include "currialign/ingest.hpp"
#include "currialign/metrics.hpp"
#include "currialign/model_client.hpp"
#include "currialign/optimize.hpp"
#include "currialign/report.hpp"
#include "currialign/service.hpp"

namespace currialign {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitUsage = 64;

// Maps a library error onto the stable exit-code contract.
inline int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kMalformed:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kTransport:
    case ErrorCode::kTimeout:
    case ErrorCode::kEmptyResponse:
    case ErrorCode::kUnparseable:
      return kExitIo;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownAnnotator:
    case ErrorCode::kUnknownElectiveId:
    case ErrorCode::kWrongCardinality:
      return kExitUsage;
    default:
      return kExitInvariant;
  }
}

namespace cli_detail {

using nlohmann::json;

// A failure that already carries its exit code and message.
struct Failure {
  int code;
  std::string message;
};

// Loads a file with one of the ingest parsers, prefixing errors with the path
// so that they read "path:line: ...".
template <typename Loader>
auto LoadFile(const std::string& path, Loader load) {
  try {
    return load(std::filesystem::path(path));
  } catch (const Error& e) {
    std::string where = path;
    if (e.line() > 0) where += ":" + std::to_string(e.line());
    throw Failure{ExitCodeFor(e.code()),
                  where + ": " + std::string(ErrorCodeName(e.code())) + ": " + e.detail()};
  }
}

inline std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = ingest_detail::Trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

inline std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string LabelsText(const LabelSet& s) {
  std::string out;
  for (std::size_t i : s.indices()) {
    if (!out.empty()) out += ";";
    out += std::to_string(i);
  }
  return out;
}

inline void WriteOut(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Failure{kExitIo, "cannot write " + path};
  f << content;
  if (!f) throw Failure{kExitIo, "cannot write " + path};
}

inline std::string DistributionLine(const KaDistribution& d) {
  std::string out;
  const auto pct = d.Percentages();
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    if (i) out += " ";
    out += std::to_string(i) + ":" + Fixed(pct[i], 1);
  }
  return out;
}

// Options shared by every subcommand.
struct Globals {
  std::string workspace;
  std::string format = "text";
  std::string replay;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

inline std::shared_ptr<ChatTransport> MakeTransport(const Globals& g,
                                                    const ModelServiceConfig& cfg) {
  if (!g.replay.empty()) return std::make_shared<ReplayTransport>(g.replay);
  if (cfg.base_url.empty()) {
    throw Failure{kExitUsage, "remote backend needs CURRIALIGN_MODEL_URL or --replay DIR"};
  }
  return std::make_shared<HttpChatTransport>(cfg);
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string kind;
  std::string file;
  std::string workspace_id;
};

inline int RunIngest(const Globals& g, const IngestArgs& a, Io io) {
  if (!FindDatasetKind(a.kind)) throw Failure{kExitUsage, "unknown dataset kind '" + a.kind + "'"};
  std::string body;
  try {
    body = ReadFile(a.file);
  } catch (const Error& e) {
    throw Failure{kExitIo, a.file + ": " + e.detail()};
  }
  std::size_t records = 0;
  try {
    records = ValidateDataset(a.kind, body);
  } catch (const Error& e) {
    std::string where = a.file;
    if (e.line() > 0) where += ":" + std::to_string(e.line());
    throw Failure{ExitCodeFor(e.code()),
                  where + ": " + std::string(ErrorCodeName(e.code())) + ": " + e.detail()};
  }
  json out = {{"schema_version", kSchemaVersion}, {"kind", a.kind}, {"records", records}};
  if (!g.workspace.empty()) {
    WorkspaceStore store(g.workspace);
    std::string id = a.workspace_id;
    if (id.empty() || !store.Exists(id)) {
      id = store.Create(id.empty() ? std::nullopt : std::optional<std::string>(id))
               .at("id")
               .get<std::string>();
    }
    out["workspace"] = id;
    out["stored"] = store.PutDataset(id, a.kind, body);
  }
  if (g.format == "json") {
    io.out << out.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << "kind,records\n" << a.kind << "," << records << "\n";
  } else {
    io.out << a.file << ": " << records << " valid " << a.kind << " record(s)";
    if (out.contains("workspace")) {
      io.out << ", stored in workspace " << out["workspace"].get<std::string>() << " as v"
             << out["stored"].at("version").get<int>();
    }
    io.out << "\n";
  }
  return kExitOk;
}

// ---- train-baseline -------------------------------------------------------

struct TrainArgs {
  std::string corpus;
  std::string model_out;
  double threshold = kDefaultRelativeThreshold;
  std::string workspace_id;
};

inline int RunTrain(const Globals& g, const TrainArgs& a, Io io) {
  const auto corpus = LoadFile(a.corpus, [](const auto& p) { return LoadCorpus(p); });
  const BaselineModel model = TrainBaseline(corpus, a.threshold);
  json out = {{"schema_version", kSchemaVersion},
              {"documents", corpus.size()},
              {"vocabulary", model.terms.size()},
              {"relative_threshold", model.relative_threshold}};
  if (!a.model_out.empty()) {
    SaveBaselineModel(model, a.model_out);
    out["model"] = a.model_out;
  }
  if (!g.workspace.empty()) {
    if (a.workspace_id.empty()) throw Failure{kExitUsage, "--workspace needs --id to store a model"};
    WorkspaceStore store(g.workspace);
    if (!store.Exists(a.workspace_id)) store.Create(a.workspace_id);
    out["stored"] = store.PutModel(a.workspace_id, model);
  }
  if (a.model_out.empty() && g.workspace.empty()) {
    throw Failure{kExitUsage, "give --model PATH or --workspace DIR --id ID"};
  }
  if (g.format == "json") {
    io.out << out.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << "documents,vocabulary,relative_threshold\n"
           << corpus.size() << "," << model.terms.size() << "," << model.relative_threshold << "\n";
  } else {
    io.out << "trained on " << corpus.size() << " documents, vocabulary " << model.terms.size()
           << ", threshold " << model.relative_threshold << "\n";
  }
  return kExitOk;
}

// ---- classify -------------------------------------------------------------

struct ClassifyArgs {
  std::string backend = "baseline";
  std::string model;
  std::vector<std::string> texts;
  std::string input;      // one text per line, or a KD JSONL file
  std::string courses;    // run topic extraction for --course from this file
  std::string course_id;
};

inline std::vector<std::string> ReadTexts(const std::string& path) {
  std::vector<std::string> texts;
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".jsonl") {
    for (const auto& kd : LoadFile(path, [](const auto& p) { return LoadKds(p); })) {
      texts.push_back(StripKdPrefix(kd.text));
    }
    return texts;
  }
  std::vector<std::string> lines;
  try {
    lines = ingest_detail::ReadLines(path);
  } catch (const Error& e) {
    throw Failure{kExitIo, path + ": " + e.detail()};
  }
  for (const auto& line : lines) {
    if (!ingest_detail::IsBlank(line)) texts.push_back(ingest_detail::Trim(line));
  }
  return texts;
}

inline int RunClassify(const Globals& g, const ClassifyArgs& a, Io io) {
  if (a.backend != "baseline" && a.backend != "remote") {
    throw Failure{kExitUsage, "--backend must be baseline or remote"};
  }
  std::vector<std::string> texts = a.texts;
  if (!a.input.empty()) {
    auto more = ReadTexts(a.input);
    texts.insert(texts.end(), more.begin(), more.end());
  }

  std::unique_ptr<ModelClient> client;
  if (a.backend == "remote" || !a.courses.empty()) {
    const ModelServiceConfig cfg = ModelServiceConfig::FromEnvironment();
    client = std::make_unique<ModelClient>(cfg, MakeTransport(g, cfg));
  }

  json extracted = nullptr;
  if (!a.courses.empty()) {
    if (a.course_id.empty()) throw Failure{kExitUsage, "--courses needs --course ID"};
    const auto courses = LoadFile(a.courses, [](const auto& p) { return LoadCourses(p); });
    auto it = std::find_if(courses.begin(), courses.end(),
                           [&](const CourseDoc& c) { return c.id == a.course_id; });
    if (it == courses.end()) throw Failure{kExitUsage, "no course '" + a.course_id + "'"};
    const auto topics = client->ExtractTopics(*it);
    extracted = {{"course", it->id}, {"topics", topics}};
    texts.insert(texts.end(), topics.begin(), topics.end());
  }
  if (texts.empty()) throw Failure{kExitUsage, "nothing to classify; give --text, --input or --courses"};

  BatchResult batch;
  if (a.backend == "baseline") {
    if (a.model.empty()) throw Failure{kExitUsage, "baseline backend needs --model PATH"};
    const BaselineModel model =
        LoadFile(a.model, [](const auto& p) { return LoadBaselineModel(p); });
    batch = ClassifyBatch(texts, model);
  } else {
    batch = ClassifyBatch(texts, *client);
  }

  std::vector<LabelSet> ok_labels;
  json results = json::array();
  for (std::size_t i = 0; i < batch.items.size(); ++i) {
    if (!batch.items[i]) {
      results.push_back({{"index", i}, {"text", texts[i]}, {"labels", nullptr}});
      continue;
    }
    ok_labels.push_back(batch.items[i]->labels);
    results.push_back({{"index", i}, {"text", texts[i]}, {"labels", batch.items[i]->labels.indices()}});
  }
  json errors = json::array();
  for (const auto& e : batch.errors) {
    errors.push_back({{"index", e.index}, {"code", std::string(ErrorCodeName(e.code))},
                      {"message", e.message}});
  }
  json out = {{"schema_version", kSchemaVersion}, {"backend", a.backend},
              {"results", results}, {"errors", errors}};
  if (!extracted.is_null()) out["extraction"] = extracted;
  std::optional<KaDistribution> aggregate;
  if (!ok_labels.empty()) {
    aggregate = AggregateLabelSets(ok_labels);
    out["aggregate"] = DistributionToJson(*aggregate);
  }

  if (g.format == "json") {
    io.out << out.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << "index,text,labels\n";
    for (std::size_t i = 0; i < batch.items.size(); ++i) {
      io.out << i << "," << ingest_detail::CsvEscape(texts[i]) << ","
             << (batch.items[i] ? LabelsText(batch.items[i]->labels) : std::string()) << "\n";
    }
  } else {
    for (std::size_t i = 0; i < batch.items.size(); ++i) {
      io.out << (batch.items[i] ? FormatLabelCell(batch.items[i]->labels) : std::string("ERROR"))
             << "\t" << texts[i] << "\n";
    }
    if (aggregate) io.out << "aggregate " << DistributionLine(*aggregate) << "\n";
  }
  for (const auto& e : batch.errors) {
    io.err << "item " << e.index << ": " << ErrorCodeName(e.code) << ": " << e.message << "\n";
  }
  if (!batch.errors.empty()) {
    return batch.errors.size() == batch.items.size() ? kExitIo : kExitInvariant;
  }
  return kExitOk;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string curriculum;
  std::string select = "core";  // core | all | comma-separated elective ids
  std::string out_dir;
};

inline int RunAnalyze(const Globals& g, const AnalyzeArgs& a, Io io) {
  const auto courses = LoadFile(a.curriculum, [](const auto& p) { return LoadCourses(p); });
  std::vector<std::string> ids;
  if (a.select == "all") {
    for (const auto& c : courses) {
      if (c.kind == CourseKind::kElective && !c.degree_project) ids.push_back(c.id);
    }
  } else if (a.select != "core") {
    ids = SplitList(a.select);
  }
  std::vector<CourseDoc> chosen;
  for (const auto& c : courses) {
    if (!c.degree_project && c.kind == CourseKind::kMandatory) chosen.push_back(c);
  }
  for (const auto& id : ids) {
    auto it = std::find_if(courses.begin(), courses.end(), [&](const CourseDoc& c) {
      return c.id == id && c.kind == CourseKind::kElective && !c.degree_project;
    });
    if (it == courses.end()) throw Failure{kExitUsage, "no elective '" + id + "'"};
    chosen.push_back(*it);
  }

  json per_course = json::array();
  std::string pie = "label,area,percent\n";
  for (const auto& c : chosen) {
    const KaDistribution d = CourseDistribution(c);
    per_course.push_back({{"id", c.id}, {"title", c.title}, {"credits", c.credits},
                          {"kind", std::string(CourseKindName(c.kind))},
                          {"distribution", DistributionToJson(d)}});
    pie += PieCsv(c.id, d);
  }
  const KaDistribution aggregate = CreditWeightedBlend(chosen);
  pie += PieCsv("aggregate", aggregate);
  double credits = 0.0;
  for (const auto& c : chosen) credits += c.credits;
  json report = {{"schema_version", kSchemaVersion},
                 {"curriculum", a.curriculum},
                 {"selection", a.select},
                 {"credits", credits},
                 {"courses", per_course},
                 {"aggregate", DistributionToJson(aggregate)}};
  if (!a.out_dir.empty()) {
    WriteOut((std::filesystem::path(a.out_dir) / "analysis.json").string(), report.dump(2) + "\n");
    WriteOut((std::filesystem::path(a.out_dir) / "pie.csv").string(), pie);
  }
  if (g.format == "json") {
    io.out << report.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << pie;
  } else {
    for (const auto& c : chosen) {
      io.out << c.id << " (" << c.credits << " cr)  " << DistributionLine(CourseDistribution(c))
             << "\n";
    }
    io.out << "aggregate (" << credits << " cr)  " << DistributionLine(aggregate) << "\n";
  }
  return kExitOk;
}

// ---- optimize -------------------------------------------------------------

struct TargetArgs {
  std::string roles;      // role table CSV
  std::string role_kds;   // role -> KD mapping JSONL
  std::string kds;        // labeled KDs JSONL
  std::string demand;     // demand JSONL
  std::string role;
  std::string category;
  bool market = false;
  std::string custom;     // nine comma-separated weights
};

inline KaDistribution ResolveTarget(const TargetArgs& t, std::string* label) {
  const int picked = !t.role.empty() + !t.category.empty() + t.market + !t.custom.empty();
  if (picked != 1) {
    throw Failure{kExitUsage, "give exactly one of --role, --category, --market, --target"};
  }
  if (!t.custom.empty()) {
    const auto parts = SplitList(t.custom);
    if (parts.size() != kNumAreas) throw Failure{kExitUsage, "--target needs nine weights"};
    KaVector v{};
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      try {
        v[i] = std::stod(parts[i]);
      } catch (const std::exception&) {
        throw Failure{kExitUsage, "bad weight '" + parts[i] + "'"};
      }
    }
    *label = "custom";
    return NormalizeCounts(v);
  }
  using Roles = std::vector<WorkRoleRecord>;
  Roles roles, role_kds;
  std::vector<KnowledgeDescription> kds;
  if (!t.roles.empty()) roles = LoadFile(t.roles, [](const auto& p) { return LoadRoleTable(p); });
  if (!t.role_kds.empty()) role_kds = LoadFile(t.role_kds, [](const auto& p) { return LoadRoleKds(p); });
  if (!t.kds.empty()) kds = LoadFile(t.kds, [](const auto& p) { return LoadKds(p); });
  if (roles.empty() && role_kds.empty()) throw Failure{kExitUsage, "role targets need --roles"};
  const RoleCatalog catalog = BuildRoleCatalog(std::move(roles), std::move(role_kds), std::move(kds));
  if (!t.role.empty()) {
    *label = "role:" + t.role;
    return CatalogRole(catalog, t.role);
  }
  if (!t.category.empty()) {
    *label = "category:" + t.category;
    return CatalogCategory(catalog, t.category);
  }
  DemandMap demand;
  if (!t.demand.empty()) demand = LoadFile(t.demand, [](const auto& p) { return LoadDemand(p); });
  *label = "market";
  return CatalogMarket(catalog, std::move(demand)).aggregate;
}

struct OptimizeArgs {
  std::string curriculum;
  std::size_t k = 0;
  std::string method = "exhaustive";
  TargetArgs target;
};

inline int RunOptimize(const Globals& g, const OptimizeArgs& a, Io io) {
  SolveMethod method;
  try {
    method = ParseSolveMethod(a.method);
  } catch (const Error& e) {
    throw Failure{kExitUsage, e.detail()};
  }
  if (a.k < 1) throw Failure{kExitUsage, "--k must be at least 1"};
  const auto courses = LoadFile(a.curriculum, [](const auto& p) { return LoadCourses(p); });
  std::string label;
  const KaDistribution target = ResolveTarget(a.target, &label);
  SelectionProblem problem{BuildCurriculumProfile(courses, 0), target, a.k};
  if (a.k > problem.profile.electives.size()) {
    throw Failure{kExitUsage, "--k " + std::to_string(a.k) + " exceeds the " +
                                  std::to_string(problem.profile.electives.size()) +
                                  " available electives"};
  }
  problem.profile.k = a.k;
  const SelectionResult r = Solve(problem, method);
  json out = SelectionResultToJson(r, problem.profile, target);
  out["schema_version"] = kSchemaVersion;
  out["target_label"] = label;
  out["k"] = a.k;
  const GapReport gap = MakeGapReport(r.blended, target);

  if (g.format == "json") {
    io.out << out.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << "area,name,current_pct,target_pct,delta_pct\n";
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      io.out << i << "," << AreaName(i) << "," << Fixed(r.blended[i] * 100, 2) << ","
             << Fixed(target[i] * 100, 2) << "," << Fixed(gap.deltas[i] * 100, 2) << "\n";
    }
  } else {
    io.out << "target " << label << "\n";
    for (const auto& id : r.chosen) {
      io.out << "  " << id << "  " << problem.profile.electives[problem.profile.IndexOf(id)].title
             << "\n";
    }
    io.out << "objective=" << Fixed(r.objective, 6) << " method=" << SolveMethodName(r.method)
           << " proven_optimal=" << (r.proven_optimal ? "true" : "false")
           << " nodes=" << r.nodes_visited << "\n";
    io.out << "area            current  target   delta\n";
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      char row[128];
      std::snprintf(row, sizeof(row), "%-15s %6.1f%% %6.1f%% %+6.1f\n",
                    std::string(AreaName(i)).c_str(), r.blended[i] * 100, target[i] * 100,
                    gap.deltas[i] * 100);
      io.out << row;
    }
  }
  return kExitOk;
}

// ---- agreement ------------------------------------------------------------

struct AgreementArgs {
  std::string annotations;
  std::string annotators;
  std::string out_dir;
  int decimals = 1;
};

inline int RunAgreement(const Globals& g, const AgreementArgs& a, Io io) {
  const auto table = LoadFile(a.annotations, [](const auto& p) { return LoadAnnotations(p); });
  std::vector<std::string> names =
      a.annotators.empty() ? table.annotators : SplitList(a.annotators);
  if (names.size() < 2) throw Failure{kExitUsage, "agreement needs at least two annotators"};
  const AgreementMatrix m = ComputeAgreementMatrix(table.records, names);
  json out = AgreementMatrixToJson(m);
  out["schema_version"] = kSchemaVersion;
  out["items"] = table.records.size();
  const std::string overlap_csv = MatrixToCsv(names, m.overlap_pct, a.decimals);
  const std::string kappa_csv = MatrixToCsv(names, m.kappa, 2);
  if (!a.out_dir.empty()) {
    const std::filesystem::path dir(a.out_dir);
    WriteOut((dir / "agreement.json").string(), out.dump(2) + "\n");
    WriteOut((dir / "overlap.csv").string(), overlap_csv);
    WriteOut((dir / "kappa.csv").string(), kappa_csv);
  }
  if (g.format == "json") {
    io.out << out.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << overlap_csv;
  } else {
    io.out << "overlap agreement (%), " << table.records.size() << " items\n" << overlap_csv;
    io.out << "kappa (mean of per-area binary kappas)\n" << kappa_csv;
    io.out << "averages\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      io.out << "  " << names[i] << " overlap=" << Fixed(m.overlap_avg[i], 1)
             << " kappa=" << Fixed(m.kappa_avg[i], 2) << "\n";
    }
  }
  return kExitOk;
}

// ---- eval-kfold -----------------------------------------------------------

struct KfoldArgs {
  std::string corpus;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  double threshold = kDefaultRelativeThreshold;
};

inline int RunKfold(const Globals& g, const KfoldArgs& a, Io io) {
  if (a.k < 2) throw Failure{kExitUsage, "--k must be at least 2"};
  const auto corpus = LoadFile(a.corpus, [](const auto& p) { return LoadCorpus(p); });
  const EvalReport r = KFoldEvaluate(corpus, a.k, a.seed, a.threshold);
  json out = EvalReportToJson(r);
  out["schema_version"] = kSchemaVersion;
  out["k"] = a.k;
  out["seed"] = a.seed;
  out["documents"] = corpus.size();
  if (g.format == "json") {
    io.out << out.dump(2) << "\n";
  } else if (g.format == "csv") {
    io.out << "class,precision,recall,f1\n";
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      const auto& t = r.per_class[j];
      io.out << j << "," << Fixed(t.precision, 4) << "," << Fixed(t.recall, 4) << ","
             << Fixed(t.f1, 4) << "\n";
    }
    io.out << "macro," << Fixed(r.macro.precision, 4) << "," << Fixed(r.macro.recall, 4) << ","
           << Fixed(r.macro.f1, 4) << "\n";
  } else {
    io.out << a.k << "-fold over " << corpus.size() << " documents (seed " << a.seed << ")\n";
    io.out << "macro precision=" << Fixed(r.macro.precision, 4)
           << " recall=" << Fixed(r.macro.recall, 4) << " f1=" << Fixed(r.macro.f1, 4) << "\n";
  }
  return kExitOk;
}

}  // namespace cli_detail

// Parses argv and runs one subcommand. Never calls exit().
inline int RunCli(int argc, const char* const* argv, std::ostream& out = std::cout,
                  std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Curriculum and workforce knowledge-area alignment toolkit", "currialign"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name
  Globals g;
  app.add_option("--workspace", g.workspace, "Workspace store directory");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--replay", g.replay, "Serve remote classification from recorded replies");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate a dataset and optionally store it");
  c_ingest->add_option("kind", ingest.kind, "Dataset kind")->required();
  c_ingest->add_option("file", ingest.file, "Dataset file")->required();
  c_ingest->add_option("--id", ingest.workspace_id, "Workspace id (created if missing)");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train-baseline", "Train the TF-IDF centroid classifier");
  c_train->add_option("corpus", train.corpus, "Labeled corpus JSONL")->required();
  c_train->add_option("--model", train.model_out, "Where to save the model");
  c_train->add_option("--threshold", train.threshold, "Relative score threshold in (0,1]");
  c_train->add_option("--id", train.workspace_id, "Workspace id to store the model in");

  ClassifyArgs classify;
  auto* c_classify = app.add_subcommand("classify", "Assign knowledge areas to texts");
  c_classify->add_option("--backend", classify.backend, "baseline or remote");
  c_classify->add_option("--model", classify.model, "Baseline model file");
  c_classify->add_option("--text", classify.texts, "Text to classify (repeatable)");
  c_classify->add_option("--input", classify.input, "Text file (one per line) or KD JSONL");
  c_classify->add_option("--courses", classify.courses, "Course JSONL for topic extraction");
  c_classify->add_option("--course", classify.course_id, "Course id to extract topics from");

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Course and curriculum distributions");
  c_analyze->add_option("curriculum", analyze.curriculum, "Course JSONL")->required();
  c_analyze->add_option("--select", analyze.select, "core, all, or comma-separated elective ids");
  c_analyze->add_option("--out", analyze.out_dir, "Directory for analysis.json and pie.csv");

  OptimizeArgs optimize;
  auto* c_opt = app.add_subcommand("optimize", "Choose electives closest to a target");
  c_opt->add_option("curriculum", optimize.curriculum, "Course JSONL")->required();
  c_opt->add_option("--k", optimize.k, "Number of electives")->required();
  c_opt->add_option("--method", optimize.method, "exhaustive, branch_and_bound or local_search");
  c_opt->add_option("--roles", optimize.target.roles, "Role table CSV");
  c_opt->add_option("--role-kds", optimize.target.role_kds, "Role to KD mapping JSONL");
  c_opt->add_option("--kds", optimize.target.kds, "Labeled KD JSONL");
  c_opt->add_option("--demand", optimize.target.demand, "Demand JSONL");
  c_opt->add_option("--role", optimize.target.role, "Target work role");
  c_opt->add_option("--category", optimize.target.category, "Target category code");
  c_opt->add_flag("--market", optimize.target.market, "Target the demand-weighted market");
  c_opt->add_option("--target", optimize.target.custom, "Nine comma-separated weights");

  AgreementArgs agreement;
  auto* c_agree = app.add_subcommand("agreement", "Pairwise annotator agreement");
  c_agree->add_option("annotations", agreement.annotations, "Annotation CSV")->required();
  c_agree->add_option("--annotators", agreement.annotators, "Comma-separated annotator columns");
  c_agree->add_option("--out", agreement.out_dir, "Directory for matrix files");
  c_agree->add_option("--decimals", agreement.decimals, "Decimals in the overlap CSV");

  KfoldArgs kfold;
  auto* c_kfold = app.add_subcommand("eval-kfold", "Cross-validate the baseline classifier");
  c_kfold->add_option("corpus", kfold.corpus, "Labeled corpus JSONL")->required();
  c_kfold->add_option("--k", kfold.k, "Number of folds");
  c_kfold->add_option("--seed", kfold.seed, "Shuffle seed");
  c_kfold->add_option("--threshold", kfold.threshold, "Relative score threshold");

  std::string bind;
  auto* c_serve = app.add_subcommand("serve", "Run the HTTP service");
  c_serve->add_option("--bind", bind, "host:port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Io io{out, err};
  try {
    if (*c_ingest) return RunIngest(g, ingest, io);
    if (*c_train) return RunTrain(g, train, io);
    if (*c_classify) return RunClassify(g, classify, io);
    if (*c_analyze) return RunAnalyze(g, analyze, io);
    if (*c_opt) return RunOptimize(g, optimize, io);
    if (*c_agree) return RunAgreement(g, agreement, io);
    if (*c_kfold) return RunKfold(g, kfold, io);
    if (*c_serve) {
      ServiceOptions options = ServiceOptions::FromEnvironment();
      if (!g.workspace.empty()) options.data_dir = g.workspace;
      if (!bind.empty()) options.bind = bind;
      if (!g.replay.empty()) {
        const std::string dir = g.replay;
        options.transport_factory = [dir] { return std::make_shared<ReplayTransport>(dir); };
      }
      err << "serving on " << options.bind << "\n";
      Service(options).Run();
      return kExitOk;
    }
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace currialign

#endif  // CURRIALIGN_COMMANDS_HPP_
