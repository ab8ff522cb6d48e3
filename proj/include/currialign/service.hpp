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

#ifndef CURRIALIGN_SERVICE_HPP_
#define CURRIALIGN_SERVICE_HPP_

// HTTP facade over the library with a file-backed workspace store.
//
// On-disk layout under the data directory:
//   workspaces/<id>/manifest.json
//   workspaces/<id>/datasets/<kind>/v<N>.<ext>
//   workspaces/<id>/models/baseline/v<N>.json
// Every file is written to a temporary sibling and renamed into place, so a
// failed upload never disturbs the version the manifest points at.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "httplib.h"
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

namespace currialign {

using json = nlohmann::json;

struct DatasetKind {
  std::string_view name;
  std::string_view extension;
};

inline constexpr std::array<DatasetKind, 8> kDatasetKinds = {{
    {"courses", "jsonl"},
    {"kds", "jsonl"},
    {"roles", "csv"},
    {"role_kds", "jsonl"},
    {"annotations", "csv"},
    {"kd_annotations", "csv"},
    {"demand", "jsonl"},
    {"corpus", "jsonl"},
}};

inline const DatasetKind* FindDatasetKind(std::string_view name) {
  for (const auto& k : kDatasetKinds) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

// Parses a dataset body with the matching loader and returns its record count.
inline std::size_t ValidateDataset(std::string_view kind, std::string_view body) {
  const auto lines = ingest_detail::SplitText(body);
  if (kind == "courses") return ParseCourses(lines).size();
  if (kind == "kds") return ParseKds(lines).size();
  if (kind == "roles") return ParseRoleTable(lines).size();
  if (kind == "role_kds") return ParseRoleKds(lines).size();
  if (kind == "annotations" || kind == "kd_annotations") return ParseAnnotations(lines).records.size();
  if (kind == "demand") return ParseDemand(lines).size();
  if (kind == "corpus") return ParseCorpus(lines).size();
  throw Error(ErrorCode::kNotFound, "unknown dataset kind '" + std::string(kind) + "'");
}

inline std::string UtcTimestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void WriteFileAtomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::create_directories(path.parent_path());
  static std::atomic<unsigned> counter{0};
  const auto tmp = path.parent_path() /
                   ("." + path.filename().string() + ".tmp" + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error(ErrorCode::kIo, "write failure on " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class WorkspaceStore {
 public:
  explicit WorkspaceStore(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_ / "workspaces");
  }

  static bool ValidId(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
    }
    return true;
  }

  std::shared_ptr<std::shared_mutex> LockFor(const std::string& id) {
    std::lock_guard g(locks_mu_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_shared<std::shared_mutex>();
    return slot;
  }

  bool Exists(const std::string& id) const {
    return ValidId(id) && std::filesystem::exists(Dir(id) / "manifest.json");
  }

  json Create(std::optional<std::string> requested) {
    std::lock_guard g(create_mu_);
    std::string id;
    if (requested) {
      if (!ValidId(*requested)) {
        throw Error(ErrorCode::kInvalidArgument, "workspace id must match [A-Za-z0-9_-]{1,64}");
      }
      if (Exists(*requested)) {
        throw Error(ErrorCode::kDuplicateId, "workspace '" + *requested + "' already exists");
      }
      id = *requested;
    } else {
      std::random_device rd;
      do {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "ws-%08x", rd());
        id = buf;
      } while (Exists(id));
    }
    const std::string now = UtcTimestamp();
    json manifest = {{"schema_version", kSchemaVersion},
                     {"id", id},
                     {"created", now},
                     {"modified", now},
                     {"datasets", json::object()},
                     {"baseline_model", nullptr}};
    WriteFileAtomic(Dir(id) / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
  }

  json Manifest(const std::string& id) const {
    if (!Exists(id)) throw Error(ErrorCode::kNotFound, "no workspace '" + id + "'");
    try {
      return json::parse(ReadFile(Dir(id) / "manifest.json"));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformed, std::string("corrupt manifest: ") + e.what());
    }
  }

  // Caller holds the workspace's exclusive lock.
  json PutDataset(const std::string& id, std::string_view kind, std::string_view body) {
    json manifest = Manifest(id);
    const DatasetKind* k = FindDatasetKind(kind);
    if (k == nullptr) throw Error(ErrorCode::kNotFound, "unknown dataset kind '" + std::string(kind) + "'");
    const std::size_t records = ValidateDataset(kind, body);
    const int version = manifest["datasets"].contains(k->name)
                            ? manifest["datasets"][std::string(k->name)]["version"].get<int>() + 1
                            : 1;
    const std::string file = "datasets/" + std::string(k->name) + "/v" + std::to_string(version) +
                             "." + std::string(k->extension);
    WriteFileAtomic(Dir(id) / file, body);
    json entry = {{"version", version}, {"records", records}, {"file", file}};
    manifest["datasets"][std::string(k->name)] = entry;
    manifest["modified"] = UtcTimestamp();
    WriteFileAtomic(Dir(id) / "manifest.json", manifest.dump(2) + "\n");
    return entry;
  }

  std::optional<std::string> ReadDataset(const std::string& id, std::string_view kind) const {
    const json manifest = Manifest(id);
    const auto& ds = manifest.at("datasets");
    auto it = ds.find(std::string(kind));
    if (it == ds.end()) return std::nullopt;
    return ReadFile(Dir(id) / it->at("file").get<std::string>());
  }

  json PutModel(const std::string& id, const BaselineModel& model) {
    json manifest = Manifest(id);
    const int version = manifest["baseline_model"].is_null()
                            ? 1
                            : manifest["baseline_model"]["version"].get<int>() + 1;
    const std::string file = "models/baseline/v" + std::to_string(version) + ".json";
    WriteFileAtomic(Dir(id) / file, BaselineModelToJson(model).dump() + "\n");
    json entry = {{"version", version},
                  {"file", file},
                  {"vocabulary_size", model.terms.size()},
                  {"relative_threshold", model.relative_threshold}};
    manifest["baseline_model"] = entry;
    manifest["modified"] = UtcTimestamp();
    WriteFileAtomic(Dir(id) / "manifest.json", manifest.dump(2) + "\n");
    return entry;
  }

  std::optional<BaselineModel> ReadModel(const std::string& id) const {
    const json manifest = Manifest(id);
    if (manifest.at("baseline_model").is_null()) return std::nullopt;
    return LoadBaselineModel(Dir(id) / manifest["baseline_model"]["file"].get<std::string>());
  }

 private:
  std::filesystem::path Dir(const std::string& id) const { return root_ / "workspaces" / id; }

  std::filesystem::path root_;
  std::mutex create_mu_;
  std::mutex locks_mu_;
  std::map<std::string, std::shared_ptr<std::shared_mutex>> locks_;
};

// ---------------------------------------------------------------------------

inline int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownElectiveId:
    case ErrorCode::kUnknownAnnotator:
    case ErrorCode::kMissingRoleDistribution:
      return 404;
    case ErrorCode::kDuplicateId:
      return 409;
    case ErrorCode::kWrongCardinality:
    case ErrorCode::kTooLarge:
    case ErrorCode::kTooFewExamples:
    case ErrorCode::kEmptyDemand:
      return 422;
    case ErrorCode::kTransport:
    case ErrorCode::kTimeout:
    case ErrorCode::kEmptyResponse:
    case ErrorCode::kUnparseable:
      return 502;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

struct ServiceOptions {
  std::filesystem::path data_dir = "currialign-data";
  std::string bind = "127.0.0.1:8420";
  ModelServiceConfig model;
  // Overrides the remote transport (tests, offline replay).
  std::function<std::shared_ptr<ChatTransport>()> transport_factory;
  // When non-empty, every request must carry "Authorization: Bearer <token>".
  std::string bearer_token;

  static ServiceOptions FromEnvironment() {
    ServiceOptions o;
    if (const char* v = std::getenv("CURRIALIGN_DATA_DIR")) o.data_dir = v;
    if (const char* v = std::getenv("CURRIALIGN_BIND")) o.bind = v;
    if (const char* v = std::getenv("CURRIALIGN_TOKEN")) o.bearer_token = v;
    o.model = ModelServiceConfig::FromEnvironment();
    return o;
  }
};

class Service {
 public:
  explicit Service(ServiceOptions options)
      : options_(std::move(options)), store_(options_.data_dir) {}

  WorkspaceStore& store() { return store_; }

  void Register(httplib::Server& srv) {
    srv.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (options_.bearer_token.empty()) return httplib::Server::HandlerResponse::Unhandled;
      if (req.get_header_value("Authorization") == "Bearer " + options_.bearer_token) {
        return httplib::Server::HandlerResponse::Unhandled;
      }
      Reply(res, 401, ErrorBody("Unauthorized", "missing or invalid bearer token"));
      return httplib::Server::HandlerResponse::Handled;
    });
    srv.Post("/workspaces", Wrap([this](const auto& req, auto& res) { CreateWorkspace(req, res); }));
    srv.Get(R"(/workspaces/([A-Za-z0-9_-]+))",
            Wrap([this](const auto& req, auto& res) { GetWorkspace(req, res); }));
    srv.Put(R"(/workspaces/([A-Za-z0-9_-]+)/datasets/([a-z_]+))",
            Wrap([this](const auto& req, auto& res) { PutDataset(req, res); }));
    srv.Get(R"(/workspaces/([A-Za-z0-9_-]+)/datasets/([a-z_]+))",
            Wrap([this](const auto& req, auto& res) { GetDataset(req, res); }));
    srv.Post(R"(/workspaces/([A-Za-z0-9_-]+)/baseline/train)",
             Wrap([this](const auto& req, auto& res) { TrainBaseline(req, res); }));
    srv.Post(R"(/workspaces/([A-Za-z0-9_-]+)/classify)",
             Wrap([this](const auto& req, auto& res) { Classify(req, res); }));
    srv.Get(R"(/workspaces/([A-Za-z0-9_-]+)/profile)",
            Wrap([this](const auto& req, auto& res) { Profile(req, res); }));
    srv.Post(R"(/workspaces/([A-Za-z0-9_-]+)/optimize)",
             Wrap([this](const auto& req, auto& res) { Optimize(req, res); }));
    srv.Post(R"(/workspaces/([A-Za-z0-9_-]+)/agreement)",
             Wrap([this](const auto& req, auto& res) { Agreement(req, res); }));
    srv.Post(R"(/workspaces/([A-Za-z0-9_-]+)/eval/kfold)",
             Wrap([this](const auto& req, auto& res) { EvalKfold(req, res); }));
  }

  // Blocks serving on options.bind ("host:port").
  void Run() {
    httplib::Server srv;
    Register(srv);
    const auto colon = options_.bind.rfind(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "bind address must be host:port");
    }
    const std::string host = options_.bind.substr(0, colon);
    const int port = std::stoi(options_.bind.substr(colon + 1));
    if (!srv.listen(host, port)) {
      throw Error(ErrorCode::kIo, "cannot listen on " + options_.bind);
    }
  }

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static json ErrorBody(std::string_view code, const std::string& message, std::size_t line = 0) {
    json err = {{"code", code}, {"message", message}};
    if (line > 0) err["line"] = line;
    return {{"schema_version", kSchemaVersion}, {"error", std::move(err)}};
  }

  static void Reply(httplib::Response& res, int status, json body) {
    if (!body.contains("schema_version")) body["schema_version"] = kSchemaVersion;
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static Handler Wrap(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        Reply(res, HttpStatusFor(e.code()),
              ErrorBody(ErrorCodeName(e.code()), e.detail(), e.line()));
      } catch (const json::exception& e) {
        Reply(res, 400, ErrorBody("Malformed", std::string("bad request body: ") + e.what()));
      } catch (const std::exception& e) {
        Reply(res, 500, ErrorBody("Internal", e.what()));
      }
    };
  }

  static json ParseBody(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    json j;
    try {
      j = json::parse(req.body);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformed, std::string("request body is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::kMalformed, "request body must be a JSON object");
    return j;
  }

  std::string RequireWorkspace(const httplib::Request& req) {
    const std::string id = req.matches[1];
    if (!store_.Exists(id)) throw Error(ErrorCode::kNotFound, "no workspace '" + id + "'");
    return id;
  }

  template <typename T, typename Parser>
  std::optional<T> Dataset(const std::string& id, std::string_view kind, Parser parse) {
    auto text = store_.ReadDataset(id, kind);
    if (!text) return std::nullopt;
    return parse(ingest_detail::SplitText(*text));
  }

  template <typename T, typename Parser>
  T RequireDataset(const std::string& id, std::string_view kind, Parser parse) {
    auto v = Dataset<T>(id, kind, parse);
    if (!v) {
      throw Error(ErrorCode::kNotFound,
                  "workspace has no '" + std::string(kind) + "' dataset");
    }
    return std::move(*v);
  }

  // ---- handlers -----------------------------------------------------------

  void CreateWorkspace(const httplib::Request& req, httplib::Response& res) {
    const json body = ParseBody(req);
    std::optional<std::string> id;
    if (body.contains("id")) id = body.at("id").get<std::string>();
    Reply(res, 201, store_.Create(id));
  }

  void GetWorkspace(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    std::shared_lock lock(*store_.LockFor(id));
    Reply(res, 200, store_.Manifest(id));
  }

  void PutDataset(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const std::string kind = req.matches[2];
    std::unique_lock lock(*store_.LockFor(id));
    json entry = store_.PutDataset(id, kind, req.body);
    entry["kind"] = kind;
    Reply(res, 200, std::move(entry));
  }

  void GetDataset(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const std::string kind = req.matches[2];
    std::shared_lock lock(*store_.LockFor(id));
    if (FindDatasetKind(kind) == nullptr) throw Error(ErrorCode::kNotFound, "unknown kind " + kind);
    auto text = store_.ReadDataset(id, kind);
    if (!text) throw Error(ErrorCode::kNotFound, "workspace has no '" + kind + "' dataset");
    Reply(res, 200, {{"kind", kind}, {"content", *text}});
  }

  void TrainBaseline(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const json body = ParseBody(req);
    const double threshold = body.value("relative_threshold", kDefaultRelativeThreshold);
    std::unique_lock lock(*store_.LockFor(id));
    auto corpus = Dataset<std::vector<LabeledText>>(id, "corpus", ParseCorpus);
    if (!corpus) {
      Reply(res, 409, ErrorBody("MissingCorpus", "upload a 'corpus' dataset before training"));
      return;
    }
    const BaselineModel model = currialign::TrainBaseline(*corpus, threshold);
    json entry = store_.PutModel(id, model);
    entry["documents"] = corpus->size();
    Reply(res, 200, std::move(entry));
  }

  void Classify(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const json body = ParseBody(req);
    const auto texts = body.value("texts", std::vector<std::string>{});
    const std::string backend = body.value("backend", std::string("baseline"));
    BatchResult batch;
    if (backend == "baseline") {
      std::optional<BaselineModel> model;
      {
        std::shared_lock lock(*store_.LockFor(id));
        model = store_.ReadModel(id);
      }
      if (!model) {
        Reply(res, 409, ErrorBody("MissingModel", "train a baseline model first"));
        return;
      }
      batch = ClassifyBatch(texts, *model);
    } else if (backend == "remote") {
      std::shared_ptr<ChatTransport> transport;
      try {
        transport = options_.transport_factory
                        ? options_.transport_factory()
                        : std::make_shared<HttpChatTransport>(options_.model);
      } catch (const Error& e) {
        Reply(res, 502, ErrorBody("Transport", e.detail()));
        return;
      }
      ModelClient client(options_.model, transport);
      batch = ClassifyBatch(texts, client);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "backend must be 'baseline' or 'remote'");
    }
    json labels = json::array();
    json results = json::array();
    for (std::size_t i = 0; i < batch.items.size(); ++i) {
      const auto& item = batch.items[i];
      if (!item) {
        labels.push_back(nullptr);
        results.push_back(nullptr);
        continue;
      }
      labels.push_back(item->labels.indices());
      json r = {{"index", i},
                {"text", item->text},
                {"labels", item->labels.indices()},
                {"backend", std::string(BackendName(item->backend))}};
      if (item->raw_response) r["raw_response"] = *item->raw_response;
      results.push_back(std::move(r));
    }
    json out = {{"backend", backend}, {"labels", labels}, {"results", results}};
    if (batch.ok()) {
      Reply(res, 200, std::move(out));
      return;
    }
    json errors = json::array();
    for (const auto& e : batch.errors) {
      errors.push_back({{"index", e.index},
                        {"code", std::string(ErrorCodeName(e.code))},
                        {"message", e.message}});
    }
    out["errors"] = std::move(errors);
    Reply(res, batch.errors.size() == batch.items.size() ? 502 : 207, std::move(out));
  }

  RoleCatalog LoadRoles(const std::string& id) {
    using Roles = std::vector<WorkRoleRecord>;
    return BuildRoleCatalog(
        Dataset<Roles>(id, "roles", ParseRoleTable).value_or(Roles{}),
        Dataset<Roles>(id, "role_kds", ParseRoleKds).value_or(Roles{}),
        Dataset<std::vector<KnowledgeDescription>>(id, "kds", ParseKds)
            .value_or(std::vector<KnowledgeDescription>{}));
  }

  MarketProfile MarketOf(const std::string& id, const RoleCatalog& ctx) {
    return CatalogMarket(ctx, Dataset<DemandMap>(id, "demand", ParseDemand).value_or(DemandMap{}));
  }

  KaDistribution ResolveTarget(const std::string& id, const json& body) {
    const std::string kind = body.value("target_kind", std::string("role"));
    if (kind == "custom") {
      if (!body.contains("target")) throw Error(ErrorCode::kInvalidArgument, "custom target needs 'target'");
      return DistributionFromJson(body.at("target"));
    }
    const std::string ref = body.value("target_ref", std::string());
    RoleCatalog ctx = LoadRoles(id);
    if (kind == "role") return CatalogRole(ctx, ref);
    if (kind == "category") return CatalogCategory(ctx, ref);
    if (kind == "market") return MarketOf(id, ctx).aggregate;
    throw Error(ErrorCode::kInvalidArgument, "target_kind must be role|category|market|custom");
  }

  static std::vector<std::string> SplitIds(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = ingest_detail::Trim(part);
      if (!part.empty()) out.push_back(part);
    }
    return out;
  }

  void Profile(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const std::string query = req.get_param_value("query");
    const std::string ref = req.get_param_value("ref");
    std::shared_lock lock(*store_.LockFor(id));
    json out = {{"query", query}, {"ref", ref}};
    if (query == "course") {
      const auto courses = RequireDataset<std::vector<CourseDoc>>(id, "courses", ParseCourses);
      auto it = std::find_if(courses.begin(), courses.end(),
                             [&](const CourseDoc& c) { return c.id == ref; });
      if (it == courses.end()) throw Error(ErrorCode::kNotFound, "unknown course '" + ref + "'");
      out["distribution"] = DistributionToJson(CourseDistribution(*it));
      json evidence = json::array();
      for (const auto& t : it->topics) evidence.push_back({{"text", t.text}, {"labels", t.labels.indices()}});
      out["evidence"] = std::move(evidence);
    } else if (query == "curriculum") {
      const auto courses = RequireDataset<std::vector<CourseDoc>>(id, "courses", ParseCourses);
      const CurriculumProfile profile = BuildCurriculumProfile(courses, 0);
      std::vector<std::string> selection;
      if (ref == "all") {
        for (const auto& e : profile.electives) selection.push_back(e.id);
      } else if (ref != "core" && !ref.empty()) {
        selection = SplitIds(ref);
      }
      out["selection"] = selection;
      out["distribution"] = DistributionToJson(CurriculumDistribution(profile, selection));
    } else if (query == "role") {
      const RoleCatalog ctx = LoadRoles(id);
      out["distribution"] = DistributionToJson(CatalogRole(ctx, ref));
      json evidence = json::array();
      for (const auto& r : ctx.roles) {
        if (r.name != ref) continue;
        for (const auto& kd_id : r.kd_ids) {
          auto kd = std::find_if(ctx.kds.begin(), ctx.kds.end(),
                                 [&](const KnowledgeDescription& k) { return k.id == kd_id; });
          if (kd == ctx.kds.end()) continue;
          json e = {{"id", kd->id}, {"text", kd->text}};
          e["labels"] = kd->labels ? json(kd->labels->indices()) : json(nullptr);
          evidence.push_back(std::move(e));
        }
      }
      out["evidence"] = std::move(evidence);
    } else if (query == "category") {
      const RoleCatalog ctx = LoadRoles(id);
      out["distribution"] = DistributionToJson(CatalogCategory(ctx, ref));
      out["evidence"] = CategoryMembers(ctx, ref);
    } else if (query == "market") {
      const RoleCatalog ctx = LoadRoles(id);
      const MarketProfile m = MarketOf(id, ctx);
      out["distribution"] = DistributionToJson(m.aggregate);
      json weights = json::object();
      for (const auto& [name, entry] : m.per_role) weights[name] = entry.weight;
      out["evidence"] = {{"weights", std::move(weights)}};
    } else {
      throw Error(ErrorCode::kInvalidArgument, "query must be course|curriculum|role|category|market");
    }
    Reply(res, 200, std::move(out));
  }

  void Optimize(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const json body = ParseBody(req);
    if (!body.contains("k") || !body.at("k").is_number_integer()) {
      throw Error(ErrorCode::kInvalidArgument, "'k' must be a positive integer");
    }
    const auto k = body.at("k").get<long long>();
    if (k < 1) throw Error(ErrorCode::kInvalidArgument, "'k' must be a positive integer");
    const SolveMethod method = ParseSolveMethod(body.value("method", std::string("exhaustive")));
    std::shared_lock lock(*store_.LockFor(id));
    const KaDistribution target = ResolveTarget(id, body);
    const auto courses = RequireDataset<std::vector<CourseDoc>>(id, "courses", ParseCourses);
    SelectionProblem problem{BuildCurriculumProfile(courses, 0), target,
                             static_cast<std::size_t>(k)};
    if (problem.k > problem.profile.electives.size()) {
      throw Error(ErrorCode::kWrongCardinality,
                  "k=" + std::to_string(k) + " exceeds the " +
                      std::to_string(problem.profile.electives.size()) + " electives");
    }
    problem.profile.k = problem.k;
    const SelectionResult r = Solve(problem, method);
    json out = SelectionResultToJson(r, problem.profile, target);
    out["target_kind"] = body.value("target_kind", std::string("role"));
    out["target_ref"] = body.value("target_ref", std::string());
    out["k"] = k;
    Reply(res, 200, std::move(out));
  }

  void Agreement(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const json body = ParseBody(req);
    const std::string kind = body.value("dataset", std::string("annotations"));
    if (kind != "annotations" && kind != "kd_annotations") {
      throw Error(ErrorCode::kInvalidArgument, "dataset must be annotations or kd_annotations");
    }
    std::shared_lock lock(*store_.LockFor(id));
    const auto table = RequireDataset<AnnotationTable>(id, kind, ParseAnnotations);
    const auto annotators = body.value("annotators", table.annotators);
    if (annotators.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two annotators");
    Reply(res, 200, AgreementMatrixToJson(ComputeAgreementMatrix(table.records, annotators)));
  }

  void EvalKfold(const httplib::Request& req, httplib::Response& res) {
    const std::string id = RequireWorkspace(req);
    const json body = ParseBody(req);
    const auto k = body.value("k", 10);
    const auto seed = body.value("seed", std::uint64_t{0});
    const double threshold = body.value("relative_threshold", kDefaultRelativeThreshold);
    if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be at least 2");
    std::shared_lock lock(*store_.LockFor(id));
    const auto corpus = RequireDataset<std::vector<LabeledText>>(id, "corpus", ParseCorpus);
    json out = EvalReportToJson(
        KFoldEvaluate(corpus, static_cast<std::size_t>(k), seed, threshold));
    out["k"] = k;
    out["seed"] = seed;
    Reply(res, 200, std::move(out));
  }

  ServiceOptions options_;
  WorkspaceStore store_;
};

}  // namespace currialign

#endif  // CURRIALIGN_SERVICE_HPP_
