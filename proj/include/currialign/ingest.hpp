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

#ifndef CURRIALIGN_INGEST_HPP_
#define CURRIALIGN_INGEST_HPP_

// Loaders for every dataset the engine consumes: courses and Knowledge
// Descriptions (JSON Lines), role tables and annotation tables (CSV), and
// job-demand counts (JSON Lines). Parsers stop at the first bad record and
// report its 1-based line number.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "currialign/domain.hpp"
#include "currialign/error.hpp"

namespace currialign {

enum class CourseKind { kMandatory, kElective, kFree };

inline std::string_view CourseKindName(CourseKind kind) {
  switch (kind) {
    case CourseKind::kMandatory: return "mandatory";
    case CourseKind::kElective: return "elective";
    case CourseKind::kFree: return "free";
  }
  return "?";
}

struct LabeledTopic {
  std::string text;
  LabelSet labels;
  friend bool operator==(const LabeledTopic&, const LabeledTopic&) = default;
};

struct CourseDoc {
  std::string id;
  std::string title;
  std::string description;
  double credits = 0.0;
  CourseKind kind = CourseKind::kElective;
  bool degree_project = false;
  // Classified topics, when the course has already been through the pipeline.
  std::vector<LabeledTopic> topics;
  // Pre-aggregated distribution, when only the published pie is available.
  std::optional<KaDistribution> distribution;

  friend bool operator==(const CourseDoc&, const CourseDoc&) = default;
};

struct KnowledgeDescription {
  std::string id;
  std::string text;
  std::optional<LabelSet> labels;
  friend bool operator==(const KnowledgeDescription&, const KnowledgeDescription&) = default;
};

enum class RoleCategory { kOG, kDD, kIO, kPD, kIN };

inline constexpr std::array<std::string_view, 5> kCategoryCodes = {"OG", "DD", "IO",
                                                                   "PD", "IN"};

inline std::string_view CategoryCode(RoleCategory c) {
  return kCategoryCodes[static_cast<std::size_t>(c)];
}

inline std::optional<RoleCategory> ParseCategory(std::string_view code) {
  for (std::size_t i = 0; i < kCategoryCodes.size(); ++i) {
    if (kCategoryCodes[i] == code) return static_cast<RoleCategory>(i);
  }
  return std::nullopt;
}

struct WorkRoleRecord {
  std::string name;
  RoleCategory category = RoleCategory::kOG;
  std::vector<std::string> kd_ids;
  std::optional<long long> demand;
  std::optional<KaDistribution> distribution;
  // Row exactly as ingested (percentages), kept for lossless re-serialization.
  std::optional<KaVector> raw_percentages;
  friend bool operator==(const WorkRoleRecord&, const WorkRoleRecord&) = default;
};

struct AnnotationRecord {
  std::string course_id;
  std::string topic;
  // Keyed by annotator name; nullopt means the annotator skipped the topic.
  std::map<std::string, std::optional<LabelSet>> annotations;
  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

struct AnnotationTable {
  std::vector<std::string> annotators;  // header order
  std::vector<AnnotationRecord> records;
  friend bool operator==(const AnnotationTable&, const AnnotationTable&) = default;
};

using DemandMap = std::map<std::string, long long>;

namespace ingest_detail {

inline std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure on " + path.string());
  return lines;
}

inline std::vector<std::string> SplitText(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

inline bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

// RFC 4180 record splitting for a single physical line.
inline std::vector<std::string> SplitCsvLine(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!cur.empty() && !IsBlank(cur)) {
        throw Error(ErrorCode::kMalformed, "stray quote inside field", line_no);
      }
      cur.clear();
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      fields.push_back(field_was_quoted ? cur : Trim(cur));
      cur.clear();
      field_was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::kMalformed, "unterminated quoted field", line_no);
  fields.push_back(field_was_quoted ? cur : Trim(cur));
  return fields;
}

inline std::string CsvEscape(std::string_view field) {
  const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                     (!field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                                         std::isspace(static_cast<unsigned char>(field.back()))));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline double ParseNumber(const std::string& s, std::size_t line_no, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformed, std::string("bad number for ") + what + ": '" + s + "'",
                line_no);
  }
  if (pos != s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kMalformed, std::string("bad number for ") + what + ": '" + s + "'",
                line_no);
  }
  return v;
}

inline long long ParseCount(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformed, "bad count '" + s + "'", line_no);
  }
  if (pos != s.size()) throw Error(ErrorCode::kMalformed, "bad count '" + s + "'", line_no);
  if (v < 0) throw Error(ErrorCode::kNegativeCount, "count " + s + " is negative", line_no);
  return v;
}

inline LabelSet LabelsFromJson(const nlohmann::json& j, std::size_t line_no) {
  if (!j.is_array()) throw Error(ErrorCode::kMalformed, "labels must be an array", line_no);
  std::vector<int> idx;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kMalformed, "label must be an integer", line_no);
    }
    const int i = v.get<int>();
    if (i < 0 || i >= static_cast<int>(kNumAreas)) {
      throw Error(ErrorCode::kMalformed,
                  "label " + std::to_string(i) + " outside valid range 0..8", line_no);
    }
    idx.push_back(i);
  }
  if (idx.empty()) throw Error(ErrorCode::kMalformed, "empty label list", line_no);
  return LabelSet::Of(idx);
}

inline nlohmann::json LabelsToJson(const LabelSet& labels) { return labels.indices(); }

inline std::string RequireString(const nlohmann::json& obj, const char* key,
                                 std::size_t line_no, bool non_empty) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformed, std::string("missing string field '") + key + "'",
                line_no);
  }
  std::string v = it->get<std::string>();
  if (non_empty && IsBlank(v)) {
    throw Error(ErrorCode::kMalformed, std::string("field '") + key + "' is empty", line_no);
  }
  return v;
}

inline nlohmann::json ParseJsonLine(const std::string& line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!obj.is_object()) throw Error(ErrorCode::kMalformed, "expected a JSON object", line_no);
  return obj;
}

inline KaVector NineNumbers(const nlohmann::json& j, std::size_t line_no) {
  if (!j.is_array() || j.size() != kNumAreas) {
    throw Error(ErrorCode::kMalformed, "distribution must have 9 numbers", line_no);
  }
  KaVector v;
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kMalformed, "non-numeric weight", line_no);
    v[i] = j[i].get<double>();
    if (v[i] < 0.0) throw Error(ErrorCode::kMalformed, "negative weight", line_no);
  }
  return v;
}

}  // namespace ingest_detail

// ---------------------------------------------------------------------------
// Label cell grammar used by annotation tables:
//   cell    := "--" | item ("," item)*
//   item    := digit | digit sep digit
//   sep     := "--" | en dash | "-"
// Literal "--" alone means the annotator skipped the topic.

inline std::optional<LabelSet> ParseLabelCell(std::string_view raw, std::size_t line_no = 0) {
  const std::string cell = ingest_detail::Trim(raw);
  if (cell == "--" || cell == "–") return std::nullopt;
  if (cell.empty()) throw Error(ErrorCode::kMalformed, "empty label cell", line_no);
  std::uint16_t mask = 0;
  std::size_t start = 0;
  while (start <= cell.size()) {
    std::size_t comma = cell.find(',', start);
    if (comma == std::string::npos) comma = cell.size();
    std::string item = ingest_detail::Trim(std::string_view(cell).substr(start, comma - start));
    // Normalize the separators to a single '-'.
    for (std::string_view sep : {std::string_view("–"), std::string_view("--")}) {
      for (std::size_t p = item.find(sep); p != std::string::npos; p = item.find(sep)) {
        item.replace(p, sep.size(), "-");
      }
    }
    item.erase(std::remove_if(item.begin(), item.end(),
                              [](unsigned char c) { return std::isspace(c) != 0; }),
               item.end());
    auto digit = [&](char c) -> int {
      if (c < '0' || c > '8') {
        throw Error(ErrorCode::kMalformed,
                    "invalid label token '" + item + "' in cell '" + cell + "'", line_no);
      }
      return c - '0';
    };
    if (item.size() == 1) {
      mask |= static_cast<std::uint16_t>(1u << digit(item[0]));
    } else if (item.size() == 3 && item[1] == '-') {
      const int lo = digit(item[0]);
      const int hi = digit(item[2]);
      if (lo > hi) {
        throw Error(ErrorCode::kMalformed, "descending range in cell '" + cell + "'", line_no);
      }
      for (int i = lo; i <= hi; ++i) mask |= static_cast<std::uint16_t>(1u << i);
    } else {
      throw Error(ErrorCode::kMalformed,
                  "invalid label token '" + item + "' in cell '" + cell + "'", line_no);
    }
    start = comma + 1;
    if (comma == cell.size()) break;
  }
  return LabelSet::FromMask(mask);
}

// Compact rendering: runs of three or more consecutive indices become "a--b".
inline std::string FormatLabelCell(const std::optional<LabelSet>& labels) {
  if (!labels) return "--";
  const auto idx = labels->indices();
  std::string out;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
    if (!out.empty()) out += ',';
    if (j - i >= 2) {
      out += std::to_string(idx[i]) + "--" + std::to_string(idx[j]);
    } else {
      for (std::size_t k = i; k <= j; ++k) {
        if (k > i) out += ',';
        out += std::to_string(idx[k]);
      }
    }
    i = j + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Courses (JSON Lines).

inline CourseDoc CourseFromJson(const nlohmann::json& obj, std::size_t line_no = 0) {
  using namespace ingest_detail;
  CourseDoc c;
  c.id = RequireString(obj, "id", line_no, true);
  c.title = RequireString(obj, "title", line_no, true);
  c.description = obj.contains("description") ? RequireString(obj, "description", line_no, false)
                                              : std::string();
  auto credits = obj.find("credits");
  if (credits == obj.end() || !credits->is_number()) {
    throw Error(ErrorCode::kMalformed, "missing numeric 'credits'", line_no);
  }
  c.credits = credits->get<double>();
  if (!(c.credits > 0.0)) {
    throw Error(ErrorCode::kMalformed, "credits must be > 0 for course " + c.id, line_no);
  }
  const std::string kind = obj.value("kind", std::string("elective"));
  if (kind == "mandatory") {
    c.kind = CourseKind::kMandatory;
  } else if (kind == "elective") {
    c.kind = CourseKind::kElective;
  } else if (kind == "free") {
    c.kind = CourseKind::kFree;
  } else {
    throw Error(ErrorCode::kMalformed, "unknown course kind '" + kind + "'", line_no);
  }
  if (auto dp = obj.find("degree_project"); dp != obj.end()) {
    if (!dp->is_boolean()) throw Error(ErrorCode::kMalformed, "degree_project must be bool", line_no);
    c.degree_project = dp->get<bool>();
  }
  if (auto topics = obj.find("topics"); topics != obj.end()) {
    if (!topics->is_array()) throw Error(ErrorCode::kMalformed, "topics must be an array", line_no);
    for (const auto& t : *topics) {
      if (!t.is_object()) throw Error(ErrorCode::kMalformed, "topic must be an object", line_no);
      c.topics.push_back({RequireString(t, "text", line_no, true),
                          LabelsFromJson(t.value("labels", nlohmann::json()), line_no)});
    }
  }
  if (auto dist = obj.find("distribution"); dist != obj.end()) {
    const KaVector v = NineNumbers(*dist, line_no);
    try {
      c.distribution = NormalizeCounts(v);
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformed, e.what(), line_no);
    }
  }
  return c;
}

inline nlohmann::json CourseToJson(const CourseDoc& c) {
  nlohmann::json j = {{"id", c.id},
                      {"title", c.title},
                      {"description", c.description},
                      {"credits", c.credits},
                      {"kind", std::string(CourseKindName(c.kind))}};
  if (c.degree_project) j["degree_project"] = true;
  if (!c.topics.empty()) {
    nlohmann::json topics = nlohmann::json::array();
    for (const auto& t : c.topics) {
      topics.push_back({{"text", t.text}, {"labels", ingest_detail::LabelsToJson(t.labels)}});
    }
    j["topics"] = std::move(topics);
  }
  if (c.distribution) j["distribution"] = c.distribution->weights();
  return j;
}

inline std::vector<CourseDoc> ParseCourses(const std::vector<std::string>& lines) {
  std::vector<CourseDoc> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (ingest_detail::IsBlank(lines[i])) continue;
    CourseDoc c = CourseFromJson(ingest_detail::ParseJsonLine(lines[i], i + 1), i + 1);
    if (!seen.insert(c.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate course id " + c.id, i + 1);
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<CourseDoc> LoadCourses(const std::filesystem::path& path) {
  return ParseCourses(ingest_detail::ReadLines(path));
}

inline std::string SerializeCourses(const std::vector<CourseDoc>& courses) {
  std::string out;
  for (const auto& c : courses) out += CourseToJson(c).dump() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Knowledge Descriptions (JSON Lines).

inline std::vector<KnowledgeDescription> ParseKds(const std::vector<std::string>& lines) {
  using namespace ingest_detail;
  std::vector<KnowledgeDescription> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const std::size_t line_no = i + 1;
    const auto obj = ParseJsonLine(lines[i], line_no);
    KnowledgeDescription kd;
    kd.id = RequireString(obj, "id", line_no, true);
    kd.text = RequireString(obj, "text", line_no, true);
    if (auto labels = obj.find("labels"); labels != obj.end() && !labels->is_null()) {
      kd.labels = LabelsFromJson(*labels, line_no);
    }
    if (!seen.insert(kd.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate KD id " + kd.id, line_no);
    }
    out.push_back(std::move(kd));
  }
  return out;
}

inline std::vector<KnowledgeDescription> LoadKds(const std::filesystem::path& path) {
  return ParseKds(ingest_detail::ReadLines(path));
}

inline std::string SerializeKds(const std::vector<KnowledgeDescription>& kds) {
  std::string out;
  for (const auto& kd : kds) {
    nlohmann::json j = {{"id", kd.id}, {"text", kd.text}};
    if (kd.labels) j["labels"] = kd.labels->indices();
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Role table (CSV: role,category,ka0..ka8,demand). Rows are integer-rounded
// percentages; their sum must land in [98, 102] before renormalization.

inline constexpr double kRoleRowMinSum = 98.0;
inline constexpr double kRoleRowMaxSum = 102.0;

inline std::vector<WorkRoleRecord> ParseRoleTable(const std::vector<std::string>& lines) {
  using namespace ingest_detail;
  std::vector<WorkRoleRecord> out;
  std::size_t first = 0;
  while (first < lines.size() && IsBlank(lines[first])) ++first;
  if (first == lines.size()) return out;
  const auto header = SplitCsvLine(lines[first], first + 1);
  std::vector<std::string> expected = {"role", "category"};
  for (std::size_t i = 0; i < kNumAreas; ++i) expected.push_back("ka" + std::to_string(i));
  expected.push_back("demand");
  if (header != expected) {
    throw Error(ErrorCode::kMalformed, "role table header must be role,category,ka0..ka8,demand",
                first + 1);
  }
  std::set<std::string> seen;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const std::size_t line_no = i + 1;
    const auto f = SplitCsvLine(lines[i], line_no);
    if (f.size() != expected.size()) {
      throw Error(ErrorCode::kMalformed,
                  "expected " + std::to_string(expected.size()) + " fields, got " +
                      std::to_string(f.size()),
                  line_no);
    }
    WorkRoleRecord r;
    r.name = f[0];
    if (r.name.empty()) throw Error(ErrorCode::kMalformed, "empty role name", line_no);
    const auto cat = ParseCategory(f[1]);
    if (!cat) throw Error(ErrorCode::kMalformed, "unknown category '" + f[1] + "'", line_no);
    r.category = *cat;
    KaVector row;
    double sum = 0.0;
    for (std::size_t k = 0; k < kNumAreas; ++k) {
      row[k] = ParseNumber(f[2 + k], line_no, "ka column");
      if (row[k] < 0.0) throw Error(ErrorCode::kMalformed, "negative percentage", line_no);
      sum += row[k];
    }
    if (sum == 0.0) {
      throw Error(ErrorCode::kMalformed, "AllZero: role '" + r.name + "' has no mass", line_no);
    }
    if (sum < kRoleRowMinSum || sum > kRoleRowMaxSum) {
      throw Error(ErrorCode::kRowSumOutOfRange,
                  "row for '" + r.name + "' sums to " + std::to_string(sum), line_no);
    }
    r.raw_percentages = row;
    r.distribution = NormalizeCounts(row);
    if (!f[11].empty()) r.demand = ParseCount(f[11], line_no);
    if (!seen.insert(r.name).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate role " + r.name, line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<WorkRoleRecord> LoadRoleTable(const std::filesystem::path& path) {
  return ParseRoleTable(ingest_detail::ReadLines(path));
}

inline std::string FormatNumber(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string SerializeRoleTable(const std::vector<WorkRoleRecord>& roles) {
  std::string out = "role,category";
  for (std::size_t i = 0; i < kNumAreas; ++i) out += ",ka" + std::to_string(i);
  out += ",demand\n";
  for (const auto& r : roles) {
    out += ingest_detail::CsvEscape(r.name) + "," + std::string(CategoryCode(r.category));
    KaVector row{};
    if (r.raw_percentages) {
      row = *r.raw_percentages;
    } else if (r.distribution) {
      for (std::size_t i = 0; i < kNumAreas; ++i) row[i] = (*r.distribution)[i] * 100.0;
    }
    for (double v : row) out += "," + FormatNumber(v);
    out += ",";
    if (r.demand) out += std::to_string(*r.demand);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annotation tables (CSV: course_id,topic,<annotator>...).

inline AnnotationTable ParseAnnotations(const std::vector<std::string>& lines) {
  using namespace ingest_detail;
  AnnotationTable table;
  std::size_t first = 0;
  while (first < lines.size() && IsBlank(lines[first])) ++first;
  if (first == lines.size()) return table;
  const auto header = SplitCsvLine(lines[first], first + 1);
  if (header.size() < 4 || header[0] != "course_id" || header[1] != "topic") {
    throw Error(ErrorCode::kMalformed,
                "header must be course_id,topic followed by at least two annotators", first + 1);
  }
  table.annotators.assign(header.begin() + 2, header.end());
  std::set<std::string> unique(table.annotators.begin(), table.annotators.end());
  if (unique.size() != table.annotators.size()) {
    throw Error(ErrorCode::kMalformed, "duplicate annotator column", first + 1);
  }
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const std::size_t line_no = i + 1;
    const auto f = SplitCsvLine(lines[i], line_no);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kMalformed,
                  "expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(f.size()),
                  line_no);
    }
    AnnotationRecord rec;
    rec.course_id = f[0];
    rec.topic = f[1];
    if (rec.topic.empty()) throw Error(ErrorCode::kMalformed, "empty topic", line_no);
    std::size_t present = 0;
    for (std::size_t a = 0; a < table.annotators.size(); ++a) {
      auto labels = ParseLabelCell(f[2 + a], line_no);
      if (labels) ++present;
      rec.annotations.emplace(table.annotators[a], labels);
    }
    if (present < 2) {
      throw Error(ErrorCode::kMalformed, "fewer than two annotators labeled this topic", line_no);
    }
    table.records.push_back(std::move(rec));
  }
  return table;
}

inline AnnotationTable LoadAnnotations(const std::filesystem::path& path) {
  return ParseAnnotations(ingest_detail::ReadLines(path));
}

inline std::string SerializeAnnotations(const AnnotationTable& table) {
  using ingest_detail::CsvEscape;
  std::string out = "course_id,topic";
  for (const auto& a : table.annotators) out += "," + CsvEscape(a);
  out += "\n";
  for (const auto& r : table.records) {
    out += CsvEscape(r.course_id) + "," + CsvEscape(r.topic);
    for (const auto& a : table.annotators) {
      auto it = r.annotations.find(a);
      const std::optional<LabelSet> cell =
          it == r.annotations.end() ? std::nullopt : it->second;
      out += "," + CsvEscape(FormatLabelCell(cell));
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Job demand (JSON Lines). Each line is either {"role": name, "count": n} or a
// single-key object {name: n}.

inline DemandMap ParseDemand(const std::vector<std::string>& lines) {
  using namespace ingest_detail;
  DemandMap out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const std::size_t line_no = i + 1;
    const auto obj = ParseJsonLine(lines[i], line_no);
    std::string role;
    nlohmann::json count;
    if (obj.contains("role")) {
      role = RequireString(obj, "role", line_no, true);
      if (!obj.contains("count")) throw Error(ErrorCode::kMalformed, "missing 'count'", line_no);
      count = obj.at("count");
    } else if (obj.size() == 1) {
      role = obj.begin().key();
      count = obj.begin().value();
    } else {
      throw Error(ErrorCode::kMalformed, "expected {role, count} or {name: count}", line_no);
    }
    long long n = 0;
    if (count.is_number_integer()) {
      n = count.get<long long>();
      if (n < 0) {
        throw Error(ErrorCode::kNegativeCount, "negative count for " + role, line_no);
      }
    } else if (count.is_string()) {
      n = ParseCount(count.get<std::string>(), line_no);
    } else {
      throw Error(ErrorCode::kMalformed, "count must be an integer", line_no);
    }
    if (!out.emplace(role, n).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate role " + role, line_no);
    }
  }
  return out;
}

inline DemandMap LoadDemand(const std::filesystem::path& path) {
  return ParseDemand(ingest_detail::ReadLines(path));
}

inline std::string SerializeDemand(const DemandMap& demand) {
  std::string out;
  for (const auto& [role, n] : demand) {
    out += nlohmann::json({{"role", role}, {"count", n}}).dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Role -> KD membership (JSON Lines: {"role", "category", "kd_ids"}).

inline std::vector<WorkRoleRecord> ParseRoleKds(const std::vector<std::string>& lines) {
  using namespace ingest_detail;
  std::vector<WorkRoleRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const std::size_t line_no = i + 1;
    const auto obj = ParseJsonLine(lines[i], line_no);
    WorkRoleRecord r;
    r.name = RequireString(obj, "role", line_no, true);
    const auto cat = ParseCategory(RequireString(obj, "category", line_no, true));
    if (!cat) throw Error(ErrorCode::kMalformed, "unknown category", line_no);
    r.category = *cat;
    const auto ids = obj.value("kd_ids", nlohmann::json::array());
    if (!ids.is_array()) throw Error(ErrorCode::kMalformed, "kd_ids must be an array", line_no);
    for (const auto& id : ids) {
      if (!id.is_string()) throw Error(ErrorCode::kMalformed, "kd id must be a string", line_no);
      r.kd_ids.push_back(id.get<std::string>());
    }
    if (auto d = obj.find("demand"); d != obj.end() && !d->is_null()) {
      if (!d->is_number_integer()) throw Error(ErrorCode::kMalformed, "bad demand", line_no);
      if (d->get<long long>() < 0) throw Error(ErrorCode::kNegativeCount, "negative demand", line_no);
      r.demand = d->get<long long>();
    }
    if (!seen.insert(r.name).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate role " + r.name, line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<WorkRoleRecord> LoadRoleKds(const std::filesystem::path& path) {
  return ParseRoleKds(ingest_detail::ReadLines(path));
}

inline std::string SerializeRoleKds(const std::vector<WorkRoleRecord>& roles) {
  std::string out;
  for (const auto& r : roles) {
    nlohmann::json j = {{"role", r.name},
                        {"category", std::string(CategoryCode(r.category))},
                        {"kd_ids", r.kd_ids}};
    if (r.demand) j["demand"] = *r.demand;
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labeled training corpus (JSON Lines: {"text", "labels"} plus optional "id"
// and "source").

struct LabeledText {
  std::string text;
  LabelSet labels = LabelSet::Of({0});
  friend bool operator==(const LabeledText&, const LabeledText&) = default;
};

inline std::vector<LabeledText> ParseCorpus(const std::vector<std::string>& lines) {
  using namespace ingest_detail;
  std::vector<LabeledText> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsBlank(lines[i])) continue;
    const std::size_t line_no = i + 1;
    const auto obj = ParseJsonLine(lines[i], line_no);
    LabeledText t;
    t.text = RequireString(obj, "text", line_no, true);
    if (!obj.contains("labels")) throw Error(ErrorCode::kMalformed, "missing 'labels'", line_no);
    t.labels = LabelsFromJson(obj.at("labels"), line_no);
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<LabeledText> LoadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ingest_detail::ReadLines(path));
}

inline std::string SerializeCorpus(const std::vector<LabeledText>& corpus) {
  std::string out;
  for (const auto& t : corpus) {
    out += nlohmann::json({{"text", t.text}, {"labels", t.labels.indices()}}).dump() + "\n";
  }
  return out;
}

}  // namespace currialign

#endif  // CURRIALIGN_INGEST_HPP_
