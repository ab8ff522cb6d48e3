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

#ifndef CURRIALIGN_CLASSIFY_HPP_
#define CURRIALIGN_CLASSIFY_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "currialign/domain.hpp"
#include "currialign/error.hpp"
#include "currialign/ingest.hpp"

namespace currialign {

// ---------------------------------------------------------------------------
// Prompt templates. These strings are the exact bytes sent to the remote
// model; the golden-file tests pin them.

inline constexpr std::string_view kPreprocessSystemPrompt =
    "You are a helpful AI assistant. Instructions:\n"
    "a. Carefully read the topic and the description.\n"
    "b. Provide a list of all subtopics contained within the description.\n"
    "c. Do not include any explanation or additional text in the response.";

inline constexpr std::string_view kZeroShotSystemPrompt =
    "You are a helpful AI assistant.\n"
    "Instructions:\n"
    "a. Carefully read the knowledge statement.\n"
    "b. Choose one or more of the following (0, 1, 2, 3, 4, 5, 6, 7, 8).\n"
    "c. Do NOT include any explanation or additional text in the response.";

inline constexpr std::string_view kZeroShotOptions =
    "Options: {\"0\": \"miscellaneous (this includes Computer Science, Business and Law, "
    "Communication and Networking, Information Technology, Cyberspace Practice, Pedagogy, "
    "and Intelligence)\",\n"
    "\"1\": \"data security\",\n"
    "\"2\": \"software security\",\n"
    "\"3\": \"component security\",\n"
    "\"4\": \"connection security\",\n"
    "\"5\": \"system security\",\n"
    "\"6\": \"human security\",\n"
    "\"7\": \"organizational security\",\n"
    "\"8\": \"societal security\"}";

inline std::string PreprocessUserMessage(std::string_view title, std::string_view description) {
  std::string out = "#topic: ";
  out += title;
  out += ", #description: ";
  out += description;
  return out;
}

inline std::string ZeroShotUserMessage(std::string_view knowledge) {
  std::string out = "#Question: Classify the following statement ";
  out += knowledge;
  out += " into one or multiple of the following knowledge areas:\n";
  out += kZeroShotOptions;
  return out;
}

// ---------------------------------------------------------------------------
// Reply parsing.

namespace classify_detail {

inline std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string TrimWs(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool StartsWith(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(0, p.size()) == p;
}

// Removes one leading list marker: a bullet glyph or a "12." / "12)" number.
inline std::string StripListMarker(std::string line) {
  line = TrimWs(line);
  for (std::string_view glyph : {"\xE2\x80\xA2", "-", "*"}) {  // U+2022 bullet
    if (StartsWith(line, glyph)) return TrimWs(std::string_view(line).substr(glyph.size()));
  }
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
    return TrimWs(std::string_view(line).substr(i + 1));
  }
  return line;
}

}  // namespace classify_detail

// One topic per line, list markers stripped, lowercased, de-duplicated in
// first-seen order.
inline std::vector<std::string> ParseTopicList(std::string_view response) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::string line;
  std::istringstream in{std::string(response)};
  while (std::getline(in, line)) {
    std::string topic =
        classify_detail::ToLower(classify_detail::StripListMarker(std::move(line)));
    if (topic.empty()) continue;
    if (seen.insert(topic).second) out.push_back(std::move(topic));
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyResponse, "model returned no topics");
  return out;
}

// Collects every standalone integer 0..8 in a reply.
inline LabelSet ParseLabelReply(std::string_view reply) {
  std::uint16_t mask = 0;
  std::size_t i = 0;
  while (i < reply.size()) {
    if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j]))) ++j;
    if (j - i == 1 && reply[i] <= '8') mask |= static_cast<std::uint16_t>(1u << (reply[i] - '0'));
    i = j;
  }
  if (mask == 0) {
    throw Error(ErrorCode::kUnparseable, "no area index in reply: '" + std::string(reply) + "'");
  }
  return LabelSet::FromMask(mask);
}

// "K0018: Knowledge of encryption algorithms" -> "encryption algorithms".
inline std::string StripKdPrefix(std::string_view text) {
  std::string s = classify_detail::TrimWs(text);
  if (s.size() > 1 && (s[0] == 'K' || s[0] == 'k')) {
    std::size_t i = 1;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 1 && i < s.size() && s[i] == ':') s = classify_detail::TrimWs(s.substr(i + 1));
  }
  constexpr std::string_view kPrefix = "knowledge of ";
  if (classify_detail::StartsWith(classify_detail::ToLower(s), kPrefix)) {
    s = classify_detail::TrimWs(s.substr(kPrefix.size()));
  }
  return classify_detail::ToLower(s);
}

// ---------------------------------------------------------------------------
// Baseline TF-IDF nearest-centroid classifier.

enum class Backend { kRemote, kBaseline };

inline std::string_view BackendName(Backend b) {
  return b == Backend::kRemote ? "remote" : "baseline";
}

struct ClassifiedTopic {
  std::string text;
  LabelSet labels = LabelSet::Of({0});
  Backend backend = Backend::kBaseline;
  std::optional<std::string> raw_response;
};

inline constexpr double kDefaultRelativeThreshold = 0.75;
inline constexpr int kBaselineModelVersion = 1;

inline std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) tokens.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

// Sparse vector: (term index, weight) sorted by term index.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

struct BaselineModel {
  std::vector<std::string> terms;  // index -> term
  std::unordered_map<std::string, std::size_t> vocabulary;
  std::vector<double> idf;
  std::array<std::vector<double>, kNumAreas> centroids;  // dense, unit norm or zero
  double relative_threshold = kDefaultRelativeThreshold;

  SparseVector Vectorize(std::string_view text) const {
    std::unordered_map<std::size_t, double> tf;
    for (const auto& tok : Tokenize(text)) {
      auto it = vocabulary.find(tok);
      if (it != vocabulary.end()) tf[it->second] += 1.0;
    }
    SparseVector v(tf.begin(), tf.end());
    std::sort(v.begin(), v.end());
    double norm = 0.0;
    for (auto& [t, w] : v) {
      w *= idf[t];
      norm += w * w;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (auto& [t, w] : v) w /= norm;
    }
    return v;
  }

  // Cosine similarity of the text against each centroid.
  KaVector Scores(std::string_view text) const {
    const SparseVector v = Vectorize(text);
    KaVector s{};
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      if (centroids[j].empty()) continue;
      for (const auto& [t, w] : v) s[j] += w * centroids[j][t];
    }
    return s;
  }
};

inline BaselineModel TrainBaseline(std::span<const LabeledText> corpus,
                                   double relative_threshold = kDefaultRelativeThreshold) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "training corpus is empty");
  if (!(relative_threshold > 0.0 && relative_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "relative_threshold must lie in (0, 1]");
  }
  BaselineModel m;
  m.relative_threshold = relative_threshold;
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  std::vector<std::size_t> df;
  for (const auto& item : corpus) {
    docs.push_back(Tokenize(item.text));
    std::set<std::size_t> uniq;
    for (const auto& tok : docs.back()) {
      auto [it, inserted] = m.vocabulary.emplace(tok, m.terms.size());
      if (inserted) {
        m.terms.push_back(tok);
        df.push_back(0);
      }
      uniq.insert(it->second);
    }
    for (std::size_t t : uniq) ++df[t];
  }
  const double n = static_cast<double>(corpus.size());
  m.idf.resize(m.terms.size());
  for (std::size_t t = 0; t < m.terms.size(); ++t) {
    m.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;
  }
  std::array<std::vector<double>, kNumAreas> sums;
  std::array<std::size_t, kNumAreas> counts{};
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const SparseVector v = m.Vectorize(corpus[d].text);
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      if (!corpus[d].labels.contains(j)) continue;
      if (sums[j].empty()) sums[j].assign(m.terms.size(), 0.0);
      ++counts[j];
      for (const auto& [t, w] : v) sums[j][t] += w;
    }
  }
  for (std::size_t j = 0; j < kNumAreas; ++j) {
    if (counts[j] == 0) continue;
    // The mean and the sum share a direction, so normalizing the sum suffices.
    double norm = 0.0;
    for (double w : sums[j]) norm += w * w;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& w : sums[j]) w /= norm;
      m.centroids[j] = std::move(sums[j]);
    }
  }
  return m;
}

inline LabelSet ClassifyBaseline(const BaselineModel& model, std::string_view text) {
  const KaVector s = model.Scores(text);
  const double best = *std::max_element(s.begin(), s.end());
  if (!(best > 0.0)) return LabelSet::Of({0});
  const double cut = model.relative_threshold * best;
  std::uint16_t mask = 0;
  for (std::size_t j = 0; j < kNumAreas; ++j) {
    if (s[j] >= cut) mask |= static_cast<std::uint16_t>(1u << j);
  }
  return LabelSet::FromMask(mask);
}

// ---------------------------------------------------------------------------
// Model persistence. Centroids are written sparsely since most entries are 0.

inline nlohmann::json BaselineModelToJson(const BaselineModel& m) {
  nlohmann::json centroids = nlohmann::json::array();
  for (const auto& c : m.centroids) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (c[t] != 0.0) entries.push_back({t, c[t]});
    }
    centroids.push_back(std::move(entries));
  }
  return {{"format", "currialign-baseline"},
          {"version", kBaselineModelVersion},
          {"relative_threshold", m.relative_threshold},
          {"terms", m.terms},
          {"idf", m.idf},
          {"centroids", std::move(centroids)}};
}

inline BaselineModel BaselineModelFromJson(const nlohmann::json& j) {
  try {
    if (j.at("format") != "currialign-baseline") {
      throw Error(ErrorCode::kMalformed, "not a baseline model file");
    }
    if (j.at("version").get<int>() != kBaselineModelVersion) {
      throw Error(ErrorCode::kMalformed, "unsupported model version");
    }
    BaselineModel m;
    m.relative_threshold = j.at("relative_threshold").get<double>();
    m.terms = j.at("terms").get<std::vector<std::string>>();
    m.idf = j.at("idf").get<std::vector<double>>();
    if (m.idf.size() != m.terms.size()) throw Error(ErrorCode::kMalformed, "idf length mismatch");
    for (std::size_t t = 0; t < m.terms.size(); ++t) {
      if (!m.vocabulary.emplace(m.terms[t], t).second) {
        throw Error(ErrorCode::kMalformed, "duplicate term " + m.terms[t]);
      }
      if (m.idf[t] < 0.0) throw Error(ErrorCode::kMalformed, "negative idf");
    }
    const auto& cs = j.at("centroids");
    if (!cs.is_array() || cs.size() != kNumAreas) {
      throw Error(ErrorCode::kMalformed, "expected 9 centroids");
    }
    for (std::size_t a = 0; a < kNumAreas; ++a) {
      if (cs[a].empty()) continue;
      m.centroids[a].assign(m.terms.size(), 0.0);
      for (const auto& e : cs[a]) {
        const auto t = e.at(0).get<std::size_t>();
        if (t >= m.terms.size()) throw Error(ErrorCode::kMalformed, "centroid index out of range");
        m.centroids[a][t] = e.at(1).get<double>();
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformed, std::string("bad model file: ") + e.what());
  }
}

inline void SaveBaselineModel(const BaselineModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << BaselineModelToJson(m).dump() << "\n";
  if (!out) throw Error(ErrorCode::kIo, "write failure on " + path.string());
}

inline BaselineModel LoadBaselineModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("bad model file: ") + e.what());
  }
  return BaselineModelFromJson(j);
}

}  // namespace currialign

#endif  // CURRIALIGN_CLASSIFY_HPP_
