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

#ifndef CURRIALIGN_REPORT_HPP_
#define CURRIALIGN_REPORT_HPP_

// JSON and CSV renderings shared by the CLI and the HTTP service.

#include <cstdio>
#include <string>

#include "json.hpp"

#include "currialign/analysis.hpp"
#include "currialign/domain.hpp"
#include "currialign/optimize.hpp"

namespace currialign {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json DistributionToJson(const KaDistribution& d) {
  nlohmann::json areas = nlohmann::json::array();
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    areas.push_back({{"area", i},
                     {"name", std::string(AreaName(i))},
                     {"weight", d[i]},
                     {"percent", d.Percentages()[i]}});
  }
  return {{"weights", d.weights()}, {"areas", std::move(areas)}};
}

inline KaDistribution DistributionFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kNumAreas) {
    throw Error(ErrorCode::kInvalidArgument, "distribution must be an array of 9 numbers");
  }
  KaVector v;
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kInvalidArgument, "non-numeric weight");
    v[i] = j[i].get<double>();
  }
  return KaDistribution::FromWeights(v);
}

inline nlohmann::json GapReportToJson(const GapReport& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    rows.push_back({{"area", i}, {"name", std::string(AreaName(i))}, {"delta", g.deltas[i]}});
  }
  return {{"deltas", g.deltas}, {"per_area", std::move(rows)}, {"l1", g.l1}, {"kl", g.kl}};
}

inline nlohmann::json SelectionResultToJson(const SelectionResult& r,
                                            const CurriculumProfile& profile,
                                            const KaDistribution& target) {
  nlohmann::json chosen = nlohmann::json::array();
  for (const auto& id : r.chosen) {
    const auto& e = profile.electives.at(profile.IndexOf(id));
    chosen.push_back({{"id", id}, {"title", e.title}, {"credits", e.credits}});
  }
  return {{"chosen", r.chosen},
          {"courses", std::move(chosen)},
          {"objective", r.objective},
          {"method", std::string(SolveMethodName(r.method))},
          {"proven_optimal", r.proven_optimal},
          {"nodes_visited", r.nodes_visited},
          {"blended", DistributionToJson(r.blended)},
          {"target", DistributionToJson(target)},
          {"gap_report", GapReportToJson(MakeGapReport(r.blended, target))}};
}

// CSV pie data: one row per non-empty sector.
inline std::string PieCsv(const std::string& label, const KaDistribution& d) {
  std::string out;
  for (const auto& [name, pct] : PieRows(d)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", pct);
    out += ingest_detail::CsvEscape(label) + "," + name + "," + buf + "\n";
  }
  return out;
}

}  // namespace currialign

#endif  // CURRIALIGN_REPORT_HPP_
