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

#ifndef CURRIALIGN_ANALYSIS_HPP_
#define CURRIALIGN_ANALYSIS_HPP_

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "currialign/domain.hpp"
#include "currialign/error.hpp"
#include "currialign/ingest.hpp"

namespace currialign {

struct ElectiveEntry {
  std::string id;
  std::string title;
  KaDistribution distribution = KaDistribution::Uniform();
  double credits = 0.0;
};

// Mandatory block plus the conditional elective pool from which exactly k
// courses are picked.
struct CurriculumProfile {
  KaDistribution mandatory = KaDistribution::Uniform();
  double mandatory_credits = 0.0;
  std::vector<ElectiveEntry> electives;
  std::size_t k = 0;

  // Position of an elective id in `electives`, or throws UnknownElectiveId.
  std::size_t IndexOf(const std::string& id) const {
    for (std::size_t i = 0; i < electives.size(); ++i) {
      if (electives[i].id == id) return i;
    }
    throw Error(ErrorCode::kUnknownElectiveId, "unknown elective id '" + id + "'");
  }
};

struct MarketProfile {
  struct Entry {
    KaDistribution distribution = KaDistribution::Uniform();
    double weight = 0.0;
  };
  std::map<std::string, Entry> per_role;
  KaDistribution aggregate = KaDistribution::Uniform();
};

inline KaDistribution AggregateLabelSets(std::span<const LabelSet> sets) {
  if (sets.empty()) throw Error(ErrorCode::kEmptyInput, "no label sets to aggregate");
  KaVector sum{};
  for (const auto& s : sets) {
    const KaVector ind = LabelSetToIndicator(s);
    for (std::size_t i = 0; i < kNumAreas; ++i) sum[i] += ind[i];
  }
  return NormalizeCounts(sum);
}

// Aggregates any range of items exposing a `labels` LabelSet member, such as
// LabeledTopic or ClassifiedTopic.
template <typename Range>
KaDistribution AggregateTopics(const Range& topics) {
  std::vector<LabelSet> sets;
  for (const auto& t : topics) sets.push_back(t.labels);
  return AggregateLabelSets(sets);
}

template <typename Range>
KaDistribution CourseDistribution(const CourseDoc& /*course*/, const Range& topics) {
  return AggregateTopics(topics);
}

// Distribution of a course from its own stored evidence: a shipped
// pre-aggregated distribution wins, otherwise its labeled topics.
inline KaDistribution CourseDistribution(const CourseDoc& course) {
  if (course.distribution) return *course.distribution;
  if (course.topics.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "course " + course.id + " has neither labeled topics nor a distribution");
  }
  return AggregateTopics(course.topics);
}

// Credit-weighted blend of arbitrary courses; AllZero when nothing is given.
inline KaDistribution CreditWeightedBlend(std::span<const CourseDoc> courses) {
  KaVector mass{};
  for (const auto& c : courses) {
    const auto d = CourseDistribution(c);
    for (std::size_t i = 0; i < kNumAreas; ++i) mass[i] += c.credits * d[i];
  }
  return NormalizeCounts(mass);
}

inline CurriculumProfile BuildCurriculumProfile(std::span<const CourseDoc> courses,
                                                std::size_t k) {
  CurriculumProfile p;
  std::vector<CourseDoc> mandatory;
  for (const auto& c : courses) {
    if (c.degree_project) continue;
    if (c.kind == CourseKind::kMandatory) {
      mandatory.push_back(c);
      p.mandatory_credits += c.credits;
    } else if (c.kind == CourseKind::kElective) {
      p.electives.push_back({c.id, c.title, CourseDistribution(c), c.credits});
    }
  }
  if (mandatory.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "curriculum has no mandatory courses");
  }
  p.mandatory = CreditWeightedBlend(mandatory);
  if (k > p.electives.size()) {
    throw Error(ErrorCode::kWrongCardinality,
                "k=" + std::to_string(k) + " exceeds the " +
                    std::to_string(p.electives.size()) + " available electives");
  }
  p.k = k;
  return p;
}

// Blend by elective positions; the hot path used by the solvers.
inline KaVector BlendByIndex(const CurriculumProfile& profile,
                             std::span<const std::size_t> selection) {
  KaVector mass;
  double credits = profile.mandatory_credits;
  for (std::size_t j = 0; j < kNumAreas; ++j) {
    mass[j] = profile.mandatory_credits * profile.mandatory[j];
  }
  for (std::size_t i : selection) {
    const auto& e = profile.electives.at(i);
    credits += e.credits;
    for (std::size_t j = 0; j < kNumAreas; ++j) mass[j] += e.credits * e.distribution[j];
  }
  for (double& m : mass) m /= credits;
  return mass;
}

inline KaDistribution CurriculumDistribution(const CurriculumProfile& profile,
                                             std::span<const std::string> selection) {
  std::vector<std::size_t> idx;
  for (const auto& id : selection) idx.push_back(profile.IndexOf(id));
  return NormalizeCounts(BlendByIndex(profile, idx));
}

inline KaDistribution RoleDistribution(std::span<const KnowledgeDescription> kds) {
  std::vector<LabelSet> sets;
  for (const auto& kd : kds) {
    if (!kd.labels) throw Error(ErrorCode::kUnlabeledKd, "KD " + kd.id + " has no labels");
    sets.push_back(*kd.labels);
  }
  return AggregateLabelSets(sets);
}

inline KaDistribution CategoryDistribution(std::span<const KaDistribution> roles) {
  if (roles.empty()) throw Error(ErrorCode::kEmptyInput, "category has no roles");
  KaVector sum{};
  for (const auto& r : roles) {
    for (std::size_t i = 0; i < kNumAreas; ++i) sum[i] += r[i];
  }
  return NormalizeCounts(sum);
}

inline MarketProfile MarketDistribution(const std::map<std::string, KaDistribution>& roles,
                                        const DemandMap& demand) {
  if (demand.empty()) throw Error(ErrorCode::kEmptyDemand, "no demand data");
  long double total = 0.0L;
  for (const auto& [name, count] : demand) {
    if (!roles.contains(name)) {
      throw Error(ErrorCode::kMissingRoleDistribution, "no distribution for role '" + name + "'");
    }
    total += static_cast<long double>(count);
  }
  if (total <= 0.0L) throw Error(ErrorCode::kEmptyDemand, "all demand counts are zero");
  MarketProfile m;
  KaVector agg{};
  for (const auto& [name, count] : demand) {
    const auto& d = roles.at(name);
    const double w = static_cast<double>(static_cast<long double>(count) / total);
    m.per_role.emplace(name, MarketProfile::Entry{d, w});
    for (std::size_t i = 0; i < kNumAreas; ++i) agg[i] += w * d[i];
  }
  m.aggregate = NormalizeCounts(agg);
  return m;
}

// Role distributions for a role table, preferring KD evidence when the role's
// KDs are known and labeled.
inline std::map<std::string, KaDistribution> ResolveRoleDistributions(
    std::span<const WorkRoleRecord> roles, std::span<const KnowledgeDescription> kds = {}) {
  std::unordered_map<std::string, const KnowledgeDescription*> by_id;
  for (const auto& kd : kds) by_id.emplace(kd.id, &kd);
  std::map<std::string, KaDistribution> out;
  for (const auto& r : roles) {
    if (!r.kd_ids.empty() && !by_id.empty()) {
      std::vector<KnowledgeDescription> mine;
      for (const auto& id : r.kd_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
          throw Error(ErrorCode::kNotFound, "role " + r.name + " references unknown KD " + id);
        }
        mine.push_back(*it->second);
      }
      out.insert_or_assign(r.name, RoleDistribution(mine));
    } else if (r.distribution) {
      out.insert_or_assign(r.name, *r.distribution);
    }
  }
  return out;
}

// Roles, their KDs and the resolved distribution of every role.
struct RoleCatalog {
  std::vector<WorkRoleRecord> roles;
  std::vector<KnowledgeDescription> kds;
  std::map<std::string, KaDistribution> distributions;
};

// Merges KD mappings into a role table. A mapping for a role already in the
// table replaces its KD list; an unknown role is appended.
inline RoleCatalog BuildRoleCatalog(std::vector<WorkRoleRecord> roles,
                                    std::vector<WorkRoleRecord> role_kds,
                                    std::vector<KnowledgeDescription> kds) {
  RoleCatalog c;
  c.roles = std::move(roles);
  for (auto& rk : role_kds) {
    auto it = std::find_if(c.roles.begin(), c.roles.end(),
                           [&](const WorkRoleRecord& r) { return r.name == rk.name; });
    if (it == c.roles.end()) {
      c.roles.push_back(std::move(rk));
    } else {
      it->kd_ids = rk.kd_ids;
      if (rk.demand) it->demand = rk.demand;
    }
  }
  c.kds = std::move(kds);
  c.distributions = ResolveRoleDistributions(c.roles, c.kds);
  return c;
}

inline const KaDistribution& CatalogRole(const RoleCatalog& c, const std::string& name) {
  auto it = c.distributions.find(name);
  if (it == c.distributions.end()) throw Error(ErrorCode::kNotFound, "unknown role '" + name + "'");
  return it->second;
}

// Names of the roles in a category that have a resolved distribution.
inline std::vector<std::string> CategoryMembers(const RoleCatalog& c, const std::string& code) {
  const auto cat = ParseCategory(code);
  if (!cat) throw Error(ErrorCode::kNotFound, "unknown category '" + code + "'");
  std::vector<std::string> names;
  for (const auto& r : c.roles) {
    if (r.category == *cat && c.distributions.contains(r.name)) names.push_back(r.name);
  }
  return names;
}

inline KaDistribution CatalogCategory(const RoleCatalog& c, const std::string& code) {
  std::vector<KaDistribution> members;
  for (const auto& name : CategoryMembers(c, code)) members.push_back(c.distributions.at(name));
  if (members.empty()) throw Error(ErrorCode::kNotFound, "category " + code + " has no roles");
  return CategoryDistribution(members);
}

// Market profile from explicit demand, or from the role table's demand column
// when no demand map is given.
inline MarketProfile CatalogMarket(const RoleCatalog& c, DemandMap demand) {
  if (demand.empty()) {
    for (const auto& r : c.roles) {
      if (r.demand) demand.emplace(r.name, *r.demand);
    }
  }
  if (demand.empty()) throw Error(ErrorCode::kNotFound, "no demand data");
  return MarketDistribution(c.distributions, demand);
}

// Pie rows for plotting: one (area name, percentage) pair per non-empty sector.
inline std::vector<std::pair<std::string, double>> PieRows(const KaDistribution& d) {
  std::vector<std::pair<std::string, double>> rows;
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    if (d[i] > 0.0) rows.emplace_back(std::string(AreaName(i)), d[i] * 100.0);
  }
  return rows;
}

}  // namespace currialign

#endif  // CURRIALIGN_ANALYSIS_HPP_
