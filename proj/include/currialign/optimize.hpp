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

#ifndef CURRIALIGN_OPTIMIZE_HPP_
#define CURRIALIGN_OPTIMIZE_HPP_

// Elective selection: pick exactly k electives so that the credit-weighted
// blend of mandatory block and chosen electives is as close as possible, in
// L1, to a target distribution.
//
// All solvers work on a copy of the elective pool sorted by id. Visiting
// subsets in lexicographic index order over that copy is then the same as
// visiting them in lexicographic id order, which makes the tie-break rule
// ("smallest id sequence wins") fall out of a strict-improvement update.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "currialign/analysis.hpp"
#include "currialign/domain.hpp"
#include "currialign/error.hpp"

namespace currialign {

enum class SolveMethod { kExhaustive, kBranchAndBound, kLocalSearch };

inline std::string_view SolveMethodName(SolveMethod m) {
  switch (m) {
    case SolveMethod::kExhaustive: return "exhaustive";
    case SolveMethod::kBranchAndBound: return "branch_and_bound";
    case SolveMethod::kLocalSearch: return "local_search";
  }
  return "?";
}

inline SolveMethod ParseSolveMethod(std::string_view s) {
  if (s == "exhaustive") return SolveMethod::kExhaustive;
  if (s == "branch_and_bound" || s == "bnb") return SolveMethod::kBranchAndBound;
  if (s == "local_search" || s == "heuristic") return SolveMethod::kLocalSearch;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(s) + "'");
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;
inline constexpr int kDefaultSwapRounds = 100;
// Objectives closer than this are treated as tied.
inline constexpr double kObjectiveTieTolerance = 1e-12;

struct SelectionProblem {
  CurriculumProfile profile;
  KaDistribution target = KaDistribution::Uniform();
  std::size_t k = 0;
};

struct SelectionResult {
  std::vector<std::string> chosen;  // ascending id order
  double objective = 0.0;
  KaDistribution blended = KaDistribution::Uniform();
  SolveMethod method = SolveMethod::kExhaustive;
  bool proven_optimal = false;
  std::uint64_t nodes_visited = 0;
};

inline std::uint64_t BinomialCapped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    if (r > (std::numeric_limits<std::uint64_t>::max() / num)) return cap + 1;
    r = r * num / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

namespace optimize_detail {

// Sorted-by-id working copy of a problem plus cached raw vectors.
class Workspace {
 public:
  explicit Workspace(const SelectionProblem& problem) : k_(problem.k) {
    const auto& p = problem.profile;
    if (k_ == 0) throw Error(ErrorCode::kWrongCardinality, "k must be positive");
    if (k_ > p.electives.size()) {
      throw Error(ErrorCode::kWrongCardinality,
                  "k=" + std::to_string(k_) + " exceeds pool of " +
                      std::to_string(p.electives.size()));
    }
    if (!(p.mandatory_credits > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "mandatory credits must be positive");
    }
    order_.resize(p.electives.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return p.electives[a].id < p.electives[b].id;
    });
    for (std::size_t i : order_) {
      const auto& e = p.electives[i];
      if (!(e.credits > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "elective " + e.id + " has non-positive credits");
      }
      ids_.push_back(e.id);
      credits_.push_back(e.credits);
      dist_.push_back(e.distribution.weights());
    }
    for (std::size_t i = 1; i < ids_.size(); ++i) {
      if (ids_[i] == ids_[i - 1]) throw Error(ErrorCode::kDuplicateId, "duplicate elective " + ids_[i]);
    }
    base_credits_ = p.mandatory_credits;
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      base_mass_[j] = p.mandatory_credits * p.mandatory[j];
      target_[j] = problem.target[j];
    }
  }

  std::size_t n() const { return ids_.size(); }
  std::size_t k() const { return k_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  double credits(std::size_t i) const { return credits_[i]; }
  const KaVector& dist(std::size_t i) const { return dist_[i]; }
  const KaVector& target() const { return target_; }
  const KaVector& base_mass() const { return base_mass_; }
  double base_credits() const { return base_credits_; }

  std::size_t IndexOf(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
      throw Error(ErrorCode::kUnknownElectiveId, "unknown elective id '" + id + "'");
    }
    return static_cast<std::size_t>(it - ids_.begin());
  }

  // Blend for a selection given as ascending indices into the sorted copy.
  KaVector Blend(std::span<const std::size_t> sel) const {
    KaVector mass = base_mass_;
    double c = base_credits_;
    for (std::size_t i : sel) {
      c += credits_[i];
      for (std::size_t j = 0; j < kNumAreas; ++j) mass[j] += credits_[i] * dist_[i][j];
    }
    for (double& m : mass) m /= c;
    return mass;
  }

  double Objective(std::span<const std::size_t> sel) const {
    const KaVector b = Blend(sel);
    double s = 0.0;
    for (std::size_t j = 0; j < kNumAreas; ++j) s += std::abs(b[j] - target_[j]);
    return s;
  }

  SelectionResult Result(std::vector<std::size_t> sel, SolveMethod method, bool proven,
                         std::uint64_t nodes) const {
    std::sort(sel.begin(), sel.end());
    SelectionResult r;
    for (std::size_t i : sel) r.chosen.push_back(ids_[i]);
    r.objective = Objective(sel);
    r.blended = NormalizeCounts(Blend(sel));
    r.method = method;
    r.proven_optimal = proven;
    r.nodes_visited = nodes;
    return r;
  }

 private:
  std::size_t k_;
  std::vector<std::size_t> order_;
  std::vector<std::string> ids_;
  std::vector<double> credits_;
  std::vector<KaVector> dist_;
  KaVector base_mass_{};
  KaVector target_{};
  double base_credits_ = 0.0;
};

inline bool Improves(double candidate, double incumbent) {
  return candidate < incumbent - kObjectiveTieTolerance;
}

}  // namespace optimize_detail

// L1 objective for an explicit selection of elective ids.
inline double Objective(const SelectionProblem& problem, std::span<const std::string> selection) {
  optimize_detail::Workspace ws(problem);
  if (selection.size() != problem.k) {
    throw Error(ErrorCode::kWrongCardinality,
                "selection has " + std::to_string(selection.size()) + " ids, k=" +
                    std::to_string(problem.k));
  }
  std::vector<std::size_t> idx;
  for (const auto& id : selection) idx.push_back(ws.IndexOf(id));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw Error(ErrorCode::kWrongCardinality, "selection repeats an elective");
  }
  return ws.Objective(idx);
}

inline SelectionResult SolveExhaustive(const SelectionProblem& problem,
                                       std::uint64_t cap = kDefaultEnumerationCap) {
  optimize_detail::Workspace ws(problem);
  const std::size_t n = ws.n();
  const std::size_t k = ws.k();
  const std::uint64_t count = BinomialCapped(n, k, cap);
  if (count > cap) {
    throw Error(ErrorCode::kTooLarge, "C(" + std::to_string(n) + "," + std::to_string(k) +
                                          ") exceeds the enumeration cap; use the heuristic");
  }
  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), 0);
  std::vector<std::size_t> best = comb;
  double best_obj = std::numeric_limits<double>::infinity();
  std::uint64_t visited = 0;
  while (true) {
    ++visited;
    const double obj = ws.Objective(comb);
    if (optimize_detail::Improves(obj, best_obj)) {
      best_obj = obj;
      best = comb;
    }
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return ws.Result(best, SolveMethod::kExhaustive, true, visited);
}

namespace optimize_detail {

class BranchAndBound {
 public:
  static constexpr double kBoundSlack = 1e-9;

  explicit BranchAndBound(const Workspace& ws) : ws_(ws) {
    equal_credits_ = true;
    for (std::size_t i = 1; i < ws.n(); ++i) {
      if (ws.credits(i) != ws.credits(0)) equal_credits_ = false;
    }
  }

  SelectionResult Run() {
    std::vector<std::size_t> chosen;
    chosen.reserve(ws_.k());
    Search(0, chosen, ws_.base_mass(), ws_.base_credits());
    return ws_.Result(best_, SolveMethod::kBranchAndBound, true, nodes_);
  }

 private:
  // Lower bound on the objective of any completion that picks `r` more
  // electives from indices [next, n). For every area the completed blend lies
  // inside [lo_j, hi_j]; the L1 gap is then at least the distance of the
  // target to that box, and because both vectors sum to 1 it is also at least
  // twice the total one-sided shortfall.
  double Bound(std::size_t next, std::size_t r, const KaVector& mass, double credits) const {
    if (r == 0) {
      double s = 0.0;
      for (std::size_t j = 0; j < kNumAreas; ++j) {
        s += std::abs(mass[j] / credits - ws_.target()[j]);
      }
      return s;
    }
    std::vector<double> cr;
    for (std::size_t i = next; i < ws_.n(); ++i) cr.push_back(ws_.credits(i));
    std::sort(cr.begin(), cr.end());
    double w_lo = 0.0;
    double w_hi = 0.0;
    for (std::size_t t = 0; t < r; ++t) {
      w_lo += cr[t];
      w_hi += cr[cr.size() - 1 - t];
    }
    double box = 0.0;
    double under = 0.0;
    double over = 0.0;
    std::vector<double> col;
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      col.clear();
      for (std::size_t i = next; i < ws_.n(); ++i) col.push_back(ws_.dist(i)[j]);
      std::sort(col.begin(), col.end());
      double e_hi = 0.0;
      double e_lo = 0.0;
      if (equal_credits_) {
        for (std::size_t t = 0; t < r; ++t) {
          e_lo += col[t];
          e_hi += col[col.size() - 1 - t];
        }
        e_lo /= static_cast<double>(r);
        e_hi /= static_cast<double>(r);
      } else {
        e_lo = col.front();
        e_hi = col.back();
      }
      // (mass + W e) / (credits + W) is monotone in W, so the extremes sit at
      // the ends of the attainable credit range.
      auto at = [&](double w, double e) { return (mass[j] + w * e) / (credits + w); };
      const double hi = std::max(at(w_lo, e_hi), at(w_hi, e_hi));
      const double lo = std::min(at(w_lo, e_lo), at(w_hi, e_lo));
      const double t = ws_.target()[j];
      if (t > hi) {
        box += t - hi;
        under += t - hi;
      } else if (t < lo) {
        box += lo - t;
        over += lo - t;
      }
    }
    return std::max({box, 2.0 * under, 2.0 * over});
  }

  void Search(std::size_t next, std::vector<std::size_t>& chosen, const KaVector& mass,
              double credits) {
    ++nodes_;
    const std::size_t r = ws_.k() - chosen.size();
    if (r == 0) {
      const double obj = ws_.Objective(chosen);
      if (Improves(obj, best_obj_)) {
        best_obj_ = obj;
        best_ = chosen;
      }
      return;
    }
    if (ws_.n() - next < r) return;
    // Any subset below this node can only replace the incumbent by beating it
    // strictly, so a bound that cannot do so prunes the whole subtree. The
    // slack absorbs rounding differences between bound and objective.
    if (!Improves(Bound(next, r, mass, credits) - kBoundSlack, best_obj_)) return;

    // Include-first keeps the visiting order lexicographic.
    KaVector with = mass;
    for (std::size_t j = 0; j < kNumAreas; ++j) with[j] += ws_.credits(next) * ws_.dist(next)[j];
    chosen.push_back(next);
    Search(next + 1, chosen, with, credits + ws_.credits(next));
    chosen.pop_back();
    Search(next + 1, chosen, mass, credits);
  }

  const Workspace& ws_;
  bool equal_credits_ = true;
  std::vector<std::size_t> best_;
  double best_obj_ = std::numeric_limits<double>::infinity();
  std::uint64_t nodes_ = 0;
};

}  // namespace optimize_detail

inline SelectionResult SolveBranchAndBound(const SelectionProblem& problem) {
  optimize_detail::Workspace ws(problem);
  return optimize_detail::BranchAndBound(ws).Run();
}

inline SelectionResult SolveHeuristic(const SelectionProblem& problem,
                                      int swap_rounds = kDefaultSwapRounds) {
  if (swap_rounds < 1) throw Error(ErrorCode::kInvalidArgument, "swap_rounds must be positive");
  optimize_detail::Workspace ws(problem);
  using optimize_detail::Improves;
  const std::size_t n = ws.n();
  std::vector<bool> in(n, false);
  std::vector<std::size_t> sel;

  // Greedy seed: add whichever elective gives the lowest partial objective.
  for (std::size_t step = 0; step < ws.k(); ++step) {
    std::size_t pick = n;
    double pick_obj = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (in[i]) continue;
      std::vector<std::size_t> trial = sel;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
      const double obj = ws.Objective(trial);
      if (Improves(obj, pick_obj)) {
        pick_obj = obj;
        pick = i;
      }
    }
    in[pick] = true;
    sel.insert(std::upper_bound(sel.begin(), sel.end(), pick), pick);
  }

  double cur = ws.Objective(sel);
  std::uint64_t evaluated = 0;
  for (int round = 0; round < swap_rounds; ++round) {
    double best_obj = cur;
    std::vector<std::size_t> best_sel;
    for (std::size_t a = 0; a < sel.size(); ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (in[b]) continue;
        std::vector<std::size_t> trial = sel;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(a));
        trial.insert(std::upper_bound(trial.begin(), trial.end(), b), b);
        ++evaluated;
        const double obj = ws.Objective(trial);
        if (Improves(obj, best_obj)) {
          best_obj = obj;
          best_sel = std::move(trial);
        }
      }
    }
    if (best_sel.empty()) break;
    std::fill(in.begin(), in.end(), false);
    for (std::size_t i : best_sel) in[i] = true;
    sel = std::move(best_sel);
    cur = best_obj;
  }
  return ws.Result(sel, SolveMethod::kLocalSearch, false, evaluated);
}

inline SelectionResult Solve(const SelectionProblem& problem, SolveMethod method) {
  switch (method) {
    case SolveMethod::kExhaustive: return SolveExhaustive(problem);
    case SolveMethod::kBranchAndBound: return SolveBranchAndBound(problem);
    case SolveMethod::kLocalSearch: return SolveHeuristic(problem);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown solve method");
}

}  // namespace currialign

#endif  // CURRIALIGN_OPTIMIZE_HPP_
