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

#ifndef CURRIALIGN_METRICS_HPP_
#define CURRIALIGN_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "currialign/classify.hpp"
#include "currialign/domain.hpp"
#include "currialign/error.hpp"
#include "currialign/ingest.hpp"

namespace currialign {

using OptionalLabels = std::optional<LabelSet>;

struct OverlapResult {
  double pct = 0.0;
  std::size_t n = 0;
};

// Share of jointly annotated topics on which the two annotators have at least
// one area in common. Topics missing from either side are skipped.
inline OverlapResult OverlapAgreement(std::span<const OptionalLabels> a,
                                      std::span<const OptionalLabels> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kLengthMismatch, "annotation lengths differ");
  std::size_t n = 0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i] || !b[i]) continue;
    ++n;
    if (a[i]->intersects(*b[i])) ++agree;
  }
  if (n == 0) throw Error(ErrorCode::kNoComparablePairs, "no topic annotated by both");
  return {100.0 * static_cast<double>(agree) / static_cast<double>(n), n};
}

// Multi-label kappa: the mean over areas of the two-rater binary kappa on
// "area present" decisions. Areas where chance agreement is 1 carry no
// information and are skipped.
inline double CohensKappa(std::span<const OptionalLabels> a, std::span<const OptionalLabels> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kLengthMismatch, "annotation lengths differ");
  std::vector<std::uint16_t> ma;
  std::vector<std::uint16_t> mb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i] || !b[i]) continue;
    ma.push_back(a[i]->mask());
    mb.push_back(b[i]->mask());
  }
  if (ma.empty()) throw Error(ErrorCode::kNoComparablePairs, "no topic annotated by both");
  const double n = static_cast<double>(ma.size());
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < kNumAreas; ++j) {
    double agree = 0.0;
    double pa = 0.0;
    double pb = 0.0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
      const bool x = ((ma[i] >> j) & 1u) != 0;
      const bool y = ((mb[i] >> j) & 1u) != 0;
      agree += (x == y) ? 1.0 : 0.0;
      pa += x ? 1.0 : 0.0;
      pb += y ? 1.0 : 0.0;
    }
    const double po = agree / n;
    pa /= n;
    pb /= n;
    const double pe = pa * pb + (1.0 - pa) * (1.0 - pb);
    if (pe >= 1.0) continue;
    sum += (po - pe) / (1.0 - pe);
    ++used;
  }
  if (used == 0) {
    if (ma == mb) return 1.0;
    throw Error(ErrorCode::kUndefined, "kappa undefined: every area degenerate");
  }
  return sum / static_cast<double>(used);
}

struct AgreementMatrix {
  std::vector<std::string> annotators;
  // NaN marks a pair with no jointly annotated topic.
  std::vector<std::vector<double>> overlap_pct;
  std::vector<std::vector<double>> kappa;
  std::vector<std::vector<std::size_t>> per_pair_n;
  std::vector<double> overlap_avg;
  std::vector<double> kappa_avg;
};

inline AgreementMatrix ComputeAgreementMatrix(std::span<const AnnotationRecord> records,
                                              std::span<const std::string> annotators) {
  const std::size_t m = annotators.size();
  std::vector<std::vector<OptionalLabels>> cols(m);
  for (std::size_t a = 0; a < m; ++a) {
    bool seen = false;
    for (const auto& r : records) {
      auto it = r.annotations.find(annotators[a]);
      if (it != r.annotations.end()) seen = true;
      cols[a].push_back(it == r.annotations.end() ? std::nullopt : it->second);
    }
    if (!seen) throw Error(ErrorCode::kUnknownAnnotator, "unknown annotator '" + annotators[a] + "'");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  AgreementMatrix out;
  out.annotators.assign(annotators.begin(), annotators.end());
  out.overlap_pct.assign(m, std::vector<double>(m, nan));
  out.kappa.assign(m, std::vector<double>(m, nan));
  out.per_pair_n.assign(m, std::vector<std::size_t>(m, 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      try {
        const auto ov = OverlapAgreement(cols[a], cols[b]);
        const double k = CohensKappa(cols[a], cols[b]);
        out.overlap_pct[a][b] = out.overlap_pct[b][a] = ov.pct;
        out.kappa[a][b] = out.kappa[b][a] = k;
        out.per_pair_n[a][b] = out.per_pair_n[b][a] = ov.n;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoComparablePairs) throw;
      }
    }
  }
  auto avg = [&](const std::vector<std::vector<double>>& mat, std::size_t a) {
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t b = 0; b < m; ++b) {
      if (b == a || std::isnan(mat[a][b])) continue;
      s += mat[a][b];
      ++c;
    }
    return c == 0 ? nan : s / static_cast<double>(c);
  };
  for (std::size_t a = 0; a < m; ++a) {
    out.overlap_avg.push_back(avg(out.overlap_pct, a));
    out.kappa_avg.push_back(avg(out.kappa, a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Macro-averaged precision / recall / F1.

struct MetricTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  MetricTriple macro;
  std::vector<MetricTriple> per_fold;
  std::array<MetricTriple, kNumAreas> per_class{};
};

inline EvalReport MacroMetrics(std::span<const LabelSet> pred, std::span<const LabelSet> gold) {
  if (pred.size() != gold.size()) throw Error(ErrorCode::kLengthMismatch, "pred/gold lengths differ");
  if (pred.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to score");
  auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
  EvalReport r;
  for (std::size_t j = 0; j < kNumAreas; ++j) {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool p = pred[i].contains(j);
      const bool g = gold[i].contains(j);
      tp += (p && g) ? 1.0 : 0.0;
      fp += (p && !g) ? 1.0 : 0.0;
      fn += (!p && g) ? 1.0 : 0.0;
    }
    r.per_class[j] = {ratio(tp, tp + fp), ratio(tp, tp + fn), ratio(2.0 * tp, 2.0 * tp + fp + fn)};
    r.macro.precision += r.per_class[j].precision;
    r.macro.recall += r.per_class[j].recall;
    r.macro.f1 += r.per_class[j].f1;
  }
  // Divide once so that uniform per-class scores average to themselves exactly.
  r.macro.precision /= kNumAreas;
  r.macro.recall /= kNumAreas;
  r.macro.f1 /= kNumAreas;
  return r;
}

// ---------------------------------------------------------------------------
// k-fold cross-validation of the baseline classifier.

// Seeded Fisher-Yates permutation split into k near-equal folds; the first
// (n mod k) folds get one extra item.
inline std::vector<std::vector<std::size_t>> KFoldSplit(std::size_t n, std::size_t k,
                                                        std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be at least 2");
  if (n < k) {
    throw Error(ErrorCode::kTooFewExamples,
                std::to_string(n) + " examples cannot fill " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng() % i]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

inline EvalReport KFoldEvaluate(std::span<const LabeledText> corpus, std::size_t k,
                                std::uint64_t seed,
                                double relative_threshold = kDefaultRelativeThreshold) {
  const auto folds = KFoldSplit(corpus.size(), k, seed);
  EvalReport report;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<bool> held(corpus.size(), false);
    for (std::size_t i : folds[f]) held[i] = true;
    std::vector<LabeledText> train;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!held[i]) train.push_back(corpus[i]);
    }
    const BaselineModel model = TrainBaseline(train, relative_threshold);
    std::vector<LabelSet> pred;
    std::vector<LabelSet> gold;
    for (std::size_t i : folds[f]) {
      pred.push_back(ClassifyBaseline(model, corpus[i].text));
      gold.push_back(corpus[i].labels);
    }
    const EvalReport fold = MacroMetrics(pred, gold);
    report.per_fold.push_back(fold.macro);
    for (std::size_t j = 0; j < kNumAreas; ++j) {
      report.per_class[j].precision += fold.per_class[j].precision / static_cast<double>(k);
      report.per_class[j].recall += fold.per_class[j].recall / static_cast<double>(k);
      report.per_class[j].f1 += fold.per_class[j].f1 / static_cast<double>(k);
    }
    report.macro.precision += fold.macro.precision / static_cast<double>(k);
    report.macro.recall += fold.macro.recall / static_cast<double>(k);
    report.macro.f1 += fold.macro.f1 / static_cast<double>(k);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization.

inline nlohmann::json TripleToJson(const MetricTriple& t) {
  return {{"precision", t.precision}, {"recall", t.recall}, {"f1", t.f1}};
}

inline nlohmann::json EvalReportToJson(const EvalReport& r) {
  nlohmann::json per_fold = nlohmann::json::array();
  for (const auto& t : r.per_fold) per_fold.push_back(TripleToJson(t));
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t j = 0; j < kNumAreas; ++j) {
    auto t = TripleToJson(r.per_class[j]);
    t["area"] = j;
    t["name"] = std::string(AreaName(j));
    per_class.push_back(std::move(t));
  }
  return {{"macro_precision", r.macro.precision},
          {"macro_recall", r.macro.recall},
          {"macro_f1", r.macro.f1},
          {"per_fold", std::move(per_fold)},
          {"per_class", std::move(per_class)}};
}

inline nlohmann::json AgreementMatrixToJson(const AgreementMatrix& m) {
  auto matrix = [](const std::vector<std::vector<double>>& mat) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : mat) {
      nlohmann::json r = nlohmann::json::array();
      for (double v : row) r.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
      rows.push_back(std::move(r));
    }
    return rows;
  };
  auto vec = [](const std::vector<double>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (double x : v) out.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
    return out;
  };
  return {{"annotators", m.annotators},     {"overlap_pct", matrix(m.overlap_pct)},
          {"kappa", matrix(m.kappa)},       {"per_pair_n", m.per_pair_n},
          {"overlap_avg", vec(m.overlap_avg)}, {"kappa_avg", vec(m.kappa_avg)}};
}

// Square CSV with a header row of annotator names; values to `decimals` places.
inline std::string MatrixToCsv(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& mat, int decimals) {
  std::string out = "annotator";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (std::size_t a = 0; a < names.size(); ++a) {
    out += names[a];
    for (double v : mat[a]) {
      out += ",";
      if (std::isnan(v)) continue;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace currialign

#endif  // CURRIALIGN_METRICS_HPP_
