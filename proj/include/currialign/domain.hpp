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

#ifndef CURRIALIGN_DOMAIN_HPP_
#define CURRIALIGN_DOMAIN_HPP_

// Knowledge Area taxonomy, label sets, normalized distributions and the two
// distance measures used by every other module.

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "currialign/error.hpp"

namespace currialign {

inline constexpr std::size_t kNumAreas = 9;

// Absolute per-component tolerance for distribution equality and sum checks.
inline constexpr double kDistributionTolerance = 1e-9;
inline constexpr double kDefaultKlEpsilon = 1e-9;

enum class KnowledgeArea : std::uint8_t {
  kMiscellaneous = 0,
  kData = 1,
  kSoftware = 2,
  kComponent = 3,
  kConnection = 4,
  kSystem = 5,
  kHuman = 6,
  kOrganizational = 7,
  kSocietal = 8,
};

inline constexpr std::array<std::string_view, kNumAreas> kAreaNames = {
    "Miscellaneous", "Data",  "Software",       "Component", "Connection",
    "System",        "Human", "Organizational", "Societal"};

inline constexpr std::string_view AreaName(std::size_t index) {
  return index < kNumAreas ? kAreaNames[index] : std::string_view("?");
}
inline constexpr std::string_view AreaName(KnowledgeArea area) {
  return AreaName(static_cast<std::size_t>(area));
}

// Raw per-area mass, e.g. label counts before normalization.
using KaVector = std::array<double, kNumAreas>;

// Non-empty subset of the nine area indices, stored as a bitmask.
class LabelSet {
 public:
  static constexpr std::uint16_t kFullMask = (1u << kNumAreas) - 1;

  static LabelSet FromMask(std::uint16_t mask) {
    if (mask == 0) throw Error(ErrorCode::kInvalidArgument, "empty label set");
    if ((mask & ~kFullMask) != 0) {
      throw Error(ErrorCode::kInvalidArgument, "label index out of range 0..8");
    }
    return LabelSet(mask);
  }

  static LabelSet Of(std::span<const int> indices) {
    std::uint16_t mask = 0;
    for (int i : indices) {
      if (i < 0 || i >= static_cast<int>(kNumAreas)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "label index " + std::to_string(i) + " out of range 0..8");
      }
      mask |= static_cast<std::uint16_t>(1u << i);
    }
    return FromMask(mask);
  }
  static LabelSet Of(std::initializer_list<int> indices) {
    return Of(std::span<const int>(indices.begin(), indices.size()));
  }

  static LabelSet All() { return LabelSet(kFullMask); }

  std::uint16_t mask() const noexcept { return mask_; }
  bool contains(std::size_t index) const noexcept {
    return index < kNumAreas && ((mask_ >> index) & 1u) != 0;
  }
  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (std::uint16_t m = mask_; m != 0; m &= static_cast<std::uint16_t>(m - 1)) ++n;
    return n;
  }
  bool intersects(const LabelSet& other) const noexcept {
    return (mask_ & other.mask_) != 0;
  }
  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      if (contains(i)) out.push_back(static_cast<int>(i));
    }
    return out;
  }
  // Comma-separated ascending indices, e.g. "1,4".
  std::string ToString() const {
    std::string out;
    for (int i : indices()) {
      if (!out.empty()) out += ',';
      out += static_cast<char>('0' + i);
    }
    return out;
  }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  explicit LabelSet(std::uint16_t mask) : mask_(mask) {}
  std::uint16_t mask_;
};

// Normalized weights over the nine areas: non-negative, summing to 1.
class KaDistribution {
 public:
  static KaDistribution FromWeights(const KaVector& weights) {
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "distribution component negative or not finite");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > kDistributionTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distribution does not sum to 1 (sum=" + std::to_string(sum) + ")");
    }
    return KaDistribution(weights);
  }

  // Unit mass on a single area.
  static KaDistribution Unit(std::size_t index) {
    KaVector w{};
    w.at(index) = 1.0;
    return KaDistribution(w);
  }

  static KaDistribution Uniform() {
    KaVector w;
    w.fill(1.0 / static_cast<double>(kNumAreas));
    return KaDistribution(w);
  }

  double operator[](std::size_t i) const { return weights_[i]; }
  const KaVector& weights() const noexcept { return weights_; }

  // Percentages rounded to one decimal, for presentation only.
  KaVector Percentages(int decimals = 1) const {
    const double scale = std::pow(10.0, decimals);
    KaVector out;
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      out[i] = std::round(weights_[i] * 100.0 * scale) / scale;
    }
    return out;
  }

  bool ApproxEquals(const KaDistribution& other,
                    double tol = kDistributionTolerance) const {
    for (std::size_t i = 0; i < kNumAreas; ++i) {
      if (std::abs(weights_[i] - other.weights_[i]) > tol) return false;
    }
    return true;
  }

  friend bool operator==(const KaDistribution&, const KaDistribution&) = default;

 private:
  explicit KaDistribution(const KaVector& w) : weights_(w) {}
  KaVector weights_;
};

struct GapReport {
  KaVector deltas{};  // target minus current
  double l1 = 0.0;
  double kl = 0.0;    // KL(target || current), smoothed
};

inline KaDistribution NormalizeCounts(const KaVector& counts) {
  double sum = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument, "counts must be finite and >= 0");
    }
    sum += c;
  }
  if (sum <= 0.0) {
    throw Error(ErrorCode::kAllZero, "every component is zero; nothing was aggregated");
  }
  // Already-normalized input is returned bit-for-bit so that normalizing
  // twice never drifts in the last ulp.
  if (std::abs(sum - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) {
    return KaDistribution::FromWeights(counts);
  }
  KaVector w;
  for (std::size_t i = 0; i < kNumAreas; ++i) w[i] = counts[i] / sum;
  return KaDistribution::FromWeights(w);
}

// A k-label set contributes k units of mass, one per member area.
inline KaVector LabelSetToIndicator(const LabelSet& labels) {
  KaVector v{};
  for (std::size_t i = 0; i < kNumAreas; ++i) v[i] = labels.contains(i) ? 1.0 : 0.0;
  return v;
}

inline double L1Distance(const KaDistribution& a, const KaDistribution& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < kNumAreas; ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// KL(p || q) after adding epsilon to every component of both arguments and
// renormalizing, so zero components never produce infinities.
inline double KlDivergence(const KaDistribution& p, const KaDistribution& q,
                           double epsilon = kDefaultKlEpsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kNonPositiveEpsilon, "epsilon must be > 0");
  }
  double p_sum = 0.0;
  double q_sum = 0.0;
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    p_sum += p[i] + epsilon;
    q_sum += q[i] + epsilon;
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    const double ps = (p[i] + epsilon) / p_sum;
    const double qs = (q[i] + epsilon) / q_sum;
    kl += ps * std::log(ps / qs);
  }
  // Rounding can leave a tiny negative value when p == q.
  return kl < 0.0 ? 0.0 : kl;
}

inline GapReport MakeGapReport(const KaDistribution& current,
                               const KaDistribution& target) {
  GapReport report;
  for (std::size_t i = 0; i < kNumAreas; ++i) {
    report.deltas[i] = target[i] - current[i];
  }
  report.l1 = L1Distance(current, target);
  report.kl = KlDivergence(target, current);
  return report;
}

}  // namespace currialign

#endif  // CURRIALIGN_DOMAIN_HPP_
