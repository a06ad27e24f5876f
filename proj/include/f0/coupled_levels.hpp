// Copyright 2026 The f0sketch Authors.
//
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

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "f0/errors.hpp"
#include "f0/random.hpp"
#include "f0/sketch.hpp"

namespace f0 {

// Index of the first zero bit, or size+1 when every bit is one.
inline std::size_t first_zero_index(std::span<const std::uint8_t> bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == 0) return i;
  }
  return bits.size() + 1;
}

// Exactly n fair bits, in draw order.
template <BitSource S>
std::vector<std::uint8_t> generate_random_bits(S& src, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(src.next_bit());
  return bits;
}

// Maintains every subsampling level Y_0..Y_bound of one stream at once,
// coupled through a shared bit array per item: the item lands in level k
// iff k <= first_zero_index of that array, so it is in level k with
// probability exactly 2^-k and the levels are nested by construction.
//
// Space is Theta(bound * F0); this is a desk-scale test oracle, which is
// why construction caps the bound (12 unless raised explicitly).
template <SketchElement T>
class CoupledLevels {
 public:
  static constexpr std::size_t kDefaultMaxBound = 12;

  explicit CoupledLevels(std::size_t stream_bound,
                         std::size_t max_bound = kDefaultMaxBound)
      : bound_(stream_bound), levels_(stream_bound + 1) {
    if (stream_bound == 0) {
      throw ParameterError("stream_bound: must be a positive integer");
    }
    if (stream_bound > max_bound) {
      throw ParameterError("stream_bound: exceeds the desk-scale cap of " +
                           std::to_string(max_bound));
    }
  }

  template <BitSource S>
  void process(const T& element, S& src) {
    if (items_processed_ == bound_) {
      throw BoundExceededError("process: stream bound of " +
                               std::to_string(bound_) + " items reached");
    }
    const auto r = generate_random_bits(src, bound_ + 1);
    const std::size_t cutoff = first_zero_index(r);
    for (std::size_t k = 0; k <= bound_; ++k) {
      levels_[k].erase(element);
      if (k <= cutoff) levels_[k].insert(element);
    }
    ++items_processed_;
  }

  std::size_t bound() const noexcept { return bound_; }
  std::uint64_t items_processed() const noexcept { return items_processed_; }
  const std::unordered_set<T>& level(std::size_t k) const {
    return levels_.at(k);
  }
  const std::vector<std::unordered_set<T>>& levels() const noexcept {
    return levels_;
  }

  // Y_{k+1} subseteq Y_k for every k.
  bool nested() const {
    for (std::size_t k = 0; k + 1 <= bound_; ++k) {
      for (const T& e : levels_[k + 1]) {
        if (!levels_[k].contains(e)) return false;
      }
    }
    return true;
  }

 private:
  std::size_t bound_;
  std::vector<std::unordered_set<T>> levels_;
  std::uint64_t items_processed_ = 0;
};

// Per-level tallies of an independence experiment over the coupled levels.
struct LevelIndependenceStats {
  std::size_t level = 0;
  // marginal[i]: observed membership frequency of element i
  std::vector<double> marginal;
  // joint[pair]: observed frequency of both elements of the pair being
  // members, pairs in lexicographic (i, j) order with i < j
  std::vector<double> joint;
  double expected_marginal = 0.0;
  double expected_joint = 0.0;
  double marginal_sigma = 0.0;
  double joint_sigma = 0.0;
  std::size_t violations = 0;
};

struct IndependenceReport {
  std::uint64_t trials = 0;
  std::size_t n_distinct = 0;
  std::size_t stream_bound = 0;
  double sigma_multiplier = 0.0;
  std::vector<LevelIndependenceStats> levels;
  bool ok = true;
};

// Runs the coupled subsampler `trials` times on a stream of n_distinct
// distinct elements and tallies, for each requested level k, every
// element's membership frequency and every pairwise joint frequency.
// Memberships should be independent coin flips of rate 2^-k, so marginals
// are compared against 2^-k and pairs against 2^-2k, each within
// sigma_multiplier binomial standard deviations.
//
// The stream defaults to one occurrence per element; `repeats` > 1 feeds
// each element that many times (membership must depend only on an
// element's last occurrence, so the tallies should not move).
inline IndependenceReport independence_check(std::size_t n_distinct,
                                             std::size_t stream_bound,
                                             std::uint64_t trials,
                                             std::uint64_t master_seed,
                                             std::size_t max_level = 4,
                                             double sigma_multiplier = 4.0,
                                             std::size_t repeats = 1) {
  if (n_distinct == 0 || n_distinct > 8) {
    throw ParameterError("n_distinct: must be between 1 and 8");
  }
  if (max_level == 0 || max_level > stream_bound) {
    throw ParameterError("max_level: must be between 1 and stream_bound");
  }
  if (repeats == 0 || n_distinct * repeats > stream_bound) {
    throw ParameterError(
        "repeats: stream of n_distinct * repeats items exceeds stream_bound");
  }
  // The rarest tallied event is a pair at the deepest level. Require enough
  // trials that its expected count supports the requested significance.
  const double rarest = std::exp2(-2.0 * static_cast<double>(max_level));
  if (static_cast<double>(trials) * rarest < 25.0) {
    throw ParameterError(
        "trials: too few trials for the requested significance level");
  }

  const std::size_t pairs = n_distinct * (n_distinct - 1) / 2;
  std::vector<std::vector<std::uint64_t>> marginal_hits(
      max_level + 1, std::vector<std::uint64_t>(n_distinct, 0));
  std::vector<std::vector<std::uint64_t>> joint_hits(
      max_level + 1, std::vector<std::uint64_t>(pairs, 0));

  for (std::uint64_t t = 0; t < trials; ++t) {
    RandomSource src = derive_substream(master_seed, t);
    CoupledLevels<std::uint64_t> coupled(stream_bound);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      for (std::size_t e = 0; e < n_distinct; ++e) {
        coupled.process(static_cast<std::uint64_t>(e + 1), src);
      }
    }
    for (std::size_t k = 1; k <= max_level; ++k) {
      const auto& level = coupled.level(k);
      std::size_t pair = 0;
      for (std::size_t i = 0; i < n_distinct; ++i) {
        const bool in_i = level.contains(static_cast<std::uint64_t>(i + 1));
        if (in_i) ++marginal_hits[k][i];
        for (std::size_t j = i + 1; j < n_distinct; ++j, ++pair) {
          if (in_i && level.contains(static_cast<std::uint64_t>(j + 1))) {
            ++joint_hits[k][pair];
          }
        }
      }
    }
  }

  IndependenceReport report;
  report.trials = trials;
  report.n_distinct = n_distinct;
  report.stream_bound = stream_bound;
  report.sigma_multiplier = sigma_multiplier;
  for (std::size_t k = 1; k <= max_level; ++k) {
    LevelIndependenceStats stats;
    stats.level = k;
    stats.expected_marginal = std::exp2(-static_cast<double>(k));
    stats.expected_joint = std::exp2(-2.0 * static_cast<double>(k));
    const double n = static_cast<double>(trials);
    stats.marginal_sigma = std::sqrt(
        stats.expected_marginal * (1.0 - stats.expected_marginal) / n);
    stats.joint_sigma =
        std::sqrt(stats.expected_joint * (1.0 - stats.expected_joint) / n);
    for (std::size_t i = 0; i < n_distinct; ++i) {
      const double freq = static_cast<double>(marginal_hits[k][i]) / n;
      stats.marginal.push_back(freq);
      if (std::abs(freq - stats.expected_marginal) >
          sigma_multiplier * stats.marginal_sigma) {
        ++stats.violations;
      }
    }
    for (std::size_t pair = 0; pair < pairs; ++pair) {
      const double freq = static_cast<double>(joint_hits[k][pair]) / n;
      stats.joint.push_back(freq);
      if (std::abs(freq - stats.expected_joint) >
          sigma_multiplier * stats.joint_sigma) {
        ++stats.violations;
      }
    }
    if (stats.violations != 0) report.ok = false;
    report.levels.push_back(std::move(stats));
  }
  return report;
}

}  // namespace f0
