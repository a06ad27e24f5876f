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

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "f0/config.hpp"
#include "f0/errors.hpp"
#include "f0/estimate.hpp"
#include "f0/random.hpp"

namespace f0 {

// Stream items are compared by equality only; the total order and the hash
// are pure engineering. The order fixes a canonical iteration sequence so
// that runs are reproducible across set implementations and resumable from
// snapshots, and std::hash backs the sample set.
template <typename T>
concept SketchElement =
    std::regular<T> && std::totally_ordered<T> && requires(const T& t) {
      { std::hash<T>{}(t) } -> std::convertible_to<std::size_t>;
    };

namespace detail {

// One subsampling pass: every element is independently kept with
// probability 1/2. Coins are assigned in ascending element order, which
// keeps the coin-to-element mapping independent of the set's internal
// iteration order and of how the set was rebuilt after a restore.
template <SketchElement T, BitSource S>
void halve_samples(std::unordered_set<T>& samples, S& src) {
  std::vector<T> order(samples.begin(), samples.end());
  std::sort(order.begin(), order.end());
  for (const T& element : order) {
    if (!bernoulli_pow2(src, 1)) samples.erase(element);
  }
}

}  // namespace detail

// Streaming distinct-count sketch. Keeps a sample set of capacity `thresh`;
// each incoming item is first removed, then re-inserted with the current
// sampling probability 2^-halvings. A full set triggers a subsampling pass;
// a pass that removes nothing puts the sketch into the terminal failed
// state. The final estimate is |samples| * 2^halvings, exactly.
//
// The sampling probability lives only as the integer exponent `halvings`,
// and every coin is a fair bit, so no floating point touches the
// algorithm's randomness and identical (config, stream, seed) reproduce
// identical states bit for bit.
template <SketchElement T>
class Sketch {
 public:
  explicit Sketch(const SketchConfig& config) : config_(config) {
    if (config_.thresh < 2) {
      throw ParameterError("thresh: must be at least 2");
    }
    samples_.reserve(config_.thresh + 1);
  }

  // Feeds one stream item. Throws UsageError on a failed sketch and
  // BoundExceededError past `stream_bound`; the accuracy guarantee does not
  // extend to longer streams, so going past the bound is rejected rather
  // than silently degraded.
  template <BitSource S>
  void process(const T& element, S& src) {
    if (failed_) {
      throw UsageError("process: sketch already failed");
    }
    if (items_processed_ == config_.stream_bound) {
      throw BoundExceededError(
          "process: stream bound of " + std::to_string(config_.stream_bound) +
          " items reached");
    }
    // Remove-then-maybe-reinsert. The order matters: once halvings > 0, a
    // recurring element must survive with the current probability, not keep
    // its old membership.
    samples_.erase(element);
    if (bernoulli_pow2(src, halvings_)) {
      samples_.insert(element);
    }
    if (samples_.size() > peak_samples_) peak_samples_ = samples_.size();
    if (samples_.size() > config_.thresh) {
      throw std::logic_error("sample set exceeded thresh");
    }
    if (samples_.size() == config_.thresh) {
      detail::halve_samples(samples_, src);
      ++halvings_;
      if (samples_.size() == config_.thresh) {
        failed_ = true;
      }
    }
    ++items_processed_;
  }

  // Folds `process` over a sequence. Stops at the first failure and returns
  // the 1-based position of the item that caused it; errors are annotated
  // with the same position.
  template <std::ranges::input_range R, BitSource S>
    requires std::convertible_to<std::ranges::range_reference_t<R>, T>
  std::optional<std::uint64_t> process_stream(R&& elements, S& src) {
    std::uint64_t position = 0;
    for (auto&& element : elements) {
      ++position;
      try {
        process(element, src);
      } catch (const BoundExceededError& e) {
        throw BoundExceededError(std::string(e.what()) + " at stream position " +
                                 std::to_string(position));
      } catch (const UsageError& e) {
        throw UsageError(std::string(e.what()) + " at stream position " +
                         std::to_string(position));
      }
      if (failed_) return position;
    }
    return std::nullopt;
  }

  // |samples| * 2^halvings, or the fail marker. Querying never throws;
  // failure is a result, not an error.
  EstimateResult estimate() const {
    if (failed_) return EstimateResult::fail();
    return EstimateResult::of(samples_.size(), halvings_);
  }

  const SketchConfig& config() const noexcept { return config_; }
  const std::unordered_set<T>& samples() const noexcept { return samples_; }
  std::uint64_t halvings() const noexcept { return halvings_; }
  std::uint64_t items_processed() const noexcept { return items_processed_; }
  std::uint64_t peak_samples() const noexcept { return peak_samples_; }
  bool failed() const noexcept { return failed_; }

  std::vector<T> samples_sorted() const {
    std::vector<T> out(samples_.begin(), samples_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  // Rebuilds a sketch from checkpointed fields. Counterpart of the snapshot
  // codec; rejects combinations no run can produce.
  static Sketch restore(const SketchConfig& config, std::vector<T> samples,
                        std::uint64_t halvings, std::uint64_t items_processed,
                        std::uint64_t peak_samples) {
    Sketch s(config);
    if (samples.size() >= config.thresh) {
      throw ParameterError("samples: restored sample set must stay below thresh");
    }
    if (halvings > items_processed) {
      throw ParameterError("halvings: cannot exceed items_processed");
    }
    if (items_processed > config.stream_bound) {
      throw ParameterError("items_processed: cannot exceed stream_bound");
    }
    if (peak_samples > config.thresh ||
        peak_samples < samples.size()) {
      throw ParameterError("peak_samples: inconsistent with sample set");
    }
    s.samples_.insert(samples.begin(), samples.end());
    if (s.samples_.size() != samples.size()) {
      throw ParameterError("samples: duplicate elements in restored set");
    }
    s.halvings_ = halvings;
    s.items_processed_ = items_processed;
    s.peak_samples_ = peak_samples;
    return s;
  }

  bool operator==(const Sketch& other) const {
    return config_ == other.config_ && halvings_ == other.halvings_ &&
           items_processed_ == other.items_processed_ &&
           peak_samples_ == other.peak_samples_ && failed_ == other.failed_ &&
           samples_ == other.samples_;
  }

 private:
  SketchConfig config_;
  std::unordered_set<T> samples_;
  std::uint64_t halvings_ = 0;
  std::uint64_t items_processed_ = 0;
  std::uint64_t peak_samples_ = 0;
  bool failed_ = false;
};

}  // namespace f0
