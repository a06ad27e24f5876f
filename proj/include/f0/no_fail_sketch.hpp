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
#include <cstdint>
#include <optional>
#include <ranges>
#include <unordered_set>
#include <vector>

#include "f0/config.hpp"
#include "f0/errors.hpp"
#include "f0/estimate.hpp"
#include "f0/random.hpp"
#include "f0/sketch.hpp"

namespace f0 {

// Relaxed variant of Sketch with the give-up check removed: a subsampling
// pass that removes nothing simply leaves the set full, and the next item
// whose step ends at capacity triggers another pass. Consumes coins in
// exactly the same order as Sketch, so on any run where Sketch does not
// fail the two produce identical states from the same seed.
//
// This is a test oracle. On the (probability 2^-thresh) paths where a pass
// removes nothing the sample set can momentarily exceed thresh, so the
// space bound does not apply here.
template <SketchElement T>
class NoFailSketch {
 public:
  explicit NoFailSketch(const SketchConfig& config) : config_(config) {
    if (config_.thresh < 2) {
      throw ParameterError("thresh: must be at least 2");
    }
    samples_.reserve(config_.thresh + 1);
  }

  template <BitSource S>
  void process(const T& element, S& src) {
    if (items_processed_ == config_.stream_bound) {
      throw BoundExceededError(
          "process: stream bound of " + std::to_string(config_.stream_bound) +
          " items reached");
    }
    samples_.erase(element);
    if (bernoulli_pow2(src, halvings_)) {
      samples_.insert(element);
    }
    if (samples_.size() > peak_samples_) peak_samples_ = samples_.size();
    if (samples_.size() == config_.thresh) {
      detail::halve_samples(samples_, src);
      ++halvings_;
    }
    ++items_processed_;
  }

  template <std::ranges::input_range R, BitSource S>
    requires std::convertible_to<std::ranges::range_reference_t<R>, T>
  void process_stream(R&& elements, S& src) {
    for (auto&& element : elements) process(element, src);
  }

  // Never fails; the estimate is always defined.
  EstimateResult estimate() const {
    return EstimateResult::of(samples_.size(), halvings_);
  }

  const SketchConfig& config() const noexcept { return config_; }
  const std::unordered_set<T>& samples() const noexcept { return samples_; }
  std::uint64_t halvings() const noexcept { return halvings_; }
  std::uint64_t items_processed() const noexcept { return items_processed_; }
  std::uint64_t peak_samples() const noexcept { return peak_samples_; }

  std::vector<T> samples_sorted() const {
    std::vector<T> out(samples_.begin(), samples_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  SketchConfig config_;
  std::unordered_set<T> samples_;
  std::uint64_t halvings_ = 0;
  std::uint64_t items_processed_ = 0;
  std::uint64_t peak_samples_ = 0;
};

}  // namespace f0
