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
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "f0/errors.hpp"
#include "f0/random.hpp"

namespace f0 {

enum class StreamKind {
  kDistinctRun,      // 1..f0, each exactly once, in order
  kRepeatedShuffle,  // each of 1..f0 exactly `repeat` times, shuffled
  kSingleElement,    // one value repeated `length` times
  kZipf,             // skewed duplicates over 1..f0, coverage forced
  kBlocks,           // each of 1..f0 as one contiguous run
};

constexpr std::string_view stream_kind_name(StreamKind kind) {
  switch (kind) {
    case StreamKind::kDistinctRun: return "distinct_run";
    case StreamKind::kRepeatedShuffle: return "repeated_shuffle";
    case StreamKind::kSingleElement: return "single_element";
    case StreamKind::kZipf: return "zipf";
    case StreamKind::kBlocks: return "blocks";
  }
  return "unknown";
}

inline StreamKind parse_stream_kind(std::string_view name) {
  if (name == "distinct_run") return StreamKind::kDistinctRun;
  if (name == "repeated_shuffle") return StreamKind::kRepeatedShuffle;
  if (name == "single_element") return StreamKind::kSingleElement;
  if (name == "zipf") return StreamKind::kZipf;
  if (name == "blocks") return StreamKind::kBlocks;
  throw ParameterError("kind: unknown stream kind '" + std::string(name) + "'");
}

// Description of a synthetic stream with known ground truth: the generated
// stream has exactly `f0_target` distinct elements and exactly `length`
// items, and is a pure function of the spec (including `seed`).
struct StreamSpec {
  StreamKind kind = StreamKind::kDistinctRun;
  std::uint64_t f0_target = 1;
  std::uint64_t length = 1;
  std::uint64_t repeat = 2;        // repeated_shuffle only
  double zipf_exponent = 1.1;      // zipf only
  std::uint64_t seed = 0;

  bool operator==(const StreamSpec&) const = default;
};

inline void validate_stream_spec(const StreamSpec& spec) {
  if (spec.f0_target == 0) {
    throw ParameterError("f0_target: must be a positive integer");
  }
  if (spec.length == 0) {
    throw ParameterError("length: must be a positive integer");
  }
  if (spec.f0_target > spec.length) {
    throw ParameterError("f0_target: cannot exceed length");
  }
  switch (spec.kind) {
    case StreamKind::kDistinctRun:
      if (spec.length != spec.f0_target) {
        throw ParameterError("length: distinct_run requires length == f0_target");
      }
      break;
    case StreamKind::kRepeatedShuffle:
      if (spec.repeat == 0) {
        throw ParameterError("repeat: must be a positive integer");
      }
      if (spec.length != spec.f0_target * spec.repeat) {
        throw ParameterError(
            "length: repeated_shuffle requires length == f0_target * repeat");
      }
      break;
    case StreamKind::kSingleElement:
      if (spec.f0_target != 1) {
        throw ParameterError("f0_target: single_element requires f0_target == 1");
      }
      break;
    case StreamKind::kZipf:
      if (!(spec.zipf_exponent > 0.0)) {
        throw ParameterError("zipf_exponent: must be positive");
      }
      break;
    case StreamKind::kBlocks:
      break;
  }
}

namespace detail {

// In-place Fisher-Yates with our own engine and Lemire index draws, so the
// permutation is identical on every platform for a given seed.
inline void shuffle_stream(std::vector<std::uint64_t>& items,
                           Xoshiro256ss& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint64_t j = rng.next_below(i);
    std::swap(items[i - 1], items[j]);
  }
}

// Uniform in [0, 1) from the top 53 bits of one engine word.
inline double uniform53(Xoshiro256ss& rng) {
  return static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Generates the stream described by `spec`. Every kind places one
// occurrence of each of 1..f0_target, so the distinct count is exactly
// f0_target by construction.
inline std::vector<std::uint64_t> generate_stream(const StreamSpec& spec) {
  validate_stream_spec(spec);
  std::vector<std::uint64_t> out;
  out.reserve(spec.length);
  Xoshiro256ss rng(spec.seed);

  switch (spec.kind) {
    case StreamKind::kDistinctRun:
      for (std::uint64_t v = 1; v <= spec.f0_target; ++v) out.push_back(v);
      break;

    case StreamKind::kRepeatedShuffle:
      for (std::uint64_t v = 1; v <= spec.f0_target; ++v) {
        for (std::uint64_t r = 0; r < spec.repeat; ++r) out.push_back(v);
      }
      detail::shuffle_stream(out, rng);
      break;

    case StreamKind::kSingleElement:
      out.assign(spec.length, 1);
      break;

    case StreamKind::kZipf: {
      // Rejection-free inversion on the cumulative weights i^-s over
      // 1..f0_target, driven by 53-bit uniforms. One occurrence of every
      // value is forced first so the distinct count stays exact.
      std::vector<double> cumulative(spec.f0_target);
      double total = 0.0;
      for (std::uint64_t i = 0; i < spec.f0_target; ++i) {
        total += std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
        cumulative[i] = total;
      }
      for (std::uint64_t v = 1; v <= spec.f0_target; ++v) out.push_back(v);
      for (std::uint64_t i = spec.f0_target; i < spec.length; ++i) {
        const double target = detail::uniform53(rng) * total;
        const auto it =
            std::lower_bound(cumulative.begin(), cumulative.end(), target);
        const auto rank = static_cast<std::uint64_t>(
            std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                     static_cast<std::ptrdiff_t>(spec.f0_target) - 1));
        out.push_back(rank + 1);
      }
      detail::shuffle_stream(out, rng);
      break;
    }

    case StreamKind::kBlocks: {
      // Contiguous runs; the first length % f0 runs are one item longer.
      const std::uint64_t base = spec.length / spec.f0_target;
      const std::uint64_t longer = spec.length % spec.f0_target;
      for (std::uint64_t v = 1; v <= spec.f0_target; ++v) {
        const std::uint64_t run = base + (v <= longer ? 1 : 0);
        for (std::uint64_t r = 0; r < run; ++r) out.push_back(v);
      }
      break;
    }
  }
  return out;
}

}  // namespace f0
