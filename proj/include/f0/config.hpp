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

#include "f0/errors.hpp"

namespace f0 {

namespace detail {

inline void validate_parameters(double epsilon, double delta,
                                std::uint64_t stream_bound) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0) || std::isnan(epsilon)) {
    throw ParameterError("epsilon: must lie in the open interval (0, 1)");
  }
  if (!(delta > 0.0) || !(delta < 1.0) || std::isnan(delta)) {
    throw ParameterError("delta: must lie in the open interval (0, 1)");
  }
  if (stream_bound == 0) {
    throw ParameterError("stream_bound: must be a positive integer");
  }
}

}  // namespace detail

// Sample-set capacity ceil((12 / epsilon^2) * log2(8 * stream_bound / delta)).
//
// Evaluated in 80-bit extended precision; with a 64-bit mantissa the value
// is accurate to well under one integer ulp, so the ceiling is unambiguous
// except for inputs engineered to land within ~1e-15 of an integer. The
// test suite cross-checks against a 256-bit arbitrary-precision oracle.
// For every legal input the result is at least 36.
inline std::uint64_t compute_thresh(double epsilon, double delta,
                                    std::uint64_t stream_bound) {
  detail::validate_parameters(epsilon, delta, stream_bound);
  const long double e = epsilon;
  const long double v = (12.0L / (e * e)) *
                        std::log2(8.0L * static_cast<long double>(stream_bound) /
                                  static_cast<long double>(delta));
  const long double up = std::ceil(v);
  if (!(up < 0x1p62L)) {
    throw ParameterError(
        "epsilon/delta/stream_bound: derived thresh exceeds the representable "
        "range");
  }
  return static_cast<std::uint64_t>(up);
}

// Immutable parameters of one estimation run. `stream_bound` is the maximum
// number of items that may be processed; the accuracy guarantee is stated
// for streams no longer than that, and the sketch refuses to go past it.
struct SketchConfig {
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t stream_bound = 0;
  std::uint64_t thresh = 0;
  // True when thresh was replaced by hand. Such configs carry no accuracy
  // guarantee; the override exists so tests can force the subsampling path.
  bool thresh_overridden = false;

  static SketchConfig create(double epsilon, double delta,
                             std::uint64_t stream_bound) {
    return SketchConfig{epsilon, delta, stream_bound,
                        compute_thresh(epsilon, delta, stream_bound), false};
  }

  // Testing only.
  SketchConfig with_thresh_override(std::uint64_t forced_thresh) const {
    if (forced_thresh < 2) {
      throw ParameterError("thresh: override must be at least 2");
    }
    SketchConfig c = *this;
    c.thresh = forced_thresh;
    c.thresh_overridden = true;
    return c;
  }

  bool guarantees_void() const noexcept { return thresh_overridden; }

  bool operator==(const SketchConfig&) const = default;
};

}  // namespace f0
