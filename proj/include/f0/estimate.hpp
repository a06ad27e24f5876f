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
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace f0 {

// Exact dyadic integer `count * 2^exponent`, the form every estimate takes.
struct ScaledCount {
  std::uint64_t count = 0;
  std::uint64_t exponent = 0;

  std::optional<std::uint64_t> as_uint64() const noexcept {
    if (count == 0) return 0;
    if (exponent >= 64) return std::nullopt;
    if (count > (std::numeric_limits<std::uint64_t>::max() >> exponent)) {
      return std::nullopt;
    }
    return count << exponent;
  }

  long double to_long_double() const noexcept {
    return static_cast<long double>(count) *
           std::exp2(static_cast<long double>(exponent));
  }

  // Exact decimal rendering, valid for any exponent.
  std::string to_decimal_string() const {
    // little-endian decimal digits of `count`
    std::vector<std::uint8_t> digits;
    for (std::uint64_t c = count; c != 0; c /= 10) {
      digits.push_back(static_cast<std::uint8_t>(c % 10));
    }
    if (digits.empty()) digits.push_back(0);
    for (std::uint64_t i = 0; i < exponent && !(digits.size() == 1 && digits[0] == 0);
         ++i) {
      std::uint8_t carry = 0;
      for (auto& d : digits) {
        const std::uint8_t v = static_cast<std::uint8_t>(d * 2 + carry);
        d = v % 10;
        carry = v / 10;
      }
      if (carry != 0) digits.push_back(carry);
    }
    std::string out(digits.size(), '0');
    for (std::size_t i = 0; i < digits.size(); ++i) {
      out[out.size() - 1 - i] = static_cast<char>('0' + digits[i]);
    }
    return out;
  }

  // Value equality over the dyadic integer, not the representation.
  bool same_value(const ScaledCount& other) const noexcept {
    ScaledCount a = normalized();
    ScaledCount b = other.normalized();
    return a.count == b.count && a.exponent == b.exponent;
  }

  ScaledCount normalized() const noexcept {
    ScaledCount r = *this;
    if (r.count == 0) {
      r.exponent = 0;
      return r;
    }
    while ((r.count & 1u) == 0) {
      r.count >>= 1;
      ++r.exponent;
    }
    return r;
  }

  bool operator==(const ScaledCount&) const = default;
};

// Outcome of querying a sketch: either an exact dyadic value or the
// distinguished give-up marker. The marker is a value, not an error; it is
// a legitimate low-probability outcome of the algorithm.
struct EstimateResult {
  bool failed = false;
  ScaledCount value{};

  static EstimateResult fail() { return EstimateResult{true, {}}; }
  static EstimateResult of(std::uint64_t count, std::uint64_t exponent) {
    return EstimateResult{false, ScaledCount{count, exponent}};
  }

  bool operator==(const EstimateResult&) const = default;
};

}  // namespace f0
