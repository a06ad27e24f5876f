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

#include <cstdint>
#include <ranges>
#include <unordered_set>

#include "f0/sketch.hpp"

namespace f0 {

// Ground-truth distinct counter. Linear space; exists as the reference the
// sketch is measured against.
template <SketchElement T>
class ExactCounter {
 public:
  void add(const T& element) { seen_.insert(element); }

  std::uint64_t count() const noexcept { return seen_.size(); }
  bool contains(const T& element) const { return seen_.contains(element); }
  const std::unordered_set<T>& seen() const noexcept { return seen_; }

 private:
  std::unordered_set<T> seen_;
};

template <std::ranges::input_range R>
std::uint64_t exact_f0(R&& elements) {
  using T = std::ranges::range_value_t<R>;
  ExactCounter<T> counter;
  for (auto&& element : elements) counter.add(element);
  return counter.count();
}

}  // namespace f0
