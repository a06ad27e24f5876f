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
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "f0/config.hpp"
#include "f0/random.hpp"
#include "f0/sketch.hpp"

namespace testsupport {

// Exact dyadic probability num / 2^log2den, kept normalized (odd numerator
// or zero). Every branch probability in the sketch is of this form, so
// whole final-state distributions can be compared with no rounding at all.
struct Dyadic {
  std::uint64_t num = 0;
  unsigned log2den = 0;

  static Dyadic zero() { return {0, 0}; }
  static Dyadic one() { return {1, 0}; }
  static Dyadic pow2(unsigned k) { return Dyadic{1, k}.normalized(); }

  Dyadic normalized() const {
    Dyadic r = *this;
    if (r.num == 0) {
      r.log2den = 0;
      return r;
    }
    while ((r.num & 1u) == 0 && r.log2den > 0) {
      r.num >>= 1;
      --r.log2den;
    }
    return r;
  }

  Dyadic operator+(const Dyadic& other) const {
    const unsigned den = std::max(log2den, other.log2den);
    if (den > 62) throw std::logic_error("dyadic denominator overflow");
    const std::uint64_t a = num << (den - log2den);
    const std::uint64_t b = other.num << (den - other.log2den);
    return Dyadic{a + b, den}.normalized();
  }

  Dyadic operator*(const Dyadic& other) const {
    if (log2den + other.log2den > 62) {
      throw std::logic_error("dyadic denominator overflow");
    }
    const unsigned __int128 product =
        static_cast<unsigned __int128>(num) * other.num;
    if (product > UINT64_MAX) throw std::logic_error("dyadic numerator overflow");
    return Dyadic{static_cast<std::uint64_t>(product),
                  log2den + other.log2den}
        .normalized();
  }

  bool operator==(const Dyadic&) const = default;
};

// Canonical final state of one run: (sorted samples, halvings, failed).
using Outcome = std::tuple<std::vector<std::uint64_t>, std::uint64_t, bool>;
using Distribution = std::map<Outcome, Dyadic>;

inline Outcome outcome_of(const f0::Sketch<std::uint64_t>& sketch) {
  return {sketch.samples_sorted(), sketch.halvings(), sketch.failed()};
}

// Distribution of final states of the real implementation, by exhausting
// every realizable coin script. A script that underruns is extended one
// bit both ways; a completed run is a leaf of probability 2^-|script|, and
// by construction it consumed its whole script.
inline Distribution enumerate_implementation(
    const f0::SketchConfig& config, const std::vector<std::uint64_t>& stream) {
  Distribution dist;
  std::vector<std::uint8_t> script;
  std::function<void()> explore = [&] {
    f0::ScriptedSource src{script};
    f0::Sketch<std::uint64_t> sketch(config);
    try {
      sketch.process_stream(stream, src);
    } catch (const f0::ScriptUnderrunError&) {
      if (script.size() >= 62) throw std::logic_error("script too deep");
      for (const std::uint8_t bit : {0, 1}) {
        script.push_back(bit);
        explore();
        script.pop_back();
      }
      return;
    }
    if (src.bits_consumed() != script.size()) {
      throw std::logic_error("leaf did not consume its whole script");
    }
    auto [it, inserted] =
        dist.try_emplace(outcome_of(sketch), Dyadic::pow2(script.size()));
    if (!inserted) it->second = it->second + Dyadic::pow2(script.size());
    return;
  };
  explore();
  return dist;
}

// Independent brute-force oracle: dynamic programming directly over the
// algorithm's transition probabilities, with no bit-level model at all.
// Per element: the element is first dropped, re-added with probability
// 2^-halvings; a set that reaches thresh undergoes a subsampling step
// enumerated over all 2^|set| keep/drop patterns, each of probability
// 2^-|set|; a step that removes nothing is the terminal failure.
inline Distribution oracle_distribution(const f0::SketchConfig& config,
                                        const std::vector<std::uint64_t>& stream) {
  Distribution states;
  states[{{}, 0, false}] = Dyadic::one();

  for (const std::uint64_t element : stream) {
    Distribution next;
    auto credit = [&next](const Outcome& o, const Dyadic& p) {
      auto [it, inserted] = next.try_emplace(o, p);
      if (!inserted) it->second = it->second + p;
    };
    for (const auto& [state, prob] : states) {
      const auto& [samples, halvings, failed] = state;
      if (failed) {
        credit(state, prob);  // terminal
        continue;
      }
      std::vector<std::uint64_t> without = samples;
      std::erase(without, element);
      std::vector<std::uint64_t> with = without;
      with.insert(std::lower_bound(with.begin(), with.end(), element), element);

      const unsigned k = static_cast<unsigned>(halvings);
      if (k > 62) throw std::logic_error("halving depth overflow");
      const Dyadic p_insert = Dyadic::pow2(k);
      const Dyadic p_skip = Dyadic{(1ULL << k) - 1, k}.normalized();

      auto settle = [&](const std::vector<std::uint64_t>& set,
                        const Dyadic& p_branch) {
        if (p_branch.num == 0) return;
        const Dyadic p = prob * p_branch;
        if (set.size() != config.thresh) {
          credit({set, halvings, false}, p);
          return;
        }
        const std::size_t n = set.size();
        if (n > 20) throw std::logic_error("subsampling fan-out too large");
        const Dyadic per_pattern = Dyadic::pow2(static_cast<unsigned>(n));
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
          std::vector<std::uint64_t> kept;
          for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) kept.push_back(set[i]);
          }
          const bool failed_now = kept.size() == config.thresh;
          credit({kept, halvings + 1, failed_now}, p * per_pattern);
        }
      };
      settle(with, p_insert);
      settle(without, p_skip);
    }
    states = std::move(next);
  }
  return states;
}

}  // namespace testsupport
