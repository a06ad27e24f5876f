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

#include <array>
#include <concepts>
#include <cstdint>
#include <vector>

#include "f0/errors.hpp"

namespace f0 {

// splitmix64 finalizer (Steele, Lea, Flood / Vigna). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// xoshiro256** 1.0 by Blackman and Vigna, seeded through the splitmix64
// sequence as the authors recommend. Small serializable state, and the
// algorithm is documented well enough that an independent implementation
// can reproduce the exact word sequence from the same seed.
class Xoshiro256ss {
 public:
  static constexpr const char* kName = "xoshiro256starstar";

  explicit Xoshiro256ss(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += kGoldenGamma;
      word = mix64(x);
    }
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased draw in [0, bound) using Lemire's multiply-shift with rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t cutoff = (0 - bound) % bound;
      while (low < cutoff) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::array<std::uint64_t, 4> state() const noexcept { return state_; }
  void set_state(const std::array<std::uint64_t, 4>& s) noexcept {
    state_ = s;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

// Full serializable state of a RandomSource, as stored in snapshots.
struct RandomSourceState {
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 4> engine{};
  std::uint64_t bit_buffer = 0;
  std::uint32_t bits_left = 0;
  std::uint64_t bits_consumed = 0;

  bool operator==(const RandomSourceState&) const = default;
};

// Seedable source of fair bits. The bit stream is the MSB-first expansion
// of successive xoshiro256** outputs, so the same seed always yields the
// same infinite bit sequence.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  int next_bit() {
    if (bits_left_ == 0) {
      buffer_ = engine_.next_u64();
      bits_left_ = 64;
    }
    --bits_left_;
    ++bits_consumed_;
    return static_cast<int>((buffer_ >> bits_left_) & 1u);
  }

  std::uint64_t bits_consumed() const noexcept { return bits_consumed_; }
  std::uint64_t seed() const noexcept { return seed_; }

  RandomSourceState state() const noexcept {
    return RandomSourceState{seed_, engine_.state(), buffer_, bits_left_,
                             bits_consumed_};
  }

  static RandomSource restore(const RandomSourceState& s) {
    if (s.bits_left > 64) {
      throw ParameterError("bits_left: random source buffer out of range");
    }
    RandomSource src(s.seed);
    src.engine_.set_state(s.engine);
    src.buffer_ = s.bit_buffer;
    src.bits_left_ = s.bits_left;
    src.bits_consumed_ = s.bits_consumed;
    return src;
  }

  bool operator==(const RandomSource& other) const noexcept {
    return state() == other.state();
  }

 private:
  Xoshiro256ss engine_;
  std::uint64_t seed_;
  std::uint64_t buffer_ = 0;
  std::uint32_t bits_left_ = 0;
  std::uint64_t bits_consumed_ = 0;
};

// Replays a fixed bit script. Exhausting the script throws; a silent
// wraparound would turn a test bug into a wrong probability.
class ScriptedSource {
 public:
  ScriptedSource() = default;
  explicit ScriptedSource(std::vector<std::uint8_t> bits)
      : bits_(std::move(bits)) {}

  int next_bit() {
    if (cursor_ == bits_.size()) {
      throw ScriptUnderrunError("scripted bit source exhausted after " +
                                std::to_string(cursor_) + " bits");
    }
    return bits_[cursor_++] ? 1 : 0;
  }

  std::uint64_t bits_consumed() const noexcept { return cursor_; }
  bool exhausted() const noexcept { return cursor_ == bits_.size(); }
  std::size_t remaining() const noexcept { return bits_.size() - cursor_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
};

template <typename S>
concept BitSource = requires(S& s, const S& cs) {
  { s.next_bit() } -> std::convertible_to<int>;
  { cs.bits_consumed() } -> std::convertible_to<std::uint64_t>;
};

static_assert(BitSource<RandomSource>);
static_assert(BitSource<ScriptedSource>);

// One fair bit.
template <BitSource S>
int fair_coin(S& src) {
  return src.next_bit();
}

// True with probability exactly 2^-k: the next up-to-k fair bits must all
// be zero. Stops at the first one bit, so at most k and expectedly under 2
// bits are consumed; k = 0 consumes nothing and always succeeds.
template <BitSource S>
bool bernoulli_pow2(S& src, std::uint64_t k) {
  for (std::uint64_t i = 0; i < k; ++i) {
    if (src.next_bit() != 0) return false;
  }
  return true;
}

// Seed for substream `index` of `master_seed`. A fixed mixing function
// rather than jump-ahead, so substream i does not depend on how many
// substreams were derived before it.
constexpr std::uint64_t substream_seed(std::uint64_t master_seed,
                                       std::uint64_t index) noexcept {
  return mix64(master_seed ^ (kGoldenGamma * (index + 1)));
}

inline RandomSource derive_substream(std::uint64_t master_seed,
                                     std::uint64_t index) {
  return RandomSource(substream_seed(master_seed, index));
}

}  // namespace f0
