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
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "f0/config.hpp"
#include "f0/errors.hpp"
#include "f0/random.hpp"
#include "f0/sketch.hpp"

namespace f0 {

// Checkpoint codec. The byte form is canonical: samples are stored in
// ascending order and every field has exactly one encoding, so
// write(read(b)) == b and read(write(x)) == x. The generator state is
// carried in full, which makes a resumed run bit-identical to an
// uninterrupted one.
//
// Layout, all integers little-endian:
//   magic "F0SKSNAP" | u32 version | u8 element_mode
//   f64 epsilon | f64 delta | u64 stream_bound | u64 thresh
//   u8 thresh_overridden | u64 halvings | u64 items_processed
//   u64 peak_samples | u64 sample_count | samples (canonical ascending)
//   u8 name_len + generator name | u64 seed | 4 x u64 engine state
//   u64 bit_buffer | u32 bits_left | u64 bits_consumed
//   u64 crc64 (CRC-64/XZ over everything before it)

inline constexpr std::array<char, 8> kSnapshotMagic = {'F', '0', 'S', 'K',
                                                       'S', 'N', 'A', 'P'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

// CRC-64/XZ: reflected polynomial 0xC96C5795D7870F42, init and xorout all
// ones.
inline constexpr std::array<std::uint64_t, 256> make_crc64_table() {
  std::array<std::uint64_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint64_t crc = i;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc >> 1) ^ ((crc & 1) ? 0xC96C5795D7870F42ULL : 0);
    }
    table[i] = crc;
  }
  return table;
}

inline std::uint64_t crc64(std::span<const std::uint8_t> bytes) {
  static constexpr auto kTable = make_crc64_table();
  std::uint64_t crc = ~0ULL;
  for (const std::uint8_t b : bytes) {
    crc = kTable[(crc ^ b) & 0xFF] ^ (crc >> 8);
  }
  return ~crc;
}

inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) {
  out.push_back(v);
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return take(1)[0]; }

  std::uint32_t u32() {
    const auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::uint64_t u64() {
    const auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - offset_ < n) {
      throw SnapshotError("snapshot truncated");
    }
    const auto out = bytes_.subspan(offset_, n);
    offset_ += n;
    return out;
  }

  std::size_t offset() const noexcept { return offset_; }
  std::size_t remaining() const noexcept { return bytes_.size() - offset_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

template <typename T>
struct ElementCodec;

template <>
struct ElementCodec<std::uint64_t> {
  static constexpr std::uint8_t kMode = 0;
  static void write(std::vector<std::uint8_t>& out, std::uint64_t v) {
    put_u64(out, v);
  }
  static std::uint64_t read(Reader& in) { return in.u64(); }
};

template <>
struct ElementCodec<std::string> {
  static constexpr std::uint8_t kMode = 1;
  static void write(std::vector<std::uint8_t>& out, const std::string& v) {
    if (v.size() > 0xFFFFFFFFull) {
      throw ParameterError("element: token longer than the format allows");
    }
    put_u32(out, static_cast<std::uint32_t>(v.size()));
    out.insert(out.end(), v.begin(), v.end());
  }
  static std::string read(Reader& in) {
    const std::uint32_t len = in.u32();
    const auto bytes = in.take(len);
    return std::string(reinterpret_cast<const char*>(bytes.data()), len);
  }
};

}  // namespace detail

// Serializes a non-failed sketch together with its coin source. A failed
// sketch is terminal and cannot be checkpointed.
template <SketchElement T>
std::vector<std::uint8_t> snapshot_write(const Sketch<T>& sketch,
                                         const RandomSource& source) {
  if (sketch.failed()) {
    throw UsageError("snapshot: a failed sketch is terminal");
  }
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kSnapshotMagic.begin(), kSnapshotMagic.end());
  detail::put_u32(out, kSnapshotVersion);
  detail::put_u8(out, detail::ElementCodec<T>::kMode);
  const SketchConfig& config = sketch.config();
  detail::put_f64(out, config.epsilon);
  detail::put_f64(out, config.delta);
  detail::put_u64(out, config.stream_bound);
  detail::put_u64(out, config.thresh);
  detail::put_u8(out, config.thresh_overridden ? 1 : 0);
  detail::put_u64(out, sketch.halvings());
  detail::put_u64(out, sketch.items_processed());
  detail::put_u64(out, sketch.peak_samples());
  const auto samples = sketch.samples_sorted();
  detail::put_u64(out, samples.size());
  for (const T& element : samples) {
    detail::ElementCodec<T>::write(out, element);
  }
  const RandomSourceState rng = source.state();
  const std::string name = Xoshiro256ss::kName;
  detail::put_u8(out, static_cast<std::uint8_t>(name.size()));
  out.insert(out.end(), name.begin(), name.end());
  detail::put_u64(out, rng.seed);
  for (const std::uint64_t word : rng.engine) detail::put_u64(out, word);
  detail::put_u64(out, rng.bit_buffer);
  detail::put_u32(out, rng.bits_left);
  detail::put_u64(out, rng.bits_consumed);
  detail::put_u64(out, detail::crc64(out));
  return out;
}

template <SketchElement T>
struct RestoredSketch {
  Sketch<T> sketch;
  RandomSource source;
};

template <SketchElement T>
RestoredSketch<T> snapshot_read(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSnapshotMagic.size() + 8) {
    throw SnapshotError("snapshot truncated");
  }
  const std::uint64_t stored_crc =
      [&] {
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[bytes.size() - 8 + i];
        return v;
      }();
  const auto body = bytes.first(bytes.size() - 8);
  if (detail::crc64(body) != stored_crc) {
    throw SnapshotError("snapshot checksum mismatch");
  }

  detail::Reader in(body);
  const auto magic = in.take(kSnapshotMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kSnapshotMagic.begin(),
                  [](std::uint8_t a, char b) {
                    return a == static_cast<std::uint8_t>(b);
                  })) {
    throw SnapshotError("snapshot magic mismatch");
  }
  const std::uint32_t version = in.u32();
  if (version != kSnapshotVersion) {
    throw SnapshotError("snapshot version " + std::to_string(version) +
                        " not supported");
  }
  const std::uint8_t mode = in.u8();
  if (mode != detail::ElementCodec<T>::kMode) {
    throw SnapshotError("snapshot element mode " + std::to_string(mode) +
                        " does not match the requested element type");
  }

  const double epsilon = in.f64();
  const double delta = in.f64();
  const std::uint64_t stream_bound = in.u64();
  const std::uint64_t thresh = in.u64();
  const std::uint8_t overridden = in.u8();
  if (overridden > 1) {
    throw SnapshotError("snapshot override flag corrupt");
  }
  SketchConfig config;
  try {
    if (overridden) {
      detail::validate_parameters(epsilon, delta, stream_bound);
      config = SketchConfig{epsilon, delta, stream_bound, thresh, true};
      if (thresh < 2) {
        throw SnapshotError("snapshot thresh below the minimum of 2");
      }
    } else {
      config = SketchConfig::create(epsilon, delta, stream_bound);
      if (config.thresh != thresh) {
        throw SnapshotError(
            "snapshot thresh disagrees with its own parameters");
      }
    }
  } catch (const ParameterError& e) {
    throw SnapshotError(std::string("snapshot config invalid: ") + e.what());
  }

  const std::uint64_t halvings = in.u64();
  const std::uint64_t items_processed = in.u64();
  const std::uint64_t peak_samples = in.u64();
  const std::uint64_t sample_count = in.u64();
  if (sample_count >= thresh) {
    throw SnapshotError("snapshot sample count not below thresh");
  }
  std::vector<T> samples;
  samples.reserve(sample_count);
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    T element = detail::ElementCodec<T>::read(in);
    if (!samples.empty() && !(samples.back() < element)) {
      throw SnapshotError("snapshot samples not in canonical ascending order");
    }
    samples.push_back(std::move(element));
  }

  const std::uint8_t name_len = in.u8();
  const auto name_bytes = in.take(name_len);
  const std::string name(reinterpret_cast<const char*>(name_bytes.data()),
                         name_len);
  if (name != Xoshiro256ss::kName) {
    throw SnapshotError("snapshot generator '" + name + "' not supported");
  }
  RandomSourceState rng;
  rng.seed = in.u64();
  for (auto& word : rng.engine) word = in.u64();
  rng.bit_buffer = in.u64();
  rng.bits_left = in.u32();
  rng.bits_consumed = in.u64();
  if (rng.bits_left > 64) {
    throw SnapshotError("snapshot generator bit buffer corrupt");
  }
  if (in.remaining() != 0) {
    throw SnapshotError("snapshot has trailing bytes");
  }

  try {
    return RestoredSketch<T>{
        Sketch<T>::restore(config, std::move(samples), halvings,
                           items_processed, peak_samples),
        RandomSource::restore(rng)};
  } catch (const ParameterError& e) {
    throw SnapshotError(std::string("snapshot state invalid: ") + e.what());
  }
}

}  // namespace f0
