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

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <vector>

#include "f0/exact_counter.hpp"
#include "f0/stream_gen.hpp"

using f0::generate_stream;
using f0::ParameterError;
using f0::StreamKind;
using f0::StreamSpec;

TEST_CASE("distinct run is the identity stream") {
  StreamSpec spec{StreamKind::kDistinctRun, 5, 5};
  CHECK(generate_stream(spec) == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
}

TEST_CASE("single element repeats one value") {
  StreamSpec spec{StreamKind::kSingleElement, 1, 100};
  const auto stream = generate_stream(spec);
  CHECK(stream.size() == 100);
  CHECK(f0::exact_f0(stream) == 1);
}

TEST_CASE("repeated shuffle holds its exact distinct count") {
  StreamSpec spec;
  spec.kind = StreamKind::kRepeatedShuffle;
  spec.f0_target = 1000;
  spec.repeat = 3;
  spec.length = 3000;
  spec.seed = 99;
  const auto stream = generate_stream(spec);
  CHECK(stream.size() == 3000);
  CHECK(f0::exact_f0(stream) == 1000);
  // each value appears exactly `repeat` times
  std::map<std::uint64_t, int> counts;
  for (const auto v : stream) ++counts[v];
  for (const auto& [value, count] : counts) {
    REQUIRE(count == 3);
  }
}

TEST_CASE("blocks are contiguous runs") {
  StreamSpec spec{StreamKind::kBlocks, 4, 10};
  const auto stream = generate_stream(spec);
  REQUIRE(stream.size() == 10);
  CHECK(f0::exact_f0(stream) == 4);
  // once a value ends, it never reappears
  std::map<std::uint64_t, std::size_t> last_seen;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (last_seen.contains(stream[i])) {
      REQUIRE(last_seen[stream[i]] == i - 1);
    }
    last_seen[stream[i]] = i;
  }
}

TEST_CASE("every kind delivers its declared ground truth") {
  f0::Xoshiro256ss gen(0xfeed);
  for (int round = 0; round < 40; ++round) {
    StreamSpec spec;
    spec.seed = gen.next_u64();
    spec.f0_target = 1 + gen.next_below(300);
    switch (round % 5) {
      case 0:
        spec.kind = StreamKind::kDistinctRun;
        spec.length = spec.f0_target;
        break;
      case 1:
        spec.kind = StreamKind::kRepeatedShuffle;
        spec.repeat = 1 + gen.next_below(4);
        spec.length = spec.f0_target * spec.repeat;
        break;
      case 2:
        spec.kind = StreamKind::kSingleElement;
        spec.f0_target = 1;
        spec.length = 1 + gen.next_below(500);
        break;
      case 3:
        spec.kind = StreamKind::kZipf;
        spec.zipf_exponent = 0.5 + 0.25 * static_cast<double>(gen.next_below(8));
        spec.length = spec.f0_target + gen.next_below(1000);
        break;
      default:
        spec.kind = StreamKind::kBlocks;
        spec.length = spec.f0_target + gen.next_below(1000);
        break;
    }
    const auto stream = generate_stream(spec);
    INFO("kind " << f0::stream_kind_name(spec.kind) << " round " << round);
    REQUIRE(stream.size() == spec.length);
    REQUIRE(f0::exact_f0(stream) == spec.f0_target);
  }
}

TEST_CASE("zipf draws follow the inverted cumulative weights") {
  StreamSpec spec;
  spec.kind = StreamKind::kZipf;
  spec.f0_target = 100;
  spec.length = 100000;
  spec.zipf_exponent = 1.0;
  spec.seed = 2024;
  const auto stream = generate_stream(spec);

  std::uint64_t rank_one = 0;
  for (const auto v : stream) {
    if (v == 1) ++rank_one;
  }
  double harmonic = 0.0;
  for (int i = 1; i <= 100; ++i) harmonic += 1.0 / i;
  const double p1 = 1.0 / harmonic;
  const double extra = static_cast<double>(spec.length - spec.f0_target);
  const double expected = 1.0 + extra * p1;  // the forced copy plus the draws
  const double sigma = std::sqrt(extra * p1 * (1.0 - p1));
  CHECK(std::abs(static_cast<double>(rank_one) - expected) <= 4.0 * sigma);
  // and the most frequent value is the lowest rank
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto v : stream) ++counts[v];
  CHECK(counts[1] > counts[50]);
  CHECK(counts[1] > counts[100]);
}

TEST_CASE("generation is deterministic in the spec") {
  StreamSpec spec;
  spec.kind = StreamKind::kZipf;
  spec.f0_target = 200;
  spec.length = 1000;
  spec.zipf_exponent = 1.1;
  spec.seed = 4242;
  CHECK(generate_stream(spec) == generate_stream(spec));
  StreamSpec other = spec;
  other.seed = 4243;
  CHECK(generate_stream(other) != generate_stream(spec));
}

TEST_CASE("inconsistent specs are rejected") {
  StreamSpec spec;
  spec.kind = StreamKind::kDistinctRun;
  spec.f0_target = 10;
  spec.length = 11;
  CHECK_THROWS_AS(generate_stream(spec), ParameterError);

  spec.kind = StreamKind::kRepeatedShuffle;
  spec.repeat = 2;
  spec.length = 21;
  CHECK_THROWS_AS(generate_stream(spec), ParameterError);

  spec.kind = StreamKind::kSingleElement;
  spec.f0_target = 2;
  spec.length = 10;
  CHECK_THROWS_AS(generate_stream(spec), ParameterError);

  spec.kind = StreamKind::kZipf;
  spec.f0_target = 5;
  spec.length = 10;
  spec.zipf_exponent = 0.0;
  CHECK_THROWS_AS(generate_stream(spec), ParameterError);

  spec = StreamSpec{};
  spec.f0_target = 0;
  CHECK_THROWS_AS(generate_stream(spec), ParameterError);
  spec.f0_target = 5;
  spec.length = 4;
  CHECK_THROWS_AS(generate_stream(spec), ParameterError);
}

TEST_CASE("stream kind names round-trip") {
  for (const StreamKind kind :
       {StreamKind::kDistinctRun, StreamKind::kRepeatedShuffle,
        StreamKind::kSingleElement, StreamKind::kZipf, StreamKind::kBlocks}) {
    CHECK(f0::parse_stream_kind(f0::stream_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(f0::parse_stream_kind("nope"), ParameterError);
}
