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

#include <cmath>
#include <cstdint>

#include "f0/stats.hpp"

using Catch::Matchers::WithinAbs;
using namespace f0::stats;

TEST_CASE("binomial 99th percentiles") {
  // frozen reference values
  CHECK(binomial_quantile(400, 0.1L, 0.99L) == 55);
  CHECK(binomial_quantile(100, 0.1L, 0.99L) == 18);
  CHECK(binomial_quantile(10000, 0.1L, 0.99L) == 1070);
  CHECK(binomial_quantile(400, 0.05L, 0.99L) == 31);
}

TEST_CASE("binomial quantile is the smallest count clearing the level") {
  for (const auto& [n, p] : {std::pair<std::uint64_t, long double>{400, 0.1L},
                             {100, 0.1L},
                             {57, 0.31L},
                             {1000, 0.01L}}) {
    const std::uint64_t q = binomial_quantile(n, p, 0.99L);
    CHECK(binomial_cdf(n, q, p) >= 0.99L);
    if (q > 0) CHECK(binomial_cdf(n, q - 1, p) < 0.99L);
  }
}

TEST_CASE("pmf sums to one") {
  long double sum = 0.0L;
  for (std::uint64_t k = 0; k <= 50; ++k) sum += binomial_pmf(50, k, 0.3L);
  CHECK_THAT(static_cast<double>(sum), WithinAbs(1.0, 1e-15));
}

TEST_CASE("upper tail complements the cdf") {
  for (const std::uint64_t k : {0ULL, 1ULL, 17ULL, 200ULL, 399ULL, 400ULL}) {
    const long double both =
        binomial_upper_tail(400, k, 0.37L) +
        (k == 0 ? 0.0L : binomial_cdf(400, k - 1, 0.37L));
    CHECK_THAT(static_cast<double>(both), WithinAbs(1.0, 1e-14));
  }
}

TEST_CASE("clopper-pearson lower bounds") {
  // frozen reference values
  CHECK_THAT(clopper_pearson_lower(400, 400, 0.99), WithinAbs(0.988553094657, 1e-9));
  CHECK_THAT(clopper_pearson_lower(399, 400, 0.99), WithinAbs(0.983520602925, 1e-9));
  CHECK_THAT(clopper_pearson_lower(380, 400, 0.99), WithinAbs(0.918599153676, 1e-9));
  CHECK_THAT(clopper_pearson_lower(360, 400, 0.99), WithinAbs(0.859772272064, 1e-9));
  CHECK_THAT(clopper_pearson_lower(320, 400, 0.99), WithinAbs(0.749320325800, 1e-9));
  CHECK_THAT(clopper_pearson_lower(100, 100, 0.99), WithinAbs(0.954992586021, 1e-9));
  CHECK_THAT(clopper_pearson_lower(95, 100, 0.99), WithinAbs(0.874148269302, 1e-9));
  CHECK_THAT(clopper_pearson_lower(45, 100, 0.99), WithinAbs(0.333324563042, 1e-9));
  CHECK(clopper_pearson_lower(0, 400, 0.99) == 0.0);
}

TEST_CASE("clopper-pearson bound sits at the exact tail level") {
  for (const std::uint64_t s : {1ULL, 10ULL, 200ULL, 399ULL, 400ULL}) {
    const double lower = clopper_pearson_lower(s, 400, 0.99);
    CHECK_THAT(static_cast<double>(binomial_upper_tail(400, s, lower)),
               WithinAbs(0.01, 1e-9));
    CHECK(lower < static_cast<double>(s) / 400.0);
  }
  // monotone in the success count
  double previous = 0.0;
  for (std::uint64_t s = 0; s <= 400; s += 25) {
    const double lower = clopper_pearson_lower(s, 400, 0.99);
    CHECK(lower >= previous);
    previous = lower;
  }
}

TEST_CASE("stats parameter validation") {
  CHECK_THROWS_AS(binomial_quantile(10, -0.1L, 0.99L), f0::ParameterError);
  CHECK_THROWS_AS(binomial_quantile(10, 0.1L, 1.0L), f0::ParameterError);
  CHECK_THROWS_AS(clopper_pearson_lower(5, 0, 0.99), f0::ParameterError);
  CHECK_THROWS_AS(clopper_pearson_lower(11, 10, 0.99), f0::ParameterError);
  CHECK_THROWS_AS(clopper_pearson_lower(5, 10, 1.0), f0::ParameterError);
}
