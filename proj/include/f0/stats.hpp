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

namespace f0::stats {

// Exact binomial machinery for the statistical pass/fail decisions. No
// normal approximations; the miss counts involved can be single digits.

// log C(n, k), via lgamma.
inline long double log_binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<long double>(n) + 1.0L) -
         std::lgamma(static_cast<long double>(k) + 1.0L) -
         std::lgamma(static_cast<long double>(n - k) + 1.0L);
}

// Pr[Bin(n, p) = k], computed in log space so extreme tails stay finite.
inline long double binomial_pmf(std::uint64_t n, std::uint64_t k,
                                long double p) {
  if (k > n) return 0.0L;
  if (p <= 0.0L) return k == 0 ? 1.0L : 0.0L;
  if (p >= 1.0L) return k == n ? 1.0L : 0.0L;
  const long double log_pmf =
      log_binomial_coefficient(n, k) + static_cast<long double>(k) * std::log(p) +
      static_cast<long double>(n - k) * std::log1p(-p);
  return std::exp(log_pmf);
}

// Pr[Bin(n, p) <= k].
inline long double binomial_cdf(std::uint64_t n, std::uint64_t k,
                                long double p) {
  if (k >= n) return 1.0L;
  long double sum = 0.0L;
  for (std::uint64_t i = 0; i <= k; ++i) sum += binomial_pmf(n, i, p);
  return sum < 1.0L ? sum : 1.0L;
}

// Pr[Bin(n, p) >= k], summed over the shorter side so small tails are
// formed by direct summation rather than cancellation against 1.
inline long double binomial_upper_tail(std::uint64_t n, std::uint64_t k,
                                       long double p) {
  if (k == 0) return 1.0L;
  if (k > n) return 0.0L;
  if (n - k + 1 <= k) {
    long double sum = 0.0L;
    for (std::uint64_t i = k; i <= n; ++i) sum += binomial_pmf(n, i, p);
    return sum < 1.0L ? sum : 1.0L;
  }
  const long double tail = 1.0L - binomial_cdf(n, k - 1, p);
  return tail > 0.0L ? tail : 0.0L;
}

// Smallest q with Pr[Bin(n, p) <= q] >= quantile.
inline std::uint64_t binomial_quantile(std::uint64_t n, long double p,
                                       long double quantile) {
  if (!(p >= 0.0L) || !(p <= 1.0L)) {
    throw ParameterError("p: must lie in [0, 1]");
  }
  if (!(quantile > 0.0L) || !(quantile < 1.0L)) {
    throw ParameterError("quantile: must lie in the open interval (0, 1)");
  }
  long double cdf = 0.0L;
  for (std::uint64_t q = 0; q <= n; ++q) {
    cdf += binomial_pmf(n, q, p);
    if (cdf >= quantile) return q;
  }
  return n;
}

// One-sided Clopper-Pearson lower confidence bound on the success
// probability after observing `successes` of `n`, solved by bisection on
// the exact upper tail.
inline double clopper_pearson_lower(std::uint64_t successes, std::uint64_t n,
                                    double confidence) {
  if (n == 0) {
    throw ParameterError("n: must be a positive integer");
  }
  if (successes > n) {
    throw ParameterError("successes: cannot exceed n");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw ParameterError("confidence: must lie in the open interval (0, 1)");
  }
  if (successes == 0) return 0.0;
  const long double alpha = 1.0L - static_cast<long double>(confidence);
  // Pr[Bin(n, p) >= successes] is increasing in p; find p where it crosses
  // alpha.
  long double lo = 0.0L;
  long double hi = 1.0L;
  for (int iter = 0; iter < 200; ++iter) {
    const long double mid = 0.5L * (lo + hi);
    if (binomial_upper_tail(n, successes, mid) < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace f0::stats
