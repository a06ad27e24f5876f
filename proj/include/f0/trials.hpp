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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "f0/config.hpp"
#include "f0/errors.hpp"
#include "f0/estimate.hpp"
#include "f0/exact_counter.hpp"
#include "f0/random.hpp"
#include "f0/sketch.hpp"
#include "f0/stats.hpp"
#include "f0/stream_gen.hpp"

namespace f0 {

// Domain tag mixed into the master seed when deriving per-trial stream
// seeds, so stream randomness and sketch randomness never share a
// substream index space.
constexpr std::uint64_t kStreamSeedTag = 0x73747265616d6773ULL;

struct TrialRecord {
  std::uint64_t trial = 0;
  EstimateResult estimate{};
  // signed (estimate - f0) / f0; NaN when the trial failed
  double relative_error = 0.0;
  bool failed = false;
  bool covered = false;
  std::uint64_t final_halvings = 0;
  std::uint64_t peak_samples = 0;

  bool operator==(const TrialRecord&) const = default;
};

struct TrialAggregates {
  std::uint64_t trials = 0;
  std::uint64_t fail_count = 0;
  std::uint64_t covered_count = 0;
  std::uint64_t miss_count = 0;
  double coverage = 0.0;
  // nearest-rank quantiles of the signed relative error over non-failed
  // trials; NaN when every trial failed
  double error_p05 = 0.0;
  double error_p50 = 0.0;
  double error_p95 = 0.0;
  double max_abs_error = 0.0;
  std::uint64_t peak_samples_max = 0;
  std::uint64_t halvings_min = 0;
  std::uint64_t halvings_max = 0;

  bool operator==(const TrialAggregates&) const = default;
};

enum class StreamMode {
  kFixedStream,  // one stream, fresh coins per trial (the faithful mode)
  kPerTrialStream,
};

struct RunOptions {
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  unsigned parallelism = 1;
  StreamMode stream_mode = StreamMode::kFixedStream;
};

struct TrialReport {
  SketchConfig config{};
  StreamSpec stream{};
  StreamMode stream_mode = StreamMode::kFixedStream;
  std::uint64_t master_seed = 0;
  std::uint64_t true_f0 = 0;
  std::vector<TrialRecord> records;
  TrialAggregates aggregates{};

  bool operator==(const TrialReport&) const = default;
};

// Whether an estimate lies within the (1 +- epsilon) band around f0. The
// fail marker is outside every band. The distance is formed exactly in
// 128-bit integer arithmetic whenever the estimate is representable there;
// estimates at or above 2^64 are outside any band a 64-bit f0 admits.
inline bool estimate_covered(const EstimateResult& estimate, std::uint64_t f0,
                             double epsilon) {
  if (estimate.failed) return false;
  const long double band =
      static_cast<long double>(epsilon) * static_cast<long double>(f0);
  if (estimate.value.count == 0) {
    return static_cast<long double>(f0) <= band;
  }
  if (estimate.value.exponent >= 64) return false;
  const unsigned __int128 value =
      static_cast<unsigned __int128>(estimate.value.count)
      << estimate.value.exponent;
  const unsigned __int128 truth = f0;
  const unsigned __int128 distance = value > truth ? value - truth : truth - value;
  return static_cast<long double>(distance) <= band;
}

namespace detail {

inline double signed_relative_error(const EstimateResult& estimate,
                                    std::uint64_t f0) {
  if (estimate.failed) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const long double value = estimate.value.to_long_double();
  return static_cast<double>((value - static_cast<long double>(f0)) /
                             static_cast<long double>(f0));
}

// Nearest-rank quantile of an ascending vector.
inline double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  const std::size_t index = rank == 0 ? 0 : rank - 1;
  return sorted[index < sorted.size() ? index : sorted.size() - 1];
}

inline TrialAggregates aggregate_records(const std::vector<TrialRecord>& records) {
  TrialAggregates agg;
  agg.trials = records.size();
  std::vector<double> errors;
  errors.reserve(records.size());
  bool first_halvings = true;
  for (const TrialRecord& r : records) {
    if (r.failed) ++agg.fail_count;
    if (r.covered) ++agg.covered_count;
    if (!r.failed) {
      errors.push_back(r.relative_error);
      agg.max_abs_error = std::max(agg.max_abs_error, std::abs(r.relative_error));
    }
    agg.peak_samples_max = std::max(agg.peak_samples_max, r.peak_samples);
    if (first_halvings) {
      agg.halvings_min = agg.halvings_max = r.final_halvings;
      first_halvings = false;
    } else {
      agg.halvings_min = std::min(agg.halvings_min, r.final_halvings);
      agg.halvings_max = std::max(agg.halvings_max, r.final_halvings);
    }
  }
  agg.miss_count = agg.trials - agg.covered_count;
  agg.coverage = agg.trials == 0
                     ? 0.0
                     : static_cast<double>(agg.covered_count) /
                           static_cast<double>(agg.trials);
  std::sort(errors.begin(), errors.end());
  agg.error_p05 = nearest_rank(errors, 0.05);
  agg.error_p50 = nearest_rank(errors, 0.50);
  agg.error_p95 = nearest_rank(errors, 0.95);
  return agg;
}

}  // namespace detail

// Runs `trials` independent estimations of the stream described by `spec`
// and tallies how they land against the (1 +- epsilon) band. Trial i draws
// its coins from substream i of `master_seed`, so the report is a pure
// function of (config, spec, trials, master_seed) and is bitwise identical
// for every parallelism level; parallelism is not part of the report.
//
// Ground truth is re-derived from every generated stream with the exact
// counter before trials consume it.
inline TrialReport run_trials(const SketchConfig& config, const StreamSpec& spec,
                              const RunOptions& options) {
  if (options.trials == 0) {
    throw ParameterError("trials: must be a positive integer");
  }
  if (options.parallelism == 0) {
    throw ParameterError("parallelism: must be a positive integer");
  }
  validate_stream_spec(spec);
  if (spec.length > config.stream_bound) {
    throw ParameterError("length: stream is longer than the configured bound");
  }

  std::vector<std::uint64_t> fixed_stream;
  if (options.stream_mode == StreamMode::kFixedStream) {
    fixed_stream = generate_stream(spec);
    if (exact_f0(fixed_stream) != spec.f0_target) {
      throw std::logic_error("stream generator broke its ground-truth contract");
    }
  }

  TrialReport report;
  report.config = config;
  report.stream = spec;
  report.stream_mode = options.stream_mode;
  report.master_seed = options.master_seed;
  report.true_f0 = spec.f0_target;
  report.records.resize(options.trials);

  auto run_one = [&](std::uint64_t trial) {
    RandomSource src = derive_substream(options.master_seed, trial);
    Sketch<std::uint64_t> sketch(config);
    if (options.stream_mode == StreamMode::kFixedStream) {
      sketch.process_stream(fixed_stream, src);
    } else {
      StreamSpec trial_spec = spec;
      trial_spec.seed = substream_seed(options.master_seed ^ kStreamSeedTag, trial);
      const auto stream = generate_stream(trial_spec);
      if (exact_f0(stream) != spec.f0_target) {
        throw std::logic_error("stream generator broke its ground-truth contract");
      }
      sketch.process_stream(stream, src);
    }
    TrialRecord record;
    record.trial = trial;
    record.estimate = sketch.estimate();
    record.failed = sketch.failed();
    record.relative_error = detail::signed_relative_error(record.estimate,
                                                          spec.f0_target);
    record.covered =
        estimate_covered(record.estimate, spec.f0_target, config.epsilon);
    record.final_halvings = sketch.halvings();
    record.peak_samples = sketch.peak_samples();
    report.records[trial] = record;
  };

  const auto workers = static_cast<unsigned>(
      std::min<std::uint64_t>(options.parallelism, options.trials));
  if (workers <= 1) {
    for (std::uint64_t t = 0; t < options.trials; ++t) run_one(t);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      try {
        for (std::uint64_t t = next.fetch_add(1); t < options.trials;
             t = next.fetch_add(1)) {
          run_one(t);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  report.aggregates = detail::aggregate_records(report.records);
  return report;
}

enum class CheckStatus { kPass, kFail, kSkipped };

struct CheckResult {
  CheckStatus status = CheckStatus::kFail;
  std::string name;
  std::string method;
  std::string detail;

  bool passed() const noexcept { return status != CheckStatus::kFail; }
};

// Verifies that observed coverage is consistent with the promised 1 - delta.
// Two exact routes, either suffices: the one-sided 99% Clopper-Pearson
// lower bound on per-trial coverage clears 1 - delta, or the miss count
// stays at or below the 99th percentile of Binomial(trials, delta). The
// guarantee is one-sided, so landing far above 1 - delta is expected.
inline CheckResult coverage_check(const TrialReport& report, double delta) {
  if (report.records.empty()) {
    throw ParameterError("report: no trials to check");
  }
  const std::uint64_t n = report.aggregates.trials;
  const std::uint64_t covered = report.aggregates.covered_count;
  const std::uint64_t misses = report.aggregates.miss_count;

  CheckResult result;
  result.name = "coverage";
  const double cp_lower = stats::clopper_pearson_lower(covered, n, 0.99);
  if (cp_lower >= 1.0 - delta) {
    result.status = CheckStatus::kPass;
    result.method = "clopper_pearson_lower";
    result.detail = "99% lower bound " + std::to_string(cp_lower) +
                    " >= " + std::to_string(1.0 - delta);
    return result;
  }
  const std::uint64_t allowed = stats::binomial_quantile(
      n, static_cast<long double>(delta), 0.99L);
  result.method = "binomial_quantile";
  if (misses <= allowed) {
    result.status = CheckStatus::kPass;
    result.detail = std::to_string(misses) + " misses <= 99th percentile " +
                    std::to_string(allowed) + " of Binomial(" +
                    std::to_string(n) + ", " + std::to_string(delta) + ")";
  } else {
    result.status = CheckStatus::kFail;
    result.detail = std::to_string(misses) + " misses > 99th percentile " +
                    std::to_string(allowed) + " of Binomial(" +
                    std::to_string(n) + ", " + std::to_string(delta) +
                    "), and Clopper-Pearson lower bound " +
                    std::to_string(cp_lower) + " < " +
                    std::to_string(1.0 - delta);
  }
  return result;
}

// At an unoverridden thresh (always >= 36) the per-run give-up probability
// is at most stream_bound * 2^-thresh, far below anything observable, so a
// single observed failure is treated as an implementation bug. Skipped for
// overridden configs, which carry no such bound.
inline CheckResult fail_rate_check(const TrialReport& report) {
  CheckResult result;
  result.name = "fail_rate";
  if (report.config.thresh_overridden) {
    result.status = CheckStatus::kSkipped;
    result.method = "skipped";
    result.detail = "thresh override voids the failure bound; check skipped";
    return result;
  }
  result.method = "zero_tolerance";
  if (report.aggregates.fail_count == 0) {
    result.status = CheckStatus::kPass;
    result.detail = "0 failures in " + std::to_string(report.aggregates.trials) +
                    " trials (per-run bound " +
                    std::to_string(report.config.stream_bound) + " * 2^-" +
                    std::to_string(report.config.thresh) + ")";
  } else {
    result.status = CheckStatus::kFail;
    result.detail = std::to_string(report.aggregates.fail_count) +
                    " failures observed; per-run bound " +
                    std::to_string(report.config.stream_bound) + " * 2^-" +
                    std::to_string(report.config.thresh) +
                    " makes this overwhelming evidence of a bug";
  }
  return result;
}

// Peak sample-set size must never exceed thresh, in any trial.
inline CheckResult memory_check(const TrialReport& report) {
  CheckResult result;
  result.name = "memory";
  result.method = "peak_samples";
  std::uint64_t worst = 0;
  for (const TrialRecord& r : report.records) {
    worst = std::max(worst, r.peak_samples);
  }
  if (worst <= report.config.thresh) {
    result.status = CheckStatus::kPass;
    result.detail = "peak " + std::to_string(worst) + " <= thresh " +
                    std::to_string(report.config.thresh);
  } else {
    result.status = CheckStatus::kFail;
    result.detail = "peak " + std::to_string(worst) + " > thresh " +
                    std::to_string(report.config.thresh);
  }
  return result;
}

}  // namespace f0
