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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "f0/report_io.hpp"
#include "f0/trials.hpp"

using f0::CheckStatus;
using f0::coverage_check;
using f0::estimate_covered;
using f0::EstimateResult;
using f0::fail_rate_check;
using f0::memory_check;
using f0::RunOptions;
using f0::run_trials;
using f0::SketchConfig;
using f0::StreamKind;
using f0::StreamMode;
using f0::StreamSpec;
using f0::TrialRecord;
using f0::TrialReport;

namespace {

StreamSpec distinct_run(std::uint64_t f0_target) {
  StreamSpec spec;
  spec.kind = StreamKind::kDistinctRun;
  spec.f0_target = f0_target;
  spec.length = f0_target;
  return spec;
}

// Synthetic report with a given miss pattern, for exercising the checks.
TrialReport synthetic_report(const SketchConfig& config, std::uint64_t trials,
                             std::uint64_t misses, std::uint64_t fails) {
  TrialReport report;
  report.config = config;
  report.stream = distinct_run(100);
  report.true_f0 = 100;
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRecord r;
    r.trial = t;
    if (t < fails) {
      r.estimate = EstimateResult::fail();
      r.failed = true;
      r.covered = false;
      r.relative_error = std::numeric_limits<double>::quiet_NaN();
    } else if (t < misses) {
      r.estimate = EstimateResult::of(1000, 0);
      r.covered = false;
      r.relative_error = 9.0;
    } else {
      r.estimate = EstimateResult::of(100, 0);
      r.covered = true;
      r.relative_error = 0.0;
    }
    r.peak_samples = 10;
    report.records.push_back(r);
  }
  report.aggregates = f0::detail::aggregate_records(report.records);
  return report;
}

}  // namespace

TEST_CASE("one exact-regime trial covers perfectly") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 1000);
  RunOptions options;
  options.trials = 1;
  options.master_seed = 5;
  const TrialReport report = run_trials(config, distinct_run(100), options);
  CHECK(report.aggregates.coverage == 1.0);
  CHECK(report.aggregates.fail_count == 0);
  CHECK(report.aggregates.miss_count == 0);
  CHECK(report.records[0].relative_error == 0.0);
  CHECK(report.records[0].final_halvings == 0);
  CHECK(report.true_f0 == 100);
}

TEST_CASE("reports are identical for any parallelism") {
  const SketchConfig config =
      SketchConfig::create(0.5, 0.5, 4000).with_thresh_override(64);
  StreamSpec spec;
  spec.kind = StreamKind::kRepeatedShuffle;
  spec.f0_target = 500;
  spec.repeat = 2;
  spec.length = 1000;
  spec.seed = 31337;

  RunOptions serial;
  serial.trials = 64;
  serial.master_seed = 777;
  serial.parallelism = 1;
  RunOptions parallel = serial;
  parallel.parallelism = 8;

  const TrialReport a = run_trials(config, spec, serial);
  const TrialReport b = run_trials(config, spec, parallel);
  CHECK(a == b);
  const auto checks_a = std::vector<f0::CheckResult>{};
  CHECK(f0::report_to_json(a, checks_a).dump() ==
        f0::report_to_json(b, checks_a).dump());
}

TEST_CASE("per-trial stream mode regenerates ground truth each trial") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 1000);
  StreamSpec spec;
  spec.kind = StreamKind::kZipf;
  spec.f0_target = 50;
  spec.length = 400;
  RunOptions options;
  options.trials = 8;
  options.master_seed = 12;
  options.stream_mode = StreamMode::kPerTrialStream;
  const TrialReport report = run_trials(config, spec, options);
  CHECK(report.aggregates.coverage == 1.0);  // exact regime either way
  const TrialReport again = run_trials(config, spec, options);
  CHECK(report == again);
}

TEST_CASE("coverage accounting treats the fail marker as a miss") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 1000);
  const TrialReport report = synthetic_report(config, 10, 0, 2);
  CHECK(report.aggregates.fail_count == 2);
  CHECK(report.aggregates.miss_count == 2);
  CHECK(report.aggregates.covered_count == 8);
}

TEST_CASE("estimate_covered compares against the exact band") {
  // epsilon 0.25 is exact in binary: the band around 100 is exactly [75, 125]
  CHECK(estimate_covered(EstimateResult::of(125, 0), 100, 0.25));
  CHECK_FALSE(estimate_covered(EstimateResult::of(126, 0), 100, 0.25));
  CHECK(estimate_covered(EstimateResult::of(75, 0), 100, 0.25));
  CHECK_FALSE(estimate_covered(EstimateResult::of(74, 0), 100, 0.25));
  CHECK(estimate_covered(EstimateResult::of(25, 2), 100, 0.25));
  CHECK_FALSE(estimate_covered(EstimateResult::fail(), 100, 0.25));
  // zero stays inside the band only when the truth is zero
  CHECK_FALSE(estimate_covered(EstimateResult::of(0, 0), 100, 0.25));
  CHECK(estimate_covered(EstimateResult::of(0, 0), 0, 0.25));
  // an estimate at or beyond 2^64 is outside any 64-bit band
  CHECK_FALSE(estimate_covered(EstimateResult::of(1, 64), 100, 0.25));
  CHECK_FALSE(estimate_covered(EstimateResult::of(1, 200), 100, 0.25));
}

TEST_CASE("the band uses the binary value of epsilon") {
  // 0.2 as a double is a hair above one fifth, so the integer boundary at
  // 120000 is inside the band around 100000 and 120001 is the first miss
  CHECK(estimate_covered(EstimateResult::of(120000, 0), 100000, 0.2));
  CHECK_FALSE(estimate_covered(EstimateResult::of(120001, 0), 100000, 0.2));
  CHECK(estimate_covered(EstimateResult::of(80000, 0), 100000, 0.2));
  CHECK_FALSE(estimate_covered(EstimateResult::of(79999, 0), 100000, 0.2));
}

TEST_CASE("coverage check accepts zero misses") {
  const SketchConfig config = SketchConfig::create(0.2, 0.1, 1000);
  const auto result = coverage_check(synthetic_report(config, 400, 0, 0), 0.1);
  CHECK(result.status == CheckStatus::kPass);
}

TEST_CASE("coverage check rejects 80 misses of 400 at delta 0.1") {
  const SketchConfig config = SketchConfig::create(0.2, 0.1, 1000);
  const auto result = coverage_check(synthetic_report(config, 400, 80, 0), 0.1);
  CHECK(result.status == CheckStatus::kFail);
}

TEST_CASE("coverage check passes exactly at the quantile boundary") {
  const SketchConfig config = SketchConfig::create(0.2, 0.1, 1000);
  // the 99th percentile of Binomial(100, 0.1) is 18
  CHECK(coverage_check(synthetic_report(config, 100, 18, 0), 0.1).status ==
        CheckStatus::kPass);
  CHECK(coverage_check(synthetic_report(config, 100, 19, 0), 0.1).status ==
        CheckStatus::kFail);
}

TEST_CASE("coverage check requires a nonempty report") {
  const SketchConfig config = SketchConfig::create(0.2, 0.1, 1000);
  TrialReport empty;
  empty.config = config;
  CHECK_THROWS_AS(coverage_check(empty, 0.1), f0::ParameterError);
}

TEST_CASE("fail-rate check tolerates nothing") {
  const SketchConfig config = SketchConfig::create(0.2, 0.1, 1000);
  CHECK(fail_rate_check(synthetic_report(config, 10000, 0, 0)).status ==
        CheckStatus::kPass);
  CHECK(fail_rate_check(synthetic_report(config, 10000, 1, 1)).status ==
        CheckStatus::kFail);
}

TEST_CASE("fail-rate check is skipped under a thresh override") {
  const SketchConfig config =
      SketchConfig::create(0.2, 0.1, 1000).with_thresh_override(2);
  const auto result = fail_rate_check(synthetic_report(config, 100, 5, 5));
  CHECK(result.status == CheckStatus::kSkipped);
  CHECK(result.passed());
}

TEST_CASE("memory check scans the records") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 1000);
  TrialReport report = synthetic_report(config, 10, 0, 0);
  CHECK(memory_check(report).status == CheckStatus::kPass);
  report.records[3].peak_samples = config.thresh + 1;  // negative control
  CHECK(memory_check(report).status == CheckStatus::kFail);
}

TEST_CASE("halving epsilon quadruples the memory budget") {
  CHECK(f0::compute_thresh(0.2, 0.1, 200000) == 7180);
  CHECK(f0::compute_thresh(0.1, 0.1, 200000) == 28718);
  const double ratio = 28718.0 / 7180.0;
  CHECK(ratio > 3.99);
  CHECK(ratio < 4.01);
}

TEST_CASE("single-element streams estimate exactly, at zero error") {
  const SketchConfig config = SketchConfig::create(0.2, 0.1, 1000);
  StreamSpec spec;
  spec.kind = StreamKind::kSingleElement;
  spec.f0_target = 1;
  spec.length = 100;
  RunOptions options;
  options.trials = 32;
  options.master_seed = 9;
  const TrialReport report = run_trials(config, spec, options);
  for (const TrialRecord& r : report.records) {
    REQUIRE_FALSE(r.failed);
    REQUIRE(r.relative_error == 0.0);
    REQUIRE(*r.estimate.value.as_uint64() == 1);
  }
}

TEST_CASE("run options are validated") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 100);
  RunOptions options;
  options.trials = 0;
  CHECK_THROWS_AS(run_trials(config, distinct_run(10), options),
                  f0::ParameterError);
  options.trials = 1;
  options.parallelism = 0;
  CHECK_THROWS_AS(run_trials(config, distinct_run(10), options),
                  f0::ParameterError);
  options.parallelism = 1;
  CHECK_THROWS_AS(run_trials(config, distinct_run(500), options),
                  f0::ParameterError);  // longer than the bound
}

TEST_CASE("reports serialize with a stable schema") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 1000);
  RunOptions options;
  options.trials = 3;
  options.master_seed = 5;
  const TrialReport report = run_trials(config, distinct_run(100), options);
  const std::vector<f0::CheckResult> checks = {
      coverage_check(report, config.delta),
      fail_rate_check(report),
      memory_check(report),
  };
  const f0::Json j = f0::report_to_json(report, checks);
  CHECK(j["schema_version"] == f0::kReportSchemaVersion);
  CHECK(j["kind"] == "validate");
  CHECK(j["config"]["thresh"].get<std::uint64_t>() >= 36);
  CHECK(j["stream"]["kind"] == "distinct_run");
  CHECK(j["aggregates"]["trials"] == 3);
  CHECK(j["all_checks_pass"] == true);
  CHECK(j["records"].size() == 3);
  CHECK(j["checks"].size() == 3);
  CHECK(j["records"][0]["estimate"]["value"] == 100);

  const std::string csv = f0::report_to_csv(report);
  // header plus one row per trial
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("estimates beyond the safe JSON integer range fall back to the "
          "exact decimal string") {
  const f0::Json big = f0::estimate_to_json(EstimateResult::of(3, 64));
  CHECK(big["value"].is_null());
  CHECK(big["value_str"] == "55340232221128654848");
  CHECK(big["count"] == 3);
  CHECK(big["halvings"] == 64);
  const f0::Json small = f0::estimate_to_json(EstimateResult::of(5, 2));
  CHECK(small["value"] == 20);
}

TEST_CASE("csv rows leave estimate fields blank on a failed trial") {
  const SketchConfig config = SketchConfig::create(0.5, 0.5, 1000);
  const TrialReport report = synthetic_report(config, 2, 1, 1);
  const std::string csv = f0::report_to_csv(report);
  CHECK(csv.find("0,true,,,,,false,") != std::string::npos);
  CHECK(csv.find("1,false,100,100,0,") != std::string::npos);
}
