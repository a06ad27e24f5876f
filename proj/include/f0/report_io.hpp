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
#include <string>
#include <vector>

#include <json.hpp>

#include "f0/estimate.hpp"
#include "f0/trials.hpp"

namespace f0 {

// Machine-readable report forms. Field order is fixed (ordered_json) so a
// report is bytewise reproducible from the same inputs.

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// 2^53, the largest integer a JSON consumer reading doubles keeps exact.
inline constexpr std::uint64_t kJsonSafeInteger = 1ULL << 53;

inline Json estimate_to_json(const EstimateResult& estimate) {
  Json j;
  j["failed"] = estimate.failed;
  if (estimate.failed) {
    j["value"] = nullptr;
    return j;
  }
  j["count"] = estimate.value.count;
  j["halvings"] = estimate.value.exponent;
  const auto exact = estimate.value.as_uint64();
  if (exact.has_value() && *exact < kJsonSafeInteger) {
    j["value"] = *exact;
  } else {
    j["value"] = nullptr;
  }
  j["value_str"] = estimate.value.to_decimal_string();
  return j;
}

inline Json config_to_json(const SketchConfig& config) {
  Json j;
  j["epsilon"] = config.epsilon;
  j["delta"] = config.delta;
  j["stream_bound"] = config.stream_bound;
  j["thresh"] = config.thresh;
  j["thresh_overridden"] = config.thresh_overridden;
  return j;
}

inline Json stream_spec_to_json(const StreamSpec& spec) {
  Json j;
  j["kind"] = std::string(stream_kind_name(spec.kind));
  j["f0"] = spec.f0_target;
  j["length"] = spec.length;
  if (spec.kind == StreamKind::kRepeatedShuffle) j["repeat"] = spec.repeat;
  if (spec.kind == StreamKind::kZipf) j["zipf_exponent"] = spec.zipf_exponent;
  j["seed"] = spec.seed;
  return j;
}

inline Json check_to_json(const CheckResult& check) {
  Json j;
  j["name"] = check.name;
  switch (check.status) {
    case CheckStatus::kPass: j["status"] = "pass"; break;
    case CheckStatus::kFail: j["status"] = "fail"; break;
    case CheckStatus::kSkipped: j["status"] = "skipped"; break;
  }
  j["method"] = check.method;
  j["detail"] = check.detail;
  return j;
}

inline Json record_to_json(const TrialRecord& record) {
  Json j;
  j["trial"] = record.trial;
  j["estimate"] = estimate_to_json(record.estimate);
  if (std::isnan(record.relative_error)) {
    j["relative_error"] = nullptr;
  } else {
    j["relative_error"] = record.relative_error;
  }
  j["covered"] = record.covered;
  j["final_halvings"] = record.final_halvings;
  j["peak_samples"] = record.peak_samples;
  return j;
}

inline Json aggregates_to_json(const TrialAggregates& agg) {
  Json j;
  j["trials"] = agg.trials;
  j["fail_count"] = agg.fail_count;
  j["covered_count"] = agg.covered_count;
  j["miss_count"] = agg.miss_count;
  j["coverage"] = agg.coverage;
  auto quantile = [](double v) -> Json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  j["error_p05"] = quantile(agg.error_p05);
  j["error_p50"] = quantile(agg.error_p50);
  j["error_p95"] = quantile(agg.error_p95);
  j["max_abs_error"] = agg.max_abs_error;
  j["peak_samples_max"] = agg.peak_samples_max;
  j["halvings_min"] = agg.halvings_min;
  j["halvings_max"] = agg.halvings_max;
  return j;
}

inline Json report_to_json(const TrialReport& report,
                           const std::vector<CheckResult>& checks,
                           bool include_records = true) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "validate";
  j["config"] = config_to_json(report.config);
  j["guarantees_void"] = report.config.guarantees_void();
  j["stream"] = stream_spec_to_json(report.stream);
  j["stream_mode"] = report.stream_mode == StreamMode::kFixedStream
                         ? "fixed"
                         : "per_trial";
  j["master_seed"] = report.master_seed;
  j["true_f0"] = report.true_f0;
  j["aggregates"] = aggregates_to_json(report.aggregates);
  Json check_array = Json::array();
  bool all_pass = true;
  for (const CheckResult& c : checks) {
    check_array.push_back(check_to_json(c));
    if (!c.passed()) all_pass = false;
  }
  j["checks"] = check_array;
  j["all_checks_pass"] = all_pass;
  if (include_records) {
    Json records = Json::array();
    for (const TrialRecord& r : report.records) {
      records.push_back(record_to_json(r));
    }
    j["records"] = records;
  }
  return j;
}

// One row per trial; aggregate lines belong to the JSON form.
inline std::string report_to_csv(const TrialReport& report) {
  std::string out =
      "trial,failed,estimate,count,halvings,relative_error,covered,"
      "final_halvings,peak_samples\n";
  for (const TrialRecord& r : report.records) {
    out += std::to_string(r.trial);
    out += r.failed ? ",true," : ",false,";
    if (!r.failed) {
      out += r.estimate.value.to_decimal_string();
      out += ',';
      out += std::to_string(r.estimate.value.count);
      out += ',';
      out += std::to_string(r.estimate.value.exponent);
      out += ',';
      out += std::to_string(r.relative_error);
    } else {
      out += ",,,";
    }
    out += r.covered ? ",true," : ",false,";
    out += std::to_string(r.final_halvings);
    out += ',';
    out += std::to_string(r.peak_samples);
    out += '\n';
  }
  return out;
}

}  // namespace f0
