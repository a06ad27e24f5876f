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
//
// Command-line front end: estimate distinct counts from token or binary
// streams, check them against the exact counter, generate benchmark
// streams, run the statistical validation harness, and checkpoint/resume
// long runs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "f0/f0.hpp"
#include "f0/report_io.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitEstimateFail = 1;  // the sketch gave up, or checks failed
constexpr int kExitUsage = 2;
constexpr int kExitInputFormat = 3;
constexpr int kExitBoundExceeded = 4;
constexpr int kExitSnapshot = 5;

constexpr const char* kEnvPrefix = "F0SKETCH_";

std::string env_name(const std::string& flag) {
  std::string name = kEnvPrefix;
  for (const char c : flag) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  }
  return name;
}

std::vector<std::uint8_t> read_binary(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    const std::string s = buffer.str();
    return std::vector<std::uint8_t>(s.begin(), s.end());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw f0::ParameterError("input: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string s = buffer.str();
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

void write_binary(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw f0::ParameterError("output: cannot open '" + path + "' for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw f0::ParameterError("output: write to '" + path + "' failed");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw f0::ParameterError("output: cannot open '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw f0::ParameterError("output: write to '" + path + "' failed");
  }
}

// u64le stream format: consecutive little-endian 8-byte records, no header.
std::vector<std::uint64_t> decode_u64le(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() % 8 != 0) {
    throw f0::InputFormatError("u64le input has a truncated record",
                               bytes.size() / 8 + 1);
  }
  std::vector<std::uint64_t> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[i * 8 + b];
    out[i] = v;
  }
  return out;
}

std::vector<std::uint8_t> encode_u64le(const std::vector<std::uint64_t>& items) {
  std::vector<std::uint8_t> out;
  out.reserve(items.size() * 8);
  for (const std::uint64_t v : items) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  return out;
}

// tokens format: UTF-8 lines, LF-terminated. The final empty segment after
// the last LF is framing, not an element; a last line without LF still
// counts.
std::vector<std::string> decode_tokens(const std::vector<std::uint8_t>& bytes) {
  std::vector<std::string> out;
  std::string current;
  for (const std::uint8_t b : bytes) {
    if (b == '\n') {
      out.push_back(current);
      current.clear();
    } else {
      current.push_back(static_cast<char>(b));
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

std::vector<std::uint8_t> encode_tokens(const std::vector<std::string>& tokens) {
  std::vector<std::uint8_t> out;
  for (const std::string& t : tokens) {
    out.insert(out.end(), t.begin(), t.end());
    out.push_back('\n');
  }
  return out;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text << '\n';
  } else {
    write_text(output_path, text);
  }
}

struct CommonFlags {
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t stream_bound = 0;
  std::uint64_t seed = 0;
  std::string input;
  std::string output;
  std::string mode = "tokens";
  std::string snapshot;
  std::uint64_t thresh_override = 0;
};

f0::SketchConfig make_config(const CommonFlags& flags) {
  f0::SketchConfig config =
      f0::SketchConfig::create(flags.epsilon, flags.delta, flags.stream_bound);
  if (flags.thresh_override != 0) {
    std::cerr << "warning: thresh override is a testing device; the accuracy "
                 "guarantee is void\n";
    config = config.with_thresh_override(flags.thresh_override);
  }
  return config;
}

void add_mode_flag(CLI::App* cmd, std::string& mode) {
  cmd->add_option("--mode", mode, "input format: tokens or u64le")
      ->envname(env_name("mode"))
      ->check(CLI::IsMember({"tokens", "u64le"}));
}

struct StreamFlags {
  std::string kind = "repeated_shuffle";
  std::uint64_t f0 = 100000;
  std::uint64_t length = 0;  // 0: derived from the kind where possible
  std::uint64_t repeat = 2;
  double zipf_exponent = 1.1;
  std::uint64_t stream_seed = 0;
};

void add_stream_flags(CLI::App* cmd, StreamFlags& flags) {
  cmd->add_option("--stream-kind", flags.kind,
                  "distinct_run, repeated_shuffle, single_element, zipf or blocks")
      ->envname(env_name("stream-kind"));
  cmd->add_option("--f0", flags.f0, "exact distinct count of the stream")
      ->envname(env_name("f0"));
  cmd->add_option("--length", flags.length,
                  "stream length (derived for distinct_run/repeated_shuffle "
                  "when omitted)")
      ->envname(env_name("length"));
  cmd->add_option("--repeat", flags.repeat,
                  "occurrences per element (repeated_shuffle)")
      ->envname(env_name("repeat"));
  cmd->add_option("--zipf-s", flags.zipf_exponent, "zipf exponent")
      ->envname(env_name("zipf-s"));
  cmd->add_option("--stream-seed", flags.stream_seed, "stream generator seed")
      ->envname(env_name("stream-seed"));
}

f0::StreamSpec make_stream_spec(const StreamFlags& flags) {
  f0::StreamSpec spec;
  spec.kind = f0::parse_stream_kind(flags.kind);
  spec.f0_target = flags.f0;
  spec.repeat = flags.repeat;
  spec.zipf_exponent = flags.zipf_exponent;
  spec.seed = flags.stream_seed;
  if (flags.length != 0) {
    spec.length = flags.length;
  } else if (spec.kind == f0::StreamKind::kDistinctRun) {
    spec.length = flags.f0;
  } else if (spec.kind == f0::StreamKind::kRepeatedShuffle) {
    spec.length = flags.f0 * flags.repeat;
  } else {
    throw f0::ParameterError("length: required for this stream kind");
  }
  f0::validate_stream_spec(spec);
  return spec;
}

std::uint8_t peek_snapshot_mode(const std::vector<std::uint8_t>& bytes) {
  // magic (8) + version (4) precede the mode byte
  if (bytes.size() < 13) throw f0::SnapshotError("snapshot truncated");
  return bytes[12];
}

template <typename T>
f0::Json sketch_report_json(const f0::Sketch<T>& sketch, std::uint64_t seed,
                            const std::string& mode) {
  f0::Json j;
  j["schema_version"] = f0::kReportSchemaVersion;
  j["kind"] = "estimate";
  j["mode"] = mode;
  j["config"] = f0::config_to_json(sketch.config());
  j["guarantees_void"] = sketch.config().guarantees_void();
  j["seed"] = seed;
  j["items_processed"] = sketch.items_processed();
  j["samples"] = sketch.samples().size();
  j["peak_samples"] = sketch.peak_samples();
  j["halvings"] = sketch.halvings();
  j["estimate"] = f0::estimate_to_json(sketch.estimate());
  return j;
}

template <typename T, typename Stream>
int run_estimate_stream(f0::Sketch<T>& sketch, const Stream& stream,
                        f0::RandomSource& source, std::uint64_t seed,
                        const std::string& mode, const std::string& output,
                        const std::string& snapshot_path) {
  sketch.process_stream(stream, source);
  f0::Json report = sketch_report_json(sketch, seed, mode);
  if (!snapshot_path.empty() && !sketch.failed()) {
    write_binary(snapshot_path, f0::snapshot_write(sketch, source));
    report["snapshot_written"] = snapshot_path;
  }
  emit(report.dump(2), output);
  return sketch.failed() ? kExitEstimateFail : kExitSuccess;
}

int cmd_estimate(const CommonFlags& flags) {
  const f0::SketchConfig config = make_config(flags);
  f0::RandomSource source(flags.seed);
  const auto bytes = read_binary(flags.input);
  if (flags.mode == "u64le") {
    f0::Sketch<std::uint64_t> sketch(config);
    return run_estimate_stream(sketch, decode_u64le(bytes), source, flags.seed,
                               flags.mode, flags.output, flags.snapshot);
  }
  f0::Sketch<std::string> sketch(config);
  return run_estimate_stream(sketch, decode_tokens(bytes), source, flags.seed,
                             flags.mode, flags.output, flags.snapshot);
}

int cmd_exact(const std::string& input, const std::string& mode,
              const std::string& output) {
  const auto bytes = read_binary(input);
  std::uint64_t f0_value = 0;
  std::uint64_t items = 0;
  if (mode == "u64le") {
    const auto stream = decode_u64le(bytes);
    items = stream.size();
    f0_value = f0::exact_f0(stream);
  } else {
    const auto stream = decode_tokens(bytes);
    items = stream.size();
    f0_value = f0::exact_f0(stream);
  }
  f0::Json j;
  j["schema_version"] = f0::kReportSchemaVersion;
  j["kind"] = "exact";
  j["mode"] = mode;
  j["f0"] = f0_value;
  j["items_processed"] = items;
  emit(j.dump(2), output);
  return kExitSuccess;
}

int cmd_resume(const std::string& snapshot_in, const std::string& input,
               std::string mode, const std::string& output,
               const std::string& snapshot_out) {
  const auto snapshot_bytes = read_binary(snapshot_in);
  const std::uint8_t snapshot_mode = peek_snapshot_mode(snapshot_bytes);
  const std::string expected = snapshot_mode == 0 ? "u64le" : "tokens";
  if (!mode.empty() && mode != expected) {
    throw f0::UsageError("mode: snapshot was taken in " + expected + " mode");
  }
  mode = expected;
  const auto bytes = read_binary(input);
  if (mode == "u64le") {
    auto restored = f0::snapshot_read<std::uint64_t>(snapshot_bytes);
    f0::Sketch<std::uint64_t> sketch = std::move(restored.sketch);
    f0::RandomSource source = restored.source;
    return run_estimate_stream(sketch, decode_u64le(bytes), source,
                               source.seed(), mode, output, snapshot_out);
  }
  auto restored = f0::snapshot_read<std::string>(snapshot_bytes);
  f0::Sketch<std::string> sketch = std::move(restored.sketch);
  f0::RandomSource source = restored.source;
  return run_estimate_stream(sketch, decode_tokens(bytes), source,
                             source.seed(), mode, output, snapshot_out);
}

int cmd_generate(const StreamFlags& stream_flags, const std::string& mode,
                 const std::string& output) {
  const f0::StreamSpec spec = make_stream_spec(stream_flags);
  const auto stream = f0::generate_stream(spec);
  const std::uint64_t truth = f0::exact_f0(stream);
  if (truth != spec.f0_target) {
    throw std::logic_error("stream generator broke its ground-truth contract");
  }
  if (mode == "u64le") {
    write_binary(output, encode_u64le(stream));
  } else {
    std::vector<std::string> tokens;
    tokens.reserve(stream.size());
    for (const std::uint64_t v : stream) tokens.push_back(std::to_string(v));
    write_binary(output, encode_tokens(tokens));
  }
  f0::Json sidecar;
  sidecar["schema_version"] = f0::kReportSchemaVersion;
  sidecar["kind"] = "stream_meta";
  sidecar["stream"] = f0::stream_spec_to_json(spec);
  sidecar["f0"] = truth;
  sidecar["length"] = stream.size();
  sidecar["mode"] = mode;
  const std::string sidecar_path = output + ".meta.json";
  write_text(sidecar_path, sidecar.dump(2) + "\n");

  f0::Json j;
  j["schema_version"] = f0::kReportSchemaVersion;
  j["kind"] = "generate";
  j["output"] = output;
  j["sidecar"] = sidecar_path;
  j["f0"] = truth;
  j["length"] = stream.size();
  j["mode"] = mode;
  std::cout << j.dump(2) << '\n';
  return kExitSuccess;
}

int cmd_validate(const CommonFlags& flags, const StreamFlags& stream_flags,
                 std::uint64_t trials, unsigned parallelism,
                 const std::string& report_format) {
  const f0::SketchConfig config = make_config(flags);
  const f0::StreamSpec spec = make_stream_spec(stream_flags);
  f0::RunOptions options;
  options.trials = trials;
  options.master_seed = flags.seed;
  options.parallelism = parallelism;
  const f0::TrialReport report = f0::run_trials(config, spec, options);

  const std::vector<f0::CheckResult> checks = {
      f0::coverage_check(report, config.delta),
      f0::fail_rate_check(report),
      f0::memory_check(report),
  };
  bool all_pass = true;
  for (const f0::CheckResult& c : checks) {
    const char* status = c.status == f0::CheckStatus::kPass      ? "PASS"
                         : c.status == f0::CheckStatus::kSkipped ? "SKIP"
                                                                 : "FAIL";
    std::cerr << c.name << ": " << status << " (" << c.detail << ")\n";
    if (!c.passed()) all_pass = false;
  }

  if (report_format == "csv") {
    emit(f0::report_to_csv(report), flags.output);
  } else {
    emit(f0::report_to_json(report, checks).dump(2), flags.output);
  }
  if (config.guarantees_void()) {
    // Informational mode: an overridden thresh voids the guarantee, so
    // check failures are reported but do not fail the tool.
    std::cerr << "note: thresh override set; checks are informational\n";
    return kExitSuccess;
  }
  return all_pass ? kExitSuccess : kExitEstimateFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming distinct-count estimator with exact power-of-two "
               "sampling probabilities"};
  app.require_subcommand(1);

  CommonFlags flags;
  StreamFlags stream_flags;
  std::uint64_t trials = 400;
  unsigned parallelism = std::max(1u, std::thread::hardware_concurrency());
  std::string report_format = "json";
  std::string exact_input;
  std::string exact_mode = "tokens";
  std::string exact_output;
  std::string resume_snapshot;
  std::string resume_mode;
  std::string resume_save_snapshot;

  auto add_config_flags = [&](CLI::App* cmd, bool required) {
    auto* e = cmd->add_option("--epsilon", flags.epsilon,
                              "relative accuracy, in (0, 1)")
                  ->envname(env_name("epsilon"));
    auto* d = cmd->add_option("--delta", flags.delta,
                              "failure probability, in (0, 1)")
                  ->envname(env_name("delta"));
    auto* m = cmd->add_option("--stream-bound", flags.stream_bound,
                              "upper bound on the stream length")
                  ->envname(env_name("stream-bound"));
    if (required) {
      e->required();
      d->required();
      m->required();
    }
    cmd->add_option("--seed", flags.seed, "coin-flip seed")
        ->envname(env_name("seed"));
    cmd->add_option("--thresh-override", flags.thresh_override,
                    "testing only: force the sample capacity (voids the "
                    "guarantee, prints a warning)")
        ->envname(env_name("thresh-override"));
  };

  CLI::App* estimate = app.add_subcommand(
      "estimate", "estimate the distinct count of a stream");
  add_config_flags(estimate, true);
  estimate->add_option("--input", flags.input, "stream file, or - for stdin")
      ->required()
      ->envname(env_name("input"));
  estimate->add_option("--output", flags.output, "report path (default stdout)")
      ->envname(env_name("output"));
  add_mode_flag(estimate, flags.mode);
  estimate->add_option("--snapshot", flags.snapshot,
                       "write the final sketch state to this path")
      ->envname(env_name("snapshot"));

  CLI::App* exact = app.add_subcommand(
      "exact", "count distinct elements exactly (linear space)");
  exact->add_option("--input", exact_input, "stream file, or - for stdin")
      ->required()
      ->envname(env_name("input"));
  exact->add_option("--output", exact_output, "report path (default stdout)")
      ->envname(env_name("output"));
  add_mode_flag(exact, exact_mode);

  CLI::App* validate = app.add_subcommand(
      "validate", "run Monte Carlo trials and check the statistical promises");
  flags.epsilon = 0.2;
  flags.delta = 0.1;
  flags.stream_bound = 200000;
  add_config_flags(validate, false);
  add_stream_flags(validate, stream_flags);
  validate->add_option("--trials", trials, "number of independent trials")
      ->envname(env_name("trials"))
      ->check(CLI::PositiveNumber);
  validate->add_option("--parallelism", parallelism, "worker threads")
      ->envname(env_name("parallelism"))
      ->check(CLI::PositiveNumber);
  validate->add_option("--report", report_format, "report format")
      ->envname(env_name("report"))
      ->check(CLI::IsMember({"json", "csv"}));
  validate->add_option("--output", flags.output, "report path (default stdout)")
      ->envname(env_name("output"));

  CLI::App* generate = app.add_subcommand(
      "generate", "write a synthetic stream with known distinct count");
  add_stream_flags(generate, stream_flags);
  generate->add_option("--output", flags.output, "stream file to write")
      ->required()
      ->envname(env_name("output"));
  add_mode_flag(generate, flags.mode);

  CLI::App* resume = app.add_subcommand(
      "resume", "load a snapshot and continue with more input");
  resume->add_option("--snapshot", resume_snapshot, "snapshot to load")
      ->required()
      ->envname(env_name("snapshot"));
  resume->add_option("--input", flags.input, "stream file, or - for stdin")
      ->required()
      ->envname(env_name("input"));
  resume->add_option("--output", flags.output, "report path (default stdout)")
      ->envname(env_name("output"));
  resume->add_option("--mode", resume_mode,
                     "must match the snapshot's mode when given")
      ->check(CLI::IsMember({"tokens", "u64le"}));
  resume->add_option("--save-snapshot", resume_save_snapshot,
                     "write the continued state to this path")
      ->envname(env_name("save-snapshot"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(flags);
    if (exact->parsed()) return cmd_exact(exact_input, exact_mode, exact_output);
    if (validate->parsed()) {
      if (stream_flags.length == 0 &&
          f0::parse_stream_kind(stream_flags.kind) ==
              f0::StreamKind::kRepeatedShuffle) {
        stream_flags.length = stream_flags.f0 * stream_flags.repeat;
      }
      return cmd_validate(flags, stream_flags, trials, parallelism,
                          report_format);
    }
    if (generate->parsed()) {
      return cmd_generate(stream_flags, flags.mode, flags.output);
    }
    if (resume->parsed()) {
      return cmd_resume(resume_snapshot, flags.input, resume_mode, flags.output,
                        resume_save_snapshot);
    }
  } catch (const f0::InputFormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputFormat;
  } catch (const f0::BoundExceededError& e) {
    std::cerr << "bound error: " << e.what() << '\n';
    return kExitBoundExceeded;
  } catch (const f0::SnapshotError& e) {
    std::cerr << "snapshot error: " << e.what() << '\n';
    return kExitSnapshot;
  } catch (const f0::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const f0::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
