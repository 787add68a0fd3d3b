#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmr/builder.hpp"
#include "gmr/io.hpp"
#include "gmr/metrics.hpp"

namespace gmr::cli {

namespace fs = std::filesystem;

/// Exit codes of the gmr binary.
enum ExitCode : int { kOk = 0, kInputError = 1, kConfigError = 2 };

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const fs::path& path);

/// manifest.json: command, config snapshot, input/output digests, version,
/// seed and UTC timestamp.
void write_manifest(const fs::path& out_dir, const std::string& command, const io::Json& config,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                    std::optional<std::uint64_t> seed);

struct EvalOptions {
  fs::path samples;
  fs::path preds;
  std::optional<fs::path> config;
  std::optional<double> tau;
  std::optional<std::vector<std::size_t>> ks;
  std::optional<std::vector<double>> grid;
  fs::path out_dir = ".";
  unsigned threads = 1;
};

/// Writes report.json, report.md and manifest.json.
MetricReport cmd_eval(const EvalOptions& opts);

struct SweepOptions {
  EvalOptions eval;
  std::optional<std::vector<double>> taus;  // default {0.4, 0.6, 0.8}
};

/// Writes sweep.json, sweep.md and manifest.json.
SweepTable cmd_sweep(const SweepOptions& opts);

struct BuildOptions {
  fs::path records;
  std::optional<fs::path> offsets;  // default: the soccer offset table
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  fs::path out_dir = ".";
};

/// Writes samples.jsonl, stats.json and manifest.json.
BuildStats cmd_build(const BuildOptions& opts);

struct RewardOptions {
  fs::path input;
  std::optional<fs::path> config;
};

struct RewardRunSummary {
  std::size_t scored = 0;
  std::size_t malformed = 0;
};

/// Scores each JSONL line of `in` and writes one line per input line to
/// `out`, in order. Malformed lines produce {"line", "error"} objects and are
/// reported on `err` with their line number.
RewardRunSummary score_reward_stream(std::istream& in, std::ostream& out, std::ostream& err,
                                     const RewardConfig& cfg);

struct SynthOptions {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  fs::path out_dir = ".";
};

/// Writes records.jsonl, samples.jsonl, predictions.jsonl, stats.json and
/// manifest.json.
void cmd_synth(const SynthOptions& opts);

/// Entry point for the gmr binary.
int run(int argc, char** argv);

}  // namespace gmr::cli
