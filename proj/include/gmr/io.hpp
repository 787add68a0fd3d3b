#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmr/builder.hpp"
#include "gmr/core.hpp"
#include "gmr/metrics.hpp"
#include "gmr/reward.hpp"
#include "gmr/synth.hpp"

namespace gmr::io {

using Json = nlohmann::ordered_json;

// Record schemas. *_from_json throw InputError naming the offending field.
Json to_json(const Sample& sample);
Sample sample_from_json(const Json& j);
Json to_json(const PredictionRecord& pred);
PredictionRecord prediction_from_json(const Json& j);
Json to_json(const SourceRecord& record);
SourceRecord record_from_json(const Json& j);

// JSONL readers skip blank lines; errors carry "path:line".
std::vector<Sample> read_samples(const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
std::vector<SourceRecord> read_records(const std::filesystem::path& path);

/// One compact JSON document per line.
std::string to_jsonl(const std::vector<Json>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
/// Parses a JSON file; syntax errors become ConfigError.
Json read_config(const std::filesystem::path& path);

// Configuration documents. Unknown keys are rejected with ConfigError.
EvalConfig eval_config_from_json(const Json& j);
Json to_json(const EvalConfig& cfg);
BuildConfig build_config_from_json(const Json& j);
Json to_json(const BuildConfig& cfg);
RewardConfig reward_config_from_json(const Json& j);
Json to_json(const RewardConfig& cfg);
CorpusConfig corpus_config_from_json(const Json& j);
Json to_json(const CorpusConfig& cfg);
PerturbConfig perturb_config_from_json(const Json& j);
Json to_json(const PerturbConfig& cfg);
OffsetTable offsets_from_json(const Json& j);
Json to_json(const OffsetTable& table);

/// Rounds to 9 significant digits so equal results print identically.
double canonical_number(double x);
/// Two-space indented dump with every float canonicalized.
std::string canonical_dump(const Json& j);

/// Keys: rej_f1, auroc, map, mr@k, mr_plus@k, g_miou@k, counts.
Json report_to_json(const MetricReport& report, const std::vector<std::size_t>& ks);
std::string report_to_markdown(const MetricReport& report, const std::vector<std::size_t>& ks);
Json sweep_to_json(const SweepTable& table, const std::vector<std::size_t>& ks);
std::string sweep_to_markdown(const SweepTable& table, const std::vector<std::size_t>& ks);
Json stats_to_json(const BuildStats& stats);

struct RewardRequest {
  std::string sample_id;
  std::string raw_output;
  double duration_s = 0.0;
  std::vector<TemporalSpan> ground_truth;
};

RewardRequest reward_request_from_json(const Json& j);
Json reward_result_to_json(const std::string& sample_id, const RewardBreakdown& b);

}  // namespace gmr::io
