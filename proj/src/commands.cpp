#include "gmr/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "gmr/parallel.hpp"
#include "gmr/synth.hpp"

#ifndef GMR_VERSION
#define GMR_VERSION "0.0.0"
#endif

namespace gmr::cli {

std::string file_digest(const fs::path& path) {
  const std::string bytes = io::read_text(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed for " + path.string());
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

io::Json digests(const std::vector<fs::path>& paths) {
  io::Json j = io::Json::object();
  for (const auto& p : paths) j[p.string()] = "sha256:" + file_digest(p);
  return j;
}

EvalConfig resolve_eval_config(const EvalOptions& opts, io::Json* taus_out = nullptr) {
  io::Json doc = io::Json::object();
  if (opts.config) doc = io::read_config(*opts.config);
  if (taus_out != nullptr && doc.is_object() && doc.contains("taus")) *taus_out = doc["taus"];
  EvalConfig cfg = io::eval_config_from_json(doc);
  if (opts.tau) cfg.tau = *opts.tau;
  if (opts.ks) cfg.ks = *opts.ks;
  if (opts.grid) cfg.grid = ThresholdGrid(*opts.grid);
  cfg.validate();
  return cfg;
}

}  // namespace

void write_manifest(const fs::path& out_dir, const std::string& command, const io::Json& config,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                    std::optional<std::uint64_t> seed) {
  io::Json j;
  j["command"] = command;
  j["toolkit_version"] = GMR_VERSION;
  j["config"] = config;
  j["inputs"] = digests(inputs);
  j["outputs"] = digests(outputs);
  j["seed"] = seed ? io::Json(*seed) : io::Json(nullptr);
  j["timestamp"] = utc_timestamp();
  io::write_text(out_dir / "manifest.json", io::canonical_dump(j));
}

MetricReport cmd_eval(const EvalOptions& opts) {
  const auto cfg = resolve_eval_config(opts);
  const auto samples = io::read_samples(opts.samples);
  const auto preds = io::read_predictions(opts.preds);
  const auto report = evaluate(samples, preds, cfg, opts.threads);

  const auto json_path = opts.out_dir / "report.json";
  const auto md_path = opts.out_dir / "report.md";
  io::write_text(json_path, io::canonical_dump(io::report_to_json(report, cfg.ks)));
  io::write_text(md_path, io::report_to_markdown(report, cfg.ks));
  write_manifest(opts.out_dir, "eval", io::to_json(cfg), {opts.samples, opts.preds}, {json_path, md_path},
                 std::nullopt);
  return report;
}

SweepTable cmd_sweep(const SweepOptions& opts) {
  io::Json config_taus;
  const auto cfg = resolve_eval_config(opts.eval, &config_taus);
  std::vector<double> taus = {0.4, 0.6, 0.8};
  if (!config_taus.is_null()) {
    try {
      taus = config_taus.get<std::vector<double>>();
    } catch (const io::Json::exception&) {
      throw ConfigError("config key 'taus' must be an array of numbers");
    }
  }
  if (opts.taus) taus = *opts.taus;
  const auto samples = io::read_samples(opts.eval.samples);
  const auto preds = io::read_predictions(opts.eval.preds);
  const auto table = sweep(samples, preds, taus, cfg, opts.eval.threads);

  const auto json_path = opts.eval.out_dir / "sweep.json";
  const auto md_path = opts.eval.out_dir / "sweep.md";
  io::write_text(json_path, io::canonical_dump(io::sweep_to_json(table, cfg.ks)));
  io::write_text(md_path, io::sweep_to_markdown(table, cfg.ks));
  auto snapshot = io::to_json(cfg);
  snapshot["taus"] = taus;
  write_manifest(opts.eval.out_dir, "sweep", snapshot, {opts.eval.samples, opts.eval.preds},
                 {json_path, md_path}, std::nullopt);
  return table;
}

namespace {

BuildStats write_build(const std::vector<SourceRecord>& records, const OffsetTable& offsets,
                       const BuildConfig& cfg, const fs::path& out_dir, fs::path* samples_out,
                       fs::path* stats_out) {
  const auto built = build_dataset(records, offsets, cfg);
  std::vector<io::Json> rows;
  rows.reserve(built.samples.size());
  for (const auto& s : built.samples) rows.push_back(io::to_json(s));
  *samples_out = out_dir / "samples.jsonl";
  *stats_out = out_dir / "stats.json";
  io::write_text(*samples_out, io::to_jsonl(rows));
  io::write_text(*stats_out, io::canonical_dump(io::stats_to_json(built.stats)));
  return built.stats;
}

}  // namespace

BuildStats cmd_build(const BuildOptions& opts) {
  BuildConfig cfg;
  if (opts.config) cfg = io::build_config_from_json(io::read_config(*opts.config));
  if (opts.seed) cfg.sampling.seed = *opts.seed;
  OffsetTable offsets = OffsetTable::soccer_defaults();
  if (opts.offsets) offsets = io::offsets_from_json(io::read_config(*opts.offsets));
  const auto records = io::read_records(opts.records);

  fs::path samples_path, stats_path;
  const auto stats = write_build(records, offsets, cfg, opts.out_dir, &samples_path, &stats_path);
  io::Json snapshot;
  snapshot["build"] = io::to_json(cfg);
  snapshot["offsets"] = io::to_json(offsets);
  std::vector<fs::path> inputs = {opts.records};
  if (opts.offsets) inputs.push_back(*opts.offsets);
  write_manifest(opts.out_dir, "build", snapshot, inputs, {samples_path, stats_path}, cfg.sampling.seed);
  return stats;
}

RewardRunSummary score_reward_stream(std::istream& in, std::ostream& out, std::ostream& err,
                                     const RewardConfig& cfg) {
  RewardRunSummary summary;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    io::Json result;
    try {
      const auto req = io::reward_request_from_json(io::Json::parse(line));
      result = io::reward_result_to_json(req.sample_id, score_answer(req.raw_output, req.ground_truth,
                                                                     req.duration_s, cfg));
      ++summary.scored;
    } catch (const std::exception& e) {
      const std::string msg = dynamic_cast<const io::Json::exception*>(&e) ? std::string("invalid JSON: ") + e.what()
                                                                            : e.what();
      err << "line " << line_no << ": " << msg << "\n";
      result = io::Json::object();
      result["line"] = line_no;
      result["error"] = msg;
      ++summary.malformed;
    }
    out << result.dump() << "\n";
  }
  return summary;
}

void cmd_synth(const SynthOptions& opts) {
  io::Json doc = io::Json::object();
  if (opts.config) doc = io::read_config(*opts.config);
  if (!doc.is_object()) throw ConfigError("synth config must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (k != "corpus" && k != "build" && k != "perturb") throw ConfigError("synth config: unknown key '" + k + "'");
  }
  auto corpus_cfg = io::corpus_config_from_json(doc.value("corpus", io::Json::object()));
  auto build_cfg = io::build_config_from_json(doc.value("build", io::Json::object()));
  PerturbConfig perturb_cfg;
  if (doc.contains("perturb")) perturb_cfg = io::perturb_config_from_json(doc["perturb"]);
  if (opts.seed) {
    corpus_cfg.seed = *opts.seed;
    build_cfg.sampling.seed = *opts.seed;
    perturb_cfg.seed = *opts.seed;
  }

  const auto corpus = gen_corpus(corpus_cfg);
  std::vector<io::Json> record_rows;
  for (const auto& r : corpus.records) record_rows.push_back(io::to_json(r));
  const auto records_path = opts.out_dir / "records.jsonl";
  io::write_text(records_path, io::to_jsonl(record_rows));

  const auto built = build_dataset(corpus.records, OffsetTable::soccer_defaults(), build_cfg);
  std::vector<io::Json> sample_rows, pred_rows;
  for (const auto& s : built.samples) sample_rows.push_back(io::to_json(s));
  for (const auto& p : perturb(built.samples, perturb_cfg)) pred_rows.push_back(io::to_json(p));
  const auto samples_path = opts.out_dir / "samples.jsonl";
  const auto preds_path = opts.out_dir / "predictions.jsonl";
  const auto stats_path = opts.out_dir / "stats.json";
  io::write_text(samples_path, io::to_jsonl(sample_rows));
  io::write_text(preds_path, io::to_jsonl(pred_rows));
  io::write_text(stats_path, io::canonical_dump(io::stats_to_json(built.stats)));

  io::Json snapshot;
  snapshot["corpus"] = io::to_json(corpus_cfg);
  snapshot["build"] = io::to_json(build_cfg);
  snapshot["perturb"] = io::to_json(perturb_cfg);
  std::vector<fs::path> inputs;
  if (opts.config) inputs.push_back(*opts.config);
  write_manifest(opts.out_dir, "synth", snapshot, inputs, {records_path, samples_path, preds_path, stats_path},
                 corpus_cfg.seed);
}

int run(int argc, char** argv) {
  CLI::App app{"Generalized moment retrieval toolkit: evaluation, reward scoring and dataset building"};
  app.set_version_flag("--version", GMR_VERSION);
  app.require_subcommand(1);

  EvalOptions eval_opts;
  eval_opts.threads = threads_from_env();
  auto add_eval_flags = [](CLI::App* sub, EvalOptions& o) {
    sub->add_option("--samples", o.samples, "samples.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("--preds", o.preds, "predictions.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("--config", o.config, "JSON config (tau, ks, grid, taus)");
    sub->add_option("--tau", o.tau, "operating threshold (default 0.4)");
    sub->add_option("--k", o.ks, "comma-separated k values (default 1,3,5)")->delimiter(',');
    sub->add_option("--grid", o.grid, "comma-separated IoU thresholds (default 0.50..0.95)")->delimiter(',');
    sub->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  };

  auto* eval = app.add_subcommand("eval", "Evaluate predictions against samples");
  add_eval_flags(eval, eval_opts);

  SweepOptions sweep_opts;
  sweep_opts.eval.threads = eval_opts.threads;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate at several operating thresholds");
  add_eval_flags(sweep_cmd, sweep_opts.eval);
  sweep_cmd->add_option("--taus", sweep_opts.taus, "comma-separated thresholds (default 0.4,0.6,0.8)")
      ->delimiter(',');

  BuildOptions build_opts;
  auto* build = app.add_subcommand("build", "Build a balanced sample set from extraction records");
  build->add_option("--records", build_opts.records, "records.jsonl")->required()->check(CLI::ExistingFile);
  build->add_option("--offsets", build_opts.offsets, "offsets.json (default: built-in soccer table)");
  build->add_option("--config", build_opts.config, "build config JSON (window, sampling, styles)");
  build->add_option("--seed", build_opts.seed, "sampling seed override");
  build->add_option("--out-dir", build_opts.out_dir, "output directory")->capture_default_str();

  RewardOptions reward_opts;
  std::optional<fs::path> reward_output;
  auto* reward = app.add_subcommand("reward", "Score generated answers with the GRPO reward");
  reward->add_option("--input", reward_opts.input, "batch JSONL, '-' for stdin")->required();
  reward->add_option("--config", reward_opts.config, "reward config JSON");
  reward->add_option("--output", reward_output, "scored JSONL (default stdout)");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and perturbed predictions");
  synth->add_option("--config", synth_opts.config, "synth config JSON (corpus, build, perturb)");
  synth->add_option("--seed", synth_opts.seed, "seed override for corpus, sampling and perturbation");
  synth->add_option("--out-dir", synth_opts.out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*eval) {
      cmd_eval(eval_opts);
    } else if (*sweep_cmd) {
      cmd_sweep(sweep_opts);
    } else if (*build) {
      auto stats = cmd_build(build_opts);
      std::cerr << "built " << stats.counts.total() << " samples (null " << stats.counts.null << ", single "
                << stats.counts.single << ", multi " << stats.counts.multi << ")\n";
    } else if (*reward) {
      const auto cfg = reward_opts.config ? io::reward_config_from_json(io::read_config(*reward_opts.config))
                                          : RewardConfig{};
      std::ifstream file_in;
      std::istream* in = &std::cin;
      if (reward_opts.input != "-") {
        file_in.open(reward_opts.input);
        if (!file_in) throw InputError("cannot open " + reward_opts.input.string());
        in = &file_in;
      }
      std::ofstream file_out;
      std::ostream* out = &std::cout;
      if (reward_output) {
        if (reward_output->has_parent_path()) fs::create_directories(reward_output->parent_path());
        file_out.open(*reward_output);
        if (!file_out) throw InputError("cannot write " + reward_output->string());
        out = &file_out;
      }
      const auto summary = score_reward_stream(*in, *out, std::cerr, cfg);
      if (reward_output) {
        file_out.close();
        std::vector<fs::path> inputs;
        if (reward_opts.input != "-") inputs.push_back(reward_opts.input);
        write_manifest(reward_output->parent_path().empty() ? fs::path(".") : reward_output->parent_path(),
                       "reward", io::to_json(cfg), inputs, {*reward_output}, std::nullopt);
      }
      if (summary.malformed > 0) return kInputError;
    } else if (*synth) {
      cmd_synth(synth_opts);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace gmr::cli
