#include "gmr/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace gmr::io {

namespace {

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string("field '") + what + "' must be a number");
  return j.get<double>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string("field '") + what + "' must be a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("field '") + what + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(text(v, what));
  return out;
}

std::vector<TemporalSpan> span_list(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("field '") + what + "' must be an array of [start, end]");
  std::vector<TemporalSpan> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2) {
      throw InputError(std::string("field '") + what + "' rows must be [start, end]");
    }
    out.push_back({number(row[0], what), number(row[1], what)});
  }
  return out;
}

Json span_rows(const std::vector<TemporalSpan>& spans) {
  Json rows = Json::array();
  for (const auto& s : spans) rows.push_back(Json::array({s.start_s, s.end_s}));
  return rows;
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path, T (*parse)(const Json&)) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = Json::parse(line);
      out.push_back(parse(j));
    } catch (const Json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    } catch (const InputError& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// Config helpers: unknown keys and wrong types are configuration errors.
void allow_keys(const Json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
  }
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

Json to_json(const Sample& s) {
  Json q;
  q["id"] = s.query.query_id;
  q["text"] = s.query.text;
  q["event_type"] = s.query.event_type;
  q["attributes"] = s.query.attributes;
  q["style"] = to_string(s.query.style);
  Json j;
  j["sample_id"] = s.sample_id;
  j["clip_id"] = s.clip_id;
  j["duration_s"] = s.clip_duration_s;
  j["query"] = std::move(q);
  j["ground_truth"] = span_rows(s.ground_truth);
  return j;
}

Sample sample_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("sample line must be a JSON object");
  Sample s;
  s.sample_id = text(field(j, "sample_id"), "sample_id");
  s.clip_id = text(field(j, "clip_id"), "clip_id");
  s.clip_duration_s = number(field(j, "duration_s"), "duration_s");
  const auto& q = field(j, "query");
  if (!q.is_object()) throw InputError("field 'query' must be an object");
  s.query.query_id = text(field(q, "id"), "query.id");
  s.query.text = text(field(q, "text"), "query.text");
  s.query.event_type = text(field(q, "event_type"), "query.event_type");
  if (auto it = q.find("attributes"); it != q.end()) s.query.attributes = string_list(*it, "query.attributes");
  if (auto it = q.find("style"); it != q.end()) {
    auto style = parse_query_style(text(*it, "query.style"));
    if (!style) throw InputError("unknown query.style '" + it->get<std::string>() + "'");
    s.query.style = *style;
  }
  s.ground_truth = span_list(field(j, "ground_truth"), "ground_truth");
  validate(s);
  return s;
}

Json to_json(const PredictionRecord& p) {
  Json rows = Json::array();
  for (const auto& w : p.windows) rows.push_back(Json::array({w.span.start_s, w.span.end_s, w.confidence}));
  Json j;
  j["sample_id"] = p.sample_id;
  j["windows"] = std::move(rows);
  if (p.existence_score) j["existence_score"] = *p.existence_score;
  return j;
}

PredictionRecord prediction_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("prediction line must be a JSON object");
  PredictionRecord p;
  p.sample_id = text(field(j, "sample_id"), "sample_id");
  const auto& rows = field(j, "windows");
  if (!rows.is_array()) throw InputError("field 'windows' must be an array of [start, end, conf]");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3) throw InputError("field 'windows' rows must be [start, end, conf]");
    p.windows.push_back({{number(row[0], "windows"), number(row[1], "windows")}, number(row[2], "windows")});
  }
  if (auto it = j.find("existence_score"); it != j.end() && !it->is_null()) {
    p.existence_score = number(*it, "existence_score");
  }
  validate(p);
  sort_windows(p.windows);
  return p;
}

Json to_json(const SourceRecord& r) {
  Json j;
  j["vid"] = r.vid;
  j["key_tuple"] = r.key_tuple;
  j["timestamp"] = r.timestamps;
  j["video_duration_s"] = r.video_duration_s;
  return j;
}

SourceRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("record line must be a JSON object");
  SourceRecord r;
  r.vid = text(field(j, "vid"), "vid");
  r.key_tuple = string_list(field(j, "key_tuple"), "key_tuple");
  const Json* ts = nullptr;
  if (auto it = j.find("timestamp"); it != j.end()) ts = &*it;
  else if (auto it2 = j.find("timestamps"); it2 != j.end()) ts = &*it2;
  if (ts == nullptr) throw InputError("missing field 'timestamp'");
  if (ts->is_number()) {
    r.timestamps.push_back(ts->get<double>());
  } else if (ts->is_array()) {
    for (const auto& t : *ts) r.timestamps.push_back(number(t, "timestamp"));
  } else {
    throw InputError("field 'timestamp' must be a number or an array of numbers");
  }
  r.video_duration_s = number(field(j, "video_duration_s"), "video_duration_s");
  r.validate();
  return r;
}

std::vector<Sample> read_samples(const std::filesystem::path& path) { return read_jsonl(path, &sample_from_json); }

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  return read_jsonl(path, &prediction_from_json);
}

std::vector<SourceRecord> read_records(const std::filesystem::path& path) { return read_jsonl(path, &record_from_json); }

std::string to_jsonl(const std::vector<Json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

EvalConfig eval_config_from_json(const Json& j) {
  allow_keys(j, {"tau", "taus", "ks", "grid"}, "eval config");
  EvalConfig cfg;
  read_opt(j, "tau", cfg.tau);
  read_opt(j, "ks", cfg.ks);
  if (auto it = j.find("grid"); it != j.end()) {
    std::vector<double> grid;
    read_opt(j, "grid", grid);
    cfg.grid = ThresholdGrid(grid);
  }
  cfg.validate();
  return cfg;
}

Json to_json(const EvalConfig& cfg) {
  Json j;
  j["tau"] = cfg.tau;
  j["ks"] = cfg.ks;
  j["grid"] = std::vector<double>(cfg.grid.values().begin(), cfg.grid.values().end());
  return j;
}

BuildConfig build_config_from_json(const Json& j) {
  allow_keys(j, {"window", "sampling", "styles"}, "build config");
  BuildConfig cfg;
  if (auto it = j.find("window"); it != j.end()) {
    allow_keys(*it, {"window_len_s", "overlap_s", "min_tail_s"}, "build config window");
    read_opt(*it, "window_len_s", cfg.windows.window_len_s);
    read_opt(*it, "overlap_s", cfg.windows.overlap_s);
    read_opt(*it, "min_tail_s", cfg.windows.min_tail_s);
  }
  if (auto it = j.find("sampling"); it != j.end()) {
    allow_keys(*it, {"alpha", "beta", "max_rounds", "max_swaps", "seed", "granularity"}, "build config sampling");
    read_opt(*it, "alpha", cfg.sampling.alpha);
    read_opt(*it, "beta", cfg.sampling.beta);
    read_opt(*it, "max_rounds", cfg.sampling.max_rounds);
    read_opt(*it, "max_swaps", cfg.sampling.max_swaps);
    read_opt(*it, "seed", cfg.sampling.seed);
    if (auto g = it->find("granularity"); g != it->end()) {
      auto parsed = g->is_string() ? parse_granularity(g->get<std::string>()) : std::nullopt;
      if (!parsed) throw ConfigError("granularity must be 'event_type' or 'semantic_group'");
      cfg.sampling.granularity = *parsed;
    }
  }
  if (auto it = j.find("styles"); it != j.end()) {
    std::vector<std::string> names;
    read_opt(j, "styles", names);
    cfg.styles.clear();
    for (const auto& n : names) {
      auto style = parse_query_style(n);
      if (!style) throw ConfigError("unknown query style '" + n + "'");
      cfg.styles.push_back(*style);
    }
  }
  cfg.validate();
  return cfg;
}

Json to_json(const BuildConfig& cfg) {
  Json window;
  window["window_len_s"] = cfg.windows.window_len_s;
  window["overlap_s"] = cfg.windows.overlap_s;
  window["min_tail_s"] = cfg.windows.min_tail_s;
  Json sampling;
  sampling["alpha"] = cfg.sampling.alpha;
  sampling["beta"] = cfg.sampling.beta;
  sampling["max_rounds"] = cfg.sampling.max_rounds;
  sampling["max_swaps"] = cfg.sampling.max_swaps;
  sampling["seed"] = cfg.sampling.seed;
  sampling["granularity"] = to_string(cfg.sampling.granularity);
  Json styles = Json::array();
  for (auto s : cfg.styles) styles.push_back(to_string(s));
  Json j;
  j["window"] = std::move(window);
  j["sampling"] = std::move(sampling);
  j["styles"] = std::move(styles);
  return j;
}

RewardConfig reward_config_from_json(const Json& j) {
  allow_keys(j,
             {"theta_grid", "n_max", "w_mr", "w_miou", "w_fmt", "r_fail", "null_correct", "null_fp_base",
              "null_fp_per_window", "empty_pred_penalty", "overlap_bonus_weight", "overlap_theta",
              "pen_zero_len", "pen_duration", "pen_excess", "clip_range"},
             "reward config");
  RewardConfig cfg;
  if (j.contains("theta_grid")) {
    std::vector<double> grid;
    read_opt(j, "theta_grid", grid);
    cfg.theta_grid = ThresholdGrid(grid);
  }
  read_opt(j, "n_max", cfg.n_max);
  read_opt(j, "w_mr", cfg.w_mr);
  read_opt(j, "w_miou", cfg.w_miou);
  read_opt(j, "w_fmt", cfg.w_fmt);
  read_opt(j, "r_fail", cfg.r_fail);
  read_opt(j, "null_correct", cfg.null_correct);
  read_opt(j, "null_fp_base", cfg.null_fp_base);
  read_opt(j, "null_fp_per_window", cfg.null_fp_per_window);
  read_opt(j, "empty_pred_penalty", cfg.empty_pred_penalty);
  read_opt(j, "overlap_bonus_weight", cfg.overlap_bonus_weight);
  read_opt(j, "overlap_theta", cfg.overlap_theta);
  read_opt(j, "pen_zero_len", cfg.pen_zero_len);
  read_opt(j, "pen_duration", cfg.pen_duration);
  read_opt(j, "pen_excess", cfg.pen_excess);
  if (j.contains("clip_range")) {
    std::array<double, 2> range{};
    read_opt(j, "clip_range", range);
    cfg.clip_lo = range[0];
    cfg.clip_hi = range[1];
  }
  cfg.validate();
  return cfg;
}

Json to_json(const RewardConfig& cfg) {
  Json j;
  j["theta_grid"] = std::vector<double>(cfg.theta_grid.values().begin(), cfg.theta_grid.values().end());
  j["n_max"] = cfg.n_max;
  j["w_mr"] = cfg.w_mr;
  j["w_miou"] = cfg.w_miou;
  j["w_fmt"] = cfg.w_fmt;
  j["r_fail"] = cfg.r_fail;
  j["null_correct"] = cfg.null_correct;
  j["null_fp_base"] = cfg.null_fp_base;
  j["null_fp_per_window"] = cfg.null_fp_per_window;
  j["empty_pred_penalty"] = cfg.empty_pred_penalty;
  j["overlap_bonus_weight"] = cfg.overlap_bonus_weight;
  j["overlap_theta"] = cfg.overlap_theta;
  j["pen_zero_len"] = cfg.pen_zero_len;
  j["pen_duration"] = cfg.pen_duration;
  j["pen_excess"] = cfg.pen_excess;
  j["clip_range"] = Json::array({cfg.clip_lo, cfg.clip_hi});
  return j;
}

CorpusConfig corpus_config_from_json(const Json& j) {
  allow_keys(j, {"n_videos", "events_per_video", "vocab_size", "seed", "min_duration_s", "max_duration_s"},
             "corpus config");
  CorpusConfig cfg;
  read_opt(j, "n_videos", cfg.n_videos);
  read_opt(j, "events_per_video", cfg.events_per_video);
  read_opt(j, "vocab_size", cfg.vocab_size);
  read_opt(j, "seed", cfg.seed);
  read_opt(j, "min_duration_s", cfg.min_duration_s);
  read_opt(j, "max_duration_s", cfg.max_duration_s);
  cfg.validate();
  return cfg;
}

Json to_json(const CorpusConfig& cfg) {
  Json j;
  j["n_videos"] = cfg.n_videos;
  j["events_per_video"] = cfg.events_per_video;
  j["vocab_size"] = cfg.vocab_size;
  j["seed"] = cfg.seed;
  j["min_duration_s"] = cfg.min_duration_s;
  j["max_duration_s"] = cfg.max_duration_s;
  return j;
}

PerturbConfig perturb_config_from_json(const Json& j) {
  allow_keys(j, {"jitter_sigma_s", "drop_rate", "hallucination_rate", "existence_noise", "seed"},
             "perturb config");
  PerturbConfig cfg;
  read_opt(j, "jitter_sigma_s", cfg.jitter_sigma_s);
  read_opt(j, "drop_rate", cfg.drop_rate);
  read_opt(j, "hallucination_rate", cfg.hallucination_rate);
  read_opt(j, "existence_noise", cfg.existence_noise);
  read_opt(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

Json to_json(const PerturbConfig& cfg) {
  Json j;
  j["jitter_sigma_s"] = cfg.jitter_sigma_s;
  j["drop_rate"] = cfg.drop_rate;
  j["hallucination_rate"] = cfg.hallucination_rate;
  j["existence_noise"] = cfg.existence_noise;
  j["seed"] = cfg.seed;
  return j;
}

namespace {

OffsetPair offset_pair(const Json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("fwd") || !j.contains("bwd") || !j["fwd"].is_number() ||
      !j["bwd"].is_number()) {
    throw ConfigError("offsets for " + what + " must be {\"fwd\": <s>, \"bwd\": <s>}");
  }
  return {j["fwd"].get<double>(), j["bwd"].get<double>()};
}

Json offset_json(OffsetPair p) {
  Json j;
  j["fwd"] = p.fwd_s;
  j["bwd"] = p.bwd_s;
  return j;
}

}  // namespace

OffsetTable offsets_from_json(const Json& j) {
  allow_keys(j, {"events", "default"}, "offset table");
  OffsetTable table;
  if (auto it = j.find("events"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("offset table 'events' must be an object");
    for (const auto& [event, pair] : it->items()) table.set(event, offset_pair(pair, event));
  }
  if (auto it = j.find("default"); it != j.end() && !it->is_null()) {
    table.set_default(offset_pair(*it, "default"));
  }
  return table;
}

Json to_json(const OffsetTable& table) {
  Json events = Json::object();
  for (const auto& [event, pair] : table.entries()) events[event] = offset_json(pair);
  Json j;
  j["events"] = std::move(events);
  j["default"] = table.fallback() ? offset_json(*table.fallback()) : Json(nullptr);
  return j;
}

double canonical_number(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  double y = std::strtod(buf, nullptr);
  return y == 0.0 ? 0.0 : y;  // no "-0.0"
}

namespace {

Json canonicalize(const Json& j) {
  if (j.is_number_float()) return canonical_number(j.get<double>());
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(canonicalize(v));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = canonicalize(v);
    return out;
  }
  return j;
}

std::string k_key(const char* prefix, std::size_t k) { return std::string(prefix) + "@" + std::to_string(k); }

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
  return buf;
}

std::string tau_label(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", tau);
  return buf;
}

}  // namespace

std::string canonical_dump(const Json& j) { return canonicalize(j).dump(2) + "\n"; }

Json report_to_json(const MetricReport& r, const std::vector<std::size_t>& ks) {
  Json j;
  j["rej_f1"] = r.rej_f1;
  j["auroc"] = r.auroc ? Json(*r.auroc) : Json(nullptr);
  j["map"] = r.map;
  for (auto k : ks) j[k_key("mr", k)] = r.mr_at_k.at(k);
  for (auto k : ks) j[k_key("mr_plus", k)] = r.mr_plus_at_k.at(k);
  for (auto k : ks) j[k_key("g_miou", k)] = r.g_miou_at_k.at(k);
  Json c;
  c["queries"] = r.counts.queries;
  c["positives"] = r.counts.positives;
  c["multi"] = r.counts.multi;
  c["tp_r"] = r.counts.tp_r;
  c["fp_r"] = r.counts.fp_r;
  c["fn_r"] = r.counts.fn_r;
  j["counts"] = std::move(c);
  return j;
}

std::string report_to_markdown(const MetricReport& r, const std::vector<std::size_t>& ks) {
  std::ostringstream md;
  md << "# GMR evaluation (tau = " << tau_label(r.tau) << ")\n\n";
  md << "Null-set rejection: AUROC, Rej-F1. Temporal localization (positive queries): mAP, mR@k, mR+@k. "
        "Overall GMR: G-mIoU@k.\n\n";
  md << "| AUROC | Rej-F1 | mAP |";
  for (auto k : ks) md << " mR@" << k << " |";
  for (auto k : ks) md << " mR+@" << k << " |";
  for (auto k : ks) md << " G-mIoU@" << k << " |";
  md << "\n|";
  for (std::size_t i = 0; i < 3 + 3 * ks.size(); ++i) md << "---|";
  md << "\n| " << (r.auroc ? pct(*r.auroc) : std::string("n/a")) << " | " << pct(r.rej_f1) << " | " << pct(r.map)
     << " |";
  for (auto k : ks) md << " " << pct(r.mr_at_k.at(k)) << " |";
  for (auto k : ks) md << " " << pct(r.mr_plus_at_k.at(k)) << " |";
  for (auto k : ks) md << " " << pct(r.g_miou_at_k.at(k)) << " |";
  md << "\n\nQueries: " << r.counts.queries << " (positive " << r.counts.positives << ", multi-moment "
     << r.counts.multi << "); TP_r " << r.counts.tp_r << ", FP_r " << r.counts.fp_r << ", FN_r " << r.counts.fn_r
     << ".\n";
  return md.str();
}

Json sweep_to_json(const SweepTable& t, const std::vector<std::size_t>& ks) {
  Json per_tau = Json::array();
  for (std::size_t i = 0; i < t.taus.size(); ++i) {
    Json row;
    row["tau"] = t.taus[i];
    row["report"] = report_to_json(t.reports[i], ks);
    per_tau.push_back(std::move(row));
  }
  Json ap;
  for (auto k : ks) ap[k_key("g_miou", k)] = t.ap_g_miou_at_k.at(k);
  ap["rej_f1"] = t.ap_rej_f1;
  Json j;
  j["taus"] = t.taus;
  j["per_tau"] = std::move(per_tau);
  j["ap"] = std::move(ap);
  return j;
}

std::string sweep_to_markdown(const SweepTable& t, const std::vector<std::size_t>& ks) {
  std::ostringstream md;
  md << "# Threshold sweep\n\n| Metric |";
  for (double tau : t.taus) md << " tau=" << tau_label(tau) << " |";
  md << " AP |\n|---|";
  for (std::size_t i = 0; i <= t.taus.size(); ++i) md << "---|";
  md << "\n";
  for (auto k : ks) {
    md << "| G-mIoU@" << k << " |";
    for (const auto& r : t.reports) md << " " << pct(r.g_miou_at_k.at(k)) << " |";
    md << " " << pct(t.ap_g_miou_at_k.at(k)) << " |\n";
  }
  md << "| Rej-F1 |";
  for (const auto& r : t.reports) md << " " << pct(r.rej_f1) << " |";
  md << " " << pct(t.ap_rej_f1) << " |\n";
  return md.str();
}

Json stats_to_json(const BuildStats& stats) {
  auto counts_json = [](const LabelCounts& c) {
    Json j;
    j["null"] = c.null;
    j["single"] = c.single;
    j["multi"] = c.multi;
    return j;
  };
  const double total = static_cast<double>(stats.counts.total());
  auto share = [&](std::size_t n) { return total > 0 ? 100.0 * static_cast<double>(n) / total : 0.0; };
  Json j;
  j["total"] = stats.counts.total();
  j["null_pct"] = share(stats.counts.null);
  j["single_pct"] = share(stats.counts.single);
  j["multi_pct"] = share(stats.counts.multi);
  j["positive_pct"] = share(stats.counts.single + stats.counts.multi);
  j["counts"] = counts_json(stats.counts);
  Json per_type = Json::object();
  for (const auto& [type, c] : stats.per_type) per_type[type] = counts_json(c);
  j["per_type"] = std::move(per_type);
  j["windows"] = stats.windows;
  j["candidates"] = stats.candidates;
  j["swaps"] = stats.swaps;
  return j;
}

RewardRequest reward_request_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("reward line must be a JSON object");
  RewardRequest r;
  r.sample_id = text(field(j, "sample_id"), "sample_id");
  r.raw_output = text(field(j, "raw_output"), "raw_output");
  r.duration_s = number(field(j, "duration_s"), "duration_s");
  if (!(r.duration_s > 0.0)) throw InputError("field 'duration_s' must be positive");
  r.ground_truth = span_list(field(j, "ground_truth"), "ground_truth");
  for (const auto& g : r.ground_truth) {
    if (!g.is_valid_ground_truth()) throw InputError("ground_truth spans need 0 <= start < end");
  }
  return r;
}

Json reward_result_to_json(const std::string& sample_id, const RewardBreakdown& b) {
  Json j;
  j["sample_id"] = sample_id;
  j["reward"] = b.reward;
  j["format_class"] = to_string(b.format_class);
  j["content_reward"] = b.content_reward ? Json(*b.content_reward) : Json(nullptr);
  j["format_reward"] = b.format_reward;
  return j;
}

}  // namespace gmr::io
