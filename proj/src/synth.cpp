#include "gmr/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "gmr/random.hpp"

namespace gmr {

namespace {

constexpr std::array<const char*, 9> kEvents = {"save", "dribble", "tackle",      "block",       "clearance",
                                               "shot", "foul",    "yellow card", "substitution"};
constexpr std::array<const char*, 12> kTeams = {"Canada", "France",  "Brazil", "Japan",   "Ghana", "Spain",
                                               "Mexico", "Nigeria", "Italy",  "Denmark", "Chile", "Korea"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

}  // namespace

void CorpusConfig::validate() const {
  if (n_videos == 0) throw ConfigError("n_videos must be positive");
  if (vocab_size == 0) throw ConfigError("vocab_size must be positive");
  if (!(min_duration_s > 0.0 && min_duration_s <= max_duration_s)) {
    throw ConfigError("synthetic durations need 0 < min_duration_s <= max_duration_s");
  }
}

std::vector<std::string> synth_key_tuple(std::size_t index) {
  const std::size_t e = index % kEvents.size();
  const std::size_t t = (index / kEvents.size()) % kTeams.size();
  const std::size_t lap = index / (kEvents.size() * kTeams.size());
  std::string attr = std::string("by players from ") + kTeams[t];
  if (lap > 0) attr += " " + std::to_string(lap + 1);
  return {kEvents[e], attr};
}

SynthCorpus gen_corpus(const CorpusConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SynthCorpus corpus;
  for (std::size_t v = 0; v < cfg.n_videos; ++v) {
    char vid[32];
    std::snprintf(vid, sizeof vid, "synth_%04zu.mp4", v);
    const double span = std::floor(cfg.max_duration_s - cfg.min_duration_s);
    const double duration =
        cfg.min_duration_s + static_cast<double>(rng.uniform_index(static_cast<std::uint64_t>(span) + 1));
    corpus.durations[vid] = duration;

    std::vector<SourceRecord> recs(cfg.vocab_size);
    for (std::size_t i = 0; i < cfg.vocab_size; ++i) {
      recs[i].vid = vid;
      recs[i].key_tuple = synth_key_tuple(i);
      recs[i].video_duration_s = duration;
    }
    for (std::size_t e = 0; e < cfg.events_per_video; ++e) {
      const auto which = rng.uniform_index(cfg.vocab_size);
      const double t = std::floor(rng.uniform(0.0, duration));
      recs[which].timestamps.push_back(t);
    }
    for (auto& r : recs) {
      std::sort(r.timestamps.begin(), r.timestamps.end());
      r.timestamps.erase(std::unique(r.timestamps.begin(), r.timestamps.end()), r.timestamps.end());
      corpus.records.push_back(std::move(r));
    }
  }
  return corpus;
}

SynthCorpus gen_corpus(std::size_t n_videos, std::size_t events_per_video, std::size_t vocab_size,
                       std::uint64_t seed) {
  CorpusConfig cfg;
  cfg.n_videos = n_videos;
  cfg.events_per_video = events_per_video;
  cfg.vocab_size = vocab_size;
  cfg.seed = seed;
  return gen_corpus(cfg);
}

std::vector<PredictionRecord> oracle_predictions(std::span<const Sample> samples) {
  std::vector<PredictionRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    PredictionRecord p;
    p.sample_id = s.sample_id;
    for (const auto& gt : s.ground_truth) p.windows.push_back({gt, 1.0});
    sort_windows(p.windows);
    p.existence_score = s.is_positive() ? 1.0 : 0.0;
    out.push_back(std::move(p));
  }
  return out;
}

void PerturbConfig::validate() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!(jitter_sigma_s >= 0.0) || !std::isfinite(jitter_sigma_s)) {
    throw ConfigError("jitter_sigma_s must be non-negative");
  }
  if (!unit(drop_rate) || !unit(hallucination_rate) || !unit(existence_noise)) {
    throw ConfigError("perturbation rates must lie in [0, 1]");
  }
}

std::vector<PredictionRecord> perturb(std::span<const Sample> samples, const PerturbConfig& cfg) {
  cfg.validate();
  std::vector<PredictionRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    Rng rng(stream_seed(cfg.seed, s.sample_id));
    const double duration = s.clip_duration_s;
    PredictionRecord p;
    p.sample_id = s.sample_id;
    for (const auto& gt : s.ground_truth) {
      const double u_drop = rng.uniform01();
      const double n_start = rng.triangular(1.0);
      const double n_end = rng.triangular(1.0);
      if (u_drop < cfg.drop_rate) continue;
      double a = std::clamp(gt.start_s + cfg.jitter_sigma_s * n_start, 0.0, duration);
      double b = std::clamp(gt.end_s + cfg.jitter_sigma_s * n_end, 0.0, duration);
      if (b < a) std::swap(a, b);
      p.windows.push_back({{a, b}, 1.0});
    }
    const double u_hall = rng.uniform01();
    const double u_pos = rng.uniform01();
    const double u_len = rng.uniform01();
    const double u_conf = rng.uniform01();
    if (u_hall < cfg.hallucination_rate) {
      const double len = std::min(duration, 2.0 + 18.0 * u_len);
      const double start = u_pos * (duration - len);
      p.windows.push_back({{start, start + len}, 0.5 * u_conf});
    }
    const double u_flip = rng.uniform01();
    const double u_val = rng.uniform01();
    double existence = s.is_positive() ? 1.0 : 0.0;
    if (u_flip < cfg.existence_noise) existence = u_val;
    p.existence_score = existence;
    sort_windows(p.windows);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Sample> synth_samples(std::size_t n_samples, std::size_t max_moments, double null_fraction,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(n_samples);
  const double duration = 150.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    Sample s;
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", i);
    s.sample_id = id;
    s.clip_id = std::string("clip") + id;
    s.clip_duration_s = duration;
    const auto key = synth_key_tuple(rng.uniform_index(18));
    s.query.event_type = key[0];
    s.query.attributes = {key[1]};
    s.query.query_id = join_key(key);
    s.query.text = diversify(key[0], s.query.attributes, QueryStyle::Original);
    const bool null = rng.uniform01() < null_fraction;
    const std::size_t n = null || max_moments == 0 ? 0 : 1 + rng.uniform_index(max_moments);
    for (std::size_t m = 0; m < n; ++m) {
      const double len = 2.0 + std::floor(rng.uniform(0.0, 28.0));
      const double start = std::floor(rng.uniform(0.0, duration - len));
      s.ground_truth.push_back({start, start + len});
    }
    std::sort(s.ground_truth.begin(), s.ground_truth.end(),
              [](const TemporalSpan& a, const TemporalSpan& b) { return a.start_s < b.start_s; });
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gmr
