#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gmr/builder.hpp"
#include "gmr/core.hpp"

namespace gmr {

struct CorpusConfig {
  std::size_t n_videos = 20;
  std::size_t events_per_video = 40;
  std::size_t vocab_size = 10;
  std::uint64_t seed = 1;
  double min_duration_s = 600.0;
  double max_duration_s = 900.0;

  void validate() const;
};

struct SynthCorpus {
  /// One record per (video, vocabulary entry); entries with no events carry
  /// an empty timestamp list and only produce null-set samples.
  std::vector<SourceRecord> records;
  std::map<std::string, double> durations;
};

/// Vocabulary entry i: (event type, "by players from <team>").
std::vector<std::string> synth_key_tuple(std::size_t index);

SynthCorpus gen_corpus(const CorpusConfig& cfg);
SynthCorpus gen_corpus(std::size_t n_videos, std::size_t events_per_video, std::size_t vocab_size,
                       std::uint64_t seed);

/// Ground truth echoed back with unit confidences; existence 1 on positives,
/// 0 on null-set samples.
std::vector<PredictionRecord> oracle_predictions(std::span<const Sample> samples);

struct PerturbConfig {
  double jitter_sigma_s = 0.0;
  double drop_rate = 0.0;
  double hallucination_rate = 0.0;
  double existence_noise = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Noisy predictions. Every sample consumes a fixed number of draws from its
/// own stream (seeded by seed and sample_id), so configurations that differ
/// only in rates or sigma see the same underlying noise.
std::vector<PredictionRecord> perturb(std::span<const Sample> samples, const PerturbConfig& cfg);

/// A ready-made evaluation corpus: synthetic samples with boundary spans,
/// built without balancing so tests can control the label mix directly.
std::vector<Sample> synth_samples(std::size_t n_samples, std::size_t max_moments, double null_fraction,
                                  std::uint64_t seed);

}  // namespace gmr
