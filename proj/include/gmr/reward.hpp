#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmr/core.hpp"

namespace gmr {

/// Constants of the composite GRPO reward. Defaults are the published values.
struct RewardConfig {
  ThresholdGrid theta_grid;
  std::size_t n_max = 10;
  std::array<double, 3> w_mr = {0.45, 0.35, 0.20};
  std::array<double, 3> w_miou = {0.20, 0.15, 0.10};
  double w_fmt = 0.30;
  double r_fail = -1.0;
  double null_correct = 0.1;
  double null_fp_base = -0.3;
  double null_fp_per_window = -0.1;
  double empty_pred_penalty = -0.7;
  double overlap_bonus_weight = 0.15;
  double overlap_theta = 0.01;
  double pen_zero_len = -0.2;
  double pen_duration = -0.05;
  double pen_excess = -0.1;
  double clip_lo = -1.0;
  double clip_hi = 1.0;

  void validate() const;
};

enum class FormatClass { WellFormed, MalformedJson, CorruptedContent, TruncatedTag, NoTags };

std::string to_string(FormatClass fc);

/// Windows as the model wrote them: rank = order of appearance, endpoints
/// not yet clipped to the clip (they may be negative or reversed).
struct RawWindow {
  double start = 0.0;
  double end = 0.0;
};

struct ParseOutcome {
  std::optional<std::vector<RawWindow>> windows;  // set iff WellFormed
  FormatClass format_class = FormatClass::NoTags;
};

/// Classifies a generated answer into exactly one format tier.
ParseOutcome parse_answer(std::string_view raw);

double format_reward(FormatClass fc);

/// Per-sample mean recall over the grid for the first min(k, N) windows.
double sample_mr_at_k(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts,
                      std::size_t k, const ThresholdGrid& grid);
/// Sum of force-matched IoUs of the first min(k, N) windows, over M.
double sample_miou_at_k(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts,
                        std::size_t k);

/// Windows clipped to [0, duration]; reversed windows collapse to zero length.
std::vector<TemporalSpan> clip_windows(std::span<const RawWindow> windows, double duration);

double validity_penalty(std::span<const RawWindow> windows, double duration, const RewardConfig& cfg);

/// Content reward for a parsed window list (possibly empty).
double content_reward(std::span<const RawWindow> windows, std::span<const TemporalSpan> gts,
                      double duration, const RewardConfig& cfg);
double content_reward(const ParseOutcome& parse, std::span<const TemporalSpan> gts, double duration,
                      const RewardConfig& cfg);

struct RewardBreakdown {
  double reward = 0.0;
  FormatClass format_class = FormatClass::NoTags;
  double format_reward = 0.0;
  std::optional<double> content_reward;  // absent when parsing failed
};

RewardBreakdown score_answer(std::string_view raw, std::span<const TemporalSpan> gts, double duration,
                             const RewardConfig& cfg);

/// Final reward in [-1, 1].
inline double total_reward(std::string_view raw, std::span<const TemporalSpan> gts, double duration,
                           const RewardConfig& cfg) {
  return score_answer(raw, gts, duration, cfg).reward;
}

}  // namespace gmr
