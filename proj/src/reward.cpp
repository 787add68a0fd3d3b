#include "gmr/reward.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace gmr {

namespace {
constexpr std::string_view kOpenTag = "<answer>";
constexpr std::string_view kCloseTag = "</answer>";
}  // namespace

void RewardConfig::validate() const {
  if (n_max < 1) throw ConfigError("reward n_max must be at least 1");
  if (!(clip_lo <= clip_hi)) throw ConfigError("reward clip range is empty");
  if (!(w_fmt >= 0.0 && w_fmt <= 1.0)) throw ConfigError("reward w_fmt must lie in [0, 1]");
}

std::string to_string(FormatClass fc) {
  switch (fc) {
    case FormatClass::WellFormed: return "well_formed";
    case FormatClass::MalformedJson: return "malformed_json";
    case FormatClass::CorruptedContent: return "corrupted_content";
    case FormatClass::TruncatedTag: return "truncated_tag";
    case FormatClass::NoTags: return "no_tags";
  }
  return "no_tags";
}

ParseOutcome parse_answer(std::string_view raw) {
  ParseOutcome out;
  const auto open = raw.find(kOpenTag);
  if (open == std::string_view::npos) {
    out.format_class = FormatClass::NoTags;
    return out;
  }
  const auto body_start = open + kOpenTag.size();
  const auto close = raw.find(kCloseTag, body_start);
  if (close == std::string_view::npos) {
    out.format_class = FormatClass::TruncatedTag;
    return out;
  }
  const auto body = raw.substr(body_start, close - body_start);
  auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    out.format_class = FormatClass::MalformedJson;
    return out;
  }
  out.format_class = FormatClass::CorruptedContent;
  if (!doc.is_object()) return out;
  auto it = doc.find("relevant_windows");
  if (it == doc.end() || !it->is_array()) return out;
  std::vector<RawWindow> windows;
  windows.reserve(it->size());
  for (const auto& row : *it) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) return out;
    windows.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  out.format_class = FormatClass::WellFormed;
  out.windows = std::move(windows);
  return out;
}

double format_reward(FormatClass fc) {
  switch (fc) {
    case FormatClass::WellFormed: return 0.0;
    case FormatClass::MalformedJson: return -0.2;
    case FormatClass::CorruptedContent: return -0.3;
    case FormatClass::TruncatedTag: return -0.5;
    case FormatClass::NoTags: return -1.0;
  }
  return -1.0;
}

double sample_mr_at_k(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts,
                      std::size_t k, const ThresholdGrid& grid) {
  if (gts.empty() || preds.empty()) return 0.0;
  const std::size_t top = std::min(k, preds.size());
  IouMatrix ious(preds, gts);
  double sum = 0.0;
  for (double theta : grid.values()) {
    sum += static_cast<double>(greedy_match(ious, gts, MatchMode::thresholded(theta), top).count()) /
           static_cast<double>(gts.size());
  }
  return sum / static_cast<double>(grid.size());
}

double sample_miou_at_k(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts,
                        std::size_t k) {
  if (gts.empty() || preds.empty()) return 0.0;
  const std::size_t top = std::min(k, preds.size());
  IouMatrix ious(preds, gts);
  return greedy_match(ious, gts, MatchMode::force_match(), top).iou_sum() / static_cast<double>(gts.size());
}

std::vector<TemporalSpan> clip_windows(std::span<const RawWindow> windows, double duration) {
  std::vector<TemporalSpan> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    const double s = std::clamp(w.start, 0.0, duration);
    const double e = std::clamp(w.end, 0.0, duration);
    out.push_back({s, std::max(s, e)});
  }
  return out;
}

double validity_penalty(std::span<const RawWindow> windows, double duration, const RewardConfig& cfg) {
  const auto clipped = clip_windows(windows, duration);
  std::size_t n_zero = 0;
  std::size_t n_out_of_range = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (clipped[i].length() <= 0.0) ++n_zero;
    const auto& w = windows[i];
    const bool outside = w.start < 0.0 || w.end < 0.0 || w.start > duration || w.end > duration;
    if (outside) ++n_out_of_range;
  }
  const std::size_t n_excess = windows.size() > cfg.n_max ? windows.size() - cfg.n_max : 0;
  return cfg.pen_zero_len * static_cast<double>(n_zero) +
         cfg.pen_duration * static_cast<double>(n_out_of_range) +
         cfg.pen_excess * static_cast<double>(n_excess);
}

double content_reward(std::span<const RawWindow> windows, std::span<const TemporalSpan> gts,
                      double duration, const RewardConfig& cfg) {
  const std::size_t n = windows.size();
  const std::size_t m = gts.size();
  if (m == 0) {
    if (n == 0) return cfg.null_correct;
    return cfg.null_fp_base + cfg.null_fp_per_window * static_cast<double>(std::min(n, cfg.n_max));
  }
  if (n == 0) return cfg.empty_pred_penalty;

  const auto preds = clip_windows(windows, duration);
  double r = 0.0;
  for (std::size_t k = 1; k <= 3; ++k) {
    r += cfg.w_mr[k - 1] * sample_mr_at_k(preds, gts, k, cfg.theta_grid) +
         cfg.w_miou[k - 1] * sample_miou_at_k(preds, gts, k);
  }
  const auto overlap = greedy_match(preds, gts, MatchMode::thresholded(cfg.overlap_theta));
  r += cfg.overlap_bonus_weight * static_cast<double>(overlap.count()) / static_cast<double>(m);
  r += validity_penalty(windows, duration, cfg);
  return r;
}

double content_reward(const ParseOutcome& parse, std::span<const TemporalSpan> gts, double duration,
                      const RewardConfig& cfg) {
  static const std::vector<RawWindow> kEmpty;
  return content_reward(parse.windows ? *parse.windows : kEmpty, gts, duration, cfg);
}

RewardBreakdown score_answer(std::string_view raw, std::span<const TemporalSpan> gts, double duration,
                             const RewardConfig& cfg) {
  RewardBreakdown b;
  const auto parse = parse_answer(raw);
  b.format_class = parse.format_class;
  b.format_reward = format_reward(parse.format_class);
  if (parse.windows) {
    b.content_reward = content_reward(*parse.windows, gts, duration, cfg);
    b.reward = std::clamp(*b.content_reward + cfg.w_fmt * b.format_reward, cfg.clip_lo, cfg.clip_hi);
  } else {
    b.reward = cfg.w_fmt * b.format_reward + (1.0 - cfg.w_fmt) * cfg.r_fail;
  }
  return b;
}

}  // namespace gmr
