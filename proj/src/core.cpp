#include "gmr/core.hpp"

#include <algorithm>
#include <cmath>

namespace gmr {

bool TemporalSpan::is_valid() const {
  return std::isfinite(start_s) && std::isfinite(end_s) && start_s >= 0.0 && start_s <= end_s;
}

std::string to_string(QueryStyle style) {
  switch (style) {
    case QueryStyle::Original: return "original";
    case QueryStyle::Question: return "question";
    case QueryStyle::NounPhrase: return "noun_phrase";
    case QueryStyle::Keyword: return "keyword";
    case QueryStyle::Verbose: return "verbose";
  }
  return "original";
}

std::optional<QueryStyle> parse_query_style(const std::string& name) {
  for (auto style : {QueryStyle::Original, QueryStyle::Question, QueryStyle::NounPhrase,
                     QueryStyle::Keyword, QueryStyle::Verbose}) {
    if (to_string(style) == name) return style;
  }
  return std::nullopt;
}

std::string to_string(SampleLabel label) {
  switch (label) {
    case SampleLabel::Null: return "null";
    case SampleLabel::Single: return "single";
    case SampleLabel::Multi: return "multi";
  }
  return "null";
}

void validate(const Sample& sample) {
  if (sample.sample_id.empty()) throw InputError("sample has an empty sample_id");
  if (!(sample.clip_duration_s > 0.0) || !std::isfinite(sample.clip_duration_s)) {
    throw InputError("sample " + sample.sample_id + ": duration_s must be positive");
  }
  if (sample.query.event_type.empty()) {
    throw InputError("sample " + sample.sample_id + ": query.event_type is empty");
  }
  for (const auto& gt : sample.ground_truth) {
    if (!gt.is_valid_ground_truth() || gt.end_s > sample.clip_duration_s) {
      throw InputError("sample " + sample.sample_id +
                       ": ground-truth span outside (0, duration_s] or of zero length");
    }
  }
}

void sort_windows(std::vector<ScoredWindow>& windows) {
  std::stable_sort(windows.begin(), windows.end(), [](const ScoredWindow& a, const ScoredWindow& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.span.start_s != b.span.start_s) return a.span.start_s < b.span.start_s;
    return a.span.length() < b.span.length();
  });
}

void validate(const PredictionRecord& record) {
  if (record.sample_id.empty()) throw InputError("prediction has an empty sample_id");
  for (const auto& w : record.windows) {
    if (!w.span.is_valid()) {
      throw InputError("prediction " + record.sample_id + ": window must satisfy 0 <= start <= end");
    }
    if (!std::isfinite(w.confidence)) {
      throw InputError("prediction " + record.sample_id + ": non-finite confidence");
    }
  }
  if (record.existence_score) {
    double s = *record.existence_score;
    if (!(s >= 0.0 && s <= 1.0)) {
      throw InputError("prediction " + record.sample_id + ": existence_score outside [0, 1]");
    }
  }
}

ThresholdGrid::ThresholdGrid() {
  for (int pct = 50; pct <= 95; pct += 5) thresholds_.push_back(pct / 100.0);
}

ThresholdGrid::ThresholdGrid(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
  if (thresholds_.empty()) throw ConfigError("threshold grid is empty");
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    double t = thresholds_[i];
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("threshold grid values must lie in (0, 1)");
    if (i > 0 && !(t > thresholds_[i - 1])) {
      throw ConfigError("threshold grid must be strictly increasing");
    }
  }
}

double iou(const TemporalSpan& a, const TemporalSpan& b) {
  double inter = std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s);
  if (inter <= 0.0) return 0.0;
  double uni = std::max(a.end_s, b.end_s) - std::min(a.start_s, b.start_s);
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double MatchResult::iou_sum() const {
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.iou;
  return sum;
}

IouMatrix::IouMatrix(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts)
    : rows_(preds.size()), cols_(gts.size()), values_(preds.size() * gts.size()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) values_[i * cols_ + j] = iou(preds[i], gts[j]);
  }
}

MatchResult greedy_match(const IouMatrix& ious, std::span<const TemporalSpan> gts, MatchMode mode,
                         std::size_t pred_limit) {
  MatchResult result;
  const std::size_t n_preds = std::min(pred_limit, ious.rows());
  const std::size_t n_gts = ious.cols();
  if (n_preds == 0 || n_gts == 0) return result;

  std::vector<bool> taken(n_gts, false);
  std::size_t remaining = n_gts;
  for (std::size_t p = 0; p < n_preds && remaining > 0; ++p) {
    std::optional<std::size_t> best;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < n_gts; ++g) {
      if (taken[g]) continue;
      double v = ious(p, g);
      if (!mode.admits(v)) continue;
      if (!best || v > best_iou || (v == best_iou && gts[g].start_s < gts[*best].start_s)) {
        best = g;
        best_iou = v;
      }
    }
    if (best) {
      taken[*best] = true;
      --remaining;
      result.pairs.push_back({p, *best, best_iou});
    }
  }
  return result;
}

MatchResult greedy_match(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts,
                         MatchMode mode) {
  IouMatrix ious(preds, gts);
  return greedy_match(ious, gts, mode, preds.size());
}

std::vector<TemporalSpan> spans_of(const PredictionRecord& record) {
  std::vector<TemporalSpan> spans;
  spans.reserve(record.windows.size());
  for (const auto& w : record.windows) spans.push_back(w.span);
  return spans;
}

std::size_t matched_count_at_k(const PredictionRecord& pred, std::span<const TemporalSpan> gts,
                               std::size_t k, double theta) {
  if (k == 0) throw ConfigError("k must be positive");
  auto spans = spans_of(pred);
  IouMatrix ious(spans, gts);
  return greedy_match(ious, gts, MatchMode::thresholded(theta), k).count();
}

}  // namespace gmr
