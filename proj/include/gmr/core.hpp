#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmr {

/// Malformed or inconsistent input data (maps to CLI exit code 1).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed interval [start_s, end_s] in seconds, relative to a clip.
struct TemporalSpan {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }

  /// 0 <= start <= end, both finite. Zero-length spans are valid predictions.
  bool is_valid() const;
  /// Ground truth additionally needs positive length.
  bool is_valid_ground_truth() const { return is_valid() && start_s < end_s; }

  friend bool operator==(const TemporalSpan&, const TemporalSpan&) = default;
};

enum class QueryStyle { Original, Question, NounPhrase, Keyword, Verbose };

std::string to_string(QueryStyle style);
/// Accepts the snake_case names emitted by to_string().
std::optional<QueryStyle> parse_query_style(const std::string& name);

struct Query {
  std::string query_id;
  std::string text;
  std::string event_type;
  std::vector<std::string> attributes;
  QueryStyle style = QueryStyle::Original;
};

enum class SampleLabel { Null, Single, Multi };

std::string to_string(SampleLabel label);

struct Sample {
  std::string sample_id;
  std::string clip_id;
  double clip_duration_s = 0.0;
  Query query;
  std::vector<TemporalSpan> ground_truth;

  SampleLabel label() const {
    if (ground_truth.empty()) return SampleLabel::Null;
    return ground_truth.size() == 1 ? SampleLabel::Single : SampleLabel::Multi;
  }
  bool is_positive() const { return !ground_truth.empty(); }
};

/// Throws InputError when the sample breaks a data-model invariant.
void validate(const Sample& sample);

struct ScoredWindow {
  TemporalSpan span;
  double confidence = 0.0;
};

struct PredictionRecord {
  std::string sample_id;
  /// Rank order: confidence descending (see sort_windows).
  std::vector<ScoredWindow> windows;
  std::optional<double> existence_score;
};

/// Stable sort by confidence desc, then earlier start, then shorter span.
void sort_windows(std::vector<ScoredWindow>& windows);

/// Throws InputError on out-of-range spans, confidences or existence score.
void validate(const PredictionRecord& record);

/// IoU thresholds used by the localization metrics and the reward.
class ThresholdGrid {
 public:
  /// {0.50, 0.55, ..., 0.95}; each value is k/100 so 0.6 is the literal 0.6.
  ThresholdGrid();
  /// Throws ConfigError unless strictly increasing and inside (0, 1).
  explicit ThresholdGrid(std::vector<double> thresholds);

  std::span<const double> values() const { return thresholds_; }
  std::size_t size() const { return thresholds_.size(); }

 private:
  std::vector<double> thresholds_;
};

/// Temporal IoU. Returns 0 when the union has zero length.
double iou(const TemporalSpan& a, const TemporalSpan& b);

/// How greedy_match decides whether a (pred, gt) pair may be matched.
struct MatchMode {
  enum class Kind { Thresholded, NoThreshold, ForceMatch };
  Kind kind = Kind::Thresholded;
  double theta = 0.5;

  /// Pairs with IoU >= theta.
  static MatchMode thresholded(double theta) { return {Kind::Thresholded, theta}; }
  /// Pairs with IoU > 0.
  static MatchMode no_threshold() { return {Kind::NoThreshold, 0.0}; }
  /// Every pair, including IoU 0, until one side runs out.
  static MatchMode force_match() { return {Kind::ForceMatch, -1.0}; }

  bool admits(double pair_iou) const {
    switch (kind) {
      case Kind::Thresholded: return pair_iou >= theta;
      case Kind::NoThreshold: return pair_iou > 0.0;
      case Kind::ForceMatch: return true;
    }
    return false;
  }
};

struct MatchPair {
  std::size_t pred_index = 0;
  std::size_t gt_index = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;

  std::size_t count() const { return pairs.size(); }
  double iou_sum() const;
};

/// Dense |preds| x |gts| IoU table, row-major by prediction.
class IouMatrix {
 public:
  IouMatrix(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t pred, std::size_t gt) const { return values_[pred * cols_ + gt]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Greedy one-to-one matching. Predictions are visited in the given (rank)
/// order; each takes the unmatched ground truth of highest IoU that the mode
/// admits. Equal IoUs go to the earlier gt start, then the lower gt index.
/// Only the first `pred_limit` predictions take part.
MatchResult greedy_match(const IouMatrix& ious, std::span<const TemporalSpan> gts, MatchMode mode,
                         std::size_t pred_limit);

MatchResult greedy_match(std::span<const TemporalSpan> preds, std::span<const TemporalSpan> gts,
                         MatchMode mode);

/// Spans of a prediction record in rank order.
std::vector<TemporalSpan> spans_of(const PredictionRecord& record);

/// |M_k(q; theta)|: matches found by the top-min(k, |windows|) predictions.
std::size_t matched_count_at_k(const PredictionRecord& pred, std::span<const TemporalSpan> gts,
                               std::size_t k, double theta);

}  // namespace gmr
