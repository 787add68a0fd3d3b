#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmr/core.hpp"

namespace gmr {

/// One aggregated extraction record: every timestamp of one key tuple in one
/// video. key_tuple = (event_type, attribute...).
struct SourceRecord {
  std::string vid;
  std::vector<std::string> key_tuple;
  std::vector<double> timestamps;
  double video_duration_s = 0.0;

  const std::string& event_type() const { return key_tuple.front(); }
  /// Throws InputError on an empty key tuple or out-of-range timestamps.
  void validate() const;
};

/// Joins a key tuple into the identifier used for semantic groups and query ids.
std::string join_key(std::span<const std::string> key_tuple);

struct WindowSpec {
  double window_len_s = 150.0;
  double overlap_s = 10.0;
  double min_tail_s = 30.0;

  void validate() const;
};

/// Absolute window within a source video.
struct ClipWindow {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }
  bool contains(double t) const { return t >= start_s && t < end_s; }
  friend bool operator==(const ClipWindow&, const ClipWindow&) = default;
};

/// Sliding windows of the given spec, with an end-anchored final window.
std::vector<ClipWindow> segment_windows(double duration, const WindowSpec& spec);

/// A (query, window) pair before balancing and boundary expansion.
struct Candidate {
  std::string sample_id;
  std::string clip_id;
  std::string vid;
  ClipWindow window;
  std::vector<std::string> key_tuple;
  /// Window-relative, ascending.
  std::vector<double> rel_timestamps;

  const std::string& event_type() const { return key_tuple.front(); }
  std::string group_key() const { return join_key(key_tuple); }
  SampleLabel label() const {
    if (rel_timestamps.empty()) return SampleLabel::Null;
    return rel_timestamps.size() == 1 ? SampleLabel::Single : SampleLabel::Multi;
  }
};

std::string make_clip_id(const std::string& vid, std::size_t window_index);

/// Positive or null-set candidates for every (record, window) pair of one
/// video. Window membership is half-open [start, end).
std::vector<Candidate> derive_samples(std::span<const SourceRecord> records,
                                      std::span<const ClipWindow> windows);

/// Least-filled-first allocation of `budget` units under per-type capacities.
/// Ties go to the smallest type identifier.
std::map<std::string, std::size_t> water_fill(const std::map<std::string, std::size_t>& capacities,
                                              std::size_t budget);

enum class GroupGranularity { EventType, SemanticGroup };

std::string to_string(GroupGranularity g);
std::optional<GroupGranularity> parse_granularity(const std::string& name);

struct SamplingConfig {
  double alpha = 2.0;  // singles per multi
  double beta = 1.0;   // negatives per positive
  std::size_t max_rounds = 10;
  std::size_t max_swaps = 1000;
  std::uint64_t seed = 0;
  GroupGranularity granularity = GroupGranularity::SemanticGroup;

  void validate() const;
};

/// floor(ratio * count) with a relative guard against representation error
/// (0.7 * 100 must give 70).
std::size_t ratio_floor(double ratio, std::size_t count);

struct SwapEvent {
  std::size_t round = 0;
  std::string from_clip;
  std::string to_clip;
  std::string key;
  /// True when the swap matched at semantic-group level, false at event type.
  bool group_level = false;
};

struct BalanceResult {
  /// Selected candidates sorted by sample_id.
  std::vector<Candidate> selected;
  std::size_t multi = 0;
  std::size_t singles = 0;
  std::size_t negatives = 0;
  std::map<std::string, std::size_t> single_allocation;
  /// Selected negative ids after Phase 2a, before any swap.
  std::vector<std::string> phase2a_negatives;
  std::vector<SwapEvent> swaps;
};

/// Two-phase balanced sampling. Throws InputError when there are no positives.
BalanceResult balance(std::vector<Candidate> candidates, const SamplingConfig& cfg);

struct OffsetPair {
  double fwd_s = 0.0;
  double bwd_s = 0.0;
  friend bool operator==(const OffsetPair&, const OffsetPair&) = default;
};

/// Per-event boundary offsets. Event names are matched case-insensitively.
class OffsetTable {
 public:
  /// The nine published soccer offsets, no default.
  static OffsetTable soccer_defaults();

  /// fwd must be positive so every expanded span has positive length.
  void set(const std::string& event_type, OffsetPair offsets);
  void set_default(std::optional<OffsetPair> offsets);

  /// Throws ConfigError for an unknown event when no default is set.
  OffsetPair lookup(const std::string& event_type) const;
  const std::map<std::string, OffsetPair>& entries() const { return entries_; }
  const std::optional<OffsetPair>& fallback() const { return default_; }

 private:
  std::map<std::string, OffsetPair> entries_;
  std::optional<OffsetPair> default_;
};

/// [max(0, t - bwd), min(window_len, t + fwd)].
TemporalSpan expand_boundaries(double t_rel, const std::string& event_type, const OffsetTable& offsets,
                               double window_len);

/// Rule-based rewrite of an (event, attributes) query into one surface style.
std::string diversify(const std::string& event_type, std::span<const std::string> attributes,
                      QueryStyle style);

struct BuildConfig {
  WindowSpec windows;
  SamplingConfig sampling;
  std::vector<QueryStyle> styles = {QueryStyle::Original};

  void validate() const;
};

struct LabelCounts {
  std::size_t null = 0;
  std::size_t single = 0;
  std::size_t multi = 0;

  std::size_t total() const { return null + single + multi; }
};

struct BuildStats {
  LabelCounts counts;
  std::map<std::string, LabelCounts> per_type;
  std::size_t windows = 0;
  std::size_t candidates = 0;
  std::size_t swaps = 0;
};

struct BuildOutput {
  std::vector<Sample> samples;
  BuildStats stats;
};

/// segment -> derive -> balance -> expand -> diversify.
BuildOutput build_dataset(std::span<const SourceRecord> records, const OffsetTable& offsets,
                          const BuildConfig& cfg);

}  // namespace gmr
