#include <algorithm>
#include <map>
#include <set>

#include "gmr/builder.hpp"

namespace gmr {

void BuildConfig::validate() const {
  windows.validate();
  sampling.validate();
  if (styles.empty()) throw ConfigError("build styles must be nonempty");
  std::set<QueryStyle> seen(styles.begin(), styles.end());
  if (seen.size() != styles.size()) throw ConfigError("build styles contain duplicates");
}

namespace {

// One record per (vid, key tuple), timestamps sorted and deduplicated.
std::map<std::string, std::vector<SourceRecord>> group_by_video(std::span<const SourceRecord> records) {
  std::map<std::string, std::map<std::string, SourceRecord>> merged;
  for (const auto& rec : records) {
    rec.validate();
    auto& slot = merged[rec.vid];
    auto [it, inserted] = slot.try_emplace(join_key(rec.key_tuple), rec);
    if (!inserted) {
      if (it->second.video_duration_s != rec.video_duration_s) {
        throw InputError("records of video " + rec.vid + " disagree on video_duration_s");
      }
      it->second.timestamps.insert(it->second.timestamps.end(), rec.timestamps.begin(), rec.timestamps.end());
    }
  }
  std::map<std::string, std::vector<SourceRecord>> out;
  for (auto& [vid, by_key] : merged) {
    double duration = by_key.begin()->second.video_duration_s;
    auto& list = out[vid];
    for (auto& [key, rec] : by_key) {
      if (rec.video_duration_s != duration) {
        throw InputError("records of video " + vid + " disagree on video_duration_s");
      }
      std::sort(rec.timestamps.begin(), rec.timestamps.end());
      rec.timestamps.erase(std::unique(rec.timestamps.begin(), rec.timestamps.end()), rec.timestamps.end());
      list.push_back(std::move(rec));
    }
  }
  return out;
}

void count_label(LabelCounts& c, SampleLabel label) {
  switch (label) {
    case SampleLabel::Null: ++c.null; break;
    case SampleLabel::Single: ++c.single; break;
    case SampleLabel::Multi: ++c.multi; break;
  }
}

}  // namespace

BuildOutput build_dataset(std::span<const SourceRecord> records, const OffsetTable& offsets,
                          const BuildConfig& cfg) {
  cfg.validate();
  BuildOutput out;
  std::vector<Candidate> candidates;
  for (const auto& [vid, recs] : group_by_video(records)) {
    const auto windows = segment_windows(recs.front().video_duration_s, cfg.windows);
    out.stats.windows += windows.size();
    auto derived = derive_samples(recs, windows);
    candidates.insert(candidates.end(), std::make_move_iterator(derived.begin()),
                      std::make_move_iterator(derived.end()));
  }
  out.stats.candidates = candidates.size();

  auto balanced = balance(std::move(candidates), cfg.sampling);
  out.stats.swaps = balanced.swaps.size();

  for (const auto& c : balanced.selected) {
    count_label(out.stats.counts, c.label());
    count_label(out.stats.per_type[c.event_type()], c.label());

    Sample base;
    base.clip_id = c.clip_id;
    base.clip_duration_s = c.window.length();
    base.query.query_id = c.group_key();
    base.query.event_type = c.event_type();
    base.query.attributes.assign(c.key_tuple.begin() + 1, c.key_tuple.end());
    for (double t : c.rel_timestamps) {
      base.ground_truth.push_back(expand_boundaries(t, c.event_type(), offsets, base.clip_duration_s));
    }
    std::stable_sort(base.ground_truth.begin(), base.ground_truth.end(),
                     [](const TemporalSpan& a, const TemporalSpan& b) { return a.start_s < b.start_s; });

    for (auto style : cfg.styles) {
      Sample s = base;
      s.sample_id = style == QueryStyle::Original ? c.sample_id : c.sample_id + "#" + to_string(style);
      s.query.style = style;
      s.query.text = diversify(s.query.event_type, s.query.attributes, style);
      out.samples.push_back(std::move(s));
    }
  }
  std::sort(out.samples.begin(), out.samples.end(),
            [](const Sample& a, const Sample& b) { return a.sample_id < b.sample_id; });
  return out;
}

}  // namespace gmr
