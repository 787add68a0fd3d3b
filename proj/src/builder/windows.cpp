#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gmr/builder.hpp"

namespace gmr {

void SourceRecord::validate() const {
  if (vid.empty()) throw InputError("record has an empty vid");
  if (key_tuple.empty() || key_tuple.front().empty()) {
    throw InputError("record " + vid + ": key_tuple needs a nonempty event type");
  }
  if (!(video_duration_s > 0.0) || !std::isfinite(video_duration_s)) {
    throw InputError("record " + vid + ": video_duration_s must be positive");
  }
  for (double t : timestamps) {
    if (!(t >= 0.0 && t <= video_duration_s)) {
      throw InputError("record " + vid + ": timestamp outside [0, video_duration_s]");
    }
  }
}

std::string join_key(std::span<const std::string> key_tuple) {
  std::string out;
  for (std::size_t i = 0; i < key_tuple.size(); ++i) {
    if (i > 0) out += '|';
    out += key_tuple[i];
  }
  return out;
}

void WindowSpec::validate() const {
  if (!(window_len_s > 0.0)) throw ConfigError("window_len_s must be positive");
  if (!(overlap_s >= 0.0 && overlap_s < window_len_s)) {
    throw ConfigError("overlap_s must satisfy 0 <= overlap_s < window_len_s");
  }
  if (!(min_tail_s >= 0.0)) throw ConfigError("min_tail_s must be non-negative");
}

std::vector<ClipWindow> segment_windows(double duration, const WindowSpec& spec) {
  if (!(duration > 0.0)) throw InputError("segment_windows needs a positive duration");
  spec.validate();
  std::vector<ClipWindow> out;
  const double stride = spec.window_len_s - spec.overlap_s;
  for (std::size_t i = 0;; ++i) {
    const double start = static_cast<double>(i) * stride;
    if (!(start + spec.window_len_s < duration)) break;
    out.push_back({start, start + spec.window_len_s});
  }
  ClipWindow last{std::max(0.0, duration - spec.window_len_s), duration};
  if (last.length() < spec.min_tail_s) return out;
  if (out.empty() || !(out.back() == last)) out.push_back(last);
  return out;
}

std::string make_clip_id(const std::string& vid, std::size_t window_index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "@w%04zu", window_index);
  return vid + buf;
}

std::vector<Candidate> derive_samples(std::span<const SourceRecord> records,
                                      std::span<const ClipWindow> windows) {
  std::vector<Candidate> out;
  if (records.empty()) return out;
  const std::string& vid = records.front().vid;
  for (const auto& rec : records) {
    if (rec.vid != vid) throw InputError("derive_samples expects records of a single video");
  }
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& win = windows[w];
    const auto clip_id = make_clip_id(vid, w);
    for (const auto& rec : records) {
      Candidate c;
      c.clip_id = clip_id;
      c.vid = vid;
      c.window = win;
      c.key_tuple = rec.key_tuple;
      c.sample_id = clip_id + "|" + join_key(rec.key_tuple);
      for (double t : rec.timestamps) {
        if (win.contains(t)) c.rel_timestamps.push_back(t - win.start_s);
      }
      std::sort(c.rel_timestamps.begin(), c.rel_timestamps.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace gmr
