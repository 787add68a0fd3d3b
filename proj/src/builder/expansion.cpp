#include <algorithm>
#include <cctype>
#include <cmath>

#include "gmr/builder.hpp"

namespace gmr {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void check_offsets(const std::string& what, OffsetPair p) {
  if (!(p.fwd_s > 0.0) || !(p.bwd_s >= 0.0) || !std::isfinite(p.fwd_s) || !std::isfinite(p.bwd_s)) {
    throw ConfigError("offsets for " + what + " need fwd > 0 and bwd >= 0");
  }
}

}  // namespace

OffsetTable OffsetTable::soccer_defaults() {
  OffsetTable t;
  t.set("save", {2, 4});
  t.set("dribble", {4, 3});
  t.set("tackle", {5, 3});
  t.set("block", {5, 3});
  t.set("clearance", {5, 4});
  t.set("shot", {4, 8});
  t.set("foul", {5, 7});
  t.set("yellow card", {10, 23});
  t.set("substitution", {10, 12});
  return t;
}

void OffsetTable::set(const std::string& event_type, OffsetPair offsets) {
  check_offsets(event_type, offsets);
  entries_[lowercase(event_type)] = offsets;
}

void OffsetTable::set_default(std::optional<OffsetPair> offsets) {
  if (offsets) check_offsets("the default", *offsets);
  default_ = offsets;
}

OffsetPair OffsetTable::lookup(const std::string& event_type) const {
  auto it = entries_.find(lowercase(event_type));
  if (it != entries_.end()) return it->second;
  if (default_) return *default_;
  throw ConfigError("no boundary offsets for event type '" + event_type + "' and no default set");
}

TemporalSpan expand_boundaries(double t_rel, const std::string& event_type, const OffsetTable& offsets,
                               double window_len) {
  if (!(t_rel >= 0.0 && t_rel <= window_len)) {
    throw InputError("expand_boundaries: timestamp outside [0, window_len]");
  }
  const auto p = offsets.lookup(event_type);
  return {std::max(0.0, t_rel - p.bwd_s), std::min(window_len, t_rel + p.fwd_s)};
}

}  // namespace gmr
