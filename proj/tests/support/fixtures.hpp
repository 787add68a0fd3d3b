#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmr/core.hpp"

namespace fixtures {

inline gmr::Sample sample(const std::string& id, std::initializer_list<std::pair<double, double>> gts,
                          double duration = 150.0) {
  gmr::Sample s;
  s.sample_id = id;
  s.clip_id = "clip_" + id;
  s.clip_duration_s = duration;
  s.query.query_id = "shot";
  s.query.text = "Locate all shot actions.";
  s.query.event_type = "shot";
  for (auto [a, b] : gts) s.ground_truth.push_back({a, b});
  return s;
}

struct W {
  double s, e, c;
};

inline gmr::PredictionRecord pred(const std::string& id, std::initializer_list<W> windows,
                                  std::optional<double> exist = std::nullopt) {
  gmr::PredictionRecord p;
  p.sample_id = id;
  for (auto w : windows) p.windows.push_back({{w.s, w.e}, w.c});
  gmr::sort_windows(p.windows);
  p.existence_score = exist;
  return p;
}

}  // namespace fixtures
