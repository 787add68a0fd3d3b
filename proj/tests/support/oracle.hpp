#pragma once

// Straight-from-the-formula reference implementations used only by tests.
// Nothing here calls into the library's matching or metric code.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>


namespace oracle {

struct Span {
  double s, e;
};

inline double tiou(Span a, Span b) {
  const double lo = a.s > b.s ? a.s : b.s;
  const double hi = a.e < b.e ? a.e : b.e;
  const double inter = hi > lo ? hi - lo : 0.0;
  const double uni = (a.e - a.s) + (b.e - b.s) - inter;
  if (inter == 0.0 || uni == 0.0) return 0.0;
  return inter / uni;
}

enum class Mode { Threshold, Positive, Force };

struct Pair {
  std::size_t p, g;
  double iou;
};

// Greedy rule stated directly: for each prediction in rank order, list every
// admissible unmatched gt, order by (iou desc, start asc, index asc), take the head.
inline std::vector<Pair> greedy(const std::vector<Span>& preds, const std::vector<Span>& gts, Mode mode,
                                double theta) {
  std::vector<std::size_t> open;
  for (std::size_t g = 0; g < gts.size(); ++g) open.push_back(g);
  std::vector<Pair> out;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    std::vector<std::tuple<double, double, std::size_t>> cands;
    for (auto g : open) {
      const double v = tiou(preds[p], gts[g]);
      const bool ok = mode == Mode::Force || (mode == Mode::Positive ? v > 0.0 : v >= theta);
      if (ok) cands.emplace_back(-v, gts[g].s, g);
    }
    if (cands.empty()) continue;
    std::sort(cands.begin(), cands.end());
    const auto g = std::get<2>(cands.front());
    out.push_back({p, g, -std::get<0>(cands.front())});
    open.erase(std::find(open.begin(), open.end(), g));
  }
  return out;
}

struct Pred {
  std::vector<Span> windows;  // in rank order
  std::vector<double> conf;
  std::optional<double> exist;
};

struct Query {
  std::string id;
  std::vector<Span> gts;
  Pred pred;
};

inline double score(const Pred& p) {
  if (p.exist) return *p.exist;
  double m = 0.0;
  bool any = false;
  for (double c : p.conf) {
    if (!any || c > m) m = c;
    any = true;
  }
  return any ? m : 0.0;
}

inline std::vector<Span> top(const std::vector<Span>& v, std::size_t k) {
  return std::vector<Span>(v.begin(), v.begin() + static_cast<long>(std::min(k, v.size())));
}

inline double rej_f1(const std::vector<Query>& qs, double tau) {
  double tp = 0, fp = 0, fn = 0;
  for (const auto& q : qs) {
    const bool reject = score(q.pred) <= tau;
    if (q.gts.empty() && reject) tp += 1;
    if (!q.gts.empty() && reject) fp += 1;
    if (q.gts.empty() && !reject) fn += 1;
  }
  if (tp == 0) return 0.0;
  return 2 * tp / (2 * tp + fp + fn);
}

// Pairwise Mann-Whitney count.
inline double auroc(const std::vector<Query>& qs) {
  double wins = 0, pairs = 0;
  for (const auto& a : qs) {
    if (a.gts.empty()) continue;
    for (const auto& b : qs) {
      if (!b.gts.empty()) continue;
      const double sa = score(a.pred), sb = score(b.pred);
      wins += sa > sb ? 1.0 : (sa == sb ? 0.5 : 0.0);
      pairs += 1;
    }
  }
  return wins / pairs;
}

inline double mr(const std::vector<Query>& qs, std::size_t k, const std::vector<double>& grid) {
  double outer = 0;
  for (double theta : grid) {
    double inner = 0, n = 0;
    for (const auto& q : qs) {
      if (q.gts.empty()) continue;
      inner += static_cast<double>(greedy(top(q.pred.windows, k), q.gts, Mode::Threshold, theta).size()) /
               static_cast<double>(q.gts.size());
      n += 1;
    }
    outer += n > 0 ? inner / n : 0.0;
  }
  return outer / static_cast<double>(grid.size());
}

inline double mr_plus(const std::vector<Query>& qs, std::size_t k, const std::vector<double>& grid) {
  double outer = 0;
  for (double theta : grid) {
    double inner = 0, n = 0;
    for (const auto& q : qs) {
      if (q.gts.size() < 2) continue;
      const double m = static_cast<double>(greedy(top(q.pred.windows, k), q.gts, Mode::Threshold, theta).size());
      inner += std::max(0.0, m - 1.0) / static_cast<double>(q.gts.size() - 1);
      n += 1;
    }
    outer += n > 0 ? inner / n : 0.0;
  }
  return outer / static_cast<double>(grid.size());
}

// Detection-style AP: walk the ranked list, a hit is a prediction that the
// greedy pass matched; precision at each hit, normalized by |G|.
inline double map(const std::vector<Query>& qs, const std::vector<double>& grid) {
  double outer = 0;
  for (double theta : grid) {
    double inner = 0, n = 0;
    for (const auto& q : qs) {
      if (q.gts.empty()) continue;
      const auto pairs = greedy(q.pred.windows, q.gts, Mode::Threshold, theta);
      std::vector<bool> hit(q.pred.windows.size(), false);
      for (const auto& pr : pairs) hit[pr.p] = true;
      double ap = 0, hits = 0;
      for (std::size_t r = 0; r < hit.size(); ++r) {
        if (hit[r]) {
          hits += 1;
          ap += hits / static_cast<double>(r + 1);
        }
      }
      inner += ap / static_cast<double>(q.gts.size());
      n += 1;
    }
    outer += n > 0 ? inner / n : 0.0;
  }
  return outer / static_cast<double>(grid.size());
}

inline double g_miou(const std::vector<Query>& qs, std::size_t k, double tau) {
  double sum = 0;
  for (const auto& q : qs) {
    std::vector<Span> shown = score(q.pred) <= tau ? std::vector<Span>{} : top(q.pred.windows, k);
    if (shown.empty() && q.gts.empty()) {
      sum += 1;
    } else if (!shown.empty() && !q.gts.empty()) {
      const auto m = greedy(shown, q.gts, Mode::Positive, 0.0);
      double num = 0;
      for (const auto& pr : m) num += pr.iou;
      sum += num / static_cast<double>(shown.size() + q.gts.size() - m.size());
    }
  }
  return sum / static_cast<double>(qs.size());
}

}  // namespace oracle
