#include "gmr/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "gmr/parallel.hpp"

namespace gmr {

void EvalConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  if (ks.empty()) throw ConfigError("ks must be nonempty");
  for (auto k : ks) {
    if (k == 0) throw ConfigError("every k must be positive");
  }
}

std::vector<EvalPair> align(std::span<const Sample> samples, std::span<const PredictionRecord> preds) {
  std::unordered_map<std::string, const PredictionRecord*> by_id;
  by_id.reserve(preds.size());
  for (const auto& p : preds) {
    if (!by_id.emplace(p.sample_id, &p).second) {
      throw InputError("duplicate prediction for sample_id " + p.sample_id);
    }
  }
  std::vector<EvalPair> pairs;
  pairs.reserve(samples.size());
  std::vector<std::string> missing;
  for (const auto& s : samples) {
    auto it = by_id.find(s.sample_id);
    if (it == by_id.end()) {
      missing.push_back(s.sample_id);
      continue;
    }
    pairs.push_back({&s, it->second});
  }
  if (!missing.empty()) {
    std::string msg = "missing prediction for sample_id";
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " " + missing[i];
    if (missing.size() > 10) msg += " (and " + std::to_string(missing.size() - 10) + " more)";
    throw InputError(msg);
  }
  std::sort(pairs.begin(), pairs.end(), [](const EvalPair& a, const EvalPair& b) {
    return a.sample->sample_id < b.sample->sample_id;
  });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].sample->sample_id == pairs[i - 1].sample->sample_id) {
      throw InputError("duplicate sample_id " + pairs[i].sample->sample_id);
    }
  }
  if (pairs.size() != preds.size()) {
    // Every sample matched and ids are unique, so some prediction has no sample.
    std::unordered_map<std::string, bool> known;
    for (const auto& s : samples) known.emplace(s.sample_id, true);
    for (const auto& p : preds) {
      if (!known.count(p.sample_id)) throw InputError("prediction for unknown sample_id " + p.sample_id);
    }
  }
  return pairs;
}

double existence_score(const PredictionRecord& pred) {
  if (pred.existence_score) return *pred.existence_score;
  if (pred.windows.empty()) return 0.0;
  double best = pred.windows.front().confidence;
  for (const auto& w : pred.windows) best = std::max(best, w.confidence);
  return best;
}

MetricCounts rejection_counts(std::span<const EvalPair> pairs, double tau) {
  MetricCounts c;
  c.queries = pairs.size();
  for (const auto& p : pairs) {
    const bool positive = p.sample->is_positive();
    const bool rejected = is_rejected(*p.pred, tau);
    if (positive) {
      ++c.positives;
      if (p.sample->ground_truth.size() >= 2) ++c.multi;
      if (rejected) ++c.fp_r;
    } else if (rejected) {
      ++c.tp_r;
    } else {
      ++c.fn_r;
    }
  }
  return c;
}

namespace {

double f1_from_counts(const MetricCounts& c) {
  const double denom = 2.0 * c.tp_r + c.fp_r + c.fn_r;
  if (c.tp_r == 0 || denom == 0.0) return 0.0;
  return 2.0 * c.tp_r / denom;
}

// Rank-sum AUROC with midranks for ties.
double auroc_from_scores(std::vector<std::pair<double, bool>> scored) {
  std::size_t n_pos = 0;
  for (const auto& s : scored) n_pos += s.second ? 1 : 0;
  const std::size_t n_neg = scored.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw InputError("AUROC is undefined without both positive and null-set queries");
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    std::size_t pos_in_tie = 0;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      pos_in_tie += scored[j].second ? 1 : 0;
      ++j;
    }
    // Ranks i+1 .. j share the midrank.
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    pos_rank_sum += midrank * static_cast<double>(pos_in_tie);
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

// matched flag per prediction (in rank order) for one threshold. Because the
// greedy pass is rank-major, |M_k| is the number of flags among the first k.
std::vector<bool> matched_flags(const IouMatrix& ious, std::span<const TemporalSpan> gts,
                                MatchMode mode) {
  std::vector<bool> flags(ious.rows(), false);
  for (const auto& pair : greedy_match(ious, gts, mode, ious.rows()).pairs) flags[pair.pred_index] = true;
  return flags;
}

std::size_t prefix_count(const std::vector<bool>& flags, std::size_t k) {
  const std::size_t n = std::min(k, flags.size());
  return static_cast<std::size_t>(std::count(flags.begin(), flags.begin() + n, true));
}

double average_precision(const std::vector<bool>& flags, std::size_t gt_count) {
  double sum = 0.0;
  std::size_t tp = 0;
  for (std::size_t r = 0; r < flags.size(); ++r) {
    if (!flags[r]) continue;
    ++tp;
    sum += static_cast<double>(tp) / static_cast<double>(r + 1);
  }
  return sum / static_cast<double>(gt_count);
}

double set_level_iou(const IouMatrix& ious, std::span<const TemporalSpan> gts, std::size_t k) {
  const std::size_t top = std::min(k, ious.rows());
  const auto match = greedy_match(ious, gts, MatchMode::no_threshold(), top);
  const double denom = static_cast<double>(top + gts.size() - match.count());
  return match.iou_sum() / denom;
}

double g_iou(const EvalPair& p, bool rejected, double ungated_set_iou) {
  const bool preds_empty = rejected || p.pred->windows.empty();
  const bool gts_empty = p.sample->ground_truth.empty();
  if (preds_empty && gts_empty) return 1.0;
  if (preds_empty || gts_empty) return 0.0;
  return ungated_set_iou;
}

void require_positive(const EvalPair& p) {
  if (!p.sample->is_positive()) {
    throw InputError("localization metric given null-set sample " + p.sample->sample_id);
  }
}

}  // namespace

double rej_f1(std::span<const EvalPair> pairs, double tau) {
  return f1_from_counts(rejection_counts(pairs, tau));
}

double auroc(std::span<const EvalPair> pairs) {
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(pairs.size());
  for (const auto& p : pairs) scored.emplace_back(existence_score(*p.pred), p.sample->is_positive());
  return auroc_from_scores(std::move(scored));
}

double m_recall_at_k(std::span<const EvalPair> positives, std::size_t k, const ThresholdGrid& grid) {
  if (k == 0) throw ConfigError("k must be positive");
  if (positives.empty()) return 0.0;
  std::vector<double> per_theta(grid.size(), 0.0);
  for (const auto& p : positives) {
    require_positive(p);
    const auto spans = spans_of(*p.pred);
    const auto& gts = p.sample->ground_truth;
    IouMatrix ious(spans, gts);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      auto m = greedy_match(ious, gts, MatchMode::thresholded(grid.values()[t]), k).count();
      per_theta[t] += static_cast<double>(m) / static_cast<double>(gts.size());
    }
  }
  double total = 0.0;
  for (double v : per_theta) total += v / static_cast<double>(positives.size());
  return total / static_cast<double>(grid.size());
}

double m_recall_plus_at_k(std::span<const EvalPair> multi, std::size_t k, const ThresholdGrid& grid) {
  if (k == 0) throw ConfigError("k must be positive");
  if (multi.empty()) return 0.0;
  std::vector<double> per_theta(grid.size(), 0.0);
  for (const auto& p : multi) {
    const auto& gts = p.sample->ground_truth;
    if (gts.size() < 2) {
      throw InputError("mR+@k given sample " + p.sample->sample_id + " with fewer than 2 moments");
    }
    const auto spans = spans_of(*p.pred);
    IouMatrix ious(spans, gts);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      auto m = greedy_match(ious, gts, MatchMode::thresholded(grid.values()[t]), k).count();
      double extra = m > 0 ? static_cast<double>(m - 1) : 0.0;
      per_theta[t] += extra / static_cast<double>(gts.size() - 1);
    }
  }
  double total = 0.0;
  for (double v : per_theta) total += v / static_cast<double>(multi.size());
  return total / static_cast<double>(grid.size());
}

double mean_ap(std::span<const EvalPair> positives, const ThresholdGrid& grid) {
  if (positives.empty()) return 0.0;
  std::vector<double> per_theta(grid.size(), 0.0);
  for (const auto& p : positives) {
    require_positive(p);
    const auto spans = spans_of(*p.pred);
    const auto& gts = p.sample->ground_truth;
    IouMatrix ious(spans, gts);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      auto flags = matched_flags(ious, gts, MatchMode::thresholded(grid.values()[t]));
      per_theta[t] += average_precision(flags, gts.size());
    }
  }
  double total = 0.0;
  for (double v : per_theta) total += v / static_cast<double>(positives.size());
  return total / static_cast<double>(grid.size());
}

double g_miou_at_k(std::span<const EvalPair> pairs, std::size_t k, double tau) {
  if (k == 0) throw ConfigError("k must be positive");
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : pairs) {
    const auto spans = spans_of(*p.pred);
    const auto& gts = p.sample->ground_truth;
    const bool rejected = is_rejected(*p.pred, tau);
    double set_iou = 0.0;
    if (!rejected && !spans.empty() && !gts.empty()) {
      IouMatrix ious(spans, gts);
      set_iou = set_level_iou(ious, gts, k);
    }
    sum += g_iou(p, rejected, set_iou);
  }
  return sum / static_cast<double>(pairs.size());
}

double rej_f1(std::span<const Sample> samples, std::span<const PredictionRecord> preds, double tau) {
  return rej_f1(align(samples, preds), tau);
}

double auroc(std::span<const Sample> samples, std::span<const PredictionRecord> preds) {
  return auroc(align(samples, preds));
}

double m_recall_at_k(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                     std::size_t k, const ThresholdGrid& grid) {
  return m_recall_at_k(align(samples, preds), k, grid);
}

double m_recall_plus_at_k(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                          std::size_t k, const ThresholdGrid& grid) {
  return m_recall_plus_at_k(align(samples, preds), k, grid);
}

double mean_ap(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
               const ThresholdGrid& grid) {
  return mean_ap(align(samples, preds), grid);
}

double g_miou_at_k(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                   std::size_t k, double tau) {
  return g_miou_at_k(align(samples, preds), k, tau);
}

QueryScores score_query(const EvalPair& pair, const EvalConfig& cfg) {
  QueryScores q;
  const auto& gts = pair.sample->ground_truth;
  q.positive = !gts.empty();
  q.gt_count = gts.size();
  q.existence = existence_score(*pair.pred);
  q.set_iou.assign(cfg.ks.size(), 0.0);
  if (!q.positive) return q;

  const auto spans = spans_of(*pair.pred);
  IouMatrix ious(spans, gts);
  q.matched.assign(cfg.grid.size(), std::vector<std::size_t>(cfg.ks.size(), 0));
  q.ap.assign(cfg.grid.size(), 0.0);
  for (std::size_t t = 0; t < cfg.grid.size(); ++t) {
    auto flags = matched_flags(ious, gts, MatchMode::thresholded(cfg.grid.values()[t]));
    for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) q.matched[t][ki] = prefix_count(flags, cfg.ks[ki]);
    q.ap[t] = average_precision(flags, gts.size());
  }
  if (!spans.empty()) {
    for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) q.set_iou[ki] = set_level_iou(ious, gts, cfg.ks[ki]);
  }
  return q;
}

namespace {

MetricReport reduce(const std::vector<EvalPair>& pairs, const std::vector<QueryScores>& scores,
                    const EvalConfig& cfg) {
  MetricReport r;
  r.tau = cfg.tau;
  r.counts = rejection_counts(pairs, cfg.tau);
  r.rej_f1 = f1_from_counts(r.counts);

  std::vector<std::pair<double, bool>> scored;
  scored.reserve(scores.size());
  for (const auto& q : scores) scored.emplace_back(q.existence, q.positive);
  if (r.counts.positives > 0 && r.counts.positives < r.counts.queries) {
    r.auroc = auroc_from_scores(std::move(scored));
  }

  const std::size_t n_t = cfg.grid.size();
  const double n_pos = static_cast<double>(r.counts.positives);
  const double n_multi = static_cast<double>(r.counts.multi);
  for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) {
    std::vector<double> recall(n_t, 0.0), plus(n_t, 0.0);
    double g_sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto& q = scores[i];
      const bool rejected = q.existence <= cfg.tau;
      g_sum += g_iou(pairs[i], rejected, q.set_iou[ki]);
      if (!q.positive) continue;
      for (std::size_t t = 0; t < n_t; ++t) {
        const auto m = q.matched[t][ki];
        recall[t] += static_cast<double>(m) / static_cast<double>(q.gt_count);
        if (q.gt_count >= 2) {
          double extra = m > 0 ? static_cast<double>(m - 1) : 0.0;
          plus[t] += extra / static_cast<double>(q.gt_count - 1);
        }
      }
    }
    double mr = 0.0, mrp = 0.0;
    for (std::size_t t = 0; t < n_t; ++t) {
      if (n_pos > 0) mr += recall[t] / n_pos;
      if (n_multi > 0) mrp += plus[t] / n_multi;
    }
    const auto k = cfg.ks[ki];
    r.mr_at_k[k] = mr / static_cast<double>(n_t);
    r.mr_plus_at_k[k] = mrp / static_cast<double>(n_t);
    r.g_miou_at_k[k] = scores.empty() ? 0.0 : g_sum / static_cast<double>(scores.size());
  }

  std::vector<double> ap(n_t, 0.0);
  for (const auto& q : scores) {
    if (!q.positive) continue;
    for (std::size_t t = 0; t < n_t; ++t) ap[t] += q.ap[t];
  }
  double map = 0.0;
  for (std::size_t t = 0; t < n_t; ++t) {
    if (n_pos > 0) map += ap[t] / n_pos;
  }
  r.map = map / static_cast<double>(n_t);
  return r;
}

std::vector<QueryScores> score_all(const std::vector<EvalPair>& pairs, const EvalConfig& cfg,
                                   unsigned threads) {
  std::vector<QueryScores> scores(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) { scores[i] = score_query(pairs[i], cfg); });
  return scores;
}

}  // namespace

MetricReport evaluate(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                      const EvalConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto pairs = align(samples, preds);
  const auto scores = score_all(pairs, cfg, threads);
  return reduce(pairs, scores, cfg);
}

SweepTable sweep(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                 std::span<const double> taus, const EvalConfig& base, unsigned threads) {
  if (taus.empty()) throw ConfigError("sweep needs at least one tau");
  base.validate();
  const auto pairs = align(samples, preds);
  // Per-query scores do not depend on tau; only the reduction does.
  const auto scores = score_all(pairs, base, threads);
  SweepTable table;
  table.taus.assign(taus.begin(), taus.end());
  for (double tau : taus) {
    EvalConfig cfg = base;
    cfg.tau = tau;
    cfg.validate();
    table.reports.push_back(reduce(pairs, scores, cfg));
  }
  const double n = static_cast<double>(taus.size());
  for (auto k : base.ks) {
    double sum = 0.0;
    for (const auto& r : table.reports) sum += r.g_miou_at_k.at(k);
    table.ap_g_miou_at_k[k] = sum / n;
  }
  double f1_sum = 0.0;
  for (const auto& r : table.reports) f1_sum += r.rej_f1;
  table.ap_rej_f1 = f1_sum / n;
  return table;
}

}  // namespace gmr
