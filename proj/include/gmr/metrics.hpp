#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gmr/core.hpp"

namespace gmr {

struct EvalConfig {
  double tau = 0.4;
  ThresholdGrid grid;
  std::vector<std::size_t> ks = {1, 3, 5};

  /// Throws ConfigError on tau outside [0, 1], empty or zero ks.
  void validate() const;
};

struct MetricCounts {
  std::size_t queries = 0;    // |Q|
  std::size_t positives = 0;  // |Q+|
  std::size_t multi = 0;      // |Qm|
  std::size_t tp_r = 0;       // nulls rejected
  std::size_t fp_r = 0;       // positives rejected
  std::size_t fn_r = 0;       // nulls accepted
};

struct MetricReport {
  double tau = 0.4;
  double rej_f1 = 0.0;
  /// Undefined (nullopt) when the corpus lacks either positives or nulls.
  std::optional<double> auroc;
  double map = 0.0;
  std::map<std::size_t, double> mr_at_k;
  std::map<std::size_t, double> mr_plus_at_k;
  std::map<std::size_t, double> g_miou_at_k;
  MetricCounts counts;
};

/// A sample joined to its prediction. Views into caller-owned storage.
struct EvalPair {
  const Sample* sample = nullptr;
  const PredictionRecord* pred = nullptr;
};

/// Joins samples and predictions by sample_id and orders the result by
/// sample_id. Throws InputError on missing, duplicate or unknown ids.
std::vector<EvalPair> align(std::span<const Sample> samples, std::span<const PredictionRecord> preds);

/// s(q): explicit score if present, else the max window confidence, else 0.
double existence_score(const PredictionRecord& pred);

/// A query is rejected iff s(q) <= tau.
inline bool is_rejected(const PredictionRecord& pred, double tau) {
  return existence_score(pred) <= tau;
}

MetricCounts rejection_counts(std::span<const EvalPair> pairs, double tau);
double rej_f1(std::span<const EvalPair> pairs, double tau);
/// Mann-Whitney AUROC with ties counted 1/2. Throws InputError if single-class.
double auroc(std::span<const EvalPair> pairs);
/// Requires every pair to be positive.
double m_recall_at_k(std::span<const EvalPair> positives, std::size_t k, const ThresholdGrid& grid);
/// Requires |G| >= 2 for every pair.
double m_recall_plus_at_k(std::span<const EvalPair> multi, std::size_t k, const ThresholdGrid& grid);
/// Requires every pair to be positive.
double mean_ap(std::span<const EvalPair> positives, const ThresholdGrid& grid);
double g_miou_at_k(std::span<const EvalPair> pairs, std::size_t k, double tau);

// Convenience overloads that align first.
double rej_f1(std::span<const Sample> samples, std::span<const PredictionRecord> preds, double tau);
double auroc(std::span<const Sample> samples, std::span<const PredictionRecord> preds);
double m_recall_at_k(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                     std::size_t k, const ThresholdGrid& grid);
double m_recall_plus_at_k(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                          std::size_t k, const ThresholdGrid& grid);
double mean_ap(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
               const ThresholdGrid& grid);
double g_miou_at_k(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                   std::size_t k, double tau);

/// Per-query quantities that every metric reduces over. Computing these is
/// the per-sample (parallelizable) part of evaluation.
struct QueryScores {
  bool positive = false;
  std::size_t gt_count = 0;
  double existence = 0.0;
  /// matched[t][k_index] = |M_k(q; grid[t])| for each configured k.
  std::vector<std::vector<std::size_t>> matched;
  /// Per-threshold AP (positives only).
  std::vector<double> ap;
  /// Set-level IoU of the ungated top-k predictions, per configured k.
  std::vector<double> set_iou;
};

QueryScores score_query(const EvalPair& pair, const EvalConfig& cfg);

/// All metrics at cfg.tau. Per-sample work runs on `threads` workers; the
/// reduction is in sample_id order, so results do not depend on `threads`.
MetricReport evaluate(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                      const EvalConfig& cfg, unsigned threads = 1);

struct SweepTable {
  std::vector<double> taus;
  std::vector<MetricReport> reports;  // one per tau
  std::map<std::size_t, double> ap_g_miou_at_k;
  double ap_rej_f1 = 0.0;
};

/// Reports at each tau plus their averages ("AP" columns).
SweepTable sweep(std::span<const Sample> samples, std::span<const PredictionRecord> preds,
                 std::span<const double> taus, const EvalConfig& base, unsigned threads = 1);

}  // namespace gmr
