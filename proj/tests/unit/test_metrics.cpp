#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gmr/metrics.hpp"
#include "gmr/synth.hpp"

using fixtures::pred;
using fixtures::sample;

namespace {

const gmr::ThresholdGrid kGrid;

std::string id(int i) { return "q" + std::to_string(100 + i); }

}  // namespace

TEST_CASE("existence score") {
  CHECK(gmr::existence_score(pred("a", {{0, 1, 0.2}}, 0.73)) == 0.73);
  CHECK(gmr::existence_score(pred("a", {{0, 1, 0.2}, {2, 3, 0.9}, {4, 5, 0.4}})) == 0.9);
  CHECK(gmr::existence_score(pred("a", {})) == 0.0);
}

TEST_CASE("rej_f1 counts") {
  std::vector<gmr::Sample> s;
  std::vector<gmr::PredictionRecord> p;
  for (int i = 0; i < 10; ++i) {
    s.push_back(sample(id(i), {}));
    p.push_back(pred(id(i), {}, i < 8 ? 0.1 : 0.9));
  }
  for (int i = 10; i < 20; ++i) {
    s.push_back(sample(id(i), {{10, 20}}));
    p.push_back(pred(id(i), {{10, 20, 1.0}}, i < 12 ? 0.2 : 0.8));
  }
  CHECK(gmr::rej_f1(s, p, 0.4) == doctest::Approx(0.8).epsilon(1e-15));
  auto pairs = gmr::align(s, p);
  auto c = gmr::rejection_counts(pairs, 0.4);
  CHECK(c.tp_r == 8);
  CHECK(c.fp_r == 2);
  CHECK(c.fn_r == 2);

  // everything accepted
  CHECK(gmr::rej_f1(s, p, 0.05) == 0.0);
}

TEST_CASE("rej_f1 boundary is a rejection") {
  std::vector<gmr::Sample> s = {sample("a", {}), sample("b", {{1, 2}})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {}, 0.4), pred("b", {}, 1.0)};
  CHECK(gmr::rej_f1(s, p, 0.4) == 1.0);
}

TEST_CASE("auroc examples") {
  auto run = [](std::vector<double> pos, std::vector<double> neg) {
    std::vector<gmr::Sample> s;
    std::vector<gmr::PredictionRecord> p;
    int i = 0;
    for (double x : pos) {
      s.push_back(sample(id(i), {{1, 2}}));
      p.push_back(pred(id(i++), {}, x));
    }
    for (double x : neg) {
      s.push_back(sample(id(i), {}));
      p.push_back(pred(id(i++), {}, x));
    }
    return gmr::auroc(s, p);
  };
  CHECK(run({0.9, 0.8}, {0.7, 0.1}) == 1.0);
  CHECK(run({0.9, 0.3}, {0.5, 0.1}) == 0.75);
  CHECK(run({0.5}, {0.5}) == 0.5);
  CHECK_THROWS_AS(run({0.5, 0.2}, {}), gmr::InputError);
  CHECK_THROWS_AS(run({}, {0.5}), gmr::InputError);
}

TEST_CASE("auroc invariant under monotone transforms") {
  auto s = gmr::synth_samples(40, 3, 0.5, 3);
  gmr::PerturbConfig pc;
  pc.existence_noise = 0.8;
  pc.seed = 5;
  auto p = gmr::perturb(s, pc);
  const double base = gmr::auroc(s, p);
  for (auto& r : p) r.existence_score = std::pow(gmr::existence_score(r), 3.0) * 0.5;
  CHECK(gmr::auroc(s, p) == base);
}

TEST_CASE("mR@k examples") {
  std::vector<gmr::Sample> s = {sample("a", {{10, 20}})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {{11, 21, 0.9}})};
  CHECK(gmr::m_recall_at_k(s, p, 1, kGrid) == doctest::Approx(0.7).epsilon(1e-15));

  s = {sample("a", {{10, 20}}), sample("b", {{10, 20}, {40, 50}})};
  p = {pred("a", {{10, 20, 0.9}}), pred("b", {{40, 50, 0.9}, {10, 20, 0.8}})};
  CHECK(gmr::m_recall_at_k(s, p, 1, kGrid) == 0.75);
  CHECK(gmr::m_recall_at_k(s, p, 2, kGrid) == 1.0);
}

TEST_CASE("mR@k rejects null-set input on the positive-only entry point") {
  std::vector<gmr::Sample> s = {sample("a", {})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {})};
  auto pairs = gmr::align(s, p);
  CHECK_THROWS_AS(gmr::m_recall_at_k(std::span<const gmr::EvalPair>(pairs), 1, kGrid), gmr::InputError);
  CHECK_THROWS_AS(gmr::mean_ap(std::span<const gmr::EvalPair>(pairs), kGrid), gmr::InputError);
}

TEST_CASE("mR+@k examples") {
  std::vector<gmr::Sample> s = {sample("a", {{10, 20}, {40, 50}})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {{10, 20, 0.9}, {40, 50, 0.8}})};
  CHECK(gmr::m_recall_plus_at_k(s, p, 5, kGrid) == 1.0);

  p = {pred("a", {{100, 110, 0.9}})};
  CHECK(gmr::m_recall_plus_at_k(s, p, 5, kGrid) == 0.0);

  s = {sample("a", {{10, 20}, {40, 50}, {70, 80}})};
  p = {pred("a", {{10, 20, 0.9}, {40, 50, 0.8}})};
  CHECK(gmr::m_recall_plus_at_k(s, p, 5, kGrid) == 0.5);

  std::vector<gmr::Sample> single = {sample("a", {{10, 20}})};
  auto pairs = gmr::align(single, p);
  CHECK_THROWS_AS(gmr::m_recall_plus_at_k(std::span<const gmr::EvalPair>(pairs), 1, kGrid), gmr::InputError);
}

TEST_CASE("mAP examples") {
  std::vector<gmr::Sample> s = {sample("a", {{10, 20}, {40, 50}})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {{10, 20, 0.9}, {40, 50, 0.8}})};
  CHECK(gmr::mean_ap(s, p, kGrid) == 1.0);

  s = {sample("a", {{10, 20}})};
  p = {pred("a", {{60, 70, 0.9}, {10, 20, 0.8}})};
  CHECK(gmr::mean_ap(s, p, kGrid) == 0.5);

  s = {sample("a", {{0, 10}})};
  p = {pred("a", {{0, 6, 0.9}})};
  CHECK(gmr::mean_ap(s, p, kGrid) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("G-mIoU examples") {
  std::vector<gmr::Sample> s = {sample("a", {{0, 10}, {55, 65}, {80, 90}})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {{0, 10, 0.9}, {50, 60, 0.8}})};
  CHECK(gmr::g_miou_at_k(s, p, 2, 0.4) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));

  s = {sample("n", {})};
  p = {pred("n", {{0, 10, 0.9}}, 0.1)};
  CHECK(gmr::g_miou_at_k(s, p, 1, 0.4) == 1.0);
  p = {pred("n", {{0, 10, 0.9}})};
  CHECK(gmr::g_miou_at_k(s, p, 1, 0.4) == 0.0);

  s = {sample("a", {{0, 10}})};
  p = {pred("a", {{0, 10, 0.3}})};
  CHECK(gmr::g_miou_at_k(s, p, 1, 0.4) == 0.0);
}

TEST_CASE("G-mIoU ignores zero-overlap pairs in matching") {
  // disjoint top-1 must not consume the gt before the overlapping top-2
  std::vector<gmr::Sample> s = {sample("a", {{0, 10}})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {{50, 60, 0.9}, {0, 10, 0.8}})};
  CHECK(gmr::g_miou_at_k(s, p, 2, 0.4) == 0.5);
}

TEST_CASE("sweep") {
  auto s = gmr::synth_samples(30, 1, 0.5, 11);
  auto perfect = gmr::oracle_predictions(s);
  gmr::EvalConfig cfg;
  std::vector<double> taus = {0.4, 0.6, 0.8};
  auto t = gmr::sweep(s, perfect, taus, cfg);
  REQUIRE(t.reports.size() == 3);
  for (const auto& r : t.reports) {
    CHECK(r.g_miou_at_k.at(1) == 1.0);
    CHECK(r.rej_f1 == 1.0);
  }
  CHECK(t.ap_g_miou_at_k.at(1) == 1.0);
  CHECK(t.ap_rej_f1 == 1.0);
  // existence in {0,1} makes every tau < 1 equivalent
  CHECK(t.reports[0].g_miou_at_k == t.reports[2].g_miou_at_k);
  CHECK(t.reports[0].map == t.reports[2].map);

  auto accept = perfect;
  for (auto& r : accept) r.existence_score = 1.0;
  auto a = gmr::sweep(s, accept, taus, cfg);
  for (const auto& r : a.reports) CHECK(r.rej_f1 == 0.0);
  CHECK(a.ap_rej_f1 == 0.0);
}

TEST_CASE("evaluate agrees with the standalone metrics") {
  auto s = gmr::synth_samples(60, 5, 0.4, 21);
  gmr::PerturbConfig pc;
  pc.jitter_sigma_s = 2.0;
  pc.drop_rate = 0.2;
  pc.hallucination_rate = 0.5;
  pc.existence_noise = 0.5;
  pc.seed = 8;
  auto p = gmr::perturb(s, pc);
  gmr::EvalConfig cfg;
  auto rep = gmr::evaluate(s, p, cfg);

  auto pairs = gmr::align(s, p);
  std::vector<gmr::EvalPair> pos, multi;
  for (auto& e : pairs) {
    if (e.sample->is_positive()) pos.push_back(e);
    if (e.sample->ground_truth.size() >= 2) multi.push_back(e);
  }
  CHECK(rep.rej_f1 == gmr::rej_f1(pairs, cfg.tau));
  REQUIRE(rep.auroc.has_value());
  CHECK(*rep.auroc == gmr::auroc(pairs));
  CHECK(rep.map == doctest::Approx(gmr::mean_ap(std::span<const gmr::EvalPair>(pos), cfg.grid)).epsilon(1e-12));
  for (auto k : cfg.ks) {
    CHECK(rep.mr_at_k.at(k) ==
          doctest::Approx(gmr::m_recall_at_k(std::span<const gmr::EvalPair>(pos), k, cfg.grid)).epsilon(1e-12));
    CHECK(rep.mr_plus_at_k.at(k) ==
          doctest::Approx(gmr::m_recall_plus_at_k(std::span<const gmr::EvalPair>(multi), k, cfg.grid))
              .epsilon(1e-12));
    CHECK(rep.g_miou_at_k.at(k) == doctest::Approx(gmr::g_miou_at_k(pairs, k, cfg.tau)).epsilon(1e-12));
  }
  CHECK(rep.counts.queries == s.size());
  CHECK(rep.counts.positives == pos.size());
  CHECK(rep.counts.multi == multi.size());
  CHECK(rep.counts.tp_r + rep.counts.fn_r == s.size() - pos.size());
}

TEST_CASE("monotone in k, invariant to tau for localization") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = gmr::synth_samples(40, 5, 0.3, seed);
    gmr::PerturbConfig pc;
    pc.jitter_sigma_s = 3.0;
    pc.drop_rate = 0.3;
    pc.hallucination_rate = 1.0;
    pc.existence_noise = 1.0;
    pc.seed = seed;
    auto p = gmr::perturb(s, pc);
    gmr::EvalConfig cfg;
    cfg.ks = {1, 2, 3, 4, 5, 10};
    auto lo = gmr::evaluate(s, p, cfg);
    cfg.tau = 0.9;
    auto hi = gmr::evaluate(s, p, cfg);
    CHECK(lo.map == hi.map);
    CHECK(lo.mr_at_k == hi.mr_at_k);
    CHECK(lo.mr_plus_at_k == hi.mr_plus_at_k);
    for (const auto* rep : {&lo, &hi}) {
      double a = 0, b = 0;
      for (auto k : cfg.ks) {
        CHECK(rep->mr_at_k.at(k) >= a);
        CHECK(rep->mr_plus_at_k.at(k) >= b);
        a = rep->mr_at_k.at(k);
        b = rep->mr_plus_at_k.at(k);
        CHECK(a <= 1.0);
        CHECK(b <= 1.0);
        CHECK(rep->g_miou_at_k.at(k) <= 1.0);
      }
    }
  }
}

TEST_CASE("G-mIoU over k") {
  // correct windows only: more of them can only help
  auto s = gmr::synth_samples(50, 5, 0.3, 4);
  auto p = gmr::oracle_predictions(s);
  gmr::EvalConfig cfg;
  cfg.ks = {1, 2, 3, 4, 5};
  auto rep = gmr::evaluate(s, p, cfg);
  double prev = 0;
  for (auto k : cfg.ks) {
    CHECK(rep.g_miou_at_k.at(k) >= prev);
    prev = rep.g_miou_at_k.at(k);
  }
  CHECK(prev == 1.0);

  // an unmatched extra window enlarges the union, so the score drops
  std::vector<gmr::Sample> one = {sample("a", {{0, 10}})};
  std::vector<gmr::PredictionRecord> pp = {pred("a", {{0, 10, 0.9}, {50, 60, 0.8}})};
  CHECK(gmr::g_miou_at_k(one, pp, 1, 0.4) == 1.0);
  CHECK(gmr::g_miou_at_k(one, pp, 2, 0.4) == 0.5);
}

TEST_CASE("report leaves auroc undefined for single-class corpora") {
  std::vector<gmr::Sample> s = {sample("a", {{1, 2}}), sample("b", {{3, 4}})};
  auto p = gmr::oracle_predictions(s);
  auto rep = gmr::evaluate(s, p, gmr::EvalConfig{});
  CHECK_FALSE(rep.auroc.has_value());
  CHECK(rep.rej_f1 == 0.0);
}

TEST_CASE("alignment errors") {
  std::vector<gmr::Sample> s = {sample("a", {}), sample("b", {})};
  std::vector<gmr::PredictionRecord> p = {pred("a", {})};
  try {
    (void)gmr::align(s, p);
    FAIL("expected InputError");
  } catch (const gmr::InputError& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }
  p = {pred("a", {}), pred("b", {}), pred("c", {})};
  CHECK_THROWS_AS(gmr::align(s, p), gmr::InputError);
  p = {pred("a", {}), pred("a", {}), pred("b", {})};
  CHECK_THROWS_AS(gmr::align(s, p), gmr::InputError);
  s = {sample("a", {}), sample("a", {})};
  p = {pred("a", {})};
  CHECK_THROWS_AS(gmr::align(s, p), gmr::InputError);
}

TEST_CASE("eval config validation") {
  gmr::EvalConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tau = 1.5;
  CHECK_THROWS_AS(cfg.validate(), gmr::ConfigError);
  cfg.tau = 0.4;
  cfg.ks = {};
  CHECK_THROWS_AS(cfg.validate(), gmr::ConfigError);
  cfg.ks = {0};
  CHECK_THROWS_AS(cfg.validate(), gmr::ConfigError);
}
