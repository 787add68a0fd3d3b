#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gmr/commands.hpp"

namespace fs = std::filesystem;
using gmr::io::Json;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gmr");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return gmr::cli::run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gmr_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json load(const fs::path& p) { return Json::parse(gmr::io::read_text(p)); }

void write_pair(const fs::path& dir, const std::vector<gmr::Sample>& s, const std::vector<gmr::PredictionRecord>& p) {
  std::vector<Json> rows;
  for (const auto& x : s) rows.push_back(gmr::io::to_json(x));
  gmr::io::write_text(dir / "samples.jsonl", gmr::io::to_jsonl(rows));
  rows.clear();
  for (const auto& x : p) rows.push_back(gmr::io::to_json(x));
  gmr::io::write_text(dir / "preds.jsonl", gmr::io::to_jsonl(rows));
}

}  // namespace

TEST_CASE("synth then eval round trip") {
  auto dir = scratch("roundtrip");
  const std::string cfg = (dir / "synth.json").string();
  gmr::io::write_text(cfg, R"({"corpus":{"n_videos":4,"events_per_video":30}})");
  REQUIRE(run_cli({"synth", "--config", cfg, "--seed", "3", "--out-dir", (dir / "syn").string()}) == 0);
  for (const char* f : {"records.jsonl", "samples.jsonl", "predictions.jsonl", "stats.json", "manifest.json"}) {
    CHECK(fs::exists(dir / "syn" / f));
  }
  REQUIRE(run_cli({"eval", "--samples", (dir / "syn/samples.jsonl").string(), "--preds",
                   (dir / "syn/predictions.jsonl").string(), "--k", "1,5", "--out-dir", (dir / "ev").string()}) == 0);
  auto rep = load(dir / "ev/report.json");
  // zero-noise perturbation is the oracle
  CHECK(rep["rej_f1"] == 1.0);
  CHECK(rep["auroc"] == 1.0);
  CHECK(rep["map"] == 1.0);
  CHECK(rep["g_miou@5"] == 1.0);
  CHECK(rep["mr@5"] == 1.0);
  auto manifest = load(dir / "ev/manifest.json");
  CHECK(manifest["command"] == "eval");
  CHECK(manifest["config"]["tau"] == 0.4);
  CHECK(manifest["inputs"].size() == 2);
  CHECK(manifest["outputs"].size() == 2);
  CHECK(fs::exists(dir / "ev/report.md"));

  // a different seed produces different data
  REQUIRE(run_cli({"synth", "--config", cfg, "--seed", "4", "--out-dir", (dir / "syn4").string()}) == 0);
  CHECK(gmr::cli::file_digest(dir / "syn/records.jsonl") != gmr::cli::file_digest(dir / "syn4/records.jsonl"));
}

TEST_CASE("eval defaults and flags") {
  auto dir = scratch("flags");
  std::vector<gmr::Sample> s = {fixtures::sample("a", {{10, 20}}), fixtures::sample("b", {})};
  std::vector<gmr::PredictionRecord> p = {fixtures::pred("a", {{10, 20, 0.5}}), fixtures::pred("b", {}, 0.5)};
  write_pair(dir, s, p);
  const auto sp = (dir / "samples.jsonl").string(), pp = (dir / "preds.jsonl").string();

  REQUIRE(run_cli({"eval", "--samples", sp, "--preds", pp, "--out-dir", (dir / "d").string()}) == 0);
  auto rep = load(dir / "d/report.json");
  // default tau 0.4 accepts both 0.5 scores
  CHECK(rep["rej_f1"] == 0.0);
  CHECK(rep["counts"]["tp_r"] == 0);
  CHECK(rep.contains("mr@3"));

  REQUIRE(run_cli({"eval", "--samples", sp, "--preds", pp, "--tau", "0.5", "--out-dir", (dir / "t").string()}) == 0);
  rep = load(dir / "t/report.json");
  CHECK(rep["counts"]["tp_r"] == 1);
  CHECK(rep["counts"]["fp_r"] == 1);

  gmr::io::write_text(dir / "cfg.json", R"({"tau": 0.5, "ks": [2]})");
  REQUIRE(run_cli({"eval", "--samples", sp, "--preds", pp, "--config", (dir / "cfg.json").string(), "--out-dir",
                   (dir / "c").string()}) == 0);
  rep = load(dir / "c/report.json");
  CHECK(rep.contains("mr@2"));
  CHECK_FALSE(rep.contains("mr@1"));
}

TEST_CASE("exit codes") {
  auto dir = scratch("codes");
  std::vector<gmr::Sample> s = {fixtures::sample("a", {{10, 20}}), fixtures::sample("b", {})};
  std::vector<gmr::PredictionRecord> p = {fixtures::pred("a", {}), fixtures::pred("a", {}), fixtures::pred("b", {})};
  write_pair(dir, s, p);
  const auto sp = (dir / "samples.jsonl").string(), pp = (dir / "preds.jsonl").string();
  CHECK(run_cli({"eval", "--samples", sp, "--preds", pp, "--out-dir", dir.string()}) == 1);

  p = {fixtures::pred("a", {}), fixtures::pred("b", {})};
  write_pair(dir, s, p);
  CHECK(run_cli({"eval", "--samples", sp, "--preds", pp, "--tau", "3", "--out-dir", dir.string()}) == 2);
  gmr::io::write_text(dir / "bad.json", R"({"tau": 0.4, "extra": 1})");
  CHECK(run_cli({"eval", "--samples", sp, "--preds", pp, "--config", (dir / "bad.json").string()}) == 2);
  gmr::io::write_text(dir / "broken.json", "{");
  CHECK(run_cli({"eval", "--samples", sp, "--preds", pp, "--config", (dir / "broken.json").string()}) == 2);
  CHECK(run_cli({"eval", "--samples", sp}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"eval", "--samples", sp, "--preds", pp, "--out-dir", (dir / "ok").string()}) == 0);
}

TEST_CASE("sweep output") {
  auto dir = scratch("sweep");
  auto s = gmr::synth_samples(20, 1, 0.5, 2);
  write_pair(dir, s, gmr::oracle_predictions(s));
  const auto sp = (dir / "samples.jsonl").string(), pp = (dir / "preds.jsonl").string();
  REQUIRE(run_cli({"sweep", "--samples", sp, "--preds", pp, "--out-dir", (dir / "a").string()}) == 0);
  auto t = load(dir / "a/sweep.json");
  CHECK(t["taus"].size() == 3);
  CHECK(t["ap"]["g_miou@1"] == 1.0);
  CHECK(t["ap"]["rej_f1"] == 1.0);

  REQUIRE(run_cli({"sweep", "--samples", sp, "--preds", pp, "--taus", "0.5", "--out-dir", (dir / "b").string()}) ==
          0);
  t = load(dir / "b/sweep.json");
  REQUIRE(t["taus"].size() == 1);
  CHECK(t["ap"]["rej_f1"] == t["per_tau"][0]["report"]["rej_f1"]);
  CHECK(gmr::io::read_text(dir / "b/sweep.md").find("tau=0.5") != std::string::npos);
}

TEST_CASE("build is byte-identical under a fixed seed") {
  auto dir = scratch("build");
  auto corpus = gmr::gen_corpus(6, 40, 9, 5);
  std::vector<Json> rows;
  for (const auto& r : corpus.records) rows.push_back(gmr::io::to_json(r));
  gmr::io::write_text(dir / "records.jsonl", gmr::io::to_jsonl(rows));
  const auto rp = (dir / "records.jsonl").string();
  REQUIRE(run_cli({"build", "--records", rp, "--seed", "7", "--out-dir", (dir / "a").string()}) == 0);
  REQUIRE(run_cli({"build", "--records", rp, "--seed", "7", "--out-dir", (dir / "b").string()}) == 0);
  CHECK(gmr::io::read_text(dir / "a/samples.jsonl") == gmr::io::read_text(dir / "b/samples.jsonl"));
  CHECK(gmr::io::read_text(dir / "a/stats.json") == gmr::io::read_text(dir / "b/stats.json"));
  auto stats = load(dir / "a/stats.json");
  CHECK(stats["total"] == stats["counts"]["null"].get<int>() + stats["counts"]["single"].get<int>() +
                              stats["counts"]["multi"].get<int>());
  auto m = load(dir / "a/manifest.json");
  CHECK(m["seed"] == 7);
  CHECK(m["config"]["build"]["sampling"]["seed"] == 7);

  gmr::io::write_text(dir / "offsets.json", R"({"events": {}})");
  CHECK(run_cli({"build", "--records", rp, "--offsets", (dir / "offsets.json").string(), "--out-dir",
                 (dir / "c").string()}) == 2);
}

TEST_CASE("reward batch scoring") {
  std::istringstream in(
      R"({"sample_id":"p","raw_output":"<answer>{\"relevant_windows\": [[10, 20]]}</answer>","duration_s":150,"ground_truth":[[10,20]]})"
      "\n"
      R"({"sample_id":"n","raw_output":"<answer>{\"relevant_windows\": []}</answer>","duration_s":150,"ground_truth":[]})"
      "\n"
      R"({"sample_id":"g","raw_output":"garbage","duration_s":150,"ground_truth":[[1,2]]})"
      "\n"
      "not json\n");
  std::ostringstream out, err;
  auto summary = gmr::cli::score_reward_stream(in, out, err, gmr::RewardConfig{});
  CHECK(summary.scored == 3);
  CHECK(summary.malformed == 1);
  std::istringstream lines(out.str());
  std::vector<Json> rows;
  for (std::string l; std::getline(lines, l);) rows.push_back(Json::parse(l));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0]["reward"] == 1.0);
  CHECK(rows[1]["reward"] == 0.1);
  CHECK(rows[2]["reward"] == -1.0);
  CHECK(rows[2]["content_reward"].is_null());
  CHECK(rows[3]["line"] == 4);
  CHECK(err.str().find("line 4:") != std::string::npos);

  // no state carries between lines
  std::istringstream reversed(
      R"({"sample_id":"g","raw_output":"garbage","duration_s":150,"ground_truth":[[1,2]]})"
      "\n"
      R"({"sample_id":"p","raw_output":"<answer>{\"relevant_windows\": [[10, 20]]}</answer>","duration_s":150,"ground_truth":[[10,20]]})"
      "\n");
  std::ostringstream out2;
  gmr::cli::score_reward_stream(reversed, out2, err, gmr::RewardConfig{});
  std::istringstream lines2(out2.str());
  std::string first, second;
  std::getline(lines2, first);
  std::getline(lines2, second);
  CHECK(Json::parse(first) == rows[2]);
  CHECK(Json::parse(second) == rows[0]);
}
