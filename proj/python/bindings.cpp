// Python bindings. Records cross the boundary as JSON text so the same schema
// checks apply as for files; the package wrapper converts to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "gmr/commands.hpp"
#include "gmr/io.hpp"
#include "gmr/metrics.hpp"
#include "gmr/reward.hpp"
#include "gmr/synth.hpp"

namespace py = pybind11;
using gmr::io::Json;

namespace {

template <class T, class F>
std::vector<T> parse_rows(const std::string& text, F from_json) {
  std::vector<T> out;
  for (const auto& row : Json::parse(text)) out.push_back(from_json(row));
  return out;
}

template <class T>
std::string dump_rows(const std::vector<T>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(gmr::io::to_json(r));
  return arr.dump();
}

Json parse_config(const std::string& text) { return text.empty() ? Json::object() : Json::parse(text); }

std::vector<gmr::TemporalSpan> spans(const std::vector<std::pair<double, double>>& v) {
  std::vector<gmr::TemporalSpan> out;
  for (auto [s, e] : v) out.push_back({s, e});
  return out;
}

}  // namespace

PYBIND11_MODULE(_gmr, m) {
  m.attr("__version__") = GMR_VERSION;

  py::register_exception<gmr::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<gmr::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("iou", [](std::pair<double, double> a, std::pair<double, double> b) {
    return gmr::iou({a.first, a.second}, {b.first, b.second});
  });

  m.def(
      "evaluate",
      [](const std::string& samples, const std::string& preds, const std::string& config, unsigned threads) {
        const auto s = parse_rows<gmr::Sample>(samples, gmr::io::sample_from_json);
        const auto p = parse_rows<gmr::PredictionRecord>(preds, gmr::io::prediction_from_json);
        const auto cfg = gmr::io::eval_config_from_json(parse_config(config));
        gmr::MetricReport rep;
        {
          py::gil_scoped_release release;
          rep = gmr::evaluate(s, p, cfg, threads);
        }
        return gmr::io::report_to_json(rep, cfg.ks).dump();
      },
      py::arg("samples"), py::arg("preds"), py::arg("config") = "", py::arg("threads") = 1);

  m.def(
      "score_answer",
      [](const std::string& raw, const std::vector<std::pair<double, double>>& gts, double duration,
         const std::string& config) {
        const auto cfg = gmr::io::reward_config_from_json(parse_config(config));
        const auto gt = spans(gts);
        return gmr::io::reward_result_to_json("", gmr::score_answer(raw, gt, duration, cfg)).dump();
      },
      py::arg("raw"), py::arg("ground_truth"), py::arg("duration_s"), py::arg("config") = "");

  m.def("synth_samples", [](std::size_t n, std::size_t max_moments, double null_fraction, std::uint64_t seed) {
    return dump_rows(gmr::synth_samples(n, max_moments, null_fraction, seed));
  });

  m.def("oracle_predictions", [](const std::string& samples) {
    return dump_rows(gmr::oracle_predictions(parse_rows<gmr::Sample>(samples, gmr::io::sample_from_json)));
  });

  m.def(
      "perturb",
      [](const std::string& samples, const std::string& config) {
        const auto s = parse_rows<gmr::Sample>(samples, gmr::io::sample_from_json);
        return dump_rows(gmr::perturb(s, gmr::io::perturb_config_from_json(parse_config(config))));
      },
      py::arg("samples"), py::arg("config") = "");

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "gmr");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    py::gil_scoped_release release;
    return gmr::cli::run(static_cast<int>(argv.size()), argv.data());
  });
}
