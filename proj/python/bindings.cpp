#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gdm/consensus.hpp"
#include "gdm/document.hpp"
#include "gdm/error.hpp"
#include "gdm/fuzzy.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/preference.hpp"
#include "gdm/report.hpp"

namespace py = pybind11;

namespace {

py::dict emotions_dict(const gdm::affect::EmotionVector& v) {
  py::dict d;
  d["happy"] = v.happy;
  d["surprise"] = v.surprise;
  d["angry"] = v.angry;
  d["sad"] = v.sad;
  d["fear"] = v.fear;
  return d;
}

std::optional<gdm::affect::AffectWeights> affect_mode(const std::optional<std::string>& mode) {
  if (!mode) return std::nullopt;
  if (*mode == "sentiment-only") return gdm::affect::AffectWeights::sentiment_only();
  if (*mode == "fused") return gdm::affect::AffectWeights::fused();
  throw gdm::Error(gdm::ErrorKind::Validation, "affect must be 'sentiment-only' or 'fused'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fuzzy group decision-making engine";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&] { return py::exception<gdm::Error>(m, "GdmError", PyExc_ValueError); });
  // args are (message, kind) so callers can branch on the kind.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const gdm::Error& e) {
      py::tuple args = py::make_tuple(e.what(), gdm::to_string(e.kind()));
      PyErr_SetObject(error_type.get_stored().ptr(), args.ptr());
    }
  });

  py::class_<gdm::fuzzy::RuleBase>(m, "RuleBase")
      .def_static("from_json", [](const std::string& text) { return gdm::fuzzy::parse_rule_base(text); })
      .def_static("load", &gdm::fuzzy::load_rule_base, py::arg("path"))
      .def("infer", py::overload_cast<const std::map<std::string, double>&>(&gdm::fuzzy::RuleBase::infer, py::const_),
           py::arg("inputs"))
      .def("with_resolution", &gdm::fuzzy::RuleBase::with_resolution, py::arg("resolution"))
      .def_property_readonly("resolution", &gdm::fuzzy::RuleBase::resolution)
      .def("to_json", [](const gdm::fuzzy::RuleBase& rb) { return gdm::fuzzy::serialize_rule_base(rb); });

  m.def(
      "membership",
      [](double a, double b, double c, double d, double x) { return gdm::fuzzy::TrapezoidMF(a, b, c, d)(x); },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("x"));

  m.def("raw_preference", &gdm::preference::raw_preference, py::arg("features"), py::arg("assessment"));
  m.def("scale_preference", &gdm::preference::scale_preference, py::arg("raw"));

  m.def(
      "compute_iqr",
      [](const std::vector<double>& scores) {
        const auto q = gdm::consensus::compute_iqr(scores);
        return py::make_tuple(q.q1, q.q3, q.iqr);
      },
      py::arg("scores"));
  m.def(
      "classify",
      [](double iqr, double high_max, double medium_max) {
        return std::string(gdm::consensus::to_string(gdm::consensus::classify(iqr, {high_max, medium_max})));
      },
      py::arg("iqr"), py::arg("high_max") = 2.0, py::arg("medium_max") = 4.0);

  m.def(
      "render_table",
      [](const std::string& report) { return gdm::report::render_table(gdm::document::parse_json(report)); },
      py::arg("report_json"));

  py::class_<gdm::pipeline::Engine>(m, "Engine")
      .def(py::init([](const std::string& data_dir, const std::string& pref, const std::string& feedback) {
             return gdm::pipeline::Engine::load(data_dir, pref, feedback);
           }),
           py::arg("data_dir"), py::arg("preference_fis") = "", py::arg("feedback_fis") = "")
      .def("sentiment", [](const gdm::pipeline::Engine& e, const std::string& t) { return e.affect.sentiment(t); },
           py::arg("text"))
      .def("emotions",
           [](const gdm::pipeline::Engine& e, const std::string& t) { return emotions_dict(e.affect.emotions(t)); },
           py::arg("text"))
      .def(
          "score",
          [](const gdm::pipeline::Engine& e, const std::string& t, double alpha, double beta) {
            const auto s = e.affect.score(t, {alpha, beta});
            py::dict d;
            d["sentiment"] = s.sentiment;
            d["emotion"] = s.emotion;
            d["preference"] = s.preference;
            d["alpha"] = s.alpha;
            d["beta"] = s.beta;
            return d;
          },
          py::arg("text"), py::arg("alpha") = 0.6, py::arg("beta") = 0.4)
      .def(
          "total_preference",
          [](const gdm::pipeline::Engine& e, double v, double s) { return e.preference.total(v, s); },
          py::arg("voting"), py::arg("sentiment"))
      .def(
          "feedback_score",
          [](const gdm::pipeline::Engine& e, double a, double c) { return e.feedback.score(a, c); },
          py::arg("agreement"), py::arg("confidence"))
      .def(
          "run",
          [](const gdm::pipeline::Engine& e, const std::string& session, const std::optional<std::string>& affect) {
            const auto s = gdm::document::parse_session(session);
            const auto weights = affect_mode(affect);
            py::gil_scoped_release release;
            return gdm::report::serialize(gdm::report::run(e, s, weights));
          },
          py::arg("session_json"), py::arg("affect") = py::none(),
          "Report JSON for a session document given as JSON text.");
}
