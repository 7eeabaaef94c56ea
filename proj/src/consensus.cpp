#include "gdm/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gdm/error.hpp"

namespace gdm::consensus {

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Schema, "feedback rule base: " + what);
}

void expect_terms(const fuzzy::LinguisticVariable& v, const char* name, std::initializer_list<const char*> labels) {
  expect(v.name() == name, std::string("expected variable '") + name + "', got '" + v.name() + "'");
  expect(v.terms().size() == labels.size(), std::string("'") + name + "' must have 3 terms");
  for (const char* l : labels) expect(v.has_term(l), std::string("'") + name + "' lacks term '" + l + "'");
}

// High results within this distance of high_max print as the threshold itself.
constexpr double kBoundaryBand = 0.005;

}  // namespace

FeedbackFis::FeedbackFis(fuzzy::RuleBase rb) : rb_(std::move(rb)) {
  const auto& in = rb_.inputs();
  expect(in.size() == 2, "expected 2 inputs");
  expect_terms(in[0], kAgreement, {"disagree", "neutral", "agree"});
  expect_terms(in[1], kConfidence, {"unsure", "neutral", "sure"});
  expect_terms(rb_.output(), kFeedback, {"weak", "moderate", "strong"});
  expect(rb_.rules().size() == 9, "expected 9 rules");
}

FeedbackFis FeedbackFis::load(const std::string& path) { return FeedbackFis(fuzzy::load_rule_base(path)); }

void check_feedback_range(double agreement, double confidence) {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 10.0; };
  if (!ok(agreement) || !ok(confidence)) throw Error(ErrorKind::Validation, "feedback out of range");
}

double FeedbackFis::score(double agreement, double confidence) const {
  check_feedback_range(agreement, confidence);
  const double in[2] = {agreement, confidence};
  return rb_.infer(in);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::Precondition, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  // Skip the arithmetic on exact positions so quartiles equal sample values.
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

Quartiles compute_iqr(const std::vector<double>& scores) {
  if (scores.size() < 2) throw Error(ErrorKind::Precondition, "insufficient feedback");
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(ErrorKind::Validation, "feedback scores must be finite");
  }
  Quartiles q;
  q.q1 = quantile(scores, 0.25);
  q.q3 = quantile(scores, 0.75);
  q.iqr = q.q3 - q.q1;
  return q;
}

const char* to_string(Level level) noexcept {
  switch (level) {
    case Level::High: return "High";
    case Level::Medium: return "Medium";
    case Level::None: return "None";
  }
  return "?";
}

const char* display_name(Level level) noexcept { return level == Level::None ? "Low" : to_string(level); }

Level parse_level(const std::string& text) {
  for (auto l : {Level::High, Level::Medium, Level::None}) {
    if (text == to_string(l)) return l;
  }
  throw Error(ErrorKind::Schema, "unknown consensus level '" + text + "'");
}

void validate(const Thresholds& t) {
  if (!std::isfinite(t.high_max) || !std::isfinite(t.medium_max) || t.high_max < 0.0 || t.medium_max < t.high_max) {
    throw Error(ErrorKind::Validation, "consensus thresholds must satisfy 0 <= high_max <= medium_max");
  }
}

Level classify(double iqr, const Thresholds& t) {
  if (!(iqr >= 0.0)) throw Error(ErrorKind::Validation, "IQR must be non-negative");
  if (iqr <= t.high_max) return Level::High;
  if (iqr <= t.medium_max) return Level::Medium;
  return Level::None;
}

Report consensus_report(const std::vector<double>& scores, const Thresholds& t) {
  validate(t);
  Report r;
  r.scores = scores;
  r.quartiles = compute_iqr(scores);
  r.level = classify(r.quartiles.iqr, t);
  if (r.level == Level::High && r.quartiles.iqr > t.high_max - kBoundaryBand) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "IQR is on the High boundary; the strict form IQR < %.2f would classify it as Medium",
                  t.high_max);
    r.note = buf;
  }
  return r;
}

}  // namespace gdm::consensus
