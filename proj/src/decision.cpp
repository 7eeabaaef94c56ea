#include "gdm/decision.hpp"

#include <algorithm>
#include <cmath>

#include "gdm/error.hpp"

namespace gdm::decision {

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Schema, "preference rule base: " + what);
}

}  // namespace

PreferenceFis::PreferenceFis(fuzzy::RuleBase rb) : rb_(std::move(rb)) {
  const auto& in = rb_.inputs();
  expect(in.size() == 2, "expected 2 inputs");
  expect(in[0].name() == kVoting && in[0].terms().size() == 5,
         std::string("first input must be '") + kVoting + "' with 5 terms");
  expect(in[1].name() == kSentiment && in[1].terms().size() == 3,
         std::string("second input must be '") + kSentiment + "' with 3 terms");
  expect(rb_.output().name() == kTotal && rb_.output().terms().size() == 5,
         std::string("output must be '") + kTotal + "' with 5 terms");
  expect(rb_.rules().size() == 15, "expected 15 rules");
}

PreferenceFis PreferenceFis::load(const std::string& path) { return PreferenceFis(fuzzy::load_rule_base(path)); }

double PreferenceFis::total(double voting, double sentiment) const {
  if (!std::isfinite(voting) || !std::isfinite(sentiment)) {
    throw Error(ErrorKind::Validation, "total preference inputs must be finite");
  }
  const double in[2] = {voting, sentiment};
  return rb_.infer(in);
}

Ranking rank(const std::vector<std::string>& ids, const std::vector<double>& totals) {
  if (ids.empty()) throw Error(ErrorKind::Precondition, "no alternatives to rank");
  if (ids.size() != totals.size()) throw Error(ErrorKind::Validation, "one total per alternative is required");
  Ranking r;
  for (std::size_t i = 0; i < ids.size(); ++i) r.order.push_back({ids[i], totals[i]});
  std::sort(r.order.begin(), r.order.end(), [](const RankedAlternative& a, const RankedAlternative& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.id < b.id;
  });
  return r;
}

}  // namespace gdm::decision
