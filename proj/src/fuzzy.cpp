#include "gdm/fuzzy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gdm/error.hpp"
#include "json.hpp"

namespace gdm::fuzzy {

namespace {

Error invalid(const std::string& msg) { return Error(ErrorKind::Validation, msg); }

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// TrapezoidMF

TrapezoidMF::TrapezoidMF(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    throw invalid("trapezoid breakpoints must be finite");
  }
  if (!(a <= b && b <= c && c <= d)) {
    throw invalid("trapezoid breakpoints must satisfy a <= b <= c <= d, got (" +
                  format_number(a) + ", " + format_number(b) + ", " + format_number(c) +
                  ", " + format_number(d) + ")");
  }
}

double TrapezoidMF::operator()(double x) const noexcept {
  if (x >= b_ && x <= c_) return 1.0;
  if (x <= a_ || x >= d_) return 0.0;
  if (x < b_) return (x - a_) / (b_ - a_);
  return (d_ - x) / (d_ - c_);
}

double TrapezoidMF::centroid() const noexcept {
  const double left = 0.5 * (b_ - a_);
  const double mid = c_ - b_;
  const double right = 0.5 * (d_ - c_);
  const double area = left + mid + right;
  if (area <= 0.0) return a_;
  const double moment = left * (a_ + 2.0 * (b_ - a_) / 3.0) + mid * 0.5 * (b_ + c_) +
                        right * (c_ + (d_ - c_) / 3.0);
  return moment / area;
}

// ---------------------------------------------------------------------------
// LinguisticVariable

LinguisticVariable::LinguisticVariable(std::string name, Interval universe, std::vector<Term> terms)
    : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {
  if (name_.empty()) throw invalid("variable name must not be empty");
  if (!(universe_.lo < universe_.hi)) {
    throw invalid("variable '" + name_ + "': universe must satisfy lo < hi");
  }
  if (terms_.empty()) throw invalid("variable '" + name_ + "' has no terms");

  std::set<std::string> seen;
  std::vector<double> points{universe_.lo, universe_.hi};
  for (const auto& t : terms_) {
    if (t.label.empty()) throw invalid("variable '" + name_ + "' has an unnamed term");
    if (!seen.insert(t.label).second) {
      throw invalid("variable '" + name_ + "' repeats term '" + t.label + "'");
    }
    if (t.mf.a() < universe_.lo || t.mf.d() > universe_.hi) {
      throw invalid("term '" + t.label + "' of '" + name_ + "' leaves the universe");
    }
    points.insert(points.end(), {t.mf.a(), t.mf.b(), t.mf.c(), t.mf.d()});
  }

  // Each term is positive on (a, d) union [b, c]; the union over terms is a
  // union of intervals whose ends are breakpoints, so testing breakpoints and
  // the midpoints between neighbours decides coverage exactly.
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  auto covered = [&](double x) {
    return std::any_of(terms_.begin(), terms_.end(), [x](const Term& t) { return t.mf(x) > 0.0; });
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    if (!universe_.contains(x)) continue;
    if (!covered(x)) {
      throw invalid("variable '" + name_ + "': no term covers " + format_number(x));
    }
    if (i + 1 < points.size()) {
      const double mid = 0.5 * (x + points[i + 1]);
      if (universe_.contains(mid) && !covered(mid)) {
        throw invalid("variable '" + name_ + "': no term covers " + format_number(mid));
      }
    }
  }
}

std::size_t LinguisticVariable::term_index(std::string_view label) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].label == label) return i;
  }
  throw invalid("variable '" + name_ + "' has no term '" + std::string(label) + "'");
}

bool LinguisticVariable::has_term(std::string_view label) const noexcept {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.label == label; });
}

// ---------------------------------------------------------------------------
// Rules

namespace {

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

bool keyword(const std::string& token, std::string_view kw) {
  if (token.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(token[i])) != kw[i]) return false;
  }
  return true;
}

}  // namespace

Rule parse_rule(std::string_view text) {
  const auto tok = split_ws(text);
  auto fail = [&](const std::string& why) {
    return invalid("malformed rule '" + std::string(text) + "': " + why);
  };
  if (tok.empty() || !keyword(tok[0], "IF")) throw fail("expected IF");

  Rule rule;
  std::size_t i = 1;
  while (true) {
    if (i + 2 >= tok.size() || !keyword(tok[i + 1], "IS")) throw fail("expected '<var> IS <term>'");
    rule.antecedents.emplace_back(tok[i], tok[i + 2]);
    i += 3;
    if (i >= tok.size()) throw fail("missing THEN clause");
    if (keyword(tok[i], "AND")) {
      ++i;
      continue;
    }
    if (keyword(tok[i], "THEN")) break;
    throw fail("expected AND or THEN, got '" + tok[i] + "'");
  }
  ++i;
  if (i + 3 != tok.size() || !keyword(tok[i + 1], "IS")) throw fail("expected 'THEN <var> IS <term>'");
  rule.consequent = {tok[i], tok[i + 2]};
  return rule;
}

std::string format_rule(const Rule& rule) {
  std::string out = "IF ";
  for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
    if (i > 0) out += " AND ";
    out += rule.antecedents[i].first + " IS " + rule.antecedents[i].second;
  }
  out += " THEN " + rule.consequent.first + " IS " + rule.consequent.second;
  return out;
}

// ---------------------------------------------------------------------------
// RuleBase

RuleBase::RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                   std::vector<Rule> rules, std::size_t resolution)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)),
      resolution_(resolution) {
  if (inputs_.empty()) throw invalid("rule base needs at least one input");
  if (resolution_ < 2) throw invalid("resolution must be at least 2");
  std::set<std::string> names;
  for (const auto& v : inputs_) {
    if (!names.insert(v.name()).second) throw invalid("duplicate input variable '" + v.name() + "'");
  }
  if (names.count(output_.name())) throw invalid("output variable shares a name with an input");
  if (rules_.empty()) throw invalid("rule base has no rules");

  // Every combination of input terms must appear in exactly one rule.
  std::vector<std::size_t> radix;
  std::size_t combos = 1;
  for (const auto& v : inputs_) {
    radix.push_back(v.terms().size());
    combos *= v.terms().size();
  }
  std::vector<int> seen(combos, 0);

  for (const auto& r : rules_) {
    if (r.antecedents.size() != inputs_.size()) {
      throw invalid("rule '" + format_rule(r) + "' must name every input exactly once");
    }
    CompiledRule cr;
    cr.terms.assign(inputs_.size(), 0);
    std::vector<bool> used(inputs_.size(), false);
    for (const auto& [var, term] : r.antecedents) {
      auto it = std::find_if(inputs_.begin(), inputs_.end(),
                             [&](const LinguisticVariable& v) { return v.name() == var; });
      if (it == inputs_.end()) {
        throw invalid("rule '" + format_rule(r) + "' references unknown input '" + var + "'");
      }
      const auto k = static_cast<std::size_t>(it - inputs_.begin());
      if (used[k]) throw invalid("rule '" + format_rule(r) + "' repeats input '" + var + "'");
      used[k] = true;
      cr.terms[k] = it->term_index(term);
    }
    if (r.consequent.first != output_.name()) {
      throw invalid("rule '" + format_rule(r) + "' must conclude on '" + output_.name() + "'");
    }
    cr.consequent = output_.term_index(r.consequent.second);

    std::size_t key = 0;
    for (std::size_t k = 0; k < inputs_.size(); ++k) key = key * radix[k] + cr.terms[k];
    if (seen[key]++ > 0) throw invalid("rule '" + format_rule(r) + "' duplicates an antecedent combination");
    compiled_.push_back(std::move(cr));
  }
  if (compiled_.size() != combos) {
    throw invalid("rule base incomplete: " + std::to_string(compiled_.size()) + " rules for " +
                  std::to_string(combos) + " input-term combinations");
  }

  const auto& u = output_.universe();
  grid_.resize(resolution_);
  weights_.assign(resolution_, 1.0);
  weights_.front() = weights_.back() = 0.5;
  const double step = (u.hi - u.lo) / static_cast<double>(resolution_ - 1);
  for (std::size_t k = 0; k < resolution_; ++k) grid_[k] = u.lo + step * static_cast<double>(k);
  grid_.back() = u.hi;
  for (const auto& t : output_.terms()) {
    std::vector<double> mu(resolution_);
    for (std::size_t k = 0; k < resolution_; ++k) mu[k] = t.mf(grid_[k]);
    output_mu_.push_back(std::move(mu));
  }
}

std::vector<double> RuleBase::activations(std::span<const double> crisp) const {
  if (crisp.size() != inputs_.size()) {
    throw invalid("incomplete inputs: expected " + std::to_string(inputs_.size()) + " values, got " +
                  std::to_string(crisp.size()));
  }
  std::vector<std::vector<double>> degrees(inputs_.size());
  for (std::size_t k = 0; k < inputs_.size(); ++k) {
    if (std::isnan(crisp[k])) throw invalid("input '" + inputs_[k].name() + "' is NaN");
    const double x = inputs_[k].universe().clamp(crisp[k]);
    for (const auto& t : inputs_[k].terms()) degrees[k].push_back(t.mf(x));
  }
  std::vector<double> strength(output_.terms().size(), 0.0);
  for (const auto& r : compiled_) {
    double s = 1.0;
    for (std::size_t k = 0; k < r.terms.size(); ++k) s = std::min(s, degrees[k][r.terms[k]]);
    strength[r.consequent] = std::max(strength[r.consequent], s);
  }
  return strength;
}

double RuleBase::defuzzify(std::span<const double> strengths) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < resolution_; ++k) {
    double mu = 0.0;
    for (std::size_t t = 0; t < strengths.size(); ++t) {
      if (strengths[t] > 0.0) mu = std::max(mu, std::min(strengths[t], output_mu_[t][k]));
    }
    num += weights_[k] * grid_[k] * mu;
    den += weights_[k] * mu;
  }
  if (!(den > 0.0)) throw Error(ErrorKind::Internal, "no rule fired");
  return output_.universe().clamp(num / den);
}

double RuleBase::infer(std::span<const double> crisp) const {
  const auto s = activations(crisp);
  return defuzzify(s);
}

double RuleBase::infer(const std::map<std::string, double>& crisp) const {
  std::vector<double> ordered;
  ordered.reserve(inputs_.size());
  for (const auto& v : inputs_) {
    auto it = crisp.find(v.name());
    if (it == crisp.end()) throw invalid("incomplete inputs: missing '" + v.name() + "'");
    ordered.push_back(it->second);
  }
  return infer(ordered);
}

RuleBase RuleBase::with_resolution(std::size_t resolution) const {
  return RuleBase(inputs_, output_, rules_, resolution);
}

bool RuleBase::operator==(const RuleBase& other) const {
  return inputs_ == other.inputs_ && output_ == other.output_ && rules_ == other.rules_ &&
         resolution_ == other.resolution_;
}

// ---------------------------------------------------------------------------
// Configuration documents

namespace {

using ordered_json = nlohmann::ordered_json;

LinguisticVariable variable_from_json(const ordered_json& j, const std::string& where) {
  auto fail = [&](const std::string& why) { return Error(ErrorKind::Schema, where + ": " + why); };
  if (!j.is_object()) throw fail("expected an object");
  if (!j.contains("name") || !j["name"].is_string()) throw fail("missing string field 'name'");
  if (!j.contains("universe") || !j["universe"].is_array() || j["universe"].size() != 2 ||
      !j["universe"][0].is_number() || !j["universe"][1].is_number()) {
    throw fail("'universe' must be [lo, hi]");
  }
  if (!j.contains("terms") || !j["terms"].is_array()) throw fail("missing array field 'terms'");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const auto& t = j["terms"][i];
    const std::string tw = where + ".terms[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("label") || !t["label"].is_string()) {
      throw Error(ErrorKind::Schema, tw + ": missing string field 'label'");
    }
    const auto& mf = t.contains("mf") ? t["mf"] : ordered_json();
    if (!mf.is_array() || mf.size() != 4 ||
        !std::all_of(mf.begin(), mf.end(), [](const ordered_json& x) { return x.is_number(); })) {
      throw Error(ErrorKind::Schema, tw + ": 'mf' must be [a, b, c, d]");
    }
    terms.push_back({t["label"].get<std::string>(),
                     TrapezoidMF(mf[0].get<double>(), mf[1].get<double>(), mf[2].get<double>(),
                                 mf[3].get<double>())});
  }
  return LinguisticVariable(j["name"].get<std::string>(),
                            {j["universe"][0].get<double>(), j["universe"][1].get<double>()},
                            std::move(terms));
}

ordered_json variable_to_json(const LinguisticVariable& v) {
  ordered_json j;
  j["name"] = v.name();
  j["universe"] = {v.universe().lo, v.universe().hi};
  ordered_json terms = ordered_json::array();
  for (const auto& t : v.terms()) {
    ordered_json tj;
    tj["label"] = t.label;
    tj["mf"] = {t.mf.a(), t.mf.b(), t.mf.c(), t.mf.d()};
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  return j;
}

}  // namespace

RuleBase parse_rule_base(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("rule base is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Schema, "rule base document must be an object");
  if (!j.contains("inputs") || !j["inputs"].is_array()) {
    throw Error(ErrorKind::Schema, "rule base: missing array field 'inputs'");
  }
  if (!j.contains("output")) throw Error(ErrorKind::Schema, "rule base: missing field 'output'");
  if (!j.contains("rules") || !j["rules"].is_array()) {
    throw Error(ErrorKind::Schema, "rule base: missing array field 'rules'");
  }
  std::size_t resolution = kDefaultResolution;
  if (j.contains("resolution")) {
    if (!j["resolution"].is_number_unsigned()) {
      throw Error(ErrorKind::Schema, "rule base: 'resolution' must be a positive integer");
    }
    resolution = j["resolution"].get<std::size_t>();
  }
  std::vector<LinguisticVariable> inputs;
  for (std::size_t i = 0; i < j["inputs"].size(); ++i) {
    inputs.push_back(variable_from_json(j["inputs"][i], "inputs[" + std::to_string(i) + "]"));
  }
  auto output = variable_from_json(j["output"], "output");
  std::vector<Rule> rules;
  for (std::size_t i = 0; i < j["rules"].size(); ++i) {
    if (!j["rules"][i].is_string()) {
      throw Error(ErrorKind::Schema, "rules[" + std::to_string(i) + "] must be a string");
    }
    rules.push_back(parse_rule(j["rules"][i].get<std::string>()));
  }
  return RuleBase(std::move(inputs), std::move(output), std::move(rules), resolution);
}

RuleBase load_rule_base(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read rule base '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_rule_base(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string serialize_rule_base(const RuleBase& rb) {
  ordered_json j;
  j["resolution"] = rb.resolution();
  ordered_json inputs = ordered_json::array();
  for (const auto& v : rb.inputs()) inputs.push_back(variable_to_json(v));
  j["inputs"] = std::move(inputs);
  j["output"] = variable_to_json(rb.output());
  ordered_json rules = ordered_json::array();
  for (const auto& r : rb.rules()) rules.push_back(format_rule(r));
  j["rules"] = std::move(rules);
  return j.dump(2) + "\n";
}

}  // namespace gdm::fuzzy
