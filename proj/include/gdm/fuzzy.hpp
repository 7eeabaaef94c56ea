#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gdm::fuzzy {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double x) const noexcept { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Trapezoidal membership function with breakpoints a <= b <= c <= d.
///
/// Degenerate shapes are legal: a == b gives a vertical left edge, c == d a
/// vertical right edge and b == c a triangle. A vertical edge belongs to the
/// plateau, so mu(a) == 1 when a == b.
class TrapezoidMF {
 public:
  TrapezoidMF(double a, double b, double c, double d);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  double operator()(double x) const noexcept;

  /// Center of mass of the (unclipped) shape, closed form.
  double centroid() const noexcept;

  bool operator==(const TrapezoidMF&) const = default;

 private:
  double a_, b_, c_, d_;
};

/// Membership degree of x in mf, in [0, 1].
inline double membership(const TrapezoidMF& mf, double x) noexcept { return mf(x); }

struct Term {
  std::string label;
  TrapezoidMF mf;

  bool operator==(const Term&) const = default;
};

/// Named variable over a closed universe with an ordered set of labelled
/// terms. Term order is meaningful: rule bases and monotonicity checks treat
/// it as the linguistic ordering (low to high).
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Interval universe, std::vector<Term> terms);

  const std::string& name() const noexcept { return name_; }
  const Interval& universe() const noexcept { return universe_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Index of the term with this label; throws gdm::Error if absent.
  std::size_t term_index(std::string_view label) const;
  bool has_term(std::string_view label) const noexcept;
  const TrapezoidMF& term(std::string_view label) const { return terms_[term_index(label)].mf; }

  bool operator==(const LinguisticVariable&) const = default;

 private:
  std::string name_;
  Interval universe_;
  std::vector<Term> terms_;
};

/// IF v1 IS t1 AND v2 IS t2 ... THEN out IS t.
struct Rule {
  std::vector<std::pair<std::string, std::string>> antecedents;
  std::pair<std::string, std::string> consequent;

  bool operator==(const Rule&) const = default;
};

/// Parses "IF var IS term AND ... THEN out IS term". Keywords are matched
/// case-insensitively; identifiers are kept verbatim.
Rule parse_rule(std::string_view text);
std::string format_rule(const Rule& rule);

inline constexpr std::size_t kDefaultResolution = 1000;

/// Mamdani rule base: min for AND, clipping implication, max aggregation and
/// centroid defuzzification over a uniform grid of `resolution` samples.
class RuleBase {
 public:
  RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
           std::vector<Rule> rules, std::size_t resolution = kDefaultResolution);

  const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
  const LinguisticVariable& output() const noexcept { return output_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t resolution() const noexcept { return resolution_; }

  /// Crisp values in input order. Values outside a universe are clamped.
  double infer(std::span<const double> crisp) const;
  double infer(const std::map<std::string, double>& crisp) const;

  /// Per-term firing strengths of the output variable for these inputs
  /// (max over rules sharing a consequent).
  std::vector<double> activations(std::span<const double> crisp) const;

  /// Same rule base sampled at a different resolution.
  RuleBase with_resolution(std::size_t resolution) const;

  bool operator==(const RuleBase& other) const;

 private:
  struct CompiledRule {
    std::vector<std::size_t> terms;  // one per input, in input order
    std::size_t consequent;
  };

  double defuzzify(std::span<const double> strengths) const;

  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<Rule> rules_;
  std::size_t resolution_;
  std::vector<CompiledRule> compiled_;
  std::vector<double> grid_;
  std::vector<double> weights_;                  // trapezoidal quadrature weights
  std::vector<std::vector<double>> output_mu_;  // [term][sample]
};

/// Rule-base configuration documents (JSON). serialize() emits a canonical
/// form, so parse(serialize(parse(s))) == parse(s) and serialize is a fixed
/// point after one round.
RuleBase parse_rule_base(std::string_view json_text);
RuleBase load_rule_base(const std::string& path);
std::string serialize_rule_base(const RuleBase& rb);

}  // namespace gdm::fuzzy
