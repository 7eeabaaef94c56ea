#pragma once

#include <string>
#include <vector>

#include "gdm/fuzzy.hpp"

namespace gdm::decision {

/// Two-input rule base fusing collective voting preference V in [0, 100]
/// and collective sentiment S in [-1, 1] into a total preference in [0, 10].
class PreferenceFis {
 public:
  static constexpr const char* kVoting = "votingPreference";
  static constexpr const char* kSentiment = "sentimentPreference";
  static constexpr const char* kTotal = "totalPreference";

  /// Rejects rule bases that do not have the expected vocabulary:
  /// inputs (votingPreference, sentimentPreference) in that order with
  /// 5 and 3 terms, output totalPreference with 5 terms, 15 rules.
  explicit PreferenceFis(fuzzy::RuleBase rb);
  static PreferenceFis load(const std::string& path);

  /// Inputs are clamped to their universes.
  double total(double voting, double sentiment) const;

  const fuzzy::RuleBase& rule_base() const noexcept { return rb_; }

 private:
  fuzzy::RuleBase rb_;
};

struct RankedAlternative {
  std::string id;
  double total = 0.0;

  bool operator==(const RankedAlternative&) const = default;
};

struct Ranking {
  std::vector<RankedAlternative> order;  ///< non-increasing total

  const std::string& top() const { return order.front().id; }
  bool operator==(const Ranking&) const = default;
};

/// Sorts by total, descending; equal totals are ordered by ascending id.
Ranking rank(const std::vector<std::string>& ids, const std::vector<double>& totals);

}  // namespace gdm::decision
