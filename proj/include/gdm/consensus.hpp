#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdm/fuzzy.hpp"

namespace gdm::consensus {

/// Agreement x confidence rule base producing a feedback score in [0, 10].
class FeedbackFis {
 public:
  static constexpr const char* kAgreement = "agreement";
  static constexpr const char* kConfidence = "confidence";
  static constexpr const char* kFeedback = "feedback";

  /// Rejects rule bases whose vocabulary differs from
  /// agreement{disagree, neutral, agree} x confidence{unsure, neutral, sure}
  /// -> feedback{weak, moderate, strong} with 9 rules.
  explicit FeedbackFis(fuzzy::RuleBase rb);
  static FeedbackFis load(const std::string& path);

  /// Throws "feedback out of range" unless both values lie in [0, 10].
  double score(double agreement, double confidence) const;

  const fuzzy::RuleBase& rule_base() const noexcept { return rb_; }

 private:
  fuzzy::RuleBase rb_;
};

/// Throws "feedback out of range" unless value is finite and in [0, 10].
void check_feedback_range(double agreement, double confidence);

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;

  bool operator==(const Quartiles&) const = default;
};

/// Linear-interpolation quantile at position q (n - 1) of the sorted values.
double quantile(std::vector<double> values, double q);

/// Throws "insufficient feedback" for fewer than two scores.
Quartiles compute_iqr(const std::vector<double>& scores);

enum class Level { High, Medium, None };

const char* to_string(Level level) noexcept;
/// Human label; the lowest band reads "Low".
const char* display_name(Level level) noexcept;
Level parse_level(const std::string& text);

struct Thresholds {
  double high_max = 2.0;
  double medium_max = 4.0;

  bool operator==(const Thresholds&) const = default;
};

void validate(const Thresholds& t);

/// IQR <= high_max -> High, <= medium_max -> Medium, otherwise None.
Level classify(double iqr, const Thresholds& t = {});

struct Report {
  std::vector<double> scores;
  Quartiles quartiles;
  Level level = Level::None;
  std::optional<std::string> note;  ///< set when IQR sits on the High/Medium boundary band

  bool operator==(const Report&) const = default;
};

Report consensus_report(const std::vector<double>& scores, const Thresholds& t = {});

}  // namespace gdm::consensus
