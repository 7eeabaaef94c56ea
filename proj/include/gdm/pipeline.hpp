#pragma once

#include <string>
#include <vector>

#include "gdm/affect.hpp"
#include "gdm/consensus.hpp"
#include "gdm/decision.hpp"
#include "gdm/preference.hpp"

namespace gdm::pipeline {

/// Everything needed to score sessions: both lexicons and both rule bases.
/// Immutable after construction and safe to share between threads.
struct Engine {
  affect::AffectAnalyzer affect;
  decision::PreferenceFis preference;
  consensus::FeedbackFis feedback;

  /// Loads the lexicons and `preference_fis.json` / `feedback_fis.json` from
  /// `data_dir`; non-empty override paths replace the bundled rule bases.
  static Engine load(const std::string& data_dir, const std::string& preference_fis = {},
                     const std::string& feedback_fis = {});
};

struct MessageInput {
  std::string participant;
  std::string alternative;
  std::string text;
};

/// Intake data of one decision round, in document order.
struct Input {
  std::vector<preference::FeatureSpec> features;
  std::vector<preference::Alternative> alternatives;
  std::vector<std::string> participants;
  std::vector<double> weights;                    ///< one per participant, not necessarily normalised
  std::vector<std::vector<int>> assessments;      ///< per participant, per feature; empty row = missing
  std::vector<MessageInput> messages;
  affect::AffectWeights affect_weights;
};

struct MessageAffect {
  std::string participant;
  std::string alternative;
  affect::EmotionVector emotions;
  affect::AffectScore score;

  bool operator==(const MessageAffect&) const = default;
};

/// Result of Steps 1-5 for one round.
struct Outcome {
  std::vector<std::vector<int>> normalized;  ///< [alternative][feature]
  std::vector<std::string> warnings;
  preference::PreferenceMatrix matrix;
  std::vector<MessageAffect> messages;
  std::vector<double> totals;  ///< per alternative, document order
  decision::Ranking ranking;

  bool operator==(const Outcome&) const = default;
};

/// Throws Precondition "panel incomplete: ..." naming every participant
/// without an assessment.
Outcome evaluate(const Engine& engine, const Input& input);

}  // namespace gdm::pipeline
