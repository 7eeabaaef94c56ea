#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gdm/affect.hpp"
#include "gdm/consensus.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/preference.hpp"

namespace gdm::session {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kMaxMessageLength = 4096;

enum class Phase { Setup, Voting, Discussion, Ranking, Feedback, Closed };

const char* to_string(Phase p) noexcept;
Phase parse_phase(const std::string& text);
/// Forward edges of the protocol plus Feedback -> Discussion (reopen).
bool can_transition(Phase from, Phase to) noexcept;

struct Participant {
  std::string id;
  std::string name;
  double weight = 1.0;

  bool operator==(const Participant&) const = default;
};

struct Assessment {
  std::string participant;
  std::vector<int> values;  ///< one per feature, in feature order

  bool operator==(const Assessment&) const = default;
};

struct Message {
  std::string participant;
  std::string alternative;
  std::string text;
  std::string timestamp;  ///< UTC, ISO 8601, assigned on intake

  bool operator==(const Message&) const = default;
};

struct FeedbackEntry {
  std::string participant;
  double agreement = 0.0;
  double confidence = 0.0;
  std::optional<double> score;

  bool operator==(const FeedbackEntry&) const = default;
};

/// Setup data accepted by create().
struct Setup {
  std::vector<preference::FeatureSpec> features;
  std::vector<preference::Alternative> alternatives;
  std::vector<Participant> participants;
  affect::AffectWeights affect = affect::AffectWeights::fused();
  consensus::Thresholds thresholds;
};

struct Session {
  std::string id;
  Phase phase = Phase::Setup;
  std::vector<preference::FeatureSpec> features;
  std::vector<preference::Alternative> alternatives;
  std::vector<Participant> participants;
  affect::AffectWeights affect = affect::AffectWeights::fused();
  consensus::Thresholds thresholds;
  std::vector<Assessment> assessments;
  std::vector<Message> messages;
  std::vector<FeedbackEntry> feedback;
  std::optional<pipeline::Outcome> ranking;
  std::optional<consensus::Report> consensus;

  bool operator==(const Session&) const = default;
};

/// Validates setup data (>= 2 alternatives, >= 1 feature, unique ids,
/// complete feature values) and returns a session in Setup.
Session create(std::string id, Setup setup);

// Intake operations. Each validates against the current phase and the
// referential rules and either applies the whole change or throws leaving
// the session untouched.

void add_participant(Session& s, Participant p);
void submit_assessment(Session& s, const std::string& participant, const std::map<std::string, int>& values);
void post_message(Session& s, Message m);
/// Returns the feedback score computed for the entry.
double submit_feedback(Session& s, const pipeline::Engine& engine, const std::string& participant,
                       double agreement, double confidence);
/// Reopening (Feedback -> Discussion) drops ranking, feedback and consensus.
void transition(Session& s, Phase target);

/// Steps 1-5 over the persisted intake data; requires phase Ranking.
const pipeline::Outcome& compute_ranking(Session& s, const pipeline::Engine& engine);
/// Requires phase Feedback or Closed and at least two feedback entries.
const consensus::Report& compute_consensus(Session& s);

pipeline::Input pipeline_input(const Session& s);

/// Throws Schema if any assessment, message or feedback entry references an
/// unknown participant or alternative, or if uniqueness rules are broken.
void check_integrity(const Session& s);

}  // namespace gdm::session
