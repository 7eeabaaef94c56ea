#include "gdm/session.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "gdm/error.hpp"

namespace gdm::session {

namespace {

constexpr Phase kPhases[] = {Phase::Setup, Phase::Voting, Phase::Discussion,
                             Phase::Ranking, Phase::Feedback, Phase::Closed};

Error invalid(const std::string& msg) { return Error(ErrorKind::Validation, msg); }

void require_phase(const Session& s, std::initializer_list<Phase> allowed, const char* action) {
  if (std::find(allowed.begin(), allowed.end(), s.phase) != allowed.end()) return;
  throw Error(ErrorKind::PhaseViolation,
              std::string("phase violation: cannot ") + action + " during " + to_string(s.phase));
}

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
  }) && id != "." && id != "..";
}

void check_id(const std::string& id, const char* what) {
  if (!valid_id(id)) {
    throw invalid(std::string("invalid ") + what + " id '" + id + "' (use 1-64 of [A-Za-z0-9._-])");
  }
}

const Participant* find_participant(const Session& s, const std::string& id) {
  for (const auto& p : s.participants) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

bool has_alternative(const Session& s, const std::string& id) {
  return std::any_of(s.alternatives.begin(), s.alternatives.end(), [&](const auto& a) { return a.id == id; });
}

void require_participant(const Session& s, const std::string& id) {
  if (!find_participant(s, id)) throw Error(ErrorKind::NotFound, "unknown participant '" + id + "'");
}

void check_weight(double w) {
  if (!std::isfinite(w) || w < 0.0) throw invalid("participant weight must be finite and non-negative");
}

}  // namespace

const char* to_string(Phase p) noexcept {
  switch (p) {
    case Phase::Setup: return "setup";
    case Phase::Voting: return "voting";
    case Phase::Discussion: return "discussion";
    case Phase::Ranking: return "ranking";
    case Phase::Feedback: return "feedback";
    case Phase::Closed: return "closed";
  }
  return "?";
}

Phase parse_phase(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (auto p : kPhases) {
    if (lower == to_string(p)) return p;
  }
  throw invalid("unknown phase '" + text + "'");
}

bool can_transition(Phase from, Phase to) noexcept {
  if (from == Phase::Feedback && to == Phase::Discussion) return true;
  return static_cast<int>(to) == static_cast<int>(from) + 1;
}

Session create(std::string id, Setup setup) {
  check_id(id, "session");
  if (setup.features.empty()) throw invalid("a session needs at least one feature");
  if (setup.alternatives.size() < 2) throw invalid("a session needs at least two alternatives");
  std::set<std::string> seen;
  for (const auto& f : setup.features) {
    check_id(f.id, "feature");
    if (!seen.insert(f.id).second) throw invalid("duplicate feature id '" + f.id + "'");
  }
  seen.clear();
  for (const auto& a : setup.alternatives) {
    check_id(a.id, "alternative");
    if (!seen.insert(a.id).second) throw invalid("duplicate alternative id '" + a.id + "'");
    for (const auto& [fid, value] : a.values) {
      if (std::none_of(setup.features.begin(), setup.features.end(), [&](const auto& f) { return f.id == fid; })) {
        throw invalid("alternative '" + a.id + "' has a value for unknown feature '" + fid + "'");
      }
    }
  }
  // Normalizing once up front surfaces missing or non-binary values now
  // rather than at ranking time.
  preference::normalize_features(setup.features, setup.alternatives);
  affect::validate(setup.affect);
  consensus::validate(setup.thresholds);

  Session s;
  s.id = std::move(id);
  s.features = std::move(setup.features);
  s.alternatives = std::move(setup.alternatives);
  s.affect = setup.affect;
  s.thresholds = setup.thresholds;
  for (auto& p : setup.participants) add_participant(s, std::move(p));
  return s;
}

void add_participant(Session& s, Participant p) {
  require_phase(s, {Phase::Setup, Phase::Voting}, "register participants");
  check_id(p.id, "participant");
  check_weight(p.weight);
  if (find_participant(s, p.id)) throw Error(ErrorKind::Duplicate, "participant '" + p.id + "' already registered");
  if (p.name.empty()) p.name = p.id;
  s.participants.push_back(std::move(p));
}

void submit_assessment(Session& s, const std::string& participant, const std::map<std::string, int>& values) {
  require_phase(s, {Phase::Voting}, "submit assessments");
  require_participant(s, participant);
  if (std::any_of(s.assessments.begin(), s.assessments.end(), [&](const auto& a) { return a.participant == participant; })) {
    throw Error(ErrorKind::Duplicate, "already voted: '" + participant + "'");
  }
  if (values.size() != s.features.size()) throw invalid("invalid assessment: one value per feature is required");
  Assessment a{participant, {}};
  for (const auto& f : s.features) {
    auto it = values.find(f.id);
    if (it == values.end()) throw invalid("invalid assessment: no value for feature '" + f.id + "'");
    if (it->second < -1 || it->second > 1) {
      throw invalid("invalid assessment: value for '" + f.id + "' must be -1, 0 or 1");
    }
    a.values.push_back(it->second);
  }
  s.assessments.push_back(std::move(a));
}

void post_message(Session& s, Message m) {
  require_phase(s, {Phase::Discussion}, "post messages");
  require_participant(s, m.participant);
  if (!has_alternative(s, m.alternative)) throw Error(ErrorKind::NotFound, "unknown alternative '" + m.alternative + "'");
  const bool blank = std::all_of(m.text.begin(), m.text.end(), [](unsigned char c) { return std::isspace(c); });
  if (blank) throw invalid("message text must not be empty");
  std::size_t chars = 0;
  for (unsigned char c : m.text) chars += (c & 0xC0) != 0x80;
  if (chars > kMaxMessageLength) throw invalid("message text exceeds 4096 characters");
  s.messages.push_back(std::move(m));
}

double submit_feedback(Session& s, const pipeline::Engine& engine, const std::string& participant,
                       double agreement, double confidence) {
  require_phase(s, {Phase::Feedback}, "submit feedback");
  require_participant(s, participant);
  if (std::any_of(s.feedback.begin(), s.feedback.end(), [&](const auto& f) { return f.participant == participant; })) {
    throw Error(ErrorKind::Duplicate, "feedback already submitted by '" + participant + "'");
  }
  const double score = engine.feedback.score(agreement, confidence);
  s.feedback.push_back({participant, agreement, confidence, score});
  s.consensus.reset();
  return score;
}

void transition(Session& s, Phase target) {
  if (target == s.phase || !can_transition(s.phase, target)) {
    throw Error(ErrorKind::PhaseViolation, std::string("phase violation: cannot move from ") + to_string(s.phase) +
                                               " to " + to_string(target));
  }
  if (s.phase == Phase::Ranking && !s.ranking) {
    throw Error(ErrorKind::Precondition, "compute the ranking before collecting feedback");
  }
  if (s.phase == Phase::Feedback && target == Phase::Discussion) {
    s.ranking.reset();
    s.feedback.clear();
    s.consensus.reset();
  }
  s.phase = target;
}

pipeline::Input pipeline_input(const Session& s) {
  pipeline::Input in;
  in.features = s.features;
  in.alternatives = s.alternatives;
  in.affect_weights = s.affect;
  for (const auto& p : s.participants) {
    in.participants.push_back(p.id);
    in.weights.push_back(p.weight);
    auto it = std::find_if(s.assessments.begin(), s.assessments.end(),
                           [&](const auto& a) { return a.participant == p.id; });
    in.assessments.push_back(it == s.assessments.end() ? std::vector<int>{} : it->values);
  }
  for (const auto& m : s.messages) in.messages.push_back({m.participant, m.alternative, m.text});
  return in;
}

const pipeline::Outcome& compute_ranking(Session& s, const pipeline::Engine& engine) {
  require_phase(s, {Phase::Ranking}, "compute the ranking");
  s.ranking = pipeline::evaluate(engine, pipeline_input(s));
  return *s.ranking;
}

const consensus::Report& compute_consensus(Session& s) {
  require_phase(s, {Phase::Feedback, Phase::Closed}, "report consensus");
  std::vector<double> scores;
  for (const auto& f : s.feedback) {
    if (!f.score) throw Error(ErrorKind::Precondition, "feedback from '" + f.participant + "' has no score");
    scores.push_back(*f.score);
  }
  s.consensus = consensus::consensus_report(scores, s.thresholds);
  return *s.consensus;
}

void check_integrity(const Session& s) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Schema, msg); };
  std::set<std::string> ids;
  for (const auto& p : s.participants) {
    if (!ids.insert(p.id).second) fail("duplicate participant '" + p.id + "'");
  }
  std::set<std::string> voted;
  for (const auto& a : s.assessments) {
    if (!ids.count(a.participant)) fail("assessment from unknown participant '" + a.participant + "'");
    if (!voted.insert(a.participant).second) fail("two assessments from '" + a.participant + "'");
    if (a.values.size() != s.features.size()) fail("assessment from '" + a.participant + "' has the wrong length");
    for (int v : a.values) {
      if (v < -1 || v > 1) fail("assessment from '" + a.participant + "' holds a value outside {-1, 0, 1}");
    }
  }
  for (const auto& m : s.messages) {
    if (!ids.count(m.participant)) fail("message from unknown participant '" + m.participant + "'");
    if (!has_alternative(s, m.alternative)) fail("message about unknown alternative '" + m.alternative + "'");
  }
  std::set<std::string> gave;
  for (const auto& f : s.feedback) {
    if (!ids.count(f.participant)) fail("feedback from unknown participant '" + f.participant + "'");
    if (!gave.insert(f.participant).second) fail("two feedback entries from '" + f.participant + "'");
  }
}

}  // namespace gdm::session
