#include "gdm/pipeline.hpp"

#include <map>
#include <utility>

#include "gdm/error.hpp"

namespace gdm::pipeline {

Engine Engine::load(const std::string& data_dir, const std::string& preference_fis,
                    const std::string& feedback_fis) {
  return Engine{
      affect::AffectAnalyzer::from_directory(data_dir),
      decision::PreferenceFis::load(preference_fis.empty() ? data_dir + "/preference_fis.json" : preference_fis),
      consensus::FeedbackFis::load(feedback_fis.empty() ? data_dir + "/feedback_fis.json" : feedback_fis),
  };
}

Outcome evaluate(const Engine& engine, const Input& input) {
  affect::validate(input.affect_weights);
  const std::size_t m = input.participants.size();
  const std::size_t n = input.alternatives.size();
  if (m == 0) throw Error(ErrorKind::Precondition, "empty panel");
  if (input.assessments.size() != m || input.weights.size() != m) {
    throw Error(ErrorKind::Internal, "panel rows do not line up with participants");
  }

  std::string missing;
  for (std::size_t j = 0; j < m; ++j) {
    if (input.assessments[j].empty()) missing += (missing.empty() ? "" : ", ") + input.participants[j];
  }
  if (!missing.empty()) throw Error(ErrorKind::Precondition, "panel incomplete: no assessment from " + missing);

  Outcome out;
  auto nf = preference::normalize_features(input.features, input.alternatives);
  out.normalized = std::move(nf.matrix);
  out.warnings = std::move(nf.warnings);

  std::map<std::string, std::size_t> p_index, a_index;
  for (std::size_t j = 0; j < m; ++j) p_index[input.participants[j]] = j;
  for (std::size_t i = 0; i < n; ++i) a_index[input.alternatives[i].id] = i;

  // Several messages by one participant about one alternative are averaged;
  // pairs without any message stay neutral.
  std::vector<std::vector<double>> sp_sum(m, std::vector<double>(n, 0.0));
  std::vector<std::vector<int>> sp_count(m, std::vector<int>(n, 0));
  for (const auto& msg : input.messages) {
    auto pj = p_index.find(msg.participant);
    auto ai = a_index.find(msg.alternative);
    if (pj == p_index.end() || ai == a_index.end()) {
      throw Error(ErrorKind::NotFound, "message references unknown participant or alternative");
    }
    MessageAffect ma{msg.participant, msg.alternative, engine.affect.emotions(msg.text),
                     engine.affect.score(msg.text, input.affect_weights)};
    sp_sum[pj->second][ai->second] += ma.score.preference;
    sp_count[pj->second][ai->second] += 1;
    out.messages.push_back(std::move(ma));
  }
  std::vector<std::vector<double>> sentiment(m, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (sp_count[j][i] > 0) sentiment[j][i] = sp_sum[j][i] / sp_count[j][i];
    }
  }

  out.matrix = preference::aggregate(out.normalized, input.assessments, sentiment, input.weights);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    out.totals.push_back(engine.preference.total(out.matrix.voting[i], out.matrix.collective_sentiment[i]));
    ids.push_back(input.alternatives[i].id);
  }
  out.ranking = decision::rank(ids, out.totals);
  return out;
}

}  // namespace gdm::pipeline
