#include "gdm/report.hpp"

#include <cstdio>
#include <sstream>

#include "gdm/error.hpp"

namespace gdm::report {

namespace {

constexpr int kReportVersion = 1;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Column-aligned text table; first column left-aligned, the rest right.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t c = 0; c < rows_[i].size(); ++c) {
        const auto& cell = rows_[i][c];
        const std::string pad(width[c] - cell.size(), ' ');
        if (c) out << "  ";
        out << (c == 0 ? cell + pad : pad + cell);
      }
      out << '\n';
      if (i == 0) {
        std::size_t total = 0;
        for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
        out << std::string(total, '-') << '\n';
      }
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> strings(const Json& arr) {
  std::vector<std::string> out;
  for (const auto& x : arr) out.push_back(x.get<std::string>());
  return out;
}

}  // namespace

Json build(const session::Session& s, const pipeline::Outcome& outcome,
           const std::optional<consensus::Report>& consensus) {
  Json j;
  j["report_version"] = kReportVersion;
  Json features = Json::array();
  for (const auto& f : s.features) features.push_back(f.id);
  j["features"] = features;
  Json alternatives = Json::array();
  for (const auto& a : s.alternatives) alternatives.push_back({{"id", a.id}, {"label", a.label}});
  j["alternatives"] = alternatives;
  Json participants = Json::array();
  for (const auto& p : s.participants) participants.push_back(p.id);
  j["participants"] = participants;
  j["affect"] = {{"alpha", s.affect.alpha}, {"beta", s.affect.beta}};
  j["ranking"] = document::outcome_to_json(s, outcome);

  Json feedback = Json::array();
  for (const auto& e : s.feedback) {
    Json x;
    x["participant"] = e.participant;
    x["agreement"] = e.agreement;
    x["confidence"] = e.confidence;
    if (e.score) x["score"] = *e.score;
    feedback.push_back(x);
  }
  j["feedback"] = feedback;
  if (consensus) {
    Json c;
    c["status"] = "computed";
    const Json body = document::consensus_to_json(*consensus);
    for (const auto& [k, v] : body.items()) c[k] = v;
    j["consensus"] = c;
  } else {
    j["consensus"] = {{"status", "absent"}, {"reason", "fewer than two feedback entries"}};
  }
  return j;
}

Json run(const pipeline::Engine& engine, const session::Session& input, std::optional<affect::AffectWeights> affect) {
  session::Session s = input;
  if (affect) {
    affect::validate(*affect);
    s.affect = *affect;
  }
  const pipeline::Outcome outcome = pipeline::evaluate(engine, session::pipeline_input(s));
  std::vector<double> scores;
  for (auto& e : s.feedback) {
    e.score = engine.feedback.score(e.agreement, e.confidence);
    scores.push_back(*e.score);
  }
  std::optional<consensus::Report> consensus;
  if (scores.size() >= 2) consensus = consensus::consensus_report(scores, s.thresholds);
  return build(s, outcome, consensus);
}

std::string serialize(const Json& report) { return report.dump(2) + "\n"; }

std::string render_table(const Json& r) {
  const auto features = strings(r.at("features"));
  const auto participants = strings(r.at("participants"));
  std::vector<std::string> alts;
  for (const auto& a : r.at("alternatives")) alts.push_back(a.at("id").get<std::string>());
  const Json& rk = r.at("ranking");
  std::ostringstream out;

  out << "Normalized features\n";
  {
    std::vector<std::string> header{""};
    header.insert(header.end(), features.begin(), features.end());
    Table t(header);
    for (const auto& a : alts) {
      std::vector<std::string> row{a};
      for (const auto& v : rk.at("normalized_features").at(a)) row.push_back(std::to_string(v.get<int>()));
      t.add(row);
    }
    out << t.str() << '\n';
  }

  out << "Voting preference (raw / scaled)\n";
  {
    std::vector<std::string> header{""};
    header.insert(header.end(), participants.begin(), participants.end());
    header.push_back("avg");
    Table t(header);
    for (std::size_t i = 0; i < alts.size(); ++i) {
      std::vector<std::string> row{alts[i]};
      for (const auto& p : participants) {
        row.push_back(std::to_string(rk.at("raw_preference").at(p)[i].get<int>()) + " / " +
                      fixed(rk.at("scaled_preference").at(p)[i].get<double>(), 0));
      }
      row.push_back(fixed(rk.at("voting_preference").at(alts[i]).get<double>(), 2));
      t.add(row);
    }
    out << t.str() << '\n';
  }

  out << "Sentiment preference\n";
  {
    std::vector<std::string> header{""};
    header.insert(header.end(), participants.begin(), participants.end());
    header.push_back("avg");
    Table t(header);
    for (std::size_t i = 0; i < alts.size(); ++i) {
      std::vector<std::string> row{alts[i]};
      for (const auto& p : participants) row.push_back(fixed(rk.at("sentiment_preference").at(p)[i].get<double>(), 2));
      row.push_back(fixed(rk.at("collective_sentiment").at(alts[i]).get<double>(), 2));
      t.add(row);
    }
    out << t.str() << '\n';
  }

  out << "Ranking\n";
  {
    Table t({"#", "alternative", "total"});
    int pos = 1;
    for (const auto& e : rk.at("order")) {
      t.add({std::to_string(pos++), e.at("alternative").get<std::string>(), fixed(e.at("total").get<double>(), 2)});
    }
    out << t.str() << '\n';
  }

  const Json& fb = r.at("feedback");
  if (!fb.empty()) {
    out << "Feedback\n";
    Table t({"participant", "agreement", "confidence", "score"});
    for (const auto& e : fb) {
      t.add({e.at("participant").get<std::string>(), fixed(e.at("agreement").get<double>(), 1),
             fixed(e.at("confidence").get<double>(), 1), e.contains("score") ? fixed(e.at("score").get<double>(), 2) : "-"});
    }
    out << t.str() << '\n';
  }

  const Json& c = r.at("consensus");
  if (c.at("status") == "computed") {
    out << "Consensus: " << c.at("display").get<std::string>() << " (Q1 " << fixed(c.at("q1").get<double>(), 2)
        << ", Q3 " << fixed(c.at("q3").get<double>(), 2) << ", IQR " << fixed(c.at("iqr").get<double>(), 2) << ")\n";
    if (c.contains("note")) out << "Note: " << c.at("note").get<std::string>() << '\n';
  } else {
    out << "Consensus: not computed (" << c.at("reason").get<std::string>() << ")\n";
  }
  out << "Top ranked: " << rk.at("top").get<std::string>() << '\n';
  return out.str();
}

}  // namespace gdm::report
