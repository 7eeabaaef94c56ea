#include "gdm/document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <random>
#include <sstream>

#include "gdm/error.hpp"

namespace gdm::document {

namespace {

using preference::Direction;
using preference::FeatureKind;

// Read-only view of a JSON value that remembers where it came from, so every
// complaint can name the offending field.
class Field {
 public:
  Field(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Schema, "field '" + (path_.empty() ? std::string("/") : path_) + "': " + what);
  }

  const Json& json() const { return *j_; }
  const std::string& path() const { return path_; }

  Field at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) fail("missing required field '" + key + "'");
    return Field(*it, path_ + "/" + key);
  }

  std::optional<Field> find(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end() || it->is_null()) return std::nullopt;
    return Field(*it, path_ + "/" + key);
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_->is_object()) fail("expected an object");
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
        fail("unknown field '" + it.key() + "'");
      }
    }
  }

  std::vector<Field> items() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Field> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "/" + std::to_string(i));
    return out;
  }

  std::vector<std::pair<std::string, Field>> members() const {
    if (!j_->is_object()) fail("expected an object");
    std::vector<std::pair<std::string, Field>> out;
    for (auto it = j_->begin(); it != j_->end(); ++it) out.emplace_back(it.key(), Field(*it, path_ + "/" + it.key()));
    return out;
  }

  std::string str() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  double num() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  int integer() const {
    if (!j_->is_number_integer()) {
      if (j_->is_number_float()) {
        const double v = j_->get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9) return static_cast<int>(v);
      }
      fail("expected an integer");
    }
    const auto v = j_->get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
    return static_cast<int>(v);
  }

 private:
  const Json* j_;
  std::string path_;
};

const char* to_string(FeatureKind k) { return k == FeatureKind::Continuous ? "continuous" : "binary"; }
const char* to_string(Direction d) { return d == Direction::AboveMean ? "above_mean" : "below_mean"; }

preference::FeatureSpec feature_from(const Field& f) {
  f.only({"id", "kind", "direction"});
  preference::FeatureSpec spec;
  spec.id = f.at("id").str();
  const std::string kind = f.at("kind").str();
  if (kind == "continuous") {
    spec.kind = FeatureKind::Continuous;
    const Field dir = f.at("direction");
    const std::string d = dir.str();
    if (d == "above_mean") spec.direction = Direction::AboveMean;
    else if (d == "below_mean") spec.direction = Direction::BelowMean;
    else dir.fail("expected 'above_mean' or 'below_mean'");
  } else if (kind == "binary") {
    spec.kind = FeatureKind::Binary;
    if (f.find("direction")) f.fail("binary features take no direction");
  } else {
    f.at("kind").fail("expected 'continuous' or 'binary'");
  }
  return spec;
}

Json feature_to_json(const preference::FeatureSpec& f) {
  Json j;
  j["id"] = f.id;
  j["kind"] = to_string(f.kind);
  if (f.kind == FeatureKind::Continuous) j["direction"] = to_string(f.direction);
  return j;
}

preference::Alternative alternative_from(const Field& f) {
  f.only({"id", "label", "values"});
  preference::Alternative a;
  a.id = f.at("id").str();
  a.label = f.find("label") ? f.at("label").str() : a.id;
  for (const auto& [key, value] : f.at("values").members()) a.values[key] = value.num();
  return a;
}

Json alternative_to_json(const session::Session& s, const preference::Alternative& a) {
  Json j;
  j["id"] = a.id;
  j["label"] = a.label;
  Json values = Json::object();
  // Feature order, not map order, so the file reads like the table it came from.
  for (const auto& f : s.features) {
    auto it = a.values.find(f.id);
    if (it != a.values.end()) values[f.id] = it->second;
  }
  j["values"] = values;
  return j;
}

session::Participant participant_from(const Field& f) {
  f.only({"id", "name", "weight"});
  session::Participant p;
  p.id = f.at("id").str();
  p.name = f.find("name") ? f.at("name").str() : p.id;
  if (auto w = f.find("weight")) p.weight = w->num();
  return p;
}

affect::AffectWeights affect_from(const Field& f) {
  f.only({"mode", "alpha", "beta"});
  if (auto mode = f.find("mode")) {
    const std::string m = mode->str();
    if (f.find("alpha") || f.find("beta")) f.fail("give either 'mode' or 'alpha'/'beta', not both");
    if (m == "sentiment-only") return affect::AffectWeights::sentiment_only();
    if (m == "fused") return affect::AffectWeights::fused();
    mode->fail("expected 'sentiment-only' or 'fused'");
  }
  affect::AffectWeights w{f.at("alpha").num(), f.at("beta").num()};
  try {
    affect::validate(w);
  } catch (const Error& e) {
    f.fail(e.what());
  }
  return w;
}

Json affect_weights_to_json(const affect::AffectWeights& w) {
  Json j;
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  return j;
}

consensus::Thresholds thresholds_from(const Field& f) {
  f.only({"high_max", "medium_max"});
  consensus::Thresholds t;
  if (auto h = f.find("high_max")) t.high_max = h->num();
  if (auto m = f.find("medium_max")) t.medium_max = m->num();
  try {
    consensus::validate(t);
  } catch (const Error& e) {
    f.fail(e.what());
  }
  return t;
}

template <typename Fn>
auto with_schema_errors(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    throw Error(ErrorKind::Schema, where + ": " + e.what());
  }
}

std::vector<int> int_row(const Field& f, std::size_t expected) {
  auto items = f.items();
  if (items.size() != expected) f.fail("expected " + std::to_string(expected) + " entries");
  std::vector<int> out;
  for (const auto& x : items) out.push_back(x.integer());
  return out;
}

std::vector<double> num_row(const Field& f, std::size_t expected) {
  auto items = f.items();
  if (items.size() != expected) f.fail("expected " + std::to_string(expected) + " entries");
  std::vector<double> out;
  for (const auto& x : items) out.push_back(x.num());
  return out;
}

// Objects keyed by participant or alternative id are read back in session
// order; every id must be present exactly once.
template <typename Row>
std::vector<Row> keyed_rows(const Field& f, const std::vector<std::string>& ids, Row (*read)(const Field&, std::size_t),
                            std::size_t width) {
  const auto members = f.members();
  if (members.size() != ids.size()) f.fail("expected one entry per id");
  std::vector<Row> out;
  for (const auto& id : ids) out.push_back(read(f.at(id), width));
  return out;
}

std::vector<double> keyed_values(const Field& f, const std::vector<std::string>& ids) {
  const auto members = f.members();
  if (members.size() != ids.size()) f.fail("expected one entry per id");
  std::vector<double> out;
  for (const auto& id : ids) out.push_back(f.at(id).num());
  return out;
}

std::vector<std::string> participant_ids(const session::Session& s) {
  std::vector<std::string> ids;
  for (const auto& p : s.participants) ids.push_back(p.id);
  return ids;
}

std::vector<std::string> alternative_ids(const session::Session& s) {
  std::vector<std::string> ids;
  for (const auto& a : s.alternatives) ids.push_back(a.id);
  return ids;
}

template <typename Row>
Json keyed(const std::vector<std::string>& ids, const std::vector<Row>& rows) {
  Json j = Json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) j[ids[i]] = rows[i];
  return j;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, ".tmp%016llx", static_cast<unsigned long long>(rng()));
  const std::string tmp = path + suffix;
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp + "'");
    out << text;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorKind::Io, "short write to '" + tmp + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorKind::Io, "cannot replace '" + path + "': " + ec.message());
  }
}

Json affect_to_json(const pipeline::MessageAffect& m) {
  Json j;
  j["participant"] = m.participant;
  j["alternative"] = m.alternative;
  j["sentiment"] = m.score.sentiment;
  j["emotions"] = {{"happy", m.emotions.happy},
                   {"surprise", m.emotions.surprise},
                   {"angry", m.emotions.angry},
                   {"sad", m.emotions.sad},
                   {"fear", m.emotions.fear}};
  j["emotion"] = m.score.emotion;
  j["preference"] = m.score.preference;
  j["alpha"] = m.score.alpha;
  j["beta"] = m.score.beta;
  return j;
}

Json outcome_to_json(const session::Session& s, const pipeline::Outcome& o) {
  const auto pids = participant_ids(s);
  const auto aids = alternative_ids(s);
  Json j;
  j["normalized_features"] = keyed(aids, o.normalized);
  j["warnings"] = o.warnings;
  j["weights"] = keyed(pids, o.matrix.weights);
  j["raw_preference"] = keyed(pids, o.matrix.raw);
  j["scaled_preference"] = keyed(pids, o.matrix.scaled);
  j["voting_preference"] = keyed(aids, o.matrix.voting);
  Json messages = Json::array();
  for (const auto& m : o.messages) messages.push_back(affect_to_json(m));
  j["message_affect"] = messages;
  j["sentiment_preference"] = keyed(pids, o.matrix.sentiment);
  j["collective_sentiment"] = keyed(aids, o.matrix.collective_sentiment);
  j["total_preference"] = keyed(aids, o.totals);
  Json order = Json::array();
  for (const auto& r : o.ranking.order) order.push_back({{"alternative", r.id}, {"total", r.total}});
  j["order"] = order;
  j["top"] = o.ranking.top();
  return j;
}

pipeline::Outcome outcome_from_json(const session::Session& s, const Json& json) {
  const Field f(json, "/ranking");
  f.only({"normalized_features", "warnings", "weights", "raw_preference", "scaled_preference", "voting_preference",
          "message_affect", "sentiment_preference", "collective_sentiment", "total_preference", "order", "top"});
  const auto pids = participant_ids(s);
  const auto aids = alternative_ids(s);
  const std::size_t n = aids.size(), p = s.features.size();
  pipeline::Outcome o;
  o.normalized = keyed_rows<std::vector<int>>(f.at("normalized_features"), aids, int_row, p);
  for (const auto& w : f.at("warnings").items()) o.warnings.push_back(w.str());
  o.matrix.weights = keyed_values(f.at("weights"), pids);
  o.matrix.raw = keyed_rows<std::vector<int>>(f.at("raw_preference"), pids, int_row, n);
  o.matrix.scaled = keyed_rows<std::vector<double>>(f.at("scaled_preference"), pids, num_row, n);
  o.matrix.voting = keyed_values(f.at("voting_preference"), aids);
  for (const auto& x : f.at("message_affect").items()) {
    x.only({"participant", "alternative", "sentiment", "emotions", "emotion", "preference", "alpha", "beta"});
    pipeline::MessageAffect ma;
    ma.participant = x.at("participant").str();
    ma.alternative = x.at("alternative").str();
    ma.score.sentiment = x.at("sentiment").num();
    const Field e = x.at("emotions");
    e.only({"happy", "surprise", "angry", "sad", "fear"});
    ma.emotions = {e.at("happy").num(), e.at("surprise").num(), e.at("angry").num(), e.at("sad").num(),
                   e.at("fear").num()};
    ma.score.emotion = x.at("emotion").num();
    ma.score.preference = x.at("preference").num();
    ma.score.alpha = x.at("alpha").num();
    ma.score.beta = x.at("beta").num();
    o.messages.push_back(std::move(ma));
  }
  o.matrix.sentiment = keyed_rows<std::vector<double>>(f.at("sentiment_preference"), pids, num_row, n);
  o.matrix.collective_sentiment = keyed_values(f.at("collective_sentiment"), aids);
  o.totals = keyed_values(f.at("total_preference"), aids);
  for (const auto& r : f.at("order").items()) {
    r.only({"alternative", "total"});
    o.ranking.order.push_back({r.at("alternative").str(), r.at("total").num()});
  }
  if (o.ranking.order.size() != n) f.at("order").fail("expected one entry per alternative");
  const Field top = f.at("top");
  if (top.str() != o.ranking.top()) top.fail("does not match the first entry of 'order'");
  return o;
}

Json consensus_to_json(const consensus::Report& r) {
  Json j;
  j["scores"] = r.scores;
  j["q1"] = r.quartiles.q1;
  j["q3"] = r.quartiles.q3;
  j["iqr"] = r.quartiles.iqr;
  j["level"] = consensus::to_string(r.level);
  j["display"] = consensus::display_name(r.level);
  if (r.note) j["note"] = *r.note;
  return j;
}

consensus::Report consensus_from_json(const Json& json) {
  const Field f(json, "/consensus");
  f.only({"scores", "q1", "q3", "iqr", "level", "display", "note"});
  consensus::Report r;
  for (const auto& x : f.at("scores").items()) r.scores.push_back(x.num());
  r.quartiles = {f.at("q1").num(), f.at("q3").num(), f.at("iqr").num()};
  const Field level = f.at("level");
  r.level = with_schema_errors(level.path(), [&] { return consensus::parse_level(level.str()); });
  if (auto note = f.find("note")) r.note = note->str();
  return r;
}

session::Setup setup_from_json(const Json& json) {
  const Field f(json, "");
  f.only({"features", "alternatives", "participants", "affect", "consensus_thresholds"});
  session::Setup setup;
  for (const auto& x : f.at("features").items()) setup.features.push_back(feature_from(x));
  for (const auto& x : f.at("alternatives").items()) setup.alternatives.push_back(alternative_from(x));
  if (auto ps = f.find("participants")) {
    for (const auto& x : ps->items()) setup.participants.push_back(participant_from(x));
  }
  if (auto a = f.find("affect")) setup.affect = affect_from(*a);
  if (auto t = f.find("consensus_thresholds")) setup.thresholds = thresholds_from(*t);
  return setup;
}

Json to_json(const session::Session& s) {
  Json j;
  j["schema_version"] = session::kSchemaVersion;
  j["id"] = s.id;
  j["phase"] = session::to_string(s.phase);
  Json features = Json::array();
  for (const auto& f : s.features) features.push_back(feature_to_json(f));
  j["features"] = features;
  Json alternatives = Json::array();
  for (const auto& a : s.alternatives) alternatives.push_back(alternative_to_json(s, a));
  j["alternatives"] = alternatives;
  Json participants = Json::array();
  for (const auto& p : s.participants) participants.push_back({{"id", p.id}, {"name", p.name}, {"weight", p.weight}});
  j["participants"] = participants;
  j["affect"] = affect_weights_to_json(s.affect);
  j["consensus_thresholds"] = {{"high_max", s.thresholds.high_max}, {"medium_max", s.thresholds.medium_max}};
  Json assessments = Json::array();
  for (const auto& a : s.assessments) {
    Json values = Json::object();
    for (std::size_t k = 0; k < s.features.size(); ++k) values[s.features[k].id] = a.values[k];
    assessments.push_back({{"participant", a.participant}, {"values", values}});
  }
  j["assessments"] = assessments;
  Json messages = Json::array();
  for (const auto& m : s.messages) {
    Json x;
    x["participant"] = m.participant;
    x["alternative"] = m.alternative;
    x["text"] = m.text;
    if (!m.timestamp.empty()) x["timestamp"] = m.timestamp;
    messages.push_back(x);
  }
  j["messages"] = messages;
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
  if (s.ranking) j["ranking"] = outcome_to_json(s, *s.ranking);
  if (s.consensus) j["consensus"] = consensus_to_json(*s.consensus);
  return j;
}

std::string serialize_session(const session::Session& s) { return to_json(s).dump(2) + "\n"; }

session::Session session_from_json(const Json& json) {
  const Field f(json, "");
  f.only({"schema_version", "id", "phase", "features", "alternatives", "participants", "affect",
          "consensus_thresholds", "assessments", "messages", "feedback", "ranking", "consensus"});
  const Field version = f.at("schema_version");
  if (version.integer() != session::kSchemaVersion) {
    version.fail("unsupported schema version " + std::to_string(version.integer()) + " (expected " +
                 std::to_string(session::kSchemaVersion) + ")");
  }

  session::Setup setup;
  for (const auto& x : f.at("features").items()) setup.features.push_back(feature_from(x));
  for (const auto& x : f.at("alternatives").items()) setup.alternatives.push_back(alternative_from(x));
  if (auto a = f.find("affect")) setup.affect = affect_from(*a);
  if (auto t = f.find("consensus_thresholds")) setup.thresholds = thresholds_from(*t);

  // Participants default to everyone who submitted an assessment.
  std::vector<session::Participant> participants;
  if (auto ps = f.find("participants")) {
    for (const auto& x : ps->items()) participants.push_back(participant_from(x));
  } else if (auto as = f.find("assessments")) {
    for (const auto& x : as->items()) participants.push_back({x.at("participant").str(), x.at("participant").str(), 1.0});
  }
  setup.participants = std::move(participants);

  const std::string id = f.find("id") ? f.at("id").str() : "session";
  session::Session s = with_schema_errors("session", [&] { return session::create(id, std::move(setup)); });

  if (auto as = f.find("assessments")) {
    for (const auto& x : as->items()) {
      x.only({"participant", "values"});
      session::Assessment a;
      a.participant = x.at("participant").str();
      const Field values = x.at("values");
      if (values.members().size() != s.features.size()) values.fail("expected one value per feature");
      for (const auto& feat : s.features) {
        const Field v = values.at(feat.id);
        const int z = v.integer();
        if (z < -1 || z > 1) v.fail("expected -1, 0 or 1");
        a.values.push_back(z);
      }
      s.assessments.push_back(std::move(a));
    }
  }
  if (auto ms = f.find("messages")) {
    for (const auto& x : ms->items()) {
      x.only({"participant", "alternative", "text", "timestamp"});
      session::Message m;
      m.participant = x.at("participant").str();
      m.alternative = x.at("alternative").str();
      m.text = x.at("text").str();
      if (auto t = x.find("timestamp")) m.timestamp = t->str();
      s.messages.push_back(std::move(m));
    }
  }
  if (auto fs = f.find("feedback")) {
    for (const auto& x : fs->items()) {
      x.only({"participant", "agreement", "confidence", "score"});
      session::FeedbackEntry e;
      e.participant = x.at("participant").str();
      e.agreement = x.at("agreement").num();
      e.confidence = x.at("confidence").num();
      with_schema_errors(x.path(), [&] {
        consensus::check_feedback_range(e.agreement, e.confidence);
        return 0;
      });
      if (auto sc = x.find("score")) e.score = sc->num();
      s.feedback.push_back(std::move(e));
    }
  }
  with_schema_errors("session", [&] {
    session::check_integrity(s);
    return 0;
  });
  if (auto r = f.find("ranking")) s.ranking = outcome_from_json(s, r->json());
  if (auto c = f.find("consensus")) s.consensus = consensus_from_json(c->json());
  if (auto ph = f.find("phase")) {
    s.phase = with_schema_errors(ph->path(), [&] { return session::parse_phase(ph->str()); });
  }
  return s;
}

session::Session parse_session(std::string_view text) { return session_from_json(parse_json(text)); }

session::Session load_session(const std::string& path) { return parse_session(read_file(path)); }

}  // namespace gdm::document
