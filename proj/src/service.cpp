#include "gdm/service.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <regex>

#include "httplib.h"

#include "gdm/document.hpp"
#include "gdm/error.hpp"

namespace gdm::service {

namespace {

using document::Json;

Response json_response(int status, const Json& body) { return {status, body.dump(2) + "\n"}; }

Response error_response(int status, const std::string& kind, const std::string& message) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  return json_response(status, j);
}

Json body_of(const Request& req) {
  if (req.body.empty()) throw Error(ErrorKind::Schema, "request body must be a JSON object");
  Json j = document::parse_json(req.body);
  if (!j.is_object()) throw Error(ErrorKind::Schema, "request body must be a JSON object");
  return j;
}

// Small typed accessors for request bodies; errors name the field.
const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::Schema, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw Error(ErrorKind::Schema, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double number_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorKind::Schema, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

Json session_view(const session::Session& s, const pipeline::Engine& engine) {
  Json j = document::to_json(s);
  Json affect = Json::array();
  for (const auto& m : s.messages) {
    pipeline::MessageAffect ma{m.participant, m.alternative, engine.affect.emotions(m.text),
                               engine.affect.score(m.text, s.affect)};
    affect.push_back(document::affect_to_json(ma));
  }
  j["message_affect"] = affect;
  return j;
}

}  // namespace

int status_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::Schema: return 422;
    case ErrorKind::PhaseViolation:
    case ErrorKind::Duplicate:
    case ErrorKind::Precondition: return 409;
    case ErrorKind::NotFound: return 404;
    case ErrorKind::Io:
    case ErrorKind::Internal: return 500;
  }
  return 500;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

Service::Service(store::SessionStore& store, const pipeline::Engine& engine, Clock clock)
    : store_(store), engine_(engine), clock_(clock ? std::move(clock) : Clock(utc_timestamp)) {}

Response Service::handle(const Request& req) {
  static const std::regex kCollection(R"(^/sessions/?$)");
  static const std::regex kItem(R"(^/sessions/([^/]+)(?:/([a-z]+))?/?$)");
  try {
    std::smatch m;
    if (std::regex_match(req.path, kCollection)) {
      if (req.method != "POST") return error_response(405, "method", "use POST to create a session");
      const std::string id = store_.create(document::setup_from_json(body_of(req)));
      return json_response(201, document::to_json(*store_.get(id)));
    }
    if (!std::regex_match(req.path, m, kItem)) return error_response(404, "route", "no such endpoint");
    const std::string id = m[1];
    const std::string action = m[2];
    const bool get = req.method == "GET", post = req.method == "POST";
    auto wrong_method = [&] { return error_response(405, "method", req.method + " is not allowed here"); };

    if (action.empty()) {
      if (!get) return wrong_method();
      return json_response(200, session_view(*store_.get(id), engine_));
    }
    if (action == "export") {
      if (!get) return wrong_method();
      return json_response(200, document::to_json(*store_.get(id)));
    }
    if (action == "consensus") {
      if (!get) return wrong_method();
      // Recompute only when intake changed since the last report.
      auto current = store_.get(id);
      if (current->consensus && (current->phase == session::Phase::Feedback ||
                                 current->phase == session::Phase::Closed)) {
        return json_response(200, document::consensus_to_json(*current->consensus));
      }
      auto s = store_.update(id, [](session::Session& x) { session::compute_consensus(x); });
      return json_response(200, document::consensus_to_json(*s->consensus));
    }
    if (!post) return wrong_method();

    if (action == "phase") {
      const Json body = body_of(req);
      const auto target = session::parse_phase(string_field(body, "target"));
      auto s = store_.update(id, [&](session::Session& x) { session::transition(x, target); });
      return json_response(200, {{"id", s->id}, {"phase", session::to_string(s->phase)}});
    }
    if (action == "participants") {
      const Json body = body_of(req);
      session::Participant p;
      p.id = string_field(body, "id");
      if (body.contains("name")) p.name = string_field(body, "name");
      if (body.contains("weight")) p.weight = number_field(body, "weight");
      store_.update(id, [&](session::Session& x) { session::add_participant(x, p); });
      return json_response(201, {{"id", p.id}, {"name", p.name.empty() ? p.id : p.name}, {"weight", p.weight}});
    }
    if (action == "assessments") {
      const Json body = body_of(req);
      const std::string participant = string_field(body, "participant");
      const Json& values = field(body, "values");
      if (!values.is_object()) throw Error(ErrorKind::Schema, "field 'values' must map feature ids to -1, 0 or 1");
      std::map<std::string, int> z;
      for (auto it = values.begin(); it != values.end(); ++it) {
        if (!it->is_number_integer() || it->get<long long>() < -1 || it->get<long long>() > 1) {
          throw Error(ErrorKind::Validation, "invalid assessment: '" + it.key() + "' is not -1, 0 or 1");
        }
        z[it.key()] = it->get<int>();
      }
      store_.update(id, [&](session::Session& x) { session::submit_assessment(x, participant, z); });
      return json_response(201, {{"participant", participant}, {"values", values}});
    }
    if (action == "messages") {
      const Json body = body_of(req);
      session::Message msg{string_field(body, "participant"), string_field(body, "alternative"),
                           string_field(body, "text"), clock_()};
      auto s = store_.update(id, [&](session::Session& x) { session::post_message(x, msg); });
      pipeline::MessageAffect ma{msg.participant, msg.alternative, engine_.affect.emotions(msg.text),
                                 engine_.affect.score(msg.text, s->affect)};
      Json out;
      out["participant"] = msg.participant;
      out["alternative"] = msg.alternative;
      out["text"] = msg.text;
      out["timestamp"] = msg.timestamp;
      out["affect"] = document::affect_to_json(ma);
      return json_response(201, out);
    }
    if (action == "ranking") {
      auto s = store_.update(id, [&](session::Session& x) { session::compute_ranking(x, engine_); });
      return json_response(200, document::outcome_to_json(*s, *s->ranking));
    }
    if (action == "feedback") {
      const Json body = body_of(req);
      const std::string participant = string_field(body, "participant");
      const double agreement = number_field(body, "agreement");
      const double confidence = number_field(body, "confidence");
      double score = 0.0;
      store_.update(id, [&](session::Session& x) {
        score = session::submit_feedback(x, engine_, participant, agreement, confidence);
      });
      return json_response(
          201, {{"participant", participant}, {"agreement", agreement}, {"confidence", confidence}, {"score", score}});
    }
    return error_response(404, "route", "no such endpoint");
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

void Service::install(httplib::Server& server) {
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    const Response r = handle({req.method, req.path, req.body});
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(R"(/.*)", bridge);
  server.Post(R"(/.*)", bridge);
  server.Put(R"(/.*)", bridge);
  server.Delete(R"(/.*)", bridge);
  server.Patch(R"(/.*)", bridge);
}

}  // namespace gdm::service
