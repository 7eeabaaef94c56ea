#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "gdm/session.hpp"

namespace gdm::document {

using Json = nlohmann::ordered_json;

/// Session documents (see docs/session_document.md). Serialization is
/// canonical: fields always appear in the same order and doubles are written
/// in shortest round-trip form, so equal sessions give equal bytes.
Json to_json(const session::Session& s);
std::string serialize_session(const session::Session& s);

/// Schema violations throw gdm::Error(Schema) whose message names the field
/// path (e.g. "/assessments/2/values/location") or, for syntax errors, the
/// line and column.
session::Session session_from_json(const Json& j);
session::Session parse_session(std::string_view text);
session::Session load_session(const std::string& path);

/// Body of POST /sessions: features, alternatives and optional
/// participants, affect and consensus_thresholds.
session::Setup setup_from_json(const Json& j);

Json outcome_to_json(const session::Session& s, const pipeline::Outcome& o);
pipeline::Outcome outcome_from_json(const session::Session& s, const Json& j);

Json consensus_to_json(const consensus::Report& r);
consensus::Report consensus_from_json(const Json& j);

Json affect_to_json(const pipeline::MessageAffect& m);

/// Parses JSON text, mapping syntax errors onto Schema errors with line and
/// column.
Json parse_json(std::string_view text);

/// Writes `text` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
void write_file_atomically(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace gdm::document
