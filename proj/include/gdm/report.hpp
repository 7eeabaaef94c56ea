#pragma once

#include <optional>
#include <string>

#include "gdm/document.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/session.hpp"

namespace gdm::report {

using document::Json;

/// Report over already computed results. Contains no session id, phase or
/// timestamps, so a session replayed through the service and the same data
/// run in batch give byte-identical reports.
Json build(const session::Session& s, const pipeline::Outcome& outcome,
           const std::optional<consensus::Report>& consensus);

/// Batch execution of every step over the intake data of `s`, ignoring any
/// stored results. `affect` overrides the session's weights when set.
/// Throws Precondition when the panel is incomplete.
Json run(const pipeline::Engine& engine, const session::Session& s,
         std::optional<affect::AffectWeights> affect = std::nullopt);

std::string serialize(const Json& report);

/// Plain-text tables for reading a report in a terminal.
std::string render_table(const Json& report);

}  // namespace gdm::report
