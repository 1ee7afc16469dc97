#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "deid/core.hpp"

namespace deid {

// Transcript document: one JSON object per file,
//   {"conversation_id": str,
//    "turns": [{"speaker": str,
//               "words": [{"text": str, "start_ms": int, "end_ms": int, "label": str?}]}]}
// Malformed JSON or wrong shapes raise ParseError with a location; broken
// transcript rules raise InvariantViolation naming the rule.
Transcript parse_transcript(const std::string& document);
Transcript parse_transcript_file(const std::filesystem::path& path);

nlohmann::json transcript_to_json(const Transcript& t);
std::string serialize_transcript(const Transcript& t);
void write_transcript_file(const std::filesystem::path& path, const Transcript& t);

// Plan document: JSON array of {"start_ms": int, "end_ms": int}.  Parsing
// normalizes, so a loaded plan is always canonical.
RedactionPlan parse_plan(const std::string& document);
RedactionPlan parse_plan_file(const std::filesystem::path& path);
std::string serialize_plan(const RedactionPlan& plan);
void write_plan_file(const std::filesystem::path& path, const RedactionPlan& plan);

} // namespace deid
