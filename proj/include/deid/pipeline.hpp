#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "deid/asr.hpp"
#include "deid/config.hpp"
#include "deid/core.hpp"
#include "deid/tagger.hpp"

namespace deid {

// A pipeline failure, tagged with the stage that raised it.  `service` keeps
// the recognizer-outage vs bad-data distinction for the exit code.
struct StageError : DeidError {
    std::string stage;
    bool service;

    StageError(std::string stage_in, bool service_in, const std::string& message)
        : DeidError("stage=" + stage_in + ": " + message), stage(std::move(stage_in)),
          service(service_in) {}
};

struct PipelineResult {
    AsrResponse response;
    std::vector<CorruptionLog> corruption_logs;          // noisy_fixture only
    std::vector<std::vector<TagSpan>> taggings;          // per hypothesis
    RedactionPlan raw_plan;                              // before padding
    RedactionPlan plan;
    std::filesystem::path redacted_audio;
};

// transcribe -> tag each hypothesis -> merge detections -> pad -> redact.
// Every intermediate lands in out_dir: asr_response.json, tagging_k<r>.json
// and .bio, plan_raw.json, plan.json, redacted.wav, manifest.json (plus
// corruption_log.json for the noisy backend).  Failures carry their stage.
PipelineResult run_pipeline(const std::filesystem::path& audio, const HarnessConfig& config,
                            const std::filesystem::path& out_dir);

} // namespace deid
