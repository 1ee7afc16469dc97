#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deid/asr.hpp"
#include "deid/core.hpp"

namespace deid {

// Resolved harness configuration.  File format: one "key = value" per line,
// # starts a comment line, lists are comma-separated.  Paths in the file are
// taken relative to the --workdir the command was given.
struct HarnessConfig {
    std::string asr_backend = "fixture"; // fixture | noisy_fixture | http
    int asr_k = 1;
    std::filesystem::path asr_fixture;   // recorded response (fixture backend)
    std::filesystem::path asr_reference; // reference transcript (noisy_fixture backend)
    ErrorModel asr_noise;
    std::string asr_language = "en-US";
    std::string asr_model;
    std::string asr_endpoint; // http backend; ASR_ENDPOINT overrides
    int64_t asr_timeout_ms = 10000;
    int asr_max_attempts = 3;

    std::vector<std::filesystem::path> gazetteers;
    std::vector<std::filesystem::path> patterns;
    bool tagger_case_sensitive = false;

    int64_t pad_ms = 0;

    std::vector<double> grid;      // empty = default grid
    std::vector<PhiLabel> labels;  // empty = default evaluation subset
    double attribution_rho = 0.5;
    int bins = 10;

    // canonical "key = value" text of every setting; hashed into the manifest
    std::string canonical() const;
};

HarnessConfig parse_config(const std::string& text, const std::filesystem::path& workdir);
HarnessConfig load_config_file(const std::filesystem::path& path,
                               const std::filesystem::path& workdir);

// "0.3,0.5,1.0" or "default"; validates range and strict order
std::vector<double> parse_grid(const std::string& text);
// "Name,City" or "default" (scored subset) or "all"
std::vector<PhiLabel> parse_labels(const std::string& text);

} // namespace deid
