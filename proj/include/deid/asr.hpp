#pragma once

#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "deid/core.hpp"
#include "deid/metrics.hpp"

namespace deid {

struct AsrRequest {
    std::filesystem::path audio_path; // ignored by the replay backends
    int max_hypotheses = 1;           // k
    std::string language = "en-US";
    std::string model_hint;
};

// Ranked recognizer guesses; may be empty (silence).  Invariants (checked by
// the gateway): ranks run 1..n, confidences never increase with rank, every
// word carries timings, and words within a hypothesis are sorted and
// non-overlapping.
struct AsrResponse {
    std::vector<Hypothesis> hypotheses;
};

class AsrBackend {
public:
    virtual ~AsrBackend() = default;
    virtual AsrResponse transcribe(const AsrRequest& request) = 0;
    virtual std::string name() const = 0;
};

// JSON wire shape shared by the HTTP service and recorded fixtures:
//   {"hypotheses": [{"rank": int, "confidence": real,
//                    "words": [{"text": str, "start_ms": int, "end_ms": int,
//                               "speaker": str?}]}]}
// Any malformation comes back as ProtocolViolation.
AsrResponse asr_response_from_json(const nlohmann::json& j);
nlohmann::json asr_response_to_json(const AsrResponse& response);

// Throws ProtocolViolation unless the response satisfies the contract above.
void validate_response(const AsrResponse& response);

struct GatewayOptions {
    int max_attempts = 3;          // total tries for retryable failures
    int64_t initial_backoff_ms = 100; // doubles after each retry
    int max_inflight = 0;          // 0 = unbounded

    // ASR_MAX_ATTEMPTS overrides max_attempts when set.
    static GatewayOptions from_env(GatewayOptions defaults);
    static GatewayOptions from_env() { return from_env(GatewayOptions{}); }
};

// Wraps a backend with contract validation, truncation to the requested k,
// bounded concurrency and retries.  Only ServiceUnavailable is retried
// (exponential backoff); BadAudio and the rest surface immediately.  The
// gateway never reorders or invents hypotheses.
class AsrGateway {
public:
    explicit AsrGateway(std::shared_ptr<AsrBackend> backend, GatewayOptions options = {});

    AsrResponse transcribe(const AsrRequest& request);
    const std::string& backend_name() const { return backend_name_; }

private:
    std::shared_ptr<AsrBackend> backend_;
    GatewayOptions options_;
    std::string backend_name_;
    std::mutex inflight_mutex_;
    std::condition_variable inflight_cv_;
    int inflight_ = 0;
};

// Replays one recorded response file, whatever the audio.
class FixtureBackend : public AsrBackend {
public:
    explicit FixtureBackend(const std::filesystem::path& response_file);
    AsrResponse transcribe(const AsrRequest&) override { return response_; }
    std::string name() const override { return "fixture"; }

private:
    AsrResponse response_;
};

// Word-level corruption model for the synthetic backend.  Rates are
// probabilities in [0, 1]; `seed` pins the whole outcome.
struct ErrorModel {
    double sub_rate = 0.0;
    double del_rate = 0.0;
    double ins_rate = 0.0;
    uint64_t seed = 0;
    int hypotheses = 1; // how many ranked variants to fabricate
};

struct CorruptionLog {
    int64_t substitutions = 0;
    int64_t deletions = 0;
    int64_t insertions = 0;
    WerReport realized; // measured against the reference afterwards
};

struct NoisyFixture {
    AsrResponse response;
    std::vector<CorruptionLog> logs; // one per hypothesis
};

// Corrupts the reference deterministically: a substituted word keeps its
// interval, a deleted word vanishes with its interval, an inserted word takes
// the middle of a gap between two surviving words.  Same seed, same output.
NoisyFixture make_noisy_fixture(const Transcript& reference, const ErrorModel& model);

class NoisyFixtureBackend : public AsrBackend {
public:
    NoisyFixtureBackend(const Transcript& reference, const ErrorModel& model)
        : fixture_(make_noisy_fixture(reference, model)) {}

    AsrResponse transcribe(const AsrRequest&) override { return fixture_.response; }
    std::string name() const override { return "noisy_fixture"; }
    const std::vector<CorruptionLog>& logs() const { return fixture_.logs; }

private:
    NoisyFixture fixture_;
};

} // namespace deid
