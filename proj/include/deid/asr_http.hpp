#pragma once

#include <string>

#include "deid/asr.hpp"

namespace deid {

struct HttpBackendOptions {
    std::string endpoint;      // e.g. "http://127.0.0.1:8089"
    int64_t timeout_ms = 10000;

    // Reads ASR_ENDPOINT and ASR_TIMEOUT_MS on top of the given defaults.
    static HttpBackendOptions from_env(HttpBackendOptions defaults);
    static HttpBackendOptions from_env() { return from_env(HttpBackendOptions{}); }
};

// POST {endpoint}/transcribe with
//   {"audio_b64": str, "sample_rate": int, "max_hypotheses": int, "language": str}
// and expects the shared hypotheses JSON back.  Connection failures and 5xx
// map to ServiceUnavailable, timeouts to Timeout, 4xx to BadAudio, and a
// malformed body to ProtocolViolation.
class HttpAsrBackend : public AsrBackend {
public:
    explicit HttpAsrBackend(HttpBackendOptions options);

    AsrResponse transcribe(const AsrRequest& request) override;
    std::string name() const override { return "http"; }

private:
    HttpBackendOptions options_;
};

} // namespace deid
