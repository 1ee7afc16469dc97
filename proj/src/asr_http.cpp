#include "deid/asr_http.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "deid/util.hpp"
#include "deid/wav.hpp"

namespace deid {

using nlohmann::json;

HttpBackendOptions HttpBackendOptions::from_env(HttpBackendOptions defaults) {
    if (const char* v = std::getenv("ASR_ENDPOINT")) defaults.endpoint = v;
    if (const char* v = std::getenv("ASR_TIMEOUT_MS")) defaults.timeout_ms = std::atoll(v);
    return defaults;
}

HttpAsrBackend::HttpAsrBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty())
        throw ConfigError("http backend needs an endpoint (flag, config or ASR_ENDPOINT)");
    if (options_.timeout_ms < 1) throw ConfigError("http backend needs a positive timeout");
}

AsrResponse HttpAsrBackend::transcribe(const AsrRequest& request) {
    // the whole recording goes up in one request
    std::string wav_bytes;
    int sample_rate = 0;
    try {
        wav_bytes = read_file(request.audio_path);
        sample_rate = read_wav(request.audio_path).sample_rate;
    } catch (const DeidError& e) {
        throw BadAudio(e.what());
    }

    json body = {{"audio_b64", base64_encode(wav_bytes)},
                 {"sample_rate", sample_rate},
                 {"max_hypotheses", request.max_hypotheses},
                 {"language", request.language}};
    if (!request.model_hint.empty()) body["model"] = request.model_hint;

    httplib::Client client(options_.endpoint);
    auto timeout = std::chrono::milliseconds(options_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Result res = client.Post("/transcribe", body.dump(), "application/json");
    if (!res) {
        switch (res.error()) {
        case httplib::Error::ConnectionTimeout:
        case httplib::Error::Read:
        case httplib::Error::Write:
            throw Timeout("asr service timed out: " + httplib::to_string(res.error()));
        default:
            throw ServiceUnavailable("asr service unreachable: " +
                                     httplib::to_string(res.error()));
        }
    }
    if (res->status >= 500)
        throw ServiceUnavailable("asr service returned status " + std::to_string(res->status));
    if (res->status >= 400)
        throw BadAudio("asr service rejected the request with status " +
                       std::to_string(res->status) + ": " + res->body);
    if (res->status != 200)
        throw ProtocolViolation("unexpected status " + std::to_string(res->status));

    try {
        return asr_response_from_json(json::parse(res->body));
    } catch (const json::parse_error& e) {
        throw ProtocolViolation(std::string("unparseable response body: ") + e.what());
    }
}

} // namespace deid
