#include "deid/asr.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "deid/util.hpp"

namespace deid {

using nlohmann::json;

AsrResponse asr_response_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("hypotheses") || !j["hypotheses"].is_array())
            throw ProtocolViolation("response must be an object with a \"hypotheses\" array");
        AsrResponse out;
        for (const auto& jh : j["hypotheses"]) {
            Hypothesis h;
            if (!jh.contains("rank") || !jh["rank"].is_number_integer())
                throw ProtocolViolation("hypothesis lacks an integer rank");
            if (!jh.contains("confidence") || !jh["confidence"].is_number())
                throw ProtocolViolation("hypothesis lacks a numeric confidence");
            h.rank = jh["rank"].get<int>();
            h.confidence = jh["confidence"].get<double>();
            if (!jh.contains("words") || !jh["words"].is_array())
                throw ProtocolViolation("hypothesis lacks a words array");
            for (const auto& jw : jh["words"]) {
                if (!jw.contains("text") || !jw["text"].is_string())
                    throw ProtocolViolation("word lacks text");
                if (!jw.contains("start_ms") || !jw["start_ms"].is_number_integer() ||
                    !jw.contains("end_ms") || !jw["end_ms"].is_number_integer())
                    throw ProtocolViolation("word lacks integer timings");
                std::string speaker;
                if (auto it = jw.find("speaker"); it != jw.end() && it->is_string())
                    speaker = it->get<std::string>();
                h.words.emplace_back(jw["text"].get<std::string>(),
                                     TimeInterval(jw["start_ms"].get<int64_t>(),
                                                  jw["end_ms"].get<int64_t>()),
                                     std::nullopt, std::move(speaker));
            }
            out.hypotheses.push_back(std::move(h));
        }
        return out;
    } catch (const ProtocolViolation&) {
        throw;
    } catch (const DeidError& e) {
        // invalid intervals or word text from the wire are contract breaches
        throw ProtocolViolation(e.what());
    }
}

json asr_response_to_json(const AsrResponse& response) {
    json jhyps = json::array();
    for (const auto& h : response.hypotheses) {
        json jwords = json::array();
        for (const auto& w : h.words) {
            json jw = {{"text", w.text},
                       {"start_ms", w.interval.start_ms},
                       {"end_ms", w.interval.end_ms}};
            if (!w.speaker.empty()) jw["speaker"] = w.speaker;
            jwords.push_back(std::move(jw));
        }
        jhyps.push_back(
            json{{"rank", h.rank}, {"confidence", h.confidence}, {"words", std::move(jwords)}});
    }
    return json{{"hypotheses", std::move(jhyps)}};
}

void validate_response(const AsrResponse& response) {
    for (size_t i = 0; i < response.hypotheses.size(); ++i) {
        const Hypothesis& h = response.hypotheses[i];
        if (h.rank != static_cast<int>(i) + 1)
            throw ProtocolViolation("hypothesis ranks must run 1..n, found rank " +
                                    std::to_string(h.rank) + " at position " +
                                    std::to_string(i + 1));
        if (h.confidence < 0.0 || h.confidence > 1.0)
            throw ProtocolViolation("confidence " + std::to_string(h.confidence) +
                                    " is outside [0, 1]");
        if (i > 0 && h.confidence > response.hypotheses[i - 1].confidence)
            throw ProtocolViolation("confidences must not increase with rank");
        for (size_t w = 1; w < h.words.size(); ++w)
            if (h.words[w - 1].interval.end_ms > h.words[w].interval.start_ms)
                throw ProtocolViolation("hypothesis " + std::to_string(h.rank) +
                                        ": word intervals overlap or run backwards");
    }
}

GatewayOptions GatewayOptions::from_env(GatewayOptions defaults) {
    if (const char* v = std::getenv("ASR_MAX_ATTEMPTS")) defaults.max_attempts = std::atoi(v);
    return defaults;
}

AsrGateway::AsrGateway(std::shared_ptr<AsrBackend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(options) {
    if (!backend_) throw DeidError("gateway needs a backend");
    if (options_.max_attempts < 1) throw DeidError("gateway needs max_attempts >= 1");
    backend_name_ = backend_->name();
}

AsrResponse AsrGateway::transcribe(const AsrRequest& request) {
    if (request.max_hypotheses < 1)
        throw DeidError("request needs max_hypotheses >= 1");

    if (options_.max_inflight > 0) {
        std::unique_lock lock(inflight_mutex_);
        inflight_cv_.wait(lock, [&] { return inflight_ < options_.max_inflight; });
        ++inflight_;
    }
    struct Release {
        AsrGateway* g;
        ~Release() {
            if (g->options_.max_inflight > 0) {
                std::lock_guard lock(g->inflight_mutex_);
                --g->inflight_;
                g->inflight_cv_.notify_one();
            }
        }
    } release{this};

    AsrResponse response;
    int64_t backoff = options_.initial_backoff_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            response = backend_->transcribe(request);
            break;
        } catch (const ServiceUnavailable&) {
            if (attempt >= options_.max_attempts) throw;
            if (backoff > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
        // BadAudio, Timeout and ProtocolViolation are deliberately not retried
    }

    validate_response(response);
    if (static_cast<int>(response.hypotheses.size()) > request.max_hypotheses)
        response.hypotheses.resize(request.max_hypotheses);
    return response;
}

FixtureBackend::FixtureBackend(const std::filesystem::path& response_file) {
    json j;
    try {
        j = json::parse(read_file(response_file));
    } catch (const json::parse_error& e) {
        throw ProtocolViolation("recorded response " + response_file.string() + ": " + e.what());
    }
    response_ = asr_response_from_json(j);
}

namespace {

// uniform [0, 1) straight from the engine bits; std::uniform_real_distribution
// differs across standard libraries and would break seeded reproducibility
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

enum class Fate { Keep, Substitute, Delete };

} // namespace

NoisyFixture make_noisy_fixture(const Transcript& reference, const ErrorModel& model) {
    for (double rate : {model.sub_rate, model.del_rate, model.ins_rate})
        if (rate < 0.0 || rate > 1.0)
            throw DeidError("corruption rates must lie in [0, 1]");
    if (model.hypotheses < 1) throw DeidError("noisy fixture needs at least one hypothesis");

    std::vector<TimedWord> flat = reference.flatten();
    for (size_t i = 1; i < flat.size(); ++i)
        if (flat[i - 1].interval.end_ms > flat[i].interval.start_ms)
            throw DeidError("noisy fixture needs a reference whose words do not overlap "
                            "across speakers");

    std::vector<std::string> ref_tokens;
    for (const auto& w : flat) ref_tokens.push_back(w.text);

    NoisyFixture out;
    for (int rank = 1; rank <= model.hypotheses; ++rank) {
        std::mt19937_64 rng(model.seed + static_cast<uint64_t>(rank - 1));
        const size_t n = flat.size();

        // pass 1: per-word fate (two draws each, so the stream never shifts)
        std::vector<Fate> fate(n, Fate::Keep);
        for (size_t i = 0; i < n; ++i) {
            double u_del = unit_draw(rng);
            double u_sub = unit_draw(rng);
            if (u_del < model.del_rate) fate[i] = Fate::Delete;
            else if (u_sub < model.sub_rate) fate[i] = Fate::Substitute;
        }
        // pass 2: insertions only into gaps whose two neighbours both survive,
        // so an insertion can never collapse with a deletion into one edit
        std::vector<bool> insert_after(n, false);
        for (size_t i = 0; i + 1 < n; ++i) {
            double u_ins = unit_draw(rng);
            if (u_ins >= model.ins_rate) continue;
            if (fate[i] == Fate::Delete || fate[i + 1] == Fate::Delete) continue;
            if (flat[i].interval.end_ms >= flat[i + 1].interval.start_ms) continue; // no gap
            insert_after[i] = true;
        }

        Hypothesis hyp;
        hyp.rank = rank;
        hyp.confidence = std::max(0.05, 0.95 - 0.1 * (rank - 1));
        CorruptionLog log;
        for (size_t i = 0; i < n; ++i) {
            switch (fate[i]) {
            case Fate::Delete:
                ++log.deletions;
                break;
            case Fate::Substitute:
                ++log.substitutions;
                hyp.words.emplace_back("xsub" + std::to_string(rank) + "q" + std::to_string(i),
                                       flat[i].interval, std::nullopt, flat[i].speaker);
                break;
            case Fate::Keep:
                hyp.words.emplace_back(flat[i].text, flat[i].interval, std::nullopt,
                                       flat[i].speaker);
                break;
            }
            if (insert_after[i]) {
                ++log.insertions;
                int64_t gap_lo = flat[i].interval.end_ms;
                int64_t gap_hi = flat[i + 1].interval.start_ms;
                int64_t quarter = (gap_hi - gap_lo) / 4;
                hyp.words.emplace_back("xins" + std::to_string(rank) + "q" + std::to_string(i),
                                       TimeInterval(gap_lo + quarter, gap_hi - quarter),
                                       std::nullopt, flat[i].speaker);
            }
        }

        std::vector<std::string> hyp_tokens;
        for (const auto& w : hyp.words) hyp_tokens.push_back(w.text);
        log.realized = word_error_rate(ref_tokens, hyp_tokens);

        out.response.hypotheses.push_back(std::move(hyp));
        out.logs.push_back(std::move(log));
    }
    return out;
}

} // namespace deid
