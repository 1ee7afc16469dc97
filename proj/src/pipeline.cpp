#include "deid/pipeline.hpp"

#include <nlohmann/json.hpp>

#include "deid/asr_http.hpp"
#include "deid/redaction.hpp"
#include "deid/reports.hpp"
#include "deid/transcript_io.hpp"
#include "deid/util.hpp"
#include "deid/version.hpp"
#include "deid/wav.hpp"

namespace deid {

using nlohmann::json;

namespace {

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const AsrError& e) {
        throw StageError(stage, true, e.what());
    } catch (const std::exception& e) {
        throw StageError(stage, false, e.what());
    }
}

std::shared_ptr<AsrBackend> make_backend(const HarnessConfig& cfg) {
    if (cfg.asr_backend == "fixture") {
        if (cfg.asr_fixture.empty())
            throw ConfigError("fixture backend needs asr.fixture (or --fixture)");
        return std::make_shared<FixtureBackend>(cfg.asr_fixture);
    }
    if (cfg.asr_backend == "noisy_fixture") {
        if (cfg.asr_reference.empty())
            throw ConfigError("noisy_fixture backend needs asr.reference (or --reference)");
        Transcript reference = parse_transcript_file(cfg.asr_reference);
        ErrorModel model = cfg.asr_noise;
        model.hypotheses = cfg.asr_k;
        return std::make_shared<NoisyFixtureBackend>(reference, model);
    }
    HttpBackendOptions opts;
    opts.endpoint = cfg.asr_endpoint;
    opts.timeout_ms = cfg.asr_timeout_ms;
    return std::make_shared<HttpAsrBackend>(HttpBackendOptions::from_env(opts));
}

json corruption_logs_to_json(const std::vector<CorruptionLog>& logs) {
    json out = json::array();
    for (const auto& log : logs)
        out.push_back(json{{"substitutions", log.substitutions},
                           {"deletions", log.deletions},
                           {"insertions", log.insertions},
                           {"realized", wer_report_to_json(log.realized)}});
    return out;
}

json taggings_to_json(const AsrResponse& response,
                      const std::vector<std::vector<TagSpan>>& taggings) {
    json out = json::array();
    for (size_t i = 0; i < taggings.size(); ++i) {
        json jspans = json::array();
        for (const auto& s : taggings[i])
            jspans.push_back(json{{"start_word", s.start_word},
                                  {"end_word", s.end_word},
                                  {"kind", to_string(s.kind)}});
        out.push_back(
            json{{"rank", response.hypotheses[i].rank}, {"spans", std::move(jspans)}});
    }
    return json{{"taggings", std::move(out)}};
}

json build_manifest(const std::filesystem::path& audio, const HarnessConfig& cfg) {
    json inputs = json::object();
    inputs["audio"] = hash_file(audio);
    if (!cfg.asr_fixture.empty()) inputs["fixture"] = hash_file(cfg.asr_fixture);
    if (!cfg.asr_reference.empty()) inputs["reference"] = hash_file(cfg.asr_reference);
    json gaz = json::array();
    for (const auto& p : cfg.gazetteers) gaz.push_back(hash_file(p));
    inputs["gazetteers"] = std::move(gaz);
    json pat = json::array();
    for (const auto& p : cfg.patterns) pat.push_back(hash_file(p));
    inputs["patterns"] = std::move(pat);

    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"config_hash", fnv1a_hex(cfg.canonical())},
                {"config", cfg.canonical()},
                {"inputs", std::move(inputs)}};
}

} // namespace

PipelineResult run_pipeline(const std::filesystem::path& audio, const HarnessConfig& cfg,
                            const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    PipelineResult result;

    auto backend = run_stage("config", [&] { return make_backend(cfg); });
    auto gateway = run_stage("config", [&] {
        GatewayOptions gopts;
        gopts.max_attempts = cfg.asr_max_attempts;
        return std::make_shared<AsrGateway>(backend, GatewayOptions::from_env(gopts));
    });

    run_stage("asr", [&] {
        AsrRequest request;
        request.audio_path = audio;
        request.max_hypotheses = cfg.asr_k;
        request.language = cfg.asr_language;
        request.model_hint = cfg.asr_model;
        result.response = gateway->transcribe(request);
        write_file(out_dir / "asr_response.json",
                   asr_response_to_json(result.response).dump(2) + "\n");
        if (auto* noisy = dynamic_cast<NoisyFixtureBackend*>(backend.get())) {
            result.corruption_logs = noisy->logs();
            write_file(out_dir / "corruption_log.json",
                       corruption_logs_to_json(result.corruption_logs).dump(2) + "\n");
        }
    });

    run_stage("tagger", [&] {
        TaggerConfig tcfg;
        tcfg.gazetteer_files = cfg.gazetteers;
        tcfg.pattern_files = cfg.patterns;
        tcfg.case_sensitive = cfg.tagger_case_sensitive;
        BaselineTagger tagger = BaselineTagger::from_config(tcfg);
        for (size_t i = 0; i < result.response.hypotheses.size(); ++i) {
            const Hypothesis& h = result.response.hypotheses[i];
            std::vector<std::string> tokens;
            for (const auto& w : h.words) tokens.push_back(w.text);
            result.taggings.push_back(tagger.tag(tokens));
            write_file(out_dir / ("tagging_k" + std::to_string(h.rank) + ".bio"),
                       spans_to_bio(tokens, result.taggings.back()));
        }
        write_file(out_dir / "tagging.json",
                   taggings_to_json(result.response, result.taggings).dump(2) + "\n");
    });

    run_stage("merge", [&] {
        std::vector<std::pair<Hypothesis, std::vector<TagSpan>>> tagged;
        for (size_t i = 0; i < result.response.hypotheses.size(); ++i)
            tagged.emplace_back(result.response.hypotheses[i], result.taggings[i]);
        result.raw_plan = merge_hypothesis_detections(tagged);
        write_plan_file(out_dir / "plan_raw.json", result.raw_plan);
    });

    run_stage("pad", [&] {
        result.plan = pad_plan(result.raw_plan, cfg.pad_ms);
        write_plan_file(out_dir / "plan.json", result.plan);
    });

    run_stage("redact", [&] {
        AudioBuffer buffer = read_wav(audio);
        AudioBuffer redacted = redact_audio(buffer, result.plan);
        result.redacted_audio = out_dir / "redacted.wav";
        write_wav(result.redacted_audio, redacted);
    });

    run_stage("manifest", [&] {
        write_file(out_dir / "manifest.json", build_manifest(audio, cfg).dump(2) + "\n");
    });

    return result;
}

} // namespace deid
