#include "deid/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deid/augment.hpp"
#include "deid/config.hpp"
#include "deid/pipeline.hpp"
#include "deid/redaction.hpp"
#include "deid/reports.hpp"
#include "deid/transcript_io.hpp"
#include "deid/util.hpp"
#include "deid/version.hpp"
#include "deid/wav.hpp"

namespace deid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// every relative input path hangs off --workdir
fs::path resolve(const fs::path& workdir, const fs::path& p) { return workdir / p; }

std::vector<std::string> tokens_from_file(const fs::path& path) {
    if (path.extension() == ".json") return parse_transcript_file(path).tokens();
    std::istringstream in(read_file(path));
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// reference/plan pairs for evaluate: two files, or two directories matched
// by file name
std::vector<std::pair<fs::path, fs::path>> pair_inputs(const fs::path& reference,
                                                       const fs::path& plan) {
    if (!fs::is_directory(reference)) {
        if (fs::is_directory(plan))
            throw ConfigError("--plan is a directory but --reference is a file");
        return {{reference, plan}};
    }
    if (!fs::is_directory(plan))
        throw ConfigError("--reference is a directory but --plan is a file");
    std::vector<fs::path> refs;
    for (const auto& entry : fs::directory_iterator(reference))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            refs.push_back(entry.path());
    std::sort(refs.begin(), refs.end());
    if (refs.empty()) throw ConfigError("no .json transcripts in " + reference.string());
    std::vector<std::pair<fs::path, fs::path>> out;
    for (const auto& ref : refs) {
        fs::path p = plan / ref.filename();
        if (!fs::exists(p))
            throw ConfigError("missing plan for " + ref.filename().string() + " in " +
                              plan.string());
        out.emplace_back(ref, p);
    }
    return out;
}

struct ConversationEval {
    std::string id;
    size_t words = 0;
    std::vector<RhoMetrics> rows;
    CoverageHistogram histogram;
};

ConversationEval evaluate_one(const fs::path& ref_path, const fs::path& plan_path,
                              const std::vector<double>& grid,
                              const std::vector<PhiLabel>& labels, int bins) {
    Transcript reference = parse_transcript_file(ref_path);
    RedactionPlan plan = parse_plan_file(plan_path);
    ConversationEval out;
    out.id = reference.conversation_id();
    out.words = reference.word_count();
    out.rows = rho_sweep(reference, plan, grid, labels);
    out.histogram = coverage_histogram(reference, plan, bins);
    return out;
}

int cmd_pipeline(const fs::path& workdir, const fs::path& audio, const std::string& config_arg,
                 const fs::path& out_dir, HarnessConfig cfg) {
    PipelineResult result = run_pipeline(resolve(workdir, audio), cfg, out_dir);
    (void)config_arg;
    size_t detections = 0;
    for (const auto& spans : result.taggings) detections += spans.size();
    std::cout << "hypotheses=" << result.response.hypotheses.size()
              << " detections=" << detections
              << " plan_intervals=" << result.plan.intervals().size()
              << " plan_ms=" << result.plan.total_ms() << "\n"
              << "out=" << out_dir.string() << "\n";
    return 0;
}

int cmd_evaluate(const fs::path& reference_arg, const fs::path& plan_arg, const fs::path& out_dir,
                 const HarnessConfig& cfg, const fs::path& artifacts, int jobs) {
    const std::vector<double> grid = cfg.grid.empty() ? default_rho_grid() : cfg.grid;
    const std::vector<PhiLabel> labels = cfg.labels.empty() ? evaluation_labels() : cfg.labels;

    auto pairs = pair_inputs(reference_arg, plan_arg);
    std::vector<ConversationEval> evals(pairs.size());
    if (jobs > 1) {
        std::vector<std::future<ConversationEval>> futures;
        for (const auto& [ref, plan] : pairs)
            futures.push_back(std::async(std::launch::async, evaluate_one, ref, plan, grid,
                                         labels, cfg.bins));
        for (size_t i = 0; i < futures.size(); ++i) evals[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < pairs.size(); ++i)
            evals[i] = evaluate_one(pairs[i].first, pairs[i].second, grid, labels, cfg.bins);
    }
    // reports list conversations in id order, whatever the scheduling did
    std::sort(evals.begin(), evals.end(),
              [](const ConversationEval& a, const ConversationEval& b) { return a.id < b.id; });

    std::vector<RhoMetrics> total;
    for (size_t g = 0; g < grid.size(); ++g) {
        int64_t tp = 0, fp = 0, fn = 0;
        for (const auto& e : evals) {
            tp += e.rows[g].tp;
            fp += e.rows[g].fp;
            fn += e.rows[g].fn;
        }
        total.push_back(make_rho_metrics(grid[g], tp, fp, fn));
    }
    CoverageHistogram hist;
    hist.bins = cfg.bins;
    hist.phi.assign(cfg.bins, 0);
    hist.non_phi.assign(cfg.bins, 0);
    for (const auto& e : evals)
        for (int b = 0; b < cfg.bins; ++b) {
            hist.phi[b] += e.histogram.phi[b];
            hist.non_phi[b] += e.histogram.non_phi[b];
        }

    fs::create_directories(out_dir);
    write_file(out_dir / "metrics.csv", metrics_to_csv(total));
    json jmetrics = metrics_to_json(total);
    json jconvs = json::array();
    for (const auto& e : evals) jconvs.push_back(json{{"id", e.id}, {"words", e.words}});
    jmetrics["conversations"] = std::move(jconvs);
    write_file(out_dir / "metrics.json", jmetrics.dump(2) + "\n");
    write_file(out_dir / "histogram.csv", histogram_to_csv(hist));

    if (!artifacts.empty()) {
        if (pairs.size() != 1)
            throw ConfigError("--artifacts works with a single reference/plan pair");
        Transcript reference = parse_transcript_file(pairs[0].first);
        RedactionPlan plan = parse_plan_file(pairs[0].second);

        AsrResponse response =
            asr_response_from_json(json::parse(read_file(artifacts / "asr_response.json")));
        if (response.hypotheses.empty())
            throw ConfigError("artifacts hold no hypotheses to attribute against");
        const Hypothesis& top = response.hypotheses.front();

        json jtags = json::parse(read_file(artifacts / "tagging.json"));
        std::vector<TagSpan> spans;
        for (const auto& jt : jtags.at("taggings"))
            if (jt.at("rank").get<int>() == top.rank)
                for (const auto& js : jt.at("spans")) {
                    auto kind = phi_label_from_string(js.at("kind").get<std::string>());
                    if (!kind) throw ParseError("tagging.json: unknown label kind");
                    spans.push_back(TagSpan{js.at("start_word").get<int>(),
                                            js.at("end_word").get<int>(), *kind});
                }

        // predicted labels word by word, for attribution
        std::vector<TimedWord> tagged = top.words;
        for (const auto& s : spans)
            for (int i = s.start_word; i < s.end_word && i < static_cast<int>(tagged.size()); ++i)
                tagged[i].label = s.kind;

        std::vector<TimedWord> ref_words = reference.flatten();
        std::vector<std::string> ref_tokens = reference.tokens();
        std::vector<std::string> hyp_tokens;
        for (const auto& w : top.words) hyp_tokens.push_back(w.text);

        WordAlignment alignment = align_words(ref_tokens, hyp_tokens);
        LabelTransfer transfer = transfer_labels(ref_words, top.words, alignment);
        SplitWer split = phi_split_wer(reference, transfer.words, alignment);
        ErrorAttribution attribution = attribute_false_negatives(
            reference, tagged, alignment, plan, cfg.attribution_rho, labels);

        write_file(out_dir / "wer_split.json", split_wer_to_json(split).dump(2) + "\n");
        write_file(out_dir / "attribution.json",
                   attribution_to_json(attribution).dump(2) + "\n");
        write_file(out_dir / "alignment.csv",
                   alignment_to_csv(alignment, ref_tokens, hyp_tokens));
    }

    std::cout << "conversations=" << evals.size() << " grid=" << grid.size() << "\n";
    if (auto best = argmax_f1(total))
        std::cout << "best_f1 rho=" << format_fixed6(total[*best].rho)
                  << " f1=" << format_fixed6(*total[*best].f1) << "\n";
    else
        std::cout << "best_f1 undefined\n";
    return 0;
}

int cmd_wer(const fs::path& reference, const fs::path& hypothesis) {
    WerReport report = word_error_rate(tokens_from_file(reference), tokens_from_file(hypothesis));
    std::cout << "substitutions=" << report.substitutions << " deletions=" << report.deletions
              << " insertions=" << report.insertions
              << " reference_len=" << report.reference_len << "\n";
    std::cout << "wer=" << format_metric(report.wer()) << "\n";
    return 0;
}

int cmd_augment(const fs::path& input, const fs::path& out_dir,
                const std::vector<std::string>& case_names, const fs::path& asr_response,
                bool segment, int window, int step) {
    Transcript original = parse_transcript_file(input);
    fs::create_directories(out_dir);
    std::string stem = input.stem().string();

    std::vector<CaseVariant> cases;
    for (const std::string& name : case_names) {
        if (name == "camel") cases.push_back(CaseVariant::Camel);
        else if (name == "lower") cases.push_back(CaseVariant::Lower);
        else if (name == "upper") cases.push_back(CaseVariant::Upper);
        else throw ConfigError("--case: unknown variant \"" + name + "\"");
    }

    // base transcripts: the original plus, if asked for, the recognizer
    // transfer; case variants multiply each of them
    std::vector<std::pair<std::string, Transcript>> variants;
    std::vector<std::pair<std::string, Transcript>> bases = {{"", original}};
    if (!asr_response.empty()) {
        AsrResponse response =
            asr_response_from_json(json::parse(read_file(asr_response)));
        if (response.hypotheses.empty())
            throw ConfigError("recognizer response holds no hypotheses");
        AsrTransferResult transfer =
            asr_transfer_variant(original, response.hypotheses.front().words);
        bases.emplace_back("asr", transfer.transcript);
        variants.emplace_back("asr", transfer.transcript);
    }
    for (const auto& [base_name, base] : bases)
        for (CaseVariant v : cases) {
            std::string chain =
                base_name.empty() ? to_string(v) : base_name + "." + to_string(v);
            variants.emplace_back(chain, case_variant(base, v));
        }
    if (segment && variants.empty()) variants.emplace_back("orig", original);

    size_t written = 0;
    for (const auto& [chain, t] : variants) {
        if (segment) {
            auto segments = segment_turns(t, window, step);
            for (size_t i = 0; i < segments.size(); ++i) {
                char suffix[16];
                std::snprintf(suffix, sizeof suffix, "seg%02zu", i);
                write_transcript_file(out_dir / (stem + "." + chain + "." + suffix + ".json"),
                                      segments[i]);
                ++written;
            }
        } else {
            write_transcript_file(out_dir / (stem + "." + chain + ".json"), t);
            ++written;
        }
    }
    std::cout << "variants=" << variants.size() << " files=" << written << "\n";
    return 0;
}

int cmd_redact(const fs::path& audio, const fs::path& plan_path, const fs::path& out) {
    RedactionPlan plan = parse_plan_file(plan_path);
    AudioBuffer buffer = read_wav(audio);
    AudioBuffer redacted = redact_audio(buffer, plan);
    write_wav(out, redacted);
    std::cout << "redacted_ms=" << plan.total_ms() << " out=" << out.string() << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"word-aligned de-identification of conversational audio"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string workdir = ".";
    app.add_option("--workdir", workdir, "base directory for relative paths")
        ->capture_default_str();

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "transcribe, tag, plan and redact one recording");
    std::string p_audio, p_config, p_out, p_reference, p_fixture;
    int p_k = 0;
    int64_t p_pad = -1;
    int64_t p_seed = -1;
    pipeline->add_option("--audio", p_audio, "input wav")->required();
    pipeline->add_option("--config", p_config, "harness config file")->required();
    pipeline->add_option("--out", p_out, "output directory for artifacts")->required();
    pipeline->add_option("--reference", p_reference, "reference transcript (noisy_fixture)");
    pipeline->add_option("--fixture", p_fixture, "recorded response (fixture backend)");
    pipeline->add_option("--k", p_k, "hypotheses to request");
    pipeline->add_option("--pad-ms", p_pad, "padding around detections");
    pipeline->add_option("--seed", p_seed, "noise seed (noisy_fixture)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a plan against a labeled reference");
    std::string e_reference, e_plan, e_out, e_config, e_grid, e_labels, e_artifacts;
    int e_bins = 0, e_jobs = 1;
    double e_attr_rho = -1.0;
    evaluate->add_option("--reference", e_reference, "labeled transcript file or directory")
        ->required();
    evaluate->add_option("--plan", e_plan, "plan file or directory")->required();
    evaluate->add_option("--out", e_out, "output directory for reports")->required();
    evaluate->add_option("--config", e_config, "harness config file");
    evaluate->add_option("--grid", e_grid, "rho grid, e.g. 0.3,0.5,1.0 or \"default\"");
    evaluate->add_option("--labels", e_labels, "label filter, e.g. Name,City, or default/all");
    evaluate->add_option("--bins", e_bins, "histogram bins");
    evaluate->add_option("--artifacts", e_artifacts, "pipeline output dir for wer/attribution");
    evaluate->add_option("--attribution-rho", e_attr_rho, "rho for the attribution report");
    evaluate->add_option("--jobs", e_jobs, "conversations scored in parallel");

    // wer
    auto* wer = app.add_subcommand("wer", "word error rate between two token files");
    std::string w_reference, w_hypothesis;
    wer->add_option("--reference", w_reference, "reference (.json transcript or plain tokens)")
        ->required();
    wer->add_option("--hypothesis", w_hypothesis, "hypothesis (.json transcript or plain tokens)")
        ->required();

    // augment
    auto* augment = app.add_subcommand("augment", "emit augmented transcript variants");
    std::string a_input, a_out, a_asr;
    std::vector<std::string> a_cases;
    bool a_segment = false;
    int a_window = 20, a_step = 10;
    augment->add_option("--input", a_input, "transcript to augment")->required();
    augment->add_option("--out", a_out, "output directory")->required();
    augment->add_option("--case", a_cases, "case variants: camel, lower, upper")
        ->delimiter(',');
    augment->add_option("--asr-response", a_asr, "recognizer response for a transfer variant");
    augment->add_flag("--segment", a_segment, "window the turns");
    augment->add_option("--window", a_window, "turns per segment")->capture_default_str();
    augment->add_option("--step", a_step, "turns between segment starts")->capture_default_str();

    // redact
    auto* redact = app.add_subcommand("redact", "apply a plan to a wav");
    std::string r_audio, r_plan, r_out;
    redact->add_option("--audio", r_audio, "input wav")->required();
    redact->add_option("--plan", r_plan, "plan file")->required();
    redact->add_option("--out", r_out, "output wav")->required();

    std::vector<const char*> argv;
    argv.push_back(kToolName);
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const fs::path wd = workdir;
    try {
        if (pipeline->parsed()) {
            HarnessConfig cfg = load_config_file(resolve(wd, p_config), wd);
            if (!p_reference.empty()) cfg.asr_reference = resolve(wd, p_reference);
            if (!p_fixture.empty()) cfg.asr_fixture = resolve(wd, p_fixture);
            if (p_k > 0) cfg.asr_k = p_k;
            if (p_pad >= 0) cfg.pad_ms = p_pad;
            if (p_seed >= 0) cfg.asr_noise.seed = static_cast<uint64_t>(p_seed);
            return cmd_pipeline(wd, p_audio, p_config, resolve(wd, p_out), std::move(cfg));
        }
        if (evaluate->parsed()) {
            HarnessConfig cfg = e_config.empty()
                                    ? HarnessConfig{}
                                    : load_config_file(resolve(wd, e_config), wd);
            if (!e_grid.empty()) cfg.grid = parse_grid(e_grid);
            if (!e_labels.empty()) cfg.labels = parse_labels(e_labels);
            if (e_bins > 0) cfg.bins = e_bins;
            if (e_attr_rho > 0.0) cfg.attribution_rho = e_attr_rho;
            return cmd_evaluate(resolve(wd, e_reference), resolve(wd, e_plan),
                                resolve(wd, e_out), cfg,
                                e_artifacts.empty() ? fs::path() : resolve(wd, e_artifacts),
                                e_jobs);
        }
        if (wer->parsed()) return cmd_wer(resolve(wd, w_reference), resolve(wd, w_hypothesis));
        if (augment->parsed())
            return cmd_augment(resolve(wd, a_input), resolve(wd, a_out), a_cases,
                               a_asr.empty() ? fs::path() : resolve(wd, a_asr), a_segment,
                               a_window, a_step);
        if (redact->parsed())
            return cmd_redact(resolve(wd, r_audio), resolve(wd, r_plan), resolve(wd, r_out));
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.service ? 3 : 2;
    } catch (const AsrError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DeidError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace deid::cli
