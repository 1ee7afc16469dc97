#include "deid/reports.hpp"

#include <nlohmann/json.hpp>

#include "deid/util.hpp"

namespace deid {

using nlohmann::json;

std::string format_metric(const std::optional<double>& v) {
    return v ? format_fixed6(*v) : "undefined";
}

std::string metrics_to_csv(const std::vector<RhoMetrics>& rows) {
    std::string out = "rho,tp,fp,fn,precision,recall,f1\n";
    for (const auto& m : rows) {
        out += format_fixed6(m.rho);
        out += ',' + std::to_string(m.tp);
        out += ',' + std::to_string(m.fp);
        out += ',' + std::to_string(m.fn);
        out += ',' + format_metric(m.precision);
        out += ',' + format_metric(m.recall);
        out += ',' + format_metric(m.f1);
        out += '\n';
    }
    return out;
}

std::optional<size_t> argmax_f1(const std::vector<RhoMetrics>& rows) {
    std::optional<size_t> best;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].f1) continue;
        if (!best || *rows[i].f1 > *rows[*best].f1) best = i;
    }
    return best;
}

static json metric_or_null(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json metrics_to_json(const std::vector<RhoMetrics>& rows) {
    json jrows = json::array();
    for (const auto& m : rows)
        jrows.push_back(json{{"rho", m.rho},
                             {"tp", m.tp},
                             {"fp", m.fp},
                             {"fn", m.fn},
                             {"precision", metric_or_null(m.precision)},
                             {"recall", metric_or_null(m.recall)},
                             {"f1", metric_or_null(m.f1)}});
    json out = {{"rows", std::move(jrows)}};
    if (auto best = argmax_f1(rows))
        out["best_f1"] = json{{"rho", rows[*best].rho}, {"f1", *rows[*best].f1}};
    else
        out["best_f1"] = nullptr;
    return out;
}

std::string histogram_to_csv(const CoverageHistogram& h) {
    std::string out = "bin_low,bin_high,phi_count,non_phi_count\n";
    for (int i = 0; i < h.bins; ++i) {
        out += format_fixed6(static_cast<double>(i) / h.bins);
        out += ',' + format_fixed6(static_cast<double>(i + 1) / h.bins);
        out += ',' + std::to_string(h.phi[i]);
        out += ',' + std::to_string(h.non_phi[i]);
        out += '\n';
    }
    return out;
}

std::string alignment_to_csv(const WordAlignment& a, const std::vector<std::string>& ref,
                             const std::vector<std::string>& hyp) {
    validate_alignment(a, ref.size(), hyp.size());
    std::string out = "op,ref_idx,hyp_idx,ref_token,hyp_token\n";
    for (const auto& op : a.ops) {
        out += to_string(op.kind);
        out += ',' + (op.ref_idx >= 0 ? std::to_string(op.ref_idx) : std::string());
        out += ',' + (op.hyp_idx >= 0 ? std::to_string(op.hyp_idx) : std::string());
        out += ',' + (op.ref_idx >= 0 ? ref[op.ref_idx] : std::string());
        out += ',' + (op.hyp_idx >= 0 ? hyp[op.hyp_idx] : std::string());
        out += '\n';
    }
    return out;
}

json attribution_to_json(const ErrorAttribution& attribution) {
    return json{{"asr", attribution.asr},
                {"ner", attribution.ner},
                {"alignment", attribution.alignment}};
}

json wer_report_to_json(const WerReport& report) {
    return json{{"substitutions", report.substitutions},
                {"deletions", report.deletions},
                {"insertions", report.insertions},
                {"reference_len", report.reference_len},
                {"wer", report.wer() ? json(*report.wer()) : json(nullptr)}};
}

json split_wer_to_json(const SplitWer& split) {
    return json{{"phi", wer_report_to_json(split.phi)},
                {"non_phi", wer_report_to_json(split.non_phi)}};
}

} // namespace deid
