#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "deid/alignment.hpp"
#include "deid/metrics.hpp"

namespace deid {

// "undefined" for absent ratios, otherwise six decimals.
std::string format_metric(const std::optional<double>& v);

// CSV with header "rho,tp,fp,fn,precision,recall,f1", one row per grid value.
std::string metrics_to_csv(const std::vector<RhoMetrics>& rows);
// Same rows as JSON; undefined ratios become null.  Includes the best row by
// f1 (lowest rho wins ties) when any row has a defined f1.
nlohmann::json metrics_to_json(const std::vector<RhoMetrics>& rows);
std::optional<size_t> argmax_f1(const std::vector<RhoMetrics>& rows);

// CSV with header "bin_low,bin_high,phi_count,non_phi_count".
std::string histogram_to_csv(const CoverageHistogram& h);

// CSV with header "op,ref_idx,hyp_idx,ref_token,hyp_token" for audits.
std::string alignment_to_csv(const WordAlignment& a, const std::vector<std::string>& ref,
                             const std::vector<std::string>& hyp);

// {"asr": n, "ner": n, "alignment": n}
nlohmann::json attribution_to_json(const ErrorAttribution& attribution);

nlohmann::json wer_report_to_json(const WerReport& report);
nlohmann::json split_wer_to_json(const SplitWer& split);

} // namespace deid
