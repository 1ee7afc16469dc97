#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "deid/alignment.hpp"
#include "deid/core.hpp"

namespace deid {

// Fraction of a word's time span that the plan silences, in [0, 1].  The
// count of silenced milliseconds is exact integer arithmetic; only the final
// ratio is a double.
int64_t covered_ms(const TimedWord& word, const RedactionPlan& plan);
double coverage(const TimedWord& word, const RedactionPlan& plan);

// True when at least a rho proportion of the word is silenced (inclusive:
// coverage exactly rho passes).  rho must lie in (0, 1]; rho = 1 demands the
// whole word.
bool part_covered(const TimedWord& word, const RedactionPlan& plan, double rho);

// Word-level confusion counts at one threshold.  A ratio with denominator
// zero is reported as absent, never as NaN.
struct RhoMetrics {
    double rho = 1.0;
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

// Derives precision/recall/f1 from counts; use this when merging counts
// across conversations.
RhoMetrics make_rho_metrics(double rho, int64_t tp, int64_t fp, int64_t fn);

// Scores the plan against the labeled reference.  A reference word counts as
// sensitive when its label is in `label_filter`; any other covered word is a
// false positive.  Scoring ignores label kinds beyond the filter.
RhoMetrics metrics_at_rho(const Transcript& reference, const RedactionPlan& plan, double rho,
                          const std::vector<PhiLabel>& label_filter = evaluation_labels());

// Kind-matched variant: a sensitive word only counts as hit when the plan for
// its own kind covers it; coverage under any other kind's plan is a false
// positive for that word.
RhoMetrics metrics_at_rho_typed(const Transcript& reference,
                                const std::map<PhiLabel, RedactionPlan>& kind_plans, double rho,
                                const std::vector<PhiLabel>& label_filter = evaluation_labels());

// 0.05, 0.10, ..., 1.00
std::vector<double> default_rho_grid();

// One metrics row per grid value.  The grid must be strictly increasing
// within (0, 1].  Recall never increases along the grid; precision may move
// either way.
std::vector<RhoMetrics> rho_sweep(const Transcript& reference, const RedactionPlan& plan,
                                  const std::vector<double>& grid = default_rho_grid(),
                                  const std::vector<PhiLabel>& label_filter = evaluation_labels());

// Coverage distribution split by labeled vs unlabeled words.  Bin i spans
// [i/bins, (i+1)/bins); the last bin also takes coverage exactly 1.
struct CoverageHistogram {
    int bins = 0;
    std::vector<int64_t> phi;
    std::vector<int64_t> non_phi;
};

CoverageHistogram coverage_histogram(const Transcript& reference, const RedactionPlan& plan,
                                     int bins);

struct WerReport {
    int64_t substitutions = 0;
    int64_t deletions = 0;
    int64_t insertions = 0;
    int64_t reference_len = 0;

    int64_t edits() const { return substitutions + deletions + insertions; }
    // Absent when the reference is empty (0/0 has no value).
    std::optional<double> wer() const;
    // Same, but an empty reference raises EmptyReference.
    double ratio() const;
};

// Counts substitutions/deletions/insertions of the minimum-edit-distance
// alignment (same tie-breaking and case folding as align_words).
WerReport word_error_rate(const std::vector<std::string>& reference,
                          const std::vector<std::string>& hypothesis);

// Error rates measured separately on the labeled and the unlabeled words.
// `hypothesis` must carry transferred labels; `alignment` is validated
// against both sequences.  Each side keeps only its class of words and gets
// a fresh edit-distance run.
struct SplitWer {
    WerReport phi;
    WerReport non_phi;
};

SplitWer phi_split_wer(const Transcript& reference, const std::vector<TimedWord>& hypothesis,
                       const WordAlignment& alignment);

} // namespace deid
