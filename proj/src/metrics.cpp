#include "deid/metrics.hpp"

#include <algorithm>
#include <unordered_set>

namespace deid {

int64_t covered_ms(const TimedWord& word, const RedactionPlan& plan) {
    return plan_intersection_ms(plan, word.interval);
}

double coverage(const TimedWord& word, const RedactionPlan& plan) {
    return static_cast<double>(covered_ms(word, plan)) /
           static_cast<double>(word.interval.length_ms());
}

static void check_rho(double rho) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw InvalidRho("rho must lie in (0, 1], got " + std::to_string(rho));
}

bool part_covered(const TimedWord& word, const RedactionPlan& plan, double rho) {
    check_rho(rho);
    return coverage(word, plan) >= rho;
}

static std::optional<double> safe_ratio(int64_t num, int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

RhoMetrics make_rho_metrics(double rho, int64_t tp, int64_t fp, int64_t fn) {
    RhoMetrics m;
    m.rho = rho;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.precision = safe_ratio(tp, tp + fp);
    m.recall = safe_ratio(tp, tp + fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

static std::unordered_set<int> filter_set(const std::vector<PhiLabel>& label_filter) {
    std::unordered_set<int> s;
    for (PhiLabel k : label_filter) s.insert(static_cast<int>(k));
    return s;
}

RhoMetrics metrics_at_rho(const Transcript& reference, const RedactionPlan& plan, double rho,
                          const std::vector<PhiLabel>& label_filter) {
    check_rho(rho);
    auto filter = filter_set(label_filter);

    int64_t tp = 0, fp = 0, fn = 0;
    for (const auto& turn : reference.turns()) {
        for (const auto& w : turn.words) {
            bool sensitive = w.label && filter.count(static_cast<int>(*w.label));
            bool covered = coverage(w, plan) >= rho;
            if (sensitive && covered) ++tp;
            else if (sensitive) ++fn;
            else if (covered) ++fp;
        }
    }
    return make_rho_metrics(rho, tp, fp, fn);
}

RhoMetrics metrics_at_rho_typed(const Transcript& reference,
                                const std::map<PhiLabel, RedactionPlan>& kind_plans, double rho,
                                const std::vector<PhiLabel>& label_filter) {
    check_rho(rho);
    auto filter = filter_set(label_filter);
    static const RedactionPlan kEmpty;

    int64_t tp = 0, fp = 0, fn = 0;
    for (const auto& turn : reference.turns()) {
        for (const auto& w : turn.words) {
            bool sensitive = w.label && filter.count(static_cast<int>(*w.label));
            bool own_kind_covered = false;
            bool other_kind_covered = false;
            for (const auto& [kind, plan] : kind_plans) {
                if (coverage(w, plan) < rho) continue;
                if (w.label && *w.label == kind) own_kind_covered = true;
                else other_kind_covered = true;
            }
            if (sensitive) {
                if (own_kind_covered) ++tp;
                else ++fn;
                if (other_kind_covered) ++fp; // covered under a wrong kind as well
            } else if (own_kind_covered || other_kind_covered) {
                ++fp;
            }
        }
    }
    return make_rho_metrics(rho, tp, fp, fn);
}

std::vector<double> default_rho_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) grid.push_back(k / 20.0);
    return grid;
}

std::vector<RhoMetrics> rho_sweep(const Transcript& reference, const RedactionPlan& plan,
                                  const std::vector<double>& grid,
                                  const std::vector<PhiLabel>& label_filter) {
    if (grid.empty()) throw InvalidRho("rho grid must not be empty");
    for (size_t i = 0; i < grid.size(); ++i) {
        check_rho(grid[i]);
        if (i > 0 && grid[i] <= grid[i - 1])
            throw InvalidRho("rho grid must be strictly increasing");
    }

    // coverage per word once; thresholds are cheap after that
    auto filter = filter_set(label_filter);
    struct WordCov {
        bool sensitive;
        double cov;
    };
    std::vector<WordCov> covs;
    for (const auto& turn : reference.turns())
        for (const auto& w : turn.words)
            covs.push_back({w.label && filter.count(static_cast<int>(*w.label)) != 0,
                            coverage(w, plan)});

    std::vector<RhoMetrics> out;
    for (double rho : grid) {
        int64_t tp = 0, fp = 0, fn = 0;
        for (const auto& wc : covs) {
            bool covered = wc.cov >= rho;
            if (wc.sensitive && covered) ++tp;
            else if (wc.sensitive) ++fn;
            else if (covered) ++fp;
        }
        out.push_back(make_rho_metrics(rho, tp, fp, fn));
    }
    return out;
}

CoverageHistogram coverage_histogram(const Transcript& reference, const RedactionPlan& plan,
                                     int bins) {
    if (bins < 1) throw DeidError("histogram needs at least 1 bin");

    CoverageHistogram h;
    h.bins = bins;
    h.phi.assign(bins, 0);
    h.non_phi.assign(bins, 0);
    for (const auto& turn : reference.turns()) {
        for (const auto& w : turn.words) {
            // exact rational binning: coverage p/q lands in bin floor(p*bins/q),
            // with coverage 1 folded into the last bin
            int64_t p = covered_ms(w, plan);
            int64_t q = w.interval.length_ms();
            int64_t idx = p * bins / q;
            if (idx >= bins) idx = bins - 1;
            (w.label ? h.phi : h.non_phi)[idx] += 1;
        }
    }
    return h;
}

std::optional<double> WerReport::wer() const {
    if (reference_len == 0) return std::nullopt;
    return static_cast<double>(edits()) / static_cast<double>(reference_len);
}

double WerReport::ratio() const {
    if (reference_len == 0)
        throw EmptyReference("word error rate undefined: reference is empty");
    return *wer();
}

WerReport word_error_rate(const std::vector<std::string>& reference,
                          const std::vector<std::string>& hypothesis) {
    WordAlignment a = align_words(reference, hypothesis);
    WerReport r;
    r.substitutions = a.count(AlignOpKind::Substitute);
    r.deletions = a.count(AlignOpKind::Delete);
    r.insertions = a.count(AlignOpKind::Insert);
    r.reference_len = static_cast<int64_t>(reference.size());
    return r;
}

SplitWer phi_split_wer(const Transcript& reference, const std::vector<TimedWord>& hypothesis,
                       const WordAlignment& alignment) {
    std::vector<TimedWord> ref_words = reference.flatten();
    validate_alignment(alignment, ref_words.size(), hypothesis.size());
    for (const auto& op : alignment.ops)
        if (op.kind == AlignOpKind::Match &&
            !tokens_equal_fold(ref_words[op.ref_idx].text, hypothesis[op.hyp_idx].text))
            throw AlignmentMismatch("match op at ref " + std::to_string(op.ref_idx) +
                                    " pairs unequal tokens");

    auto split = [](const std::vector<TimedWord>& words, bool want_phi) {
        std::vector<std::string> out;
        for (const auto& w : words)
            if (w.is_phi() == want_phi) out.push_back(w.text);
        return out;
    };

    SplitWer s;
    s.phi = word_error_rate(split(ref_words, true), split(hypothesis, true));
    s.non_phi = word_error_rate(split(ref_words, false), split(hypothesis, false));
    return s;
}

} // namespace deid
