#include "deid/alignment.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

#include "deid/metrics.hpp"

namespace deid {

std::string to_string(AlignOpKind k) {
    switch (k) {
    case AlignOpKind::Match: return "match";
    case AlignOpKind::Substitute: return "substitute";
    case AlignOpKind::Delete: return "delete";
    case AlignOpKind::Insert: return "insert";
    }
    return "?";
}

std::string to_string(FnCategory c) {
    switch (c) {
    case FnCategory::AsrTranscription: return "asr";
    case FnCategory::NerTagging: return "ner";
    case FnCategory::Alignment: return "alignment";
    }
    return "?";
}

int64_t WordAlignment::cost() const {
    int64_t c = 0;
    for (const auto& op : ops)
        if (op.kind != AlignOpKind::Match) ++c;
    return c;
}

int64_t WordAlignment::count(AlignOpKind k) const {
    int64_t c = 0;
    for (const auto& op : ops)
        if (op.kind == k) ++c;
    return c;
}

WordAlignment align_words(const std::vector<std::string>& reference,
                          const std::vector<std::string>& hypothesis) {
    const size_t n = reference.size(), m = hypothesis.size();

    // full cost table; conversations are short enough that O(n*m) ints is fine
    std::vector<int32_t> dp((n + 1) * (m + 1));
    auto at = [&](size_t i, size_t j) -> int32_t& { return dp[i * (m + 1) + j]; };
    for (size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int32_t>(j);
    for (size_t i = 1; i <= n; ++i) {
        at(i, 0) = static_cast<int32_t>(i);
        for (size_t j = 1; j <= m; ++j) {
            bool eq = tokens_equal_fold(reference[i - 1], hypothesis[j - 1]);
            int32_t best = at(i - 1, j - 1) + (eq ? 0 : 1);
            best = std::min(best, at(i - 1, j) + 1);
            best = std::min(best, at(i, j - 1) + 1);
            at(i, j) = best;
        }
    }

    // backtrace, fixed preference: Match > Substitute > Delete > Insert
    WordAlignment out;
    size_t i = n, j = m;
    while (i > 0 || j > 0) {
        int32_t here = at(i, j);
        bool eq = i > 0 && j > 0 &&
                  tokens_equal_fold(reference[i - 1], hypothesis[j - 1]);
        if (i > 0 && j > 0 && eq && at(i - 1, j - 1) == here) {
            out.ops.push_back({AlignOpKind::Match, static_cast<int>(i - 1), static_cast<int>(j - 1)});
            --i, --j;
        } else if (i > 0 && j > 0 && !eq && at(i - 1, j - 1) + 1 == here) {
            out.ops.push_back({AlignOpKind::Substitute, static_cast<int>(i - 1), static_cast<int>(j - 1)});
            --i, --j;
        } else if (i > 0 && at(i - 1, j) + 1 == here) {
            out.ops.push_back({AlignOpKind::Delete, static_cast<int>(i - 1), -1});
            --i;
        } else {
            out.ops.push_back({AlignOpKind::Insert, -1, static_cast<int>(j - 1)});
            --j;
        }
    }
    std::reverse(out.ops.begin(), out.ops.end());
    return out;
}

void validate_alignment(const WordAlignment& a, size_t ref_len, size_t hyp_len) {
    int64_t next_ref = 0, next_hyp = 0;
    for (const auto& op : a.ops) {
        switch (op.kind) {
        case AlignOpKind::Match:
        case AlignOpKind::Substitute:
            if (op.ref_idx != next_ref || op.hyp_idx != next_hyp)
                throw AlignmentMismatch("alignment indices out of order at ref " +
                                        std::to_string(op.ref_idx));
            ++next_ref, ++next_hyp;
            break;
        case AlignOpKind::Delete:
            if (op.ref_idx != next_ref)
                throw AlignmentMismatch("alignment indices out of order at ref " +
                                        std::to_string(op.ref_idx));
            ++next_ref;
            break;
        case AlignOpKind::Insert:
            if (op.hyp_idx != next_hyp)
                throw AlignmentMismatch("alignment indices out of order at hyp " +
                                        std::to_string(op.hyp_idx));
            ++next_hyp;
            break;
        }
    }
    if (next_ref != static_cast<int64_t>(ref_len) || next_hyp != static_cast<int64_t>(hyp_len))
        throw AlignmentMismatch("alignment covers " + std::to_string(next_ref) + "/" +
                                std::to_string(next_hyp) + " words, sequences have " +
                                std::to_string(ref_len) + "/" + std::to_string(hyp_len));
}

LabelTransfer transfer_labels(const std::vector<TimedWord>& reference,
                              const std::vector<TimedWord>& hypothesis,
                              const WordAlignment& alignment) {
    validate_alignment(alignment, reference.size(), hypothesis.size());

    LabelTransfer out;
    out.words = hypothesis;
    for (auto& w : out.words) w.label.reset();

    for (const auto& op : alignment.ops) {
        switch (op.kind) {
        case AlignOpKind::Match:
        case AlignOpKind::Substitute:
            out.words[op.hyp_idx].label = reference[op.ref_idx].label;
            break;
        case AlignOpKind::Delete:
            if (reference[op.ref_idx].label)
                out.dropped.push_back({op.ref_idx, *reference[op.ref_idx].label});
            break;
        case AlignOpKind::Insert:
            break; // stays unlabeled
        }
    }
    return out;
}

ErrorAttribution attribute_false_negatives(const Transcript& reference,
                                           const std::vector<TimedWord>& hypothesis_tagged,
                                           const WordAlignment& alignment,
                                           const RedactionPlan& plan, double rho,
                                           const std::vector<PhiLabel>& label_filter) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw InvalidRho("rho must lie in (0, 1], got " + std::to_string(rho));

    std::vector<TimedWord> ref_words = reference.flatten();
    validate_alignment(alignment, ref_words.size(), hypothesis_tagged.size());

    // op touching each reference word
    std::vector<const AlignOp*> op_for_ref(ref_words.size(), nullptr);
    for (const auto& op : alignment.ops) {
        if (op.ref_idx < 0) continue;
        op_for_ref[op.ref_idx] = &op;
        if (op.kind == AlignOpKind::Match &&
            !tokens_equal_fold(ref_words[op.ref_idx].text, hypothesis_tagged[op.hyp_idx].text))
            throw AlignmentMismatch("match op at ref " + std::to_string(op.ref_idx) +
                                    " pairs unequal tokens");
    }

    std::unordered_set<int> filter;
    for (PhiLabel k : label_filter) filter.insert(static_cast<int>(k));

    ErrorAttribution out;
    for (size_t i = 0; i < ref_words.size(); ++i) {
        const TimedWord& w = ref_words[i];
        if (!w.label || !filter.count(static_cast<int>(*w.label))) continue;
        if (part_covered(w, plan, rho)) continue;

        const AlignOp* op = op_for_ref[i];
        FnCategory cat;
        if (op->kind == AlignOpKind::Delete || op->kind == AlignOpKind::Substitute) {
            cat = FnCategory::AsrTranscription;
        } else if (!hypothesis_tagged[op->hyp_idx].label) {
            cat = FnCategory::NerTagging;
        } else {
            cat = FnCategory::Alignment;
        }
        out.per_word.emplace_back(static_cast<int>(i), cat);
        switch (cat) {
        case FnCategory::AsrTranscription: ++out.asr; break;
        case FnCategory::NerTagging: ++out.ner; break;
        case FnCategory::Alignment: ++out.alignment; break;
        }
    }
    return out;
}

} // namespace deid
