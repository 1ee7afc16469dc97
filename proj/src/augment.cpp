#include "deid/augment.hpp"

#include <algorithm>

namespace deid {

std::string to_string(CaseVariant v) {
    switch (v) {
    case CaseVariant::Camel: return "camel";
    case CaseVariant::Lower: return "lower";
    case CaseVariant::Upper: return "upper";
    }
    return "?";
}

static char ascii_up(char c) { return c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c; }
static char ascii_dn(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c; }

std::string apply_case(const std::string& token, CaseVariant v) {
    std::string out = token;
    switch (v) {
    case CaseVariant::Lower:
        for (char& c : out) c = ascii_dn(c);
        break;
    case CaseVariant::Upper:
        for (char& c : out) c = ascii_up(c);
        break;
    case CaseVariant::Camel:
        for (size_t i = 0; i < out.size(); ++i) out[i] = i == 0 ? ascii_up(out[i]) : ascii_dn(out[i]);
        break;
    }
    return out;
}

Transcript case_variant(const Transcript& t, CaseVariant v) {
    std::vector<Turn> turns;
    for (const auto& turn : t.turns()) {
        Turn nt;
        nt.speaker = turn.speaker;
        for (const auto& w : turn.words)
            nt.words.emplace_back(apply_case(w.text, v), w.interval, w.label, w.speaker);
        turns.push_back(std::move(nt));
    }
    return Transcript(t.conversation_id(), std::move(turns));
}

std::vector<Transcript> case_variants(const Transcript& t,
                                      const std::vector<CaseVariant>& variants) {
    std::vector<Transcript> out;
    for (CaseVariant v : variants) out.push_back(case_variant(t, v));
    return out;
}

AsrTransferResult asr_transfer_variant(const Transcript& reference,
                                       const std::vector<TimedWord>& asr_words) {
    std::vector<TimedWord> ref_words = reference.flatten();
    std::vector<std::string> ref_tokens, asr_tokens;
    for (const auto& w : ref_words) ref_tokens.push_back(w.text);
    for (const auto& w : asr_words) asr_tokens.push_back(w.text);

    WordAlignment a = align_words(ref_tokens, asr_tokens);
    LabelTransfer transfer = transfer_labels(ref_words, asr_words, a);

    // recognizer words come back flat; rebuild turns from speaker runs
    std::vector<Turn> turns;
    for (const auto& w : transfer.words) {
        if (turns.empty() || turns.back().speaker != w.speaker)
            turns.push_back(Turn{w.speaker, {}});
        turns.back().words.push_back(w);
    }
    AsrTransferResult out{Transcript(reference.conversation_id(), std::move(turns)),
                          std::move(transfer.dropped)};
    return out;
}

std::vector<Transcript> segment_turns(const Transcript& t, int window, int step) {
    if (window < 1 || step < 1 || step > window)
        throw DeidError("turn segmentation needs 1 <= step <= window");

    const auto& turns = t.turns();
    const int n = static_cast<int>(turns.size());
    std::vector<Transcript> out;
    if (n <= window) {
        out.push_back(t);
        return out;
    }
    for (int start = 0;; start += step) {
        int end = std::min(start + window, n);
        std::vector<Turn> slice(turns.begin() + start, turns.begin() + end);
        std::string id = t.conversation_id() + ".turns" + std::to_string(start) + "-" +
                         std::to_string(end);
        out.emplace_back(std::move(id), std::move(slice));
        if (end >= n) break; // first segment touching the end is the last one
    }
    return out;
}

} // namespace deid
