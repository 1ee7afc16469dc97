#pragma once

#include <string>
#include <vector>

#include "deid/alignment.hpp"
#include "deid/core.hpp"

namespace deid {

enum class CaseVariant { Camel, Lower, Upper };

std::string to_string(CaseVariant v);

// Per-character ASCII mapping; Camel upper-cases the first character of each
// token and lower-cases the rest.  Bytes outside A-Za-z pass through.
std::string apply_case(const std::string& token, CaseVariant v);

// Same conversation with every token re-cased.  Timings, labels, speakers and
// turn structure stay put.
Transcript case_variant(const Transcript& t, CaseVariant v);
std::vector<Transcript> case_variants(const Transcript& t,
                                      const std::vector<CaseVariant>& variants);

// The reference labels carried over onto recognizer output: align the token
// sequences, copy labels across, and rebuild a transcript over the
// recognizer's words and timings (consecutive same-speaker words form turns).
// Labels on words the recognizer dropped are recorded, not transferred.
struct AsrTransferResult {
    Transcript transcript;
    std::vector<DroppedLabel> dropped;
};

AsrTransferResult asr_transfer_variant(const Transcript& reference,
                                       const std::vector<TimedWord>& asr_words);

// Sliding windows over turns: starts 0, step, 2*step, ...; each segment takes
// up to `window` turns and the last one may be shorter.  Emission stops with
// the first segment that reaches the end, and a transcript with at most
// `window` turns comes back whole.  Every turn lands in at least one segment.
std::vector<Transcript> segment_turns(const Transcript& t, int window, int step);

} // namespace deid
