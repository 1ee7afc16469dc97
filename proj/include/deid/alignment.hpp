#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deid/core.hpp"

namespace deid {

enum class AlignOpKind { Match, Substitute, Delete, Insert };

std::string to_string(AlignOpKind k);

// One edit step.  ref_idx is -1 for Insert, hyp_idx is -1 for Delete.
struct AlignOp {
    AlignOpKind kind;
    int ref_idx;
    int hyp_idx;

    bool operator==(const AlignOp&) const = default;
};

struct WordAlignment {
    std::vector<AlignOp> ops;

    int64_t cost() const; // substitutions + deletions + insertions
    int64_t count(AlignOpKind k) const;
};

// Minimum-edit-distance alignment with unit costs.  Token equality ignores
// ASCII case.  Ties are broken the same way every run: at each backtrace step
// prefer Match, then Substitute, then Delete, then Insert.
WordAlignment align_words(const std::vector<std::string>& reference,
                          const std::vector<std::string>& hypothesis);

// Throws AlignmentMismatch unless `a` walks through exactly ref_len reference
// and hyp_len hypothesis positions, each once, in order.
void validate_alignment(const WordAlignment& a, size_t ref_len, size_t hyp_len);

struct DroppedLabel {
    int ref_idx;
    PhiLabel label;
};

struct LabelTransfer {
    std::vector<TimedWord> words;      // hypothesis words, labels copied over
    std::vector<DroppedLabel> dropped; // labels lost to deleted reference words
};

// Copies each reference label onto the hypothesis word it aligns with
// (Match or Substitute).  Inserted words stay unlabeled; labels on deleted
// reference words are recorded as dropped.
LabelTransfer transfer_labels(const std::vector<TimedWord>& reference,
                              const std::vector<TimedWord>& hypothesis,
                              const WordAlignment& alignment);

// Why a sensitive reference word ended up not redacted.
enum class FnCategory {
    AsrTranscription, // the recognizer deleted or rewrote the word
    NerTagging,       // the word survived recognition but the tagger missed it
    Alignment,        // tagged, but its redacted time span falls short of rho
};

std::string to_string(FnCategory c);

struct ErrorAttribution {
    std::vector<std::pair<int, FnCategory>> per_word; // reference word index -> cause
    int64_t asr = 0;
    int64_t ner = 0;
    int64_t alignment = 0;

    int64_t total() const { return asr + ner + alignment; }
};

// Categorizes every in-filter sensitive reference word whose coverage misses
// rho.  `hypothesis_tagged` carries the tagger's predicted labels.  The
// category counts always sum to the miss count of the matching metrics run.
ErrorAttribution attribute_false_negatives(const Transcript& reference,
                                           const std::vector<TimedWord>& hypothesis_tagged,
                                           const WordAlignment& alignment,
                                           const RedactionPlan& plan, double rho,
                                           const std::vector<PhiLabel>& label_filter =
                                               evaluation_labels());

} // namespace deid
