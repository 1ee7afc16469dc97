#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deid/errors.hpp"

namespace deid {

// Half-open interval [start_ms, end_ms) in integer milliseconds from the start
// of the conversation audio.  Construction enforces 0 <= start < end, so a
// TimeInterval that exists is always valid.
struct TimeInterval {
    int64_t start_ms;
    int64_t end_ms;

    TimeInterval(int64_t start, int64_t end);

    int64_t length_ms() const { return end_ms - start_ms; }
    bool contains(int64_t t_ms) const { return start_ms <= t_ms && t_ms < end_ms; }
    bool operator==(const TimeInterval&) const = default;
};

// Length of the overlap of two intervals; 0 when disjoint.  Half-open ends
// make touching intervals disjoint: [0,1000) and [1000,2000) share nothing.
int64_t interval_intersection_len(const TimeInterval& a, const TimeInterval& b);

// Personal-information categories a word can carry.
enum class PhiLabel {
    Name,
    Age,
    Date,
    Organization,
    LocationGeneral,
    City,
    State,
    Country,
    Profession,
    Holiday,
    Season,
    Hospital,
    Pharmacy,
};

const std::vector<PhiLabel>& all_phi_labels();
// The common subset scored by default: Name, Age, Date, Organization,
// LocationGeneral, City.
const std::vector<PhiLabel>& evaluation_labels();
std::string to_string(PhiLabel kind);
std::optional<PhiLabel> phi_label_from_string(std::string_view name);

// One spoken token with its time span.  `label` is absent on non-sensitive
// words and on raw recognizer output.
struct TimedWord {
    std::string text; // single token, non-empty, no whitespace
    TimeInterval interval;
    std::optional<PhiLabel> label;
    std::string speaker;

    TimedWord(std::string text, TimeInterval interval,
              std::optional<PhiLabel> label = std::nullopt, std::string speaker = "");

    bool is_phi() const { return label.has_value(); }
};

struct Turn {
    std::string speaker;
    std::vector<TimedWord> words;
};

// A conversation: ordered turns of words.  Words of one speaker never overlap
// and appear in time order; different speakers may talk over each other.
class Transcript {
public:
    Transcript() = default;
    // Validates the invariants and stamps each word with its turn's speaker.
    Transcript(std::string conversation_id, std::vector<Turn> turns);

    const std::string& conversation_id() const { return conversation_id_; }
    const std::vector<Turn>& turns() const { return turns_; }

    // All words in turn order (the word sequence everything else indexes into).
    std::vector<TimedWord> flatten() const;
    std::vector<std::string> tokens() const;
    size_t word_count() const;

private:
    std::string conversation_id_;
    std::vector<Turn> turns_;
};

// The set of time ranges to silence.  Canonical form: sorted, pairwise
// disjoint, and non-adjacent (touching ranges have been merged), so two plans
// that silence the same instants compare equal.  Only plan_normalize builds
// non-empty plans.
class RedactionPlan {
public:
    RedactionPlan() = default; // silences nothing

    const std::vector<TimeInterval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    // True when instant t_ms is silenced.
    bool redacts(int64_t t_ms) const;
    int64_t total_ms() const;

    bool operator==(const RedactionPlan&) const = default;

private:
    friend RedactionPlan plan_normalize(std::vector<TimeInterval> raw);
    std::vector<TimeInterval> intervals_;
};

// Sorts, merges overlaps and touching neighbours.  Idempotent; the result
// silences exactly the union of the raw intervals.
RedactionPlan plan_normalize(std::vector<TimeInterval> raw);

// Milliseconds of `iv` that the plan silences.
int64_t plan_intersection_ms(const RedactionPlan& plan, const TimeInterval& iv);
// True when every instant silenced by `inner` is silenced by `outer` too.
bool plan_covers(const RedactionPlan& outer, const RedactionPlan& inner);

// One recognizer guess for the whole conversation.  Ranks start at 1;
// confidence never increases with rank.  Words carry no labels when they come
// off the wire.
struct Hypothesis {
    int rank = 1;
    double confidence = 0.0;
    std::vector<TimedWord> words;
};

// ASCII-only case folding; bytes outside A-Z pass through, so UTF-8 content
// compares byte-wise.
std::string ascii_lower(std::string_view s);
bool tokens_equal_fold(std::string_view a, std::string_view b);

} // namespace deid
