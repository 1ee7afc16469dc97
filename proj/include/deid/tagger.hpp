#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deid/core.hpp"

namespace deid {

// A run of tokens predicted to carry one label kind; [start_word, end_word)
// indexes into the tagged token sequence.
struct TagSpan {
    int start_word;
    int end_word;
    PhiLabel kind;

    bool operator==(const TagSpan&) const = default;
};

class Tagger {
public:
    virtual ~Tagger() = default;
    // Spans come back sorted by start and pairwise non-overlapping.
    // Implementations wrap their own failures in TaggerFailure.
    virtual std::vector<TagSpan> tag(const std::vector<std::string>& tokens) const = 0;
};

struct TaggerConfig {
    std::vector<std::filesystem::path> gazetteer_files;
    std::vector<std::filesystem::path> pattern_files;
    bool case_sensitive = false;
};

struct GazetteerEntry {
    std::vector<std::string> phrase; // one or more tokens
    PhiLabel kind;
};

// Token classes a pattern rule can ask for.
struct PatternToken {
    enum class Class { Literal, NumWord, Digits, Month };
    Class cls;
    std::string literal; // only for Literal
};

struct PatternRule {
    std::vector<PatternToken> tokens;
    PhiLabel kind;
};

// Gazetteer file: one entry per line, "phrase<TAB>KIND"; the phrase may hold
// several space-separated tokens.  Pattern file: one rule per line,
// "CLASS CLASS ...<TAB>KIND" where CLASS is LITERAL:"token", NUMWORD, DIGITS
// or MONTH.  Blank lines and lines starting with # are skipped.  Any
// malformed line raises TaggerFailure with the file and line number.
std::vector<GazetteerEntry> load_gazetteer_file(const std::filesystem::path& path);
std::vector<PatternRule> load_pattern_file(const std::filesystem::path& path);
PatternRule parse_pattern_rule(const std::string& line);

// Dictionary-and-rules tagger.  Gazetteer phrases match leftmost-longest and
// win every conflict with pattern rules; pattern rules then match
// leftmost-longest over the unclaimed tokens.  Adjacent same-kind spans merge.
class BaselineTagger : public Tagger {
public:
    BaselineTagger(std::vector<GazetteerEntry> gazetteer, std::vector<PatternRule> patterns,
                   bool case_sensitive = false);
    static BaselineTagger from_config(const TaggerConfig& config);

    std::vector<TagSpan> tag(const std::vector<std::string>& tokens) const override;

private:
    std::string fold(const std::string& s) const;

    // phrases grouped by first token, longest first
    std::unordered_map<std::string, std::vector<GazetteerEntry>> by_first_token_;
    std::vector<PatternRule> patterns_;
    bool case_sensitive_;
};

bool is_number_word(const std::string& folded_token);
bool is_digits(const std::string& token);
bool is_month_name(const std::string& folded_token);

// Interval union of every detected span across the hypotheses (a word is
// silenced when any hypothesis flags it).  More hypotheses can only grow the
// result.
RedactionPlan merge_hypothesis_detections(
    const std::vector<std::pair<Hypothesis, std::vector<TagSpan>>>& tagged);

// Two-column CoNLL lines: "token<TAB>B-KIND" / "I-KIND" / "O".
std::string spans_to_bio(const std::vector<std::string>& tokens,
                         const std::vector<TagSpan>& spans);

} // namespace deid
