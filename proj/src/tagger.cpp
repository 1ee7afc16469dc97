#include "deid/tagger.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace deid {

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

PhiLabel parse_kind(const std::string& name, const std::filesystem::path& file, size_t lineno) {
    auto kind = phi_label_from_string(name);
    if (!kind)
        throw TaggerFailure(file.string() + ":" + std::to_string(lineno) + ": unknown label \"" +
                            name + "\"");
    return *kind;
}

// "phrase<TAB>KIND" -> (phrase, KIND); returns false for blank/comment lines
bool split_entry_line(const std::string& line, std::string& left, std::string& right) {
    if (line.empty() || line[0] == '#') return false;
    auto tab = line.find('\t');
    if (tab == std::string::npos) return true; // caller reports the error
    left = line.substr(0, tab);
    right = line.substr(tab + 1);
    while (!right.empty() && (right.back() == '\r' || right.back() == ' ')) right.pop_back();
    return true;
}

} // namespace

std::vector<GazetteerEntry> load_gazetteer_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TaggerFailure("cannot open gazetteer file: " + path.string());

    std::vector<GazetteerEntry> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string phrase, kind_name;
        if (!split_entry_line(line, phrase, kind_name)) continue;
        if (kind_name.empty())
            throw TaggerFailure(path.string() + ":" + std::to_string(lineno) +
                                ": expected \"phrase<TAB>KIND\"");
        GazetteerEntry e;
        e.phrase = split_tokens(phrase);
        if (e.phrase.empty())
            throw TaggerFailure(path.string() + ":" + std::to_string(lineno) + ": empty phrase");
        e.kind = parse_kind(kind_name, path, lineno);
        out.push_back(std::move(e));
    }
    return out;
}

PatternRule parse_pattern_rule(const std::string& line) {
    auto tab = line.find('\t');
    if (tab == std::string::npos)
        throw TaggerFailure("pattern rule needs \"CLASSES<TAB>KIND\": " + line);
    std::string kind_name = line.substr(tab + 1);
    while (!kind_name.empty() && (kind_name.back() == '\r' || kind_name.back() == ' '))
        kind_name.pop_back();
    auto kind = phi_label_from_string(kind_name);
    if (!kind) throw TaggerFailure("unknown label \"" + kind_name + "\" in pattern rule");

    PatternRule rule;
    rule.kind = *kind;
    for (const std::string& cls : split_tokens(line.substr(0, tab))) {
        PatternToken t;
        if (cls == "NUMWORD") {
            t.cls = PatternToken::Class::NumWord;
        } else if (cls == "DIGITS") {
            t.cls = PatternToken::Class::Digits;
        } else if (cls == "MONTH") {
            t.cls = PatternToken::Class::Month;
        } else if (cls.rfind("LITERAL:\"", 0) == 0 && cls.size() > 10 && cls.back() == '"') {
            t.cls = PatternToken::Class::Literal;
            t.literal = cls.substr(9, cls.size() - 10);
        } else {
            throw TaggerFailure("malformed token class \"" + cls + "\" in pattern rule");
        }
        rule.tokens.push_back(std::move(t));
    }
    if (rule.tokens.empty()) throw TaggerFailure("pattern rule has no token classes: " + line);
    return rule;
}

std::vector<PatternRule> load_pattern_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TaggerFailure("cannot open pattern file: " + path.string());

    std::vector<PatternRule> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(parse_pattern_rule(line));
        } catch (const TaggerFailure& e) {
            throw TaggerFailure(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

bool is_number_word(const std::string& folded_token) {
    static const std::array<const char*, 32> kWords = {
        "zero",    "one",      "two",      "three",    "four",     "five",    "six",
        "seven",   "eight",    "nine",     "ten",      "eleven",   "twelve",  "thirteen",
        "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",
        "thirty",  "forty",    "fifty",    "sixty",    "seventy",  "eighty",  "ninety",
        "hundred", "thousand", "million",  "billion",
    };
    return std::find_if(kWords.begin(), kWords.end(),
                        [&](const char* w) { return folded_token == w; }) != kWords.end();
}

bool is_digits(const std::string& token) {
    if (token.empty()) return false;
    for (unsigned char c : token)
        if (c < '0' || c > '9') return false;
    return true;
}

bool is_month_name(const std::string& folded_token) {
    static const std::array<const char*, 12> kMonths = {
        "january", "february", "march",     "april",   "may",      "june",
        "july",    "august",   "september", "october", "november", "december",
    };
    return std::find_if(kMonths.begin(), kMonths.end(), [&](const char* m) {
               return folded_token == m;
           }) != kMonths.end();
}

BaselineTagger::BaselineTagger(std::vector<GazetteerEntry> gazetteer,
                               std::vector<PatternRule> patterns, bool case_sensitive)
    : patterns_(std::move(patterns)), case_sensitive_(case_sensitive) {
    for (auto& e : gazetteer) {
        if (!case_sensitive_)
            for (auto& tok : e.phrase) tok = ascii_lower(tok);
        by_first_token_[e.phrase[0]].push_back(std::move(e));
    }
    for (auto& [first, entries] : by_first_token_)
        std::stable_sort(entries.begin(), entries.end(),
                         [](const GazetteerEntry& a, const GazetteerEntry& b) {
                             return a.phrase.size() > b.phrase.size();
                         });
    if (!case_sensitive_)
        for (auto& rule : patterns_)
            for (auto& t : rule.tokens)
                if (t.cls == PatternToken::Class::Literal) t.literal = ascii_lower(t.literal);
}

BaselineTagger BaselineTagger::from_config(const TaggerConfig& config) {
    std::vector<GazetteerEntry> gazetteer;
    for (const auto& path : config.gazetteer_files) {
        auto entries = load_gazetteer_file(path);
        gazetteer.insert(gazetteer.end(), entries.begin(), entries.end());
    }
    std::vector<PatternRule> patterns;
    for (const auto& path : config.pattern_files) {
        auto rules = load_pattern_file(path);
        patterns.insert(patterns.end(), rules.begin(), rules.end());
    }
    return BaselineTagger(std::move(gazetteer), std::move(patterns), config.case_sensitive);
}

std::string BaselineTagger::fold(const std::string& s) const {
    return case_sensitive_ ? s : ascii_lower(s);
}

std::vector<TagSpan> BaselineTagger::tag(const std::vector<std::string>& tokens) const {
    const int n = static_cast<int>(tokens.size());
    std::vector<std::string> folded(n);
    for (int i = 0; i < n; ++i) folded[i] = fold(tokens[i]);

    std::vector<bool> claimed(n, false);
    std::vector<TagSpan> spans;

    // gazetteer pass, leftmost-longest
    for (int i = 0; i < n;) {
        const GazetteerEntry* best = nullptr;
        if (auto it = by_first_token_.find(folded[i]); it != by_first_token_.end()) {
            for (const auto& e : it->second) { // longest first
                int len = static_cast<int>(e.phrase.size());
                if (i + len > n) continue;
                bool ok = true;
                for (int k = 1; k < len && ok; ++k) ok = folded[i + k] == e.phrase[k];
                if (ok) {
                    best = &e;
                    break;
                }
            }
        }
        if (best) {
            int len = static_cast<int>(best->phrase.size());
            spans.push_back({i, i + len, best->kind});
            std::fill(claimed.begin() + i, claimed.begin() + i + len, true);
            i += len;
        } else {
            ++i;
        }
    }

    // pattern pass over what the gazetteer left, leftmost-longest
    // (ties go to the rule that appears first)
    auto class_matches = [&](const PatternToken& t, int idx) {
        switch (t.cls) {
        case PatternToken::Class::Literal: return folded[idx] == t.literal;
        case PatternToken::Class::NumWord: return is_number_word(ascii_lower(tokens[idx]));
        case PatternToken::Class::Digits: return is_digits(tokens[idx]);
        case PatternToken::Class::Month: return is_month_name(ascii_lower(tokens[idx]));
        }
        return false;
    };
    for (int i = 0; i < n;) {
        if (claimed[i]) {
            ++i;
            continue;
        }
        const PatternRule* best = nullptr;
        for (const auto& rule : patterns_) {
            int len = static_cast<int>(rule.tokens.size());
            if (i + len > n) continue;
            if (best && len <= static_cast<int>(best->tokens.size())) continue;
            bool ok = true;
            for (int k = 0; k < len && ok; ++k)
                ok = !claimed[i + k] && class_matches(rule.tokens[k], i + k);
            if (ok) best = &rule;
        }
        if (best) {
            int len = static_cast<int>(best->tokens.size());
            spans.push_back({i, i + len, best->kind});
            std::fill(claimed.begin() + i, claimed.begin() + i + len, true);
            i += len;
        } else {
            ++i;
        }
    }

    std::sort(spans.begin(), spans.end(), [](const TagSpan& a, const TagSpan& b) {
        return a.start_word < b.start_word;
    });

    // adjacent same-kind spans become one
    std::vector<TagSpan> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && merged.back().end_word == s.start_word &&
            merged.back().kind == s.kind)
            merged.back().end_word = s.end_word;
        else
            merged.push_back(s);
    }
    return merged;
}

RedactionPlan merge_hypothesis_detections(
    const std::vector<std::pair<Hypothesis, std::vector<TagSpan>>>& tagged) {
    std::vector<TimeInterval> raw;
    for (const auto& [hyp, spans] : tagged) {
        for (const auto& s : spans) {
            if (s.start_word < 0 || s.start_word >= s.end_word ||
                s.end_word > static_cast<int>(hyp.words.size()))
                throw InvariantViolation("tag span [" + std::to_string(s.start_word) + ", " +
                                         std::to_string(s.end_word) +
                                         ") does not fit a hypothesis of " +
                                         std::to_string(hyp.words.size()) + " words");
            for (int i = s.start_word; i < s.end_word; ++i)
                raw.push_back(hyp.words[i].interval);
        }
    }
    return plan_normalize(std::move(raw));
}

std::string spans_to_bio(const std::vector<std::string>& tokens,
                         const std::vector<TagSpan>& spans) {
    const int n = static_cast<int>(tokens.size());
    std::vector<std::string> tags(n, "O");
    for (const auto& s : spans) {
        if (s.start_word < 0 || s.start_word >= s.end_word || s.end_word > n)
            throw InvariantViolation("tag span does not fit the token sequence");
        tags[s.start_word] = "B-" + to_string(s.kind);
        for (int i = s.start_word + 1; i < s.end_word; ++i) tags[i] = "I-" + to_string(s.kind);
    }
    std::string out;
    for (int i = 0; i < n; ++i) {
        out += tokens[i];
        out += '\t';
        out += tags[i];
        out += '\n';
    }
    return out;
}

} // namespace deid
