#include "deid/core.hpp"

#include <algorithm>
#include <map>

namespace deid {

TimeInterval::TimeInterval(int64_t start, int64_t end) : start_ms(start), end_ms(end) {
    if (start < 0 || start >= end)
        throw InvalidInterval("invalid interval [" + std::to_string(start) + ", " +
                              std::to_string(end) + "): need 0 <= start < end");
}

int64_t interval_intersection_len(const TimeInterval& a, const TimeInterval& b) {
    int64_t lo = std::max(a.start_ms, b.start_ms);
    int64_t hi = std::min(a.end_ms, b.end_ms);
    return hi > lo ? hi - lo : 0;
}

const std::vector<PhiLabel>& all_phi_labels() {
    static const std::vector<PhiLabel> kAll = {
        PhiLabel::Name,     PhiLabel::Age,       PhiLabel::Date,   PhiLabel::Organization,
        PhiLabel::LocationGeneral, PhiLabel::City, PhiLabel::State, PhiLabel::Country,
        PhiLabel::Profession, PhiLabel::Holiday,  PhiLabel::Season, PhiLabel::Hospital,
        PhiLabel::Pharmacy,
    };
    return kAll;
}

const std::vector<PhiLabel>& evaluation_labels() {
    static const std::vector<PhiLabel> kEval = {
        PhiLabel::Name, PhiLabel::Age,             PhiLabel::Date,
        PhiLabel::Organization, PhiLabel::LocationGeneral, PhiLabel::City,
    };
    return kEval;
}

std::string to_string(PhiLabel kind) {
    switch (kind) {
    case PhiLabel::Name: return "Name";
    case PhiLabel::Age: return "Age";
    case PhiLabel::Date: return "Date";
    case PhiLabel::Organization: return "Organization";
    case PhiLabel::LocationGeneral: return "LocationGeneral";
    case PhiLabel::City: return "City";
    case PhiLabel::State: return "State";
    case PhiLabel::Country: return "Country";
    case PhiLabel::Profession: return "Profession";
    case PhiLabel::Holiday: return "Holiday";
    case PhiLabel::Season: return "Season";
    case PhiLabel::Hospital: return "Hospital";
    case PhiLabel::Pharmacy: return "Pharmacy";
    }
    return "?";
}

std::optional<PhiLabel> phi_label_from_string(std::string_view name) {
    for (PhiLabel k : all_phi_labels())
        if (to_string(k) == name) return k;
    return std::nullopt;
}

static bool has_whitespace(std::string_view s) {
    for (unsigned char c : s)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return true;
    return false;
}

TimedWord::TimedWord(std::string text_in, TimeInterval interval_in,
                     std::optional<PhiLabel> label_in, std::string speaker_in)
    : text(std::move(text_in)), interval(interval_in), label(label_in),
      speaker(std::move(speaker_in)) {
    if (text.empty()) throw InvariantViolation("word text must be non-empty");
    if (has_whitespace(text))
        throw InvariantViolation("word text must not contain whitespace: \"" + text + "\"");
}

Transcript::Transcript(std::string conversation_id, std::vector<Turn> turns)
    : conversation_id_(std::move(conversation_id)), turns_(std::move(turns)) {
    for (auto& turn : turns_)
        for (auto& w : turn.words) w.speaker = turn.speaker;

    // per speaker, words must be in time order and must not overlap
    std::map<std::string, const TimedWord*> last_by_speaker;
    for (const auto& turn : turns_) {
        for (const auto& w : turn.words) {
            auto [it, fresh] = last_by_speaker.try_emplace(turn.speaker, &w);
            if (!fresh) {
                const TimedWord* prev = it->second;
                if (prev->interval.end_ms > w.interval.start_ms)
                    throw InvariantViolation(
                        "speaker \"" + turn.speaker + "\": word [" +
                        std::to_string(w.interval.start_ms) + ", " +
                        std::to_string(w.interval.end_ms) +
                        ") overlaps or precedes the previous word of that speaker");
                it->second = &w;
            }
        }
    }
}

std::vector<TimedWord> Transcript::flatten() const {
    std::vector<TimedWord> out;
    for (const auto& turn : turns_) out.insert(out.end(), turn.words.begin(), turn.words.end());
    return out;
}

std::vector<std::string> Transcript::tokens() const {
    std::vector<std::string> out;
    for (const auto& turn : turns_)
        for (const auto& w : turn.words) out.push_back(w.text);
    return out;
}

size_t Transcript::word_count() const {
    size_t n = 0;
    for (const auto& turn : turns_) n += turn.words.size();
    return n;
}

bool RedactionPlan::redacts(int64_t t_ms) const {
    // first interval with end > t is the only one that can contain t
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t_ms,
                               [](int64_t t, const TimeInterval& iv) { return t < iv.end_ms; });
    return it != intervals_.end() && it->contains(t_ms);
}

int64_t RedactionPlan::total_ms() const {
    int64_t sum = 0;
    for (const auto& iv : intervals_) sum += iv.length_ms();
    return sum;
}

RedactionPlan plan_normalize(std::vector<TimeInterval> raw) {
    std::sort(raw.begin(), raw.end(), [](const TimeInterval& a, const TimeInterval& b) {
        return a.start_ms != b.start_ms ? a.start_ms < b.start_ms : a.end_ms < b.end_ms;
    });
    RedactionPlan plan;
    for (const auto& iv : raw) {
        if (!plan.intervals_.empty() && iv.start_ms <= plan.intervals_.back().end_ms) {
            // overlapping or touching: extend the last run
            plan.intervals_.back().end_ms = std::max(plan.intervals_.back().end_ms, iv.end_ms);
        } else {
            plan.intervals_.push_back(iv);
        }
    }
    return plan;
}

int64_t plan_intersection_ms(const RedactionPlan& plan, const TimeInterval& iv) {
    const auto& ivs = plan.intervals();
    // first plan interval ending after iv starts
    auto it = std::upper_bound(ivs.begin(), ivs.end(), iv.start_ms,
                               [](int64_t t, const TimeInterval& p) { return t < p.end_ms; });
    int64_t sum = 0;
    for (; it != ivs.end() && it->start_ms < iv.end_ms; ++it)
        sum += interval_intersection_len(*it, iv);
    return sum;
}

bool plan_covers(const RedactionPlan& outer, const RedactionPlan& inner) {
    for (const auto& iv : inner.intervals())
        if (plan_intersection_ms(outer, iv) != iv.length_ms()) return false;
    return true;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool tokens_equal_fold(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        char ca = a[i], cb = b[i];
        if (ca >= 'A' && ca <= 'Z') ca = static_cast<char>(ca - 'A' + 'a');
        if (cb >= 'A' && cb <= 'Z') cb = static_cast<char>(cb - 'A' + 'a');
        if (ca != cb) return false;
    }
    return true;
}

} // namespace deid
