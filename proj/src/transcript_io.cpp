#include "deid/transcript_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace deid {

using nlohmann::json;

namespace {

// wrong type / missing field -> ParseError carrying the field path
const json& expect(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (j.is_object() && it != j.end()) return *it;
    throw ParseError(path + ": missing field \"" + key + "\"");
}

int64_t expect_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw ParseError(path + ": expected an integer, got " + std::string(j.type_name()));
    return j.get<int64_t>();
}

std::string expect_str(const json& j, const std::string& path) {
    if (!j.is_string())
        throw ParseError(path + ": expected a string, got " + std::string(j.type_name()));
    return j.get<std::string>();
}

const json& expect_array(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ParseError(path + ": expected an array, got " + std::string(j.type_name()));
    return j;
}

TimeInterval parse_interval(const json& j, const std::string& path) {
    int64_t start = expect_int(expect(j, "start_ms", path), path + ".start_ms");
    int64_t end = expect_int(expect(j, "end_ms", path), path + ".end_ms");
    if (start < 0)
        throw InvariantViolation(path + ": start_ms must be >= 0, got " + std::to_string(start));
    if (start >= end)
        throw InvariantViolation(path + ": need start_ms < end_ms, got [" +
                                 std::to_string(start) + ", " + std::to_string(end) + ")");
    return TimeInterval(start, end);
}

TimedWord parse_word(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    std::string text = expect_str(expect(j, "text", path), path + ".text");
    TimeInterval iv = parse_interval(j, path);
    std::optional<PhiLabel> label;
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
        std::string name = expect_str(*it, path + ".label");
        label = phi_label_from_string(name);
        if (!label) throw ParseError(path + ".label: unknown label \"" + name + "\"");
    }
    try {
        return TimedWord(std::move(text), iv, label);
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(path + ": " + e.what());
    }
}

json parse_document(const std::string& document) {
    try {
        return json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

} // namespace

Transcript parse_transcript(const std::string& document) {
    json j = parse_document(document);
    if (!j.is_object()) throw ParseError("top level: expected an object");
    std::string id = expect_str(expect(j, "conversation_id", "top level"), "conversation_id");
    const json& jturns = expect_array(expect(j, "turns", "top level"), "turns");

    std::vector<Turn> turns;
    for (size_t ti = 0; ti < jturns.size(); ++ti) {
        std::string tpath = "turns[" + std::to_string(ti) + "]";
        const json& jt = jturns[ti];
        if (!jt.is_object()) throw ParseError(tpath + ": expected an object");
        Turn turn;
        turn.speaker = expect_str(expect(jt, "speaker", tpath), tpath + ".speaker");
        const json& jwords = expect_array(expect(jt, "words", tpath), tpath + ".words");
        for (size_t wi = 0; wi < jwords.size(); ++wi)
            turn.words.push_back(parse_word(jwords[wi], tpath + ".words[" + std::to_string(wi) + "]"));
        turns.push_back(std::move(turn));
    }
    return Transcript(std::move(id), std::move(turns));
}

Transcript parse_transcript_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open transcript file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_transcript(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(path.string() + ": " + e.what());
    }
}

json transcript_to_json(const Transcript& t) {
    json jturns = json::array();
    for (const auto& turn : t.turns()) {
        json jwords = json::array();
        for (const auto& w : turn.words) {
            json jw = {{"text", w.text},
                       {"start_ms", w.interval.start_ms},
                       {"end_ms", w.interval.end_ms}};
            if (w.label) jw["label"] = to_string(*w.label);
            jwords.push_back(std::move(jw));
        }
        jturns.push_back(json{{"speaker", turn.speaker}, {"words", std::move(jwords)}});
    }
    return json{{"conversation_id", t.conversation_id()}, {"turns", std::move(jturns)}};
}

std::string serialize_transcript(const Transcript& t) {
    return transcript_to_json(t).dump(2) + "\n";
}

void write_transcript_file(const std::filesystem::path& path, const Transcript& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DeidError("cannot write transcript file: " + path.string());
    out << serialize_transcript(t);
}

RedactionPlan parse_plan(const std::string& document) {
    json j = parse_document(document);
    if (!j.is_array()) throw ParseError("plan: expected a JSON array");
    std::vector<TimeInterval> raw;
    for (size_t i = 0; i < j.size(); ++i) {
        std::string path = "plan[" + std::to_string(i) + "]";
        if (!j[i].is_object()) throw ParseError(path + ": expected an object");
        int64_t start = expect_int(expect(j[i], "start_ms", path), path + ".start_ms");
        int64_t end = expect_int(expect(j[i], "end_ms", path), path + ".end_ms");
        if (start < 0 || start >= end)
            throw InvalidInterval(path + ": invalid interval [" + std::to_string(start) + ", " +
                                  std::to_string(end) + ")");
        raw.emplace_back(start, end);
    }
    return plan_normalize(std::move(raw));
}

RedactionPlan parse_plan_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open plan file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_plan(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const InvalidInterval& e) {
        throw InvalidInterval(path.string() + ": " + e.what());
    }
}

std::string serialize_plan(const RedactionPlan& plan) {
    json j = json::array();
    for (const auto& iv : plan.intervals())
        j.push_back(json{{"start_ms", iv.start_ms}, {"end_ms", iv.end_ms}});
    return j.dump(2) + "\n";
}

void write_plan_file(const std::filesystem::path& path, const RedactionPlan& plan) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DeidError("cannot write plan file: " + path.string());
    out << serialize_plan(plan);
}

} // namespace deid
