#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "deid/augment.hpp"
#include "deid/transcript_io.hpp"
#include "oracles.hpp"

using namespace deid;

namespace {

Transcript fixture_a() { return parse_transcript_file(oracle::fixture("conv_a.json")); }

Transcript turn_ladder(int n) {
    std::vector<Turn> turns;
    for (int i = 0; i < n; ++i) {
        Turn turn;
        turn.speaker = (i % 2 == 0) ? "a" : "b";
        turn.words.push_back(
            TimedWord("w" + std::to_string(i), TimeInterval(i * 100, i * 100 + 50)));
        turns.push_back(std::move(turn));
    }
    return Transcript("conv", std::move(turns));
}

} // namespace

TEST_CASE("apply_case on single tokens") {
    CHECK(apply_case("John SMITH", CaseVariant::Lower) == "john smith");
    CHECK(apply_case("john smith", CaseVariant::Upper) == "JOHN SMITH");
    CHECK(apply_case("john", CaseVariant::Camel) == "John");
    CHECK(apply_case("jOHN", CaseVariant::Camel) == "John");
    CHECK(apply_case("", CaseVariant::Camel) == "");
    // non-letters pass through untouched
    CHECK(apply_case("42nd-st.", CaseVariant::Upper) == "42ND-ST.");
    CHECK(apply_case("4ab", CaseVariant::Camel) == "4ab");
}

TEST_CASE("case variant preserves everything but token text") {
    Transcript t = fixture_a();
    Transcript upper = case_variant(t, CaseVariant::Upper);

    CHECK(upper.conversation_id() == t.conversation_id());
    REQUIRE(upper.turns().size() == t.turns().size());
    for (size_t ti = 0; ti < t.turns().size(); ++ti) {
        CHECK(upper.turns()[ti].speaker == t.turns()[ti].speaker);
        REQUIRE(upper.turns()[ti].words.size() == t.turns()[ti].words.size());
        for (size_t wi = 0; wi < t.turns()[ti].words.size(); ++wi) {
            const auto& a = t.turns()[ti].words[wi];
            const auto& b = upper.turns()[ti].words[wi];
            CHECK(b.text == apply_case(a.text, CaseVariant::Upper));
            CHECK(b.interval == a.interval);
            CHECK(b.label == a.label);
            CHECK(b.speaker == a.speaker);
        }
    }

    // already-lowercase fixture: lower is the identity
    CHECK(serialize_transcript(case_variant(t, CaseVariant::Lower)) == serialize_transcript(t));

    // camel is insensitive to the starting case
    auto camel_of_upper = case_variant(upper, CaseVariant::Camel);
    auto camel_of_lower = case_variant(case_variant(t, CaseVariant::Lower), CaseVariant::Camel);
    CHECK(serialize_transcript(camel_of_upper) == serialize_transcript(camel_of_lower));
}

TEST_CASE("case_variants emits one transcript per requested variant") {
    Transcript t = fixture_a();
    auto out = case_variants(t, {CaseVariant::Lower, CaseVariant::Upper, CaseVariant::Camel});
    REQUIRE(out.size() == 3);
    CHECK(out[0].turns()[0].words[0].text == "hello");
    CHECK(out[1].turns()[0].words[0].text == "HELLO");
    CHECK(out[2].turns()[0].words[0].text == "Hello");
    CHECK(case_variants(t, {}).empty());
}

TEST_CASE("asr transfer with a perfect recognizer is the identity") {
    Transcript t = fixture_a();
    AsrTransferResult r = asr_transfer_variant(t, t.flatten());
    CHECK(r.dropped.empty());
    CHECK(serialize_transcript(r.transcript) == serialize_transcript(t));
}

TEST_CASE("asr transfer keeps labels on substituted words") {
    Transcript t = fixture_a();
    auto words = t.flatten();
    REQUIRE(words[3].text == "john");
    // recognizer output: same words, one mangled, no labels anywhere
    for (auto& w : words) w.label.reset();
    words[3].text = "jon";

    AsrTransferResult r = asr_transfer_variant(t, words);
    CHECK(r.dropped.empty());
    auto out = r.transcript.flatten();
    REQUIRE(out.size() == words.size());
    CHECK(out[3].text == "jon");
    REQUIRE(out[3].label.has_value());
    CHECK(*out[3].label == PhiLabel::Name);
    // labels land even on exact matches
    CHECK(out[16].label == PhiLabel::Date);
    CHECK(out[22].label == PhiLabel::City);
    // non-sensitive words stay unlabeled
    CHECK_FALSE(out[0].label.has_value());
}

TEST_CASE("asr transfer records labels the recognizer dropped") {
    Transcript t = fixture_a();
    auto words = t.flatten();
    // drop "john" (index 3, Name) and an unlabeled word (index 0)
    std::vector<TimedWord> kept;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i == 0 || i == 3) continue;
        auto w = words[i];
        w.label.reset();
        kept.push_back(w);
    }

    AsrTransferResult r = asr_transfer_variant(t, kept);
    REQUIRE(r.dropped.size() == 1);
    CHECK(r.dropped[0].ref_idx == 3);
    CHECK(r.dropped[0].label == PhiLabel::Name);

    auto out = r.transcript.flatten();
    REQUIRE(out.size() == kept.size());
    CHECK(out[2].text == "smith"); // shifted left by the two dropped words
    CHECK(out[2].label == PhiLabel::Name);
}

TEST_CASE("asr transfer rebuilds turns from speaker runs") {
    Transcript t = fixture_a();
    AsrTransferResult r = asr_transfer_variant(t, t.flatten());
    REQUIRE(r.transcript.turns().size() == 4);
    CHECK(r.transcript.turns()[0].speaker == "agent");
    CHECK(r.transcript.turns()[1].speaker == "caller");
    CHECK(r.transcript.turns()[2].speaker == "agent");
    CHECK(r.transcript.turns()[3].speaker == "caller");
}

TEST_CASE("segment_turns windows") {
    SUBCASE("25 turns, window 20, step 10") {
        auto segs = segment_turns(turn_ladder(25), 20, 10);
        REQUIRE(segs.size() == 2);
        CHECK(segs[0].turns().size() == 20);
        CHECK(segs[0].turns()[0].words[0].text == "w0");
        CHECK(segs[0].conversation_id() == "conv.turns0-20");
        CHECK(segs[1].turns().size() == 15);
        CHECK(segs[1].turns()[0].words[0].text == "w10");
        CHECK(segs[1].conversation_id() == "conv.turns10-25");
    }

    SUBCASE("45 turns needs four segments") {
        auto segs = segment_turns(turn_ladder(45), 20, 10);
        REQUIRE(segs.size() == 4);
        CHECK(segs[3].turns()[0].words[0].text == "w30");
        CHECK(segs[3].turns().size() == 15);
        CHECK(segs[3].conversation_id() == "conv.turns30-45");
    }

    SUBCASE("short transcript comes back whole") {
        auto segs = segment_turns(turn_ladder(5), 20, 10);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].conversation_id() == "conv");
        CHECK(segs[0].turns().size() == 5);
    }

    SUBCASE("window-sized transcript is also whole") {
        auto segs = segment_turns(turn_ladder(20), 20, 10);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].conversation_id() == "conv");
    }

    SUBCASE("bad parameters") {
        CHECK_THROWS_AS(segment_turns(turn_ladder(5), 0, 1), DeidError);
        CHECK_THROWS_AS(segment_turns(turn_ladder(5), 10, 0), DeidError);
        CHECK_THROWS_AS(segment_turns(turn_ladder(5), 10, -2), DeidError);
        CHECK_THROWS_AS(segment_turns(turn_ladder(5), 10, 11), DeidError); // step > window skips turns
    }
}

TEST_CASE("segmentation covers every turn at least once") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + int(rng() % 60);
        int window = 1 + int(rng() % 25);
        int step = 1 + int(rng() % window);
        Transcript t = turn_ladder(n);
        auto segs = segment_turns(t, window, step);
        std::vector<bool> seen(n, false);
        for (const auto& seg : segs) {
            CHECK(int(seg.turns().size()) <= window);
            for (const auto& turn : seg.turns()) {
                int idx = std::stoi(turn.words[0].text.substr(1));
                seen[idx] = true;
            }
        }
        for (int i = 0; i < n; ++i)
            CHECK(seen[i]);
        // segments keep the original turn order
        for (const auto& seg : segs)
            for (size_t i = 1; i < seg.turns().size(); ++i)
                CHECK(std::stoi(seg.turns()[i - 1].words[0].text.substr(1)) + 1 ==
                      std::stoi(seg.turns()[i].words[0].text.substr(1)));
    }
}
