#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "deid/redaction.hpp"
#include "oracles.hpp"

using namespace deid;

namespace {

RedactionPlan plan_of(std::vector<TimeInterval> raw) { return plan_normalize(std::move(raw)); }

AudioBuffer tone(int sample_rate, int channels, int64_t frames) {
    AudioBuffer a;
    a.sample_rate = sample_rate;
    a.channels = channels;
    a.samples.resize(static_cast<size_t>(frames) * channels);
    for (size_t i = 0; i < a.samples.size(); ++i)
        a.samples[i] = static_cast<int16_t>((i * 2654435761u) % 65536u - 32768);
    return a;
}

} // namespace

TEST_CASE("pad_plan widens and renormalizes") {
    CHECK(pad_plan(plan_of({{1000, 2000}}), 60) == plan_of({{940, 2060}}));
    CHECK(pad_plan(plan_of({{1000, 2000}}), 0) == plan_of({{1000, 2000}}));

    // padding can merge neighbours
    CHECK(pad_plan(plan_of({{100, 200}, {250, 300}}), 30) == plan_of({{70, 330}}));

    // never goes below zero
    CHECK(pad_plan(plan_of({{10, 100}}), 50) == plan_of({{0, 150}}));

    CHECK(pad_plan(RedactionPlan{}, 500).empty());
    CHECK_THROWS_AS(pad_plan(plan_of({{10, 100}}), -1), DeidError);
}

TEST_CASE("pad_plan is monotone in the pad") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto raw = oracle::random_intervals(rng, 6, 5000);
        RedactionPlan base = plan_normalize(raw);
        RedactionPlan p1 = pad_plan(base, 40);
        RedactionPlan p2 = pad_plan(base, 90);
        CHECK(plan_covers(p1, base));
        CHECK(plan_covers(p2, p1));
        // padding twice is padding once with the sum
        CHECK(pad_plan(p1, 50) == p2);
    }
}

TEST_CASE("plan_from_tagged_words keeps only labeled words") {
    std::vector<TimedWord> words = {
        TimedWord("hello", TimeInterval(0, 300)),
        TimedWord("john", TimeInterval(300, 600), PhiLabel::Name),
        TimedWord("smith", TimeInterval(600, 900), PhiLabel::Name),
        TimedWord("bye", TimeInterval(1000, 1200)),
    };
    // adjacent labeled words fuse into one range
    CHECK(plan_from_tagged_words(words) == plan_of({{300, 900}}));
    CHECK(plan_from_tagged_words(words, 50) == plan_of({{250, 950}}));
    CHECK(plan_from_tagged_words({}).empty());
    CHECK(plan_from_tagged_words({TimedWord("x", TimeInterval(0, 10))}).empty());
}

TEST_CASE("building padded equals padding the built plan") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        auto words = oracle::random_transcript(rng, 40, 20000).flatten();
        for (int64_t pad : {0, 25, 130})
            CHECK(plan_from_tagged_words(words, pad) ==
                  pad_plan(plan_from_tagged_words(words, 0), pad));
    }
}

TEST_CASE("redact_audio zeroes exactly the planned span") {
    AudioBuffer a = tone(8000, 1, 16000); // two seconds
    AudioBuffer out = redact_audio(a, plan_of({{0, 1000}}));

    REQUIRE(out.samples.size() == a.samples.size());
    CHECK(out.sample_rate == a.sample_rate);
    CHECK(out.channels == a.channels);
    for (int64_t f = 0; f < 8000; ++f)
        REQUIRE(out.samples[f] == 0);
    for (int64_t f = 8000; f < 16000; ++f)
        REQUIRE(out.samples[f] == a.samples[f]);
}

TEST_CASE("redact_audio frame boundary is the ceiling of start") {
    // at 44100 Hz, ms 500 begins at frame ceil(500*44.1) = 22050
    AudioBuffer a = tone(44100, 1, 44100);
    AudioBuffer out = redact_audio(a, plan_of({{500, 600}}));
    CHECK(out.samples[22049] == a.samples[22049]);
    CHECK(out.samples[22050] == 0);
    // ms 600 starts at frame 26460, which stays audible
    CHECK(out.samples[26459] == 0);
    CHECK(out.samples[26460] == a.samples[26460]);
}

TEST_CASE("redact_audio with empty and full plans") {
    AudioBuffer a = tone(16000, 1, 4000);
    AudioBuffer untouched = redact_audio(a, RedactionPlan{});
    CHECK(untouched.samples == a.samples);

    AudioBuffer silenced = redact_audio(a, plan_of({{0, 250}}));
    for (int16_t s : silenced.samples)
        REQUIRE(s == 0);

    // plans may extend past the end of the audio
    AudioBuffer over = redact_audio(a, plan_of({{0, 99999}}));
    for (int16_t s : over.samples)
        REQUIRE(s == 0);
}

TEST_CASE("redact_audio silences both channels of a frame") {
    AudioBuffer a = tone(8000, 2, 1000);
    AudioBuffer out = redact_audio(a, plan_of({{0, 50}})); // frames 0..399
    for (int64_t f = 0; f < 400; ++f) {
        REQUIRE(out.samples[f * 2] == 0);
        REQUIRE(out.samples[f * 2 + 1] == 0);
    }
    CHECK(out.samples[400 * 2] == a.samples[400 * 2]);
    CHECK(out.samples[400 * 2 + 1] == a.samples[400 * 2 + 1]);
}

TEST_CASE("redact_audio rejects formats it cannot handle") {
    AudioBuffer odd_rate = tone(22050, 1, 100);
    CHECK_THROWS_AS(redact_audio(odd_rate, RedactionPlan{}), UnsupportedFormat);

    AudioBuffer too_many = tone(8000, 2, 100);
    too_many.channels = 3;
    too_many.samples.resize(300);
    CHECK_THROWS_AS(redact_audio(too_many, RedactionPlan{}), UnsupportedFormat);

    AudioBuffer ragged = tone(8000, 2, 100);
    ragged.samples.pop_back();
    CHECK_THROWS_AS(redact_audio(ragged, RedactionPlan{}), UnsupportedFormat);
}

TEST_CASE("wav round trip") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        AudioBuffer a;
        a.sample_rate = (trial % 2 == 0) ? 16000 : 8000;
        a.channels = 1 + trial % 2;
        int64_t frames = 1 + rng() % 3000;
        a.samples.resize(static_cast<size_t>(frames) * a.channels);
        for (auto& s : a.samples) s = static_cast<int16_t>(rng());

        std::ostringstream out;
        write_wav(out, a);
        std::string bytes = out.str();
        CHECK(bytes.size() == 44 + a.samples.size() * 2);

        std::istringstream in(bytes);
        AudioBuffer back = read_wav(in);
        CHECK(back.sample_rate == a.sample_rate);
        CHECK(back.channels == a.channels);
        CHECK(back.samples == a.samples);

        std::ostringstream again;
        write_wav(again, back);
        CHECK(again.str() == bytes);
    }
}

TEST_CASE("wav reader skips unknown chunks") {
    AudioBuffer a = tone(8000, 1, 4);
    std::ostringstream out;
    write_wav(out, a);
    std::string bytes = out.str();

    // splice a LIST chunk with an odd size (so the pad byte path runs)
    // between fmt and data
    std::string extra("LIST\x05\x00\x00\x00hello\x00", 14);
    std::string spliced = bytes.substr(0, 36) + extra + bytes.substr(36);
    // patch the RIFF size
    uint32_t riff = static_cast<uint32_t>(spliced.size() - 8);
    for (int i = 0; i < 4; ++i) spliced[4 + i] = static_cast<char>(riff >> (8 * i));

    std::istringstream in(spliced);
    AudioBuffer back = read_wav(in);
    CHECK(back.samples == a.samples);
    CHECK(back.sample_rate == 8000);
}

TEST_CASE("wav reader error cases") {
    AudioBuffer a = tone(8000, 1, 8);
    std::ostringstream out;
    write_wav(out, a);
    std::string bytes = out.str();

    SUBCASE("bad magic") {
        std::string bad = bytes;
        bad[0] = 'X';
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_wav(in), CorruptFile);
    }
    SUBCASE("wrong wave tag") {
        std::string bad = bytes;
        bad[8] = 'N';
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_wav(in), CorruptFile);
    }
    SUBCASE("truncated data chunk") {
        std::string bad = bytes.substr(0, bytes.size() - 5);
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_wav(in), CorruptFile);
    }
    SUBCASE("truncated header") {
        std::istringstream in(std::string("RIFF"));
        CHECK_THROWS_AS(read_wav(in), CorruptFile);
    }
    SUBCASE("float samples") {
        std::string bad = bytes;
        bad[20] = 3; // IEEE float format tag
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_wav(in), UnsupportedFormat);
    }
    SUBCASE("24-bit samples") {
        std::string bad = bytes;
        bad[34] = 24;
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_wav(in), UnsupportedFormat);
    }
    SUBCASE("missing data chunk") {
        std::string bad = bytes.substr(0, 36);
        uint32_t riff = static_cast<uint32_t>(bad.size() - 8);
        for (int i = 0; i < 4; ++i) bad[4 + i] = static_cast<char>(riff >> (8 * i));
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_wav(in), CorruptFile);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_wav(std::filesystem::path("no/such/audio.wav")), CorruptFile);
    }
}

TEST_CASE("redaction leaves the wav container identical outside the plan") {
    // end to end: write, redact, re-write, compare byte ranges
    AudioBuffer a = tone(16000, 1, 16000); // one second
    AudioBuffer red = redact_audio(a, plan_of({{250, 500}}));

    std::ostringstream orig_out, red_out;
    write_wav(orig_out, a);
    write_wav(red_out, red);
    std::string orig = orig_out.str(), redb = red_out.str();
    REQUIRE(orig.size() == redb.size());
    CHECK(orig.substr(0, 44) == redb.substr(0, 44)); // same header
    // frames 4000..7999 silenced, all other bytes equal
    for (int64_t f = 0; f < 16000; ++f) {
        size_t off = 44 + static_cast<size_t>(f) * 2;
        if (f >= 4000 && f < 8000) {
            CHECK(redb[off] == 0);
            CHECK(redb[off + 1] == 0);
        } else {
            CHECK(redb[off] == orig[off]);
            CHECK(redb[off + 1] == orig[off + 1]);
        }
    }
}
