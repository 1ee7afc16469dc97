#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "deid/tagger.hpp"
#include "deid/util.hpp"
#include "oracles.hpp"

using namespace deid;

namespace {

BaselineTagger fixture_tagger(bool case_sensitive = false) {
    TaggerConfig cfg;
    cfg.gazetteer_files = {oracle::fixture("gazetteer.tsv")};
    cfg.pattern_files = {oracle::fixture("patterns.tsv")};
    cfg.case_sensitive = case_sensitive;
    return BaselineTagger::from_config(cfg);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    write_file(path, content);
    return path;
}

} // namespace

TEST_CASE("gazetteer file parsing") {
    auto entries = load_gazetteer_file(oracle::fixture("gazetteer.tsv"));
    REQUIRE(entries.size() == 7);
    CHECK(entries[0].phrase == std::vector<std::string>{"john", "smith"});
    CHECK(entries[0].kind == PhiLabel::Name);

    auto bad_tab = temp_file("gaz_bad_tab.tsv", "john smith Name\n");
    CHECK_THROWS_AS(load_gazetteer_file(bad_tab), TaggerFailure);

    auto bad_kind = temp_file("gaz_bad_kind.tsv", "john\tNmae\n");
    try {
        load_gazetteer_file(bad_kind);
        FAIL("expected TaggerFailure");
    } catch (const TaggerFailure& e) {
        // errors point at the file and line
        CHECK(std::string(e.what()).find("gaz_bad_kind.tsv:1") != std::string::npos);
    }

    CHECK_THROWS_AS(load_gazetteer_file("no/such/file.tsv"), TaggerFailure);
}

TEST_CASE("pattern rule parsing") {
    PatternRule rule = parse_pattern_rule("NUMWORD LITERAL:\"years\" LITERAL:\"old\"\tAge");
    REQUIRE(rule.tokens.size() == 3);
    CHECK(rule.tokens[0].cls == PatternToken::Class::NumWord);
    CHECK(rule.tokens[1].cls == PatternToken::Class::Literal);
    CHECK(rule.tokens[1].literal == "years");
    CHECK(rule.kind == PhiLabel::Age);

    CHECK_THROWS_AS(parse_pattern_rule("NUMWORD Age"), TaggerFailure);        // no tab
    CHECK_THROWS_AS(parse_pattern_rule("BOGUS\tAge"), TaggerFailure);         // bad class
    CHECK_THROWS_AS(parse_pattern_rule("NUMWORD\tNmae"), TaggerFailure);      // bad kind
    CHECK_THROWS_AS(parse_pattern_rule("\tAge"), TaggerFailure);              // empty classes

    auto bad = temp_file("pat_bad.tsv", "# fine\nBOGUS\tAge\n");
    try {
        load_pattern_file(bad);
        FAIL("expected TaggerFailure");
    } catch (const TaggerFailure& e) {
        CHECK(std::string(e.what()).find("pat_bad.tsv:2") != std::string::npos);
    }
}

TEST_CASE("token class predicates") {
    CHECK(is_number_word("twelve"));
    CHECK(is_number_word("sixty"));
    CHECK_FALSE(is_number_word("Twelve")); // callers fold first
    CHECK_FALSE(is_number_word("dozen"));
    CHECK(is_digits("1987"));
    CHECK_FALSE(is_digits("19a7"));
    CHECK_FALSE(is_digits(""));
    CHECK(is_month_name("march"));
    CHECK_FALSE(is_month_name("montag"));
}

TEST_CASE("gazetteer tagging with longest match") {
    BaselineTagger t = fixture_tagger();

    auto spans = t.tag({"my", "name", "is", "john", "smith"});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == TagSpan{3, 5, PhiLabel::Name});

    // "john smith" beats the shorter "john" entry; a lone "john" still hits
    auto lone = t.tag({"john", "was", "here"});
    REQUIRE(lone.size() == 1);
    CHECK(lone[0] == TagSpan{0, 1, PhiLabel::Name});

    // leftmost-longest across the three-token phrase
    auto city = t.tag({"new", "york", "city"});
    REQUIRE(city.size() == 1);
    CHECK(city[0] == TagSpan{0, 3, PhiLabel::City});

    CHECK(t.tag({}).empty());
    CHECK(t.tag({"nothing", "matches", "here"}).empty());
}

TEST_CASE("pattern tagging") {
    BaselineTagger t = fixture_tagger();

    auto age = t.tag({"i", "am", "twenty", "years", "old"});
    REQUIRE(age.size() == 1);
    CHECK(age[0] == TagSpan{2, 5, PhiLabel::Age});

    // longest rule wins: MONTH NUMWORD beats MONTH
    auto date = t.tag({"on", "march", "twelve", "maybe"});
    REQUIRE(date.size() == 1);
    CHECK(date[0] == TagSpan{1, 3, PhiLabel::Date});

    // bare month falls back to the one-token rule
    auto bare = t.tag({"last", "june"});
    REQUIRE(bare.size() == 1);
    CHECK(bare[0] == TagSpan{1, 2, PhiLabel::Date});

    // digits variant
    auto digits = t.tag({"im", "45", "years", "old"});
    REQUIRE(digits.size() == 1);
    CHECK(digits[0] == TagSpan{1, 4, PhiLabel::Age});
}

TEST_CASE("gazetteer claims beat overlapping patterns") {
    // "may" is both a month and the start of a gazetteer phrase here
    auto gaz = temp_file("gaz_may.tsv", "may flower\tName\n");
    auto pat = temp_file("pat_may.tsv", "MONTH\tDate\n");
    TaggerConfig cfg;
    cfg.gazetteer_files = {gaz};
    cfg.pattern_files = {pat};
    BaselineTagger t = BaselineTagger::from_config(cfg);

    auto spans = t.tag({"may", "flower"});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == TagSpan{0, 2, PhiLabel::Name}); // gazetteer won

    // pattern still fires where the gazetteer is silent
    auto alone = t.tag({"in", "may"});
    REQUIRE(alone.size() == 1);
    CHECK(alone[0].kind == PhiLabel::Date);
}

TEST_CASE("patterns never straddle gazetteer claims") {
    // gazetteer takes "twelve"; the two-token date rule must not reach into it
    auto gaz = temp_file("gaz_twelve.tsv", "twelve\tOrganization\n");
    auto pat = temp_file("pat_month2.tsv", "MONTH NUMWORD\tDate\nMONTH\tDate\n");
    TaggerConfig cfg;
    cfg.gazetteer_files = {gaz};
    cfg.pattern_files = {pat};
    BaselineTagger t = BaselineTagger::from_config(cfg);

    auto spans = t.tag({"march", "twelve"});
    REQUIRE(spans.size() == 2);
    CHECK(spans[0] == TagSpan{0, 1, PhiLabel::Date});         // MONTH only
    CHECK(spans[1] == TagSpan{1, 2, PhiLabel::Organization}); // gazetteer claim
}

TEST_CASE("case handling") {
    BaselineTagger insensitive = fixture_tagger(false);
    auto spans = insensitive.tag({"JOHN", "Smith"});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == TagSpan{0, 2, PhiLabel::Name});

    BaselineTagger sensitive = fixture_tagger(true);
    CHECK(sensitive.tag({"JOHN", "Smith"}).empty());
    CHECK(sensitive.tag({"john", "smith"}).size() == 1);

    // month and number-word classes stay case-insensitive either way
    auto date = sensitive.tag({"March", "Twelve"});
    REQUIRE(date.size() == 1);
    CHECK(date[0] == TagSpan{0, 2, PhiLabel::Date});
}

TEST_CASE("adjacent same-kind spans merge") {
    auto gaz = temp_file("gaz_adj.tsv", "john\tName\nsmith\tName\nacme\tOrganization\n");
    TaggerConfig cfg;
    cfg.gazetteer_files = {gaz};
    BaselineTagger t = BaselineTagger::from_config(cfg);

    auto spans = t.tag({"john", "smith", "acme"});
    REQUIRE(spans.size() == 2);
    CHECK(spans[0] == TagSpan{0, 2, PhiLabel::Name});
    CHECK(spans[1] == TagSpan{2, 3, PhiLabel::Organization});
}

TEST_CASE("tagging is deterministic and spans never overlap") {
    BaselineTagger t = fixture_tagger();
    std::vector<std::string> tokens = {"john", "smith", "saw", "mary",  "jones", "in",
                                       "new",  "york",  "on", "march", "twelve"};
    auto first = t.tag(tokens);
    CHECK(t.tag(tokens) == first);
    for (size_t i = 1; i < first.size(); ++i)
        CHECK(first[i - 1].end_word <= first[i].start_word);
}

TEST_CASE("merging detections across hypotheses") {
    auto hyp = [](int rank, std::vector<TimedWord> words) {
        Hypothesis h;
        h.rank = rank;
        h.confidence = 1.0 - 0.1 * rank;
        h.words = std::move(words);
        return h;
    };
    auto w = [](const char* t, int64_t s, int64_t e) {
        return TimedWord(t, TimeInterval(s, e));
    };

    // identity merge
    Hypothesis h1 = hyp(1, {w("a", 100, 400)});
    RedactionPlan one = merge_hypothesis_detections({{h1, {TagSpan{0, 1, PhiLabel::Name}}}});
    REQUIRE(one.intervals().size() == 1);
    CHECK(one.intervals()[0] == TimeInterval{100, 400});

    // interval union across hypotheses
    Hypothesis h2 = hyp(2, {w("b", 150, 300)});
    RedactionPlan both = merge_hypothesis_detections({{h1, {TagSpan{0, 1, PhiLabel::Name}}},
                                                      {h2, {TagSpan{0, 1, PhiLabel::Name}}}});
    REQUIRE(both.intervals().size() == 1);
    CHECK(both.intervals()[0] == TimeInterval{100, 400});

    Hypothesis h3 = hyp(2, {w("c", 600, 700)});
    RedactionPlan disjoint = merge_hypothesis_detections(
        {{h1, {TagSpan{0, 1, PhiLabel::Name}}}, {h3, {TagSpan{0, 1, PhiLabel::City}}}});
    CHECK(disjoint.intervals().size() == 2);

    // a silent hypothesis adds nothing
    RedactionPlan with_empty =
        merge_hypothesis_detections({{h1, {TagSpan{0, 1, PhiLabel::Name}}}, {h2, {}}});
    CHECK(with_empty == one);

    CHECK(merge_hypothesis_detections({}).empty());
}

TEST_CASE("merge grows monotonically with extra hypotheses") {
    auto w = [](const char* t, int64_t s, int64_t e) {
        return TimedWord(t, TimeInterval(s, e));
    };
    Hypothesis h1;
    h1.rank = 1;
    h1.words = {w("a", 0, 200), w("b", 300, 500)};
    Hypothesis h2;
    h2.rank = 2;
    h2.words = {w("a", 100, 250), w("c", 900, 1000)};

    std::vector<std::pair<Hypothesis, std::vector<TagSpan>>> tagged = {
        {h1, {TagSpan{0, 2, PhiLabel::Name}}}};
    RedactionPlan k1 = merge_hypothesis_detections(tagged);
    tagged.push_back({h2, {TagSpan{1, 2, PhiLabel::Date}}});
    RedactionPlan k2 = merge_hypothesis_detections(tagged);

    CHECK(plan_covers(k2, k1));
    CHECK(k2.total_ms() >= k1.total_ms());
}

TEST_CASE("merge validates span bounds") {
    Hypothesis h;
    h.rank = 1;
    h.words = {TimedWord("a", TimeInterval(0, 100))};
    CHECK_THROWS_AS(merge_hypothesis_detections({{h, {TagSpan{0, 2, PhiLabel::Name}}}}),
                    InvariantViolation);
    CHECK_THROWS_AS(merge_hypothesis_detections({{h, {TagSpan{1, 1, PhiLabel::Name}}}}),
                    InvariantViolation);
    CHECK_THROWS_AS(merge_hypothesis_detections({{h, {TagSpan{-1, 1, PhiLabel::Name}}}}),
                    InvariantViolation);
}

TEST_CASE("bio export") {
    std::vector<std::string> tokens = {"my", "name", "is", "john", "smith"};
    std::vector<TagSpan> spans = {TagSpan{3, 5, PhiLabel::Name}};
    CHECK(spans_to_bio(tokens, spans) ==
          "my\tO\nname\tO\nis\tO\njohn\tB-Name\nsmith\tI-Name\n");
    CHECK(spans_to_bio({}, {}) == "");
}
