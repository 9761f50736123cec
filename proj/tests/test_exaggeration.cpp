#include <catch2/catch_amalgamated.hpp>

#include "exagg/exaggeration.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace exagg;

TEST_CASE("quantization tables match the published mappings exactly") {
    const int expect_four[7] = {1, 1, 2, 2, 3, 3, 4};
    const int expect_two[7] = {1, 1, 1, 1, 1, 1, 2};
    for (int level = 1; level <= 7; ++level) {
        CHECK(quantize(level, StrengthScale::Seven) == level);
        CHECK(quantize(level, StrengthScale::Four) == expect_four[level - 1]);
        CHECK(quantize(level, StrengthScale::Two) == expect_two[level - 1]);
    }
    CHECK(quantize(7, StrengthScale::Four) == 4);
    CHECK(quantize(3, StrengthScale::Seven) == 3);
    CHECK(quantize(5, StrengthScale::Two) == 1);
}

TEST_CASE("quantize rejects out-of-range levels") {
    for (int level : {0, 8, -1, 100}) {
        for (StrengthScale scale : kAllScales) {
            CHECK_THROWS_AS(quantize(level, scale), Error);
        }
    }
}

TEST_CASE("quantize is monotone") {
    for (StrengthScale scale : kAllScales) {
        for (int a = 1; a <= 7; ++a) {
            for (int b = a; b <= 7; ++b) {
                CHECK(quantize(a, scale) <= quantize(b, scale));
            }
        }
    }
}

TEST_CASE("label spot checks from the definition") {
    const Document journal = builders::journal("j", 3, 2, Sample::Human);

    SECTION("identical annotations are never exaggeration") {
        const Document doc = builders::derived("d", Kind::NewsArticle, "j", 3, 2, Sample::Human);
        for (StrengthScale scale : kAllScales) {
            const auto lab = label(doc, journal, scale);
            CHECK_FALSE(lab.strength);
            CHECK_FALSE(lab.advice);
            CHECK_FALSE(lab.sample);
            CHECK_FALSE(lab.overall);
        }
    }

    SECTION("strength 3 -> 7 flags under seven") {
        const Document doc = builders::derived("d", Kind::NewsArticle, "j", 7, 2, Sample::Human);
        const auto lab = label(doc, journal, StrengthScale::Seven);
        CHECK(lab.strength);
        CHECK(lab.overall);
        CHECK_FALSE(lab.advice);
        CHECK_FALSE(lab.sample);
    }

    SECTION("5 vs 6 distinguishes seven from four") {
        const Document j56 = builders::journal("j", 5, 1, Sample::Human);
        const Document doc = builders::derived("d", Kind::NewsArticle, "j", 6, 1, Sample::Human);
        CHECK(label(doc, j56, StrengthScale::Seven).strength);
        CHECK_FALSE(label(doc, j56, StrengthScale::Four).strength);  // both quantize to 3
    }

    SECTION("non-human to human flags sample") {
        const Document j = builders::journal("j", 3, 2, Sample::NonHuman);
        const Document doc = builders::derived("d", Kind::NewsArticle, "j", 3, 2, Sample::Human);
        const auto lab = label(doc, j, StrengthScale::Seven);
        CHECK(lab.sample);
        CHECK(lab.overall);
        CHECK_FALSE(lab.strength);
        CHECK_FALSE(lab.advice);
    }
}

TEST_CASE("label validates kinds and references") {
    const Document journal = builders::journal("j");
    const Document doc = builders::derived("d", Kind::NewsArticle, "j");

    CHECK_THROWS_AS(label(journal, journal, StrengthScale::Seven), Error);
    CHECK_THROWS_AS(label(doc, doc, StrengthScale::Seven), Error);

    const Document other = builders::journal("other");
    try {
        label(doc, other, StrengthScale::Seven);
        FAIL("expected RefMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RefMismatch);
    }
}

TEST_CASE("label matches the brute-force oracle on all 3136 combinations") {
    for (int s_j = 1; s_j <= 7; ++s_j) {
        for (int s_d = 1; s_d <= 7; ++s_d) {
            for (int a_j = 1; a_j <= 4; ++a_j) {
                for (int a_d = 1; a_d <= 4; ++a_d) {
                    for (int x_j = 0; x_j < 2; ++x_j) {
                        for (int x_d = 0; x_d < 2; ++x_d) {
                            const Document journal = builders::journal(
                                "j", s_j, a_j, x_j ? Sample::Human : Sample::NonHuman);
                            const Document doc =
                                builders::derived("d", Kind::NewsArticle, "j", s_d, a_d,
                                                  x_d ? Sample::Human : Sample::NonHuman);
                            for (StrengthScale scale : kAllScales) {
                                const auto got = label(doc, journal, scale);
                                const auto want =
                                    oracle::label(s_d, s_j, a_d, a_j, x_d == 1, x_j == 1, scale);
                                REQUIRE(got.strength == want.strength);
                                REQUIRE(got.advice == want.advice);
                                REQUIRE(got.sample == want.sample);
                                REQUIRE(got.overall == want.overall);
                                REQUIRE(got.overall == (got.strength || got.advice || got.sample));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("coarse-grain monotonicity: two implies four implies seven") {
    for (int s_j = 1; s_j <= 7; ++s_j) {
        for (int s_d = 1; s_d <= 7; ++s_d) {
            const Document journal = builders::journal("j", s_j);
            const Document doc = builders::derived("d", Kind::NewsArticle, "j", s_d);
            const bool under_two = label(doc, journal, StrengthScale::Two).strength;
            const bool under_four = label(doc, journal, StrengthScale::Four).strength;
            const bool under_seven = label(doc, journal, StrengthScale::Seven).strength;
            if (under_two) CHECK(under_four);
            if (under_four) CHECK(under_seven);
        }
    }
}

TEST_CASE("advice and sample flags are scale independent") {
    for (int a_j = 1; a_j <= 4; ++a_j) {
        for (int a_d = 1; a_d <= 4; ++a_d) {
            const Document journal = builders::journal("j", 4, a_j, Sample::NonHuman);
            const Document doc =
                builders::derived("d", Kind::PressRelease, "j", 4, a_d, Sample::Human);
            const auto seven = label(doc, journal, StrengthScale::Seven);
            const auto four = label(doc, journal, StrengthScale::Four);
            const auto two = label(doc, journal, StrengthScale::Two);
            CHECK(seven.advice == four.advice);
            CHECK(four.advice == two.advice);
            CHECK(seven.sample == four.sample);
            CHECK(four.sample == two.sample);
        }
    }
}

TEST_CASE("aggregate computes percentages and sorts by overall descending") {
    // group A: journal + 3 news, 2 exaggerated; group B: all equal to journal
    std::vector<Document> docs = {builders::journal("j1", 3, 1, Sample::Human)};
    auto add_news = [&](const std::string& id, const std::string& source, int strength) {
        Document d = builders::derived(id, Kind::NewsArticle, "j1", strength, 1, Sample::Human);
        d.source = source;
        docs.push_back(d);
    };
    add_news("n1", "A", 7);
    add_news("n2", "A", 5);
    add_news("n3", "A", 3);
    add_news("n4", "B", 3);
    add_news("n5", "B", 3);

    const Corpus corpus = make_corpus(docs);
    const auto stats = aggregate(corpus, GroupBy::Source, Kind::NewsArticle, StrengthScale::Seven);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].group_key == "A");
    CHECK(stats[0].n == 3);
    CHECK(stats[0].pct_overall == Catch::Approx(100.0 * 2.0 / 3.0));
    CHECK(stats[1].group_key == "B");
    CHECK(stats[1].pct_overall == 0.0);
    CHECK(stats[1].pct_strength == 0.0);
}

TEST_CASE("aggregate overall pct dominates each component pct") {
    std::vector<Document> docs = {builders::journal("j1", 3, 2, Sample::NonHuman)};
    int next = 0;
    for (int strength : {3, 5, 7}) {
        for (int advice : {1, 2, 4}) {
            for (Sample sample : {Sample::Human, Sample::NonHuman}) {
                docs.push_back(builders::derived("n" + std::to_string(next++), Kind::NewsArticle,
                                                 "j1", strength, advice, sample));
            }
        }
    }
    const Corpus corpus = make_corpus(docs);
    for (StrengthScale scale : kAllScales) {
        for (const auto& g : aggregate(corpus, GroupBy::Source, Kind::NewsArticle, scale)) {
            CHECK(g.pct_overall >= g.pct_strength);
            CHECK(g.pct_overall >= g.pct_advice);
            CHECK(g.pct_overall >= g.pct_sample);
        }
    }
}

TEST_CASE("aggregate excludes documents with unresolved journals") {
    std::vector<Document> docs = {builders::journal("j1"),
                                  builders::derived("n1", Kind::NewsArticle, "j1", 7),
                                  builders::derived("n2", Kind::NewsArticle, "ghost", 7)};
    const Corpus corpus = make_corpus(docs);
    const auto stats = aggregate(corpus, GroupBy::Source, Kind::NewsArticle, StrengthScale::Seven);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].n == 1);
    CHECK(unresolved_documents(corpus, Kind::NewsArticle) == std::vector<std::string>{"n2"});
}

TEST_CASE("aggregate by discipline") {
    std::vector<Document> docs = {builders::journal("j1", 3)};
    Document pr = builders::derived("p1", Kind::PressRelease, "j1", 7);
    pr.discipline = Discipline::MentalHealth;
    docs.push_back(pr);
    const Corpus corpus = make_corpus(docs);
    const auto stats = aggregate(corpus, GroupBy::Discipline, Kind::PressRelease, StrengthScale::Seven);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].group_key == "mental_health");
    CHECK(stats[0].pct_overall == 100.0);
}
