#include <catch2/catch_amalgamated.hpp>

#include "exagg/corpus.hpp"
#include "support/builders.hpp"

using namespace exagg;

namespace {

const char* kHeader = "id,kind,source,discipline,strength7,advice,sample,journal_ref,publish_date,headline,urls\n";

std::string row(const std::string& id, const std::string& kind, const std::string& strength = "3",
                const std::string& advice = "1", const std::string& discipline = "lifestyle",
                const std::string& journal_ref = "", const std::string& sample = "human") {
    return id + "," + kind + ",src," + discipline + "," + strength + "," + advice + "," + sample +
           "," + journal_ref + ",,,\n";
}

}  // namespace

TEST_CASE("documents load from canonical CSV") {
    const std::string text = std::string(kHeader) + row("j1", "journal") +
                             row("p1", "press_release", "4", "2", "lifestyle", "j1") +
                             row("n1", "news_article", "7", "1", "childhood", "j1");
    const auto result = load_documents_csv(text);
    REQUIRE(result.ok());
    REQUIRE(result.items.size() == 3);
    CHECK(result.items[0].kind == Kind::Journal);
    CHECK(result.items[1].journal_ref == "j1");
    CHECK(result.items[2].discipline == Discipline::Childhood);
    CHECK(result.items[2].strength7 == 7);
}

TEST_CASE("empty file with valid header loads nothing") {
    const auto result = load_documents_csv(kHeader);
    CHECK(result.ok());
    CHECK(result.items.empty());
}

TEST_CASE("strength out of range is rejected with its row") {
    const std::string text = std::string(kHeader) + row("a", "journal") + row("b", "journal", "9");
    const auto result = load_documents_csv(text);
    CHECK(result.items.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].code == ErrorCode::OutOfRangeLevel);
    CHECK(result.errors[0].line == 3);
}

TEST_CASE("advice out of range is rejected") {
    const auto result = load_documents_csv(std::string(kHeader) + row("a", "journal", "3", "5"));
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].code == ErrorCode::OutOfRangeLevel);
}

TEST_CASE("missing column is a hard error naming the column") {
    const std::string text = "id,kind,source,discipline,strength7,advice,sample,journal_ref,publish_date,headline\nx\n";
    try {
        load_documents_csv(text);
        FAIL("expected MissingColumn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingColumn);
        CHECK(std::string(e.what()).find("urls") != std::string::npos);
    }
}

TEST_CASE("duplicate ids are rejected at the duplicate row") {
    const std::string text = std::string(kHeader) + row("a", "journal") + row("a", "journal");
    const auto result = load_documents_csv(text);
    CHECK(result.items.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].code == ErrorCode::DuplicateId);
    CHECK(result.errors[0].line == 3);
}

TEST_CASE("unknown kind and sample are enum errors") {
    const auto bad_kind = load_documents_csv(std::string(kHeader) + row("a", "blog"));
    REQUIRE(bad_kind.errors.size() == 1);
    CHECK(bad_kind.errors[0].code == ErrorCode::UnknownEnum);

    const auto bad_sample = load_documents_csv(
        std::string(kHeader) + "a,journal,src,lifestyle,3,1,alien,,,,\n");
    REQUIRE(bad_sample.errors.size() == 1);
    CHECK(bad_sample.errors[0].code == ErrorCode::UnknownEnum);
}

TEST_CASE("unknown discipline maps to not_mentioned with a warning") {
    const auto result =
        load_documents_csv(std::string(kHeader) + row("a", "journal", "3", "1", "astrology"));
    REQUIRE(result.ok());
    CHECK(result.items[0].discipline == Discipline::NotMentioned);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("astrology") != std::string::npos);
}

TEST_CASE("ingestion never drops rows silently") {
    // 5 data rows: 3 valid, 2 broken
    const std::string text = std::string(kHeader) + row("a", "journal") + row("b", "journal", "0") +
                             row("c", "journal") + row("a", "journal") + row("d", "journal");
    const auto result = load_documents_csv(text);
    CHECK(result.items.size() + result.errors.size() == 5);
}

TEST_CASE("urls are pipe delimited, dates parsed") {
    const std::string text = std::string(kHeader) +
                             "n1,news_article,bbc,lifestyle,7,1,human,j1,2011-07-13T00:00:00Z,Wine "
                             "causes cancer,http://a/x|http://b/y\n";
    const auto result = load_documents_csv(text);
    REQUIRE(result.ok());
    const auto& doc = result.items[0];
    REQUIRE(doc.urls.size() == 2);
    CHECK(doc.urls[1] == "http://b/y");
    CHECK(doc.headline == "Wine causes cancer");
    CHECK(doc.publish_date == parse_rfc3339("2011-07-13"));
}

TEST_CASE("canonical JSON round trip is byte identical") {
    const std::string text = std::string(kHeader) + row("j1", "journal") +
                             row("p1", "press_release", "4", "2", "lifestyle", "j1") +
                             "n1,news_article,bbc,ageing,7,3,human,j1,2011-07-13,With \"quotes\", commas,http://a/x\n";
    const auto loaded = load_documents_csv(text);
    REQUIRE(loaded.ok());
    const std::string first = documents_to_json(loaded.items);
    const auto reloaded = load_documents_json(first);
    REQUIRE(reloaded.ok());
    REQUIRE(reloaded.items.size() == loaded.items.size());
    const std::string second = documents_to_json(reloaded.items);
    CHECK(first == second);
}

TEST_CASE("tweets load from JSONL") {
    const std::string line =
        R"({"id":"t1","text":"hi","created_at":"2011-07-14T00:00:00Z","likes":1,"retweets":2,)"
        R"("hashtags":["h"],"mentions":["m"],"urls":["http://a/x"],"author_id":"u1","article_ref":"n1"})";
    auto result = load_tweets_jsonl(line + "\n" + line + "\n" + line + "\n");
    CHECK(result.items.size() == 3);
    CHECK(result.ok());
    CHECK(result.items[0].retweets == 2);
    CHECK(result.items[0].hashtags == std::vector<std::string>{"h"});
}

TEST_CASE("tweet line missing created_at reports MissingField with line number") {
    const std::string good =
        R"({"id":"t1","text":"hi","created_at":"2011-07-14T00:00:00Z","likes":0,"retweets":0,)"
        R"("hashtags":[],"mentions":[],"urls":[],"author_id":"u1","article_ref":"n1"})";
    const std::string bad =
        R"({"id":"t2","text":"hi","likes":0,"retweets":0,"hashtags":[],"mentions":[],"urls":[],)"
        R"("author_id":"u1","article_ref":"n1"})";
    const auto result = load_tweets_jsonl(good + "\n" + bad + "\n");
    CHECK(result.items.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].code == ErrorCode::MissingField);
    CHECK(result.errors[0].line == 2);
    CHECK(result.errors[0].message.find("created_at") != std::string::npos);
}

TEST_CASE("malformed tweet JSON reports ParseError, negative counts rejected") {
    const auto bad_json = load_tweets_jsonl("{not json}\n");
    REQUIRE(bad_json.errors.size() == 1);
    CHECK(bad_json.errors[0].code == ErrorCode::ParseError);

    const std::string negative =
        R"({"id":"t","text":"x","created_at":"2011-07-14T00:00:00Z","likes":-1,"retweets":0,)"
        R"("hashtags":[],"mentions":[],"urls":[],"author_id":"u","article_ref":"n"})";
    const auto result = load_tweets_jsonl(negative + "\n");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.items.empty());
}

TEST_CASE("timelines load, sort tweets by time, reject duplicate users") {
    const std::string tl =
        R"({"user_id":"u1","follower_count":10,"tweets":[)"
        R"({"id":"b","text":"later","created_at":"2011-07-15T00:00:00Z","likes":0,"retweets":0,"hashtags":[],"mentions":[],"urls":[]},)"
        R"({"id":"a","text":"earlier","created_at":"2011-07-14T00:00:00Z","likes":0,"retweets":0,"hashtags":[],"mentions":[],"urls":[]}]})";
    const auto result = load_timelines_jsonl(tl + "\n" + tl + "\n");
    REQUIRE(result.items.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].code == ErrorCode::DuplicateId);
    const auto& timeline = result.items[0];
    REQUIRE(timeline.tweets.size() == 2);
    CHECK(timeline.tweets[0].id == "a");
    CHECK(timeline.tweets[0].author_id == "u1");  // inherited from the timeline
}

TEST_CASE("link resolves references and enumerates problems") {
    auto corpus = make_corpus({builders::journal("j1"),
                               builders::derived("p1", Kind::PressRelease, "j1"),
                               builders::derived("n1", Kind::NewsArticle, "j1")});
    CHECK(link(corpus).clean());

    // press release referencing a missing journal
    corpus.documents.emplace("p2", builders::derived("p2", Kind::PressRelease, "nope"));
    auto report = link(corpus);
    CHECK(report.dangling_journal_refs == std::vector<std::string>{"p2"});

    // tweet referencing an unknown article
    corpus.tweets.push_back(builders::tweet("t1", "missing", 100));
    report = link(corpus);
    CHECK(report.dangling_article_refs == std::vector<std::string>{"t1"});

    // journal carrying a journal_ref violates the kind rule
    auto bad_journal = builders::journal("j2");
    bad_journal.journal_ref = "j1";
    corpus.documents.emplace("j2", bad_journal);
    report = link(corpus);
    CHECK(report.journals_with_ref == std::vector<std::string>{"j2"});

    CHECK_THROWS_AS(link_or_throw(corpus), Error);
}

TEST_CASE("linking is idempotent") {
    auto corpus = make_corpus({builders::journal("j1"),
                               builders::derived("p1", Kind::PressRelease, "j1")});
    const auto first = link(corpus);
    const auto second = link(corpus);
    CHECK(first.clean() == second.clean());
    CHECK(first.dangling_journal_refs == second.dangling_journal_refs);
}

TEST_CASE("journal_of rejects refs that point at non-journals") {
    auto corpus = make_corpus({builders::journal("j1"),
                               builders::derived("n1", Kind::NewsArticle, "j1"),
                               builders::derived("n2", Kind::NewsArticle, "n1")});
    CHECK(corpus.journal_of(corpus.documents.at("n1")) != nullptr);
    CHECK(corpus.journal_of(corpus.documents.at("n2")) == nullptr);
    CHECK(link(corpus).dangling_journal_refs == std::vector<std::string>{"n2"});
}
