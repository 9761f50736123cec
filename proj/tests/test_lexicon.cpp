#include <catch2/catch_amalgamated.hpp>

#include "exagg/lexicon.hpp"
#include "exagg/rng.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace exagg;

TEST_CASE("tokenize lowercases and strips punctuation") {
    CHECK(tokenize("Wine CAUSES cancer!") == std::vector<std::string>{"wine", "causes", "cancer"});
    CHECK(tokenize("you're http://t.co/x #sleep") == std::vector<std::string>{"you're", "sleep"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("   \t\n ").empty());
}

TEST_CASE("tokenize keeps contractions, drops urls, strips hashtags") {
    CHECK(tokenize("they're won't it's") == std::vector<std::string>{"they're", "won't", "it's"});
    CHECK(tokenize("see https://example.com/page?x=1 now") == std::vector<std::string>{"see", "now"});
    CHECK(tokenize("www.example.com text") == std::vector<std::string>{"text"});
    CHECK(tokenize("#Health #well-being") == std::vector<std::string>{"health", "well", "being"});
    CHECK(tokenize("'quoted'") == std::vector<std::string>{"quoted"});
    CHECK(tokenize("a,b;c.d") == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("tokenize is deterministic") {
    const std::string text = "Some #mixed CASE text, you'll love http://x.co 100%";
    CHECK(tokenize(text) == tokenize(text));
}

TEST_CASE("match_counts literal, stem and phrase patterns") {
    const Lexicon lex("test", {{"posemo", {"happi*", "joy"}},
                               {"opinion", {"something to think"}},
                               {"social", {"friend*", "family"}}});

    SECTION("stem matches prefix") {
        const auto counts = lex.match_counts({"happiness", "sad"});
        CHECK(lex.count_for(counts, "posemo") == 1);
        CHECK(counts.token_count == 2);
    }

    SECTION("empty token list yields zeros") {
        const auto counts = lex.match_counts({});
        for (auto c : counts.counts) CHECK(c == 0);
    }

    SECTION("phrase matches consecutive run") {
        const auto counts = lex.match_counts(tokenize("something to think about"));
        CHECK(lex.count_for(counts, "opinion") == 1);
    }

    SECTION("literal matches whole tokens only") {
        const auto counts = lex.match_counts({"joyful", "joy"});
        CHECK(lex.count_for(counts, "posemo") == 1);
    }
}

TEST_CASE("a token counts at most once per category") {
    // both a literal and a stem of the same category match "happy"
    const Lexicon lex("test", {{"posemo", {"happy", "happ*"}}});
    const auto counts = lex.match_counts({"happy"});
    CHECK(counts.counts[0] == 1);
}

TEST_CASE("phrase-consumed tokens do not double count within the category") {
    const Lexicon lex("test", {{"opinion", {"think", "something to think"}}});
    const auto counts = lex.match_counts(tokenize("something to think about"));
    CHECK(counts.counts[0] == 1);  // the phrase, not the phrase plus "think"

    // but a different category still sees the token
    const Lexicon lex2("test", {{"opinion", {"something to think"}}, {"cogmech", {"think*"}}});
    const auto counts2 = lex2.match_counts(tokenize("something to think about"));
    CHECK(lex2.count_for(counts2, "opinion") == 1);
    CHECK(lex2.count_for(counts2, "cogmech") == 1);
}

TEST_CASE("phrases must have at least two tokens") {
    CHECK_THROWS_AS(Lexicon("bad", {{"c", {"one "}}}), Error);
    CHECK_NOTHROW(Lexicon("ok", {{"c", {"two words"}}}));
}

TEST_CASE("patterns are lowercased on load") {
    const Lexicon lex("test", {{"c", {"LOL", "HapPi*"}}});
    const auto counts = lex.match_counts({"lol", "happiness"});
    CHECK(counts.counts[0] == 2);
}

TEST_CASE("monotonicity: appending text never decreases counts") {
    const Lexicon lex("test", {{"a", {"alpha", "bet*"}}, {"b", {"two words", "gamma"}}});
    Rng rng(99);
    const std::vector<std::string> vocabulary = {"alpha", "beta",  "gamma", "two",
                                                 "words", "other", "more",  "bets"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> tokens;
        for (int i = 0; i < 12; ++i) {
            tokens.push_back(vocabulary[rng.next_below(vocabulary.size())]);
        }
        const auto base = lex.match_counts(tokens);
        auto extended = tokens;
        for (int i = 0; i < 4; ++i) {
            extended.push_back(vocabulary[rng.next_below(vocabulary.size())]);
        }
        const auto grown = lex.match_counts(extended);
        for (std::size_t ci = 0; ci < base.counts.size(); ++ci) {
            CHECK(grown.counts[ci] >= base.counts[ci]);
        }
    }
}

TEST_CASE("match_counts equals the quadratic brute-force matcher on random inputs") {
    Rng rng(2024);
    const std::vector<std::string> vocabulary = {"wine",  "cancer", "cause", "causes", "link",
                                                 "study", "think",  "great", "really", "news",
                                                 "hmm",   "works",  "so",    "to",     "about"};
    const std::vector<std::string> pattern_pool = {
        "wine",       "caus*",      "link*",      "study",     "think*", "great news",
        "so to",      "to think",   "really",     "hmm",       "work*",  "news",
        "about",      "think about", "really great", "cancer"};

    for (int trial = 0; trial < 200; ++trial) {
        std::map<std::string, std::vector<std::string>> patterns;
        const int n_categories = 1 + static_cast<int>(rng.next_below(4));
        const int n_patterns = 1 + static_cast<int>(rng.next_below(20));
        for (int p = 0; p < n_patterns; ++p) {
            const std::string category = "c" + std::to_string(rng.next_below(n_categories));
            patterns[category].push_back(pattern_pool[rng.next_below(pattern_pool.size())]);
        }

        std::vector<std::string> tokens;
        const int n_tokens = static_cast<int>(rng.next_below(31));
        for (int n = 0; n < n_tokens; ++n) {
            tokens.push_back(vocabulary[rng.next_below(vocabulary.size())]);
        }

        const Lexicon lex("trial", patterns);
        const auto got = lex.match_counts(tokens);
        const auto want = oracle::naive_match_counts(tokens, patterns);
        for (const auto& [category, expected] : want) {
            INFO("trial " << trial << " category " << category);
            REQUIRE(lex.count_for(got, category) == expected);
        }
    }
}

TEST_CASE("tsv lexicon loads categories and phrases") {
    const std::string tsv =
        "# comment line\n"
        "opinion\tsomething to think\n"
        "opinion\tgreat news\n"
        "slang\tlol\n"
        "slang\tlmao\n";
    const Lexicon lex = load_lexicon_tsv(tsv, "aux");
    CHECK(lex.category_names() == std::vector<std::string>{"opinion", "slang"});
    const auto counts = lex.match_counts(tokenize("LOL something to think"));
    CHECK(lex.count_for(counts, "slang") == 1);
    CHECK(lex.count_for(counts, "opinion") == 1);
}

TEST_CASE("tsv lexicon rejects malformed lines") {
    CHECK_THROWS_AS(load_lexicon_tsv("no_tab_here\n", "x"), Error);
    CHECK_THROWS_AS(load_lexicon_tsv("\tpattern\n", "x"), Error);
}

TEST_CASE("liwc dic parses header and word entries") {
    const std::string dic =
        "%\n"
        "1\tposemo\n"
        "2\tnegemo\n"
        "31\tsocial\n"
        "%\n"
        "happi*\t1\n"
        "joy\t1\n"
        "hate\t2\n"
        "grief\t2 31\n";
    const Lexicon lex = load_lexicon_dic(dic, "liwc");
    CHECK(lex.category_names() == std::vector<std::string>{"negemo", "posemo", "social"});
    const auto counts = lex.match_counts({"happiness", "grief"});
    CHECK(lex.count_for(counts, "posemo") == 1);
    CHECK(lex.count_for(counts, "negemo") == 1);
    CHECK(lex.count_for(counts, "social") == 1);
}

TEST_CASE("liwc dic rejects unknown ids and missing header") {
    CHECK_THROWS_AS(load_lexicon_dic("%\n1\ta\n%\nword\t9\n", "x"), Error);
    CHECK_THROWS_AS(load_lexicon_dic("word\t1\n", "x"), Error);
}

TEST_CASE("mean_per_tweet arithmetic") {
    const Lexicon lex("test", {{"c", {"hit"}}});
    std::vector<Tweet> tweets;
    tweets.push_back(builders::tweet("1", "a", 0, "hit miss miss miss"));
    tweets.push_back(builders::tweet("2", "a", 0, "hit hit hit miss miss miss"));

    CHECK(mean_per_tweet(tweets, lex, "c", Normalization::PerTweet) == Catch::Approx(2.0));
    // 4 matches over 10 tokens
    CHECK(mean_per_tweet(tweets, lex, "c", Normalization::PerWord) == Catch::Approx(0.4));
}

TEST_CASE("mean_per_tweet per-word example: counts {1,1}, tokens {4,6} -> 0.2") {
    const Lexicon lex("test", {{"c", {"hit"}}});
    std::vector<Tweet> tweets;
    tweets.push_back(builders::tweet("1", "a", 0, "hit b c d"));
    tweets.push_back(builders::tweet("2", "a", 0, "hit b c d e f"));
    CHECK(mean_per_tweet(tweets, lex, "c", Normalization::PerWord) == Catch::Approx(0.2));
    CHECK(mean_per_tweet(tweets, lex, "c", Normalization::PerTweet) == Catch::Approx(1.0));
}

TEST_CASE("mean_per_tweet zero counts and empty group") {
    const Lexicon lex("test", {{"c", {"absent"}}});
    std::vector<Tweet> tweets = {builders::tweet("1", "a", 0, "nothing here")};
    CHECK(mean_per_tweet(tweets, lex, "c", Normalization::PerTweet) == 0.0);
    CHECK_THROWS_AS(mean_per_tweet({}, lex, "c", Normalization::PerTweet), Error);
}

TEST_CASE("mean_per_tweet is invariant under duplication") {
    const Lexicon lex("test", {{"c", {"hit", "tw*"}}});
    std::vector<Tweet> tweets;
    tweets.push_back(builders::tweet("1", "a", 0, "hit two"));
    tweets.push_back(builders::tweet("2", "a", 0, "nothing"));
    const double before = mean_per_tweet(tweets, lex, "c", Normalization::PerTweet);
    auto doubled = tweets;
    doubled.insert(doubled.end(), tweets.begin(), tweets.end());
    CHECK(mean_per_tweet(doubled, lex, "c", Normalization::PerTweet) == Catch::Approx(before));
}

TEST_CASE("match determinism across repeated runs") {
    const Lexicon lex("test", {{"a", {"alpha", "b*"}}, {"z", {"one two", "three"}}});
    const auto tokens = tokenize("alpha beta one two three one two ALPHA");
    const auto first = lex.match_counts(tokens);
    for (int i = 0; i < 10; ++i) {
        const auto again = lex.match_counts(tokens);
        CHECK(again.counts == first.counts);
    }
}
