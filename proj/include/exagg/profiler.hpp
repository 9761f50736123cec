#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exagg/corpus.hpp"
#include "exagg/errors.hpp"
#include "exagg/exaggeration.hpp"
#include "exagg/lexicon.hpp"

namespace exagg {

enum class UserCategory { NEX, EX1, EX2, EX3plus };
enum class BinaryClass { I, II };

inline std::string_view to_string(UserCategory c) {
    switch (c) {
        case UserCategory::NEX: return "nex";
        case UserCategory::EX1: return "ex1";
        case UserCategory::EX2: return "ex2";
        case UserCategory::EX3plus: return "ex3plus";
    }
    return "";
}

inline std::string_view to_string(BinaryClass c) { return c == BinaryClass::I ? "I" : "II"; }

/// Class I users never-or-rarely post exaggerated news (0 or 1 article);
/// class II users do so frequently (2 or more).
inline BinaryClass binary_class_of(UserCategory c) {
    return (c == UserCategory::NEX || c == UserCategory::EX1) ? BinaryClass::I : BinaryClass::II;
}

inline UserCategory category_of_count(std::size_t distinct_exaggerated_articles) {
    switch (distinct_exaggerated_articles) {
        case 0: return UserCategory::NEX;
        case 1: return UserCategory::EX1;
        case 2: return UserCategory::EX2;
        default: return UserCategory::EX3plus;
    }
}

/// Number of distinct exaggerated news articles among the given tweets
/// (several tweets about one article count once).
inline std::size_t count_exaggerated_articles(const std::vector<Tweet>& tweets, const Corpus& corpus,
                                              StrengthScale scale) {
    std::set<std::string> distinct;
    for (const auto& tweet : tweets) {
        if (tweet.article_ref.empty() || distinct.count(tweet.article_ref) > 0) continue;
        const Document* article = corpus.article_of(tweet);
        if (article == nullptr) {
            throw Error(ErrorCode::DanglingReference,
                        "tweet '" + tweet.id + "' references unknown article '" + tweet.article_ref + "'");
        }
        const Document* journal = corpus.journal_of(*article);
        if (journal == nullptr) {
            throw Error(ErrorCode::DanglingReference,
                        "article '" + article->id + "' has no resolvable journal reference");
        }
        if (label(*article, *journal, scale).overall) distinct.insert(tweet.article_ref);
    }
    return distinct.size();
}

/// Categorizes a user by how many distinct exaggerated articles they tweeted
/// about in the collected tweet set.
inline UserCategory categorize(const std::string& user_id, const Corpus& corpus, StrengthScale scale) {
    std::vector<Tweet> user_tweets;
    for (const auto& tweet : corpus.tweets) {
        if (tweet.author_id == user_id) user_tweets.push_back(tweet);
    }
    if (user_tweets.empty() && corpus.timelines.find(user_id) == corpus.timelines.end()) {
        throw Error(ErrorCode::UnknownUser, "user '" + user_id + "' not present in corpus");
    }
    return category_of_count(count_exaggerated_articles(user_tweets, corpus, scale));
}

/// Role lexicons consumed by feature extraction; any may be absent, in which
/// case the corresponding features are zero (or, for LIWC, omitted).
struct RoleLexicons {
    std::optional<Lexicon> liwc;
    std::optional<Lexicon> slang;
    std::optional<Lexicon> hyperbolic;
    std::optional<Lexicon> contraction;
    std::optional<Lexicon> stopwords;
    std::optional<Lexicon> phrases;
};

/// Per-user features over a timeline. Mean-type features are per tweet;
/// count-type features are raw totals. The flat layout (names + values)
/// matches feature_names() order.
struct FeatureVector {
    double avg_retweets_per_tweet = 0.0;
    double avg_mentions_per_tweet = 0.0;
    double follower_count = 0.0;
    double slang_frac = 0.0;
    double hyperbolic_frac = 0.0;
    double contraction_frac = 0.0;
    double tweet_count = 0.0;
    double word_count = 0.0;
    double total_word_length = 0.0;
    double stopword_count = 0.0;
    double common_phrase_count = 0.0;
    std::vector<double> liwc_fracs;  // aligned with the LIWC lexicon's category order

    std::vector<double> flat() const {
        std::vector<double> v = {avg_retweets_per_tweet,
                                 avg_mentions_per_tweet,
                                 follower_count,
                                 slang_frac,
                                 hyperbolic_frac,
                                 contraction_frac,
                                 tweet_count,
                                 word_count,
                                 total_word_length,
                                 stopword_count,
                                 common_phrase_count};
        v.insert(v.end(), liwc_fracs.begin(), liwc_fracs.end());
        return v;
    }
};

/// Stable feature column order; LIWC columns come last, prefixed and in the
/// lexicon's (sorted) category order.
inline std::vector<std::string> feature_names(const RoleLexicons& lexicons) {
    std::vector<std::string> names = {
        "avg_retweets_per_tweet", "avg_mentions_per_tweet", "follower_count",
        "slang_frac",             "hyperbolic_frac",        "contraction_frac",
        "tweet_count",            "word_count",             "total_word_length",
        "stopword_count",         "common_phrase_count"};
    if (lexicons.liwc) {
        for (const auto& category : lexicons.liwc->category_names()) {
            names.push_back("liwc_" + category);
        }
    }
    return names;
}

inline FeatureVector extract_features(const UserTimeline& timeline, const RoleLexicons& lexicons,
                                      Normalization normalization = Normalization::PerTweet) {
    if (timeline.tweets.empty()) {
        throw Error(ErrorCode::EmptyTimeline, "timeline of user '" + timeline.user_id + "' is empty");
    }

    FeatureVector fv;
    const std::size_t n = timeline.tweets.size();
    const std::size_t n_liwc = lexicons.liwc ? lexicons.liwc->category_names().size() : 0;
    fv.liwc_fracs.assign(n_liwc, 0.0);

    std::int64_t retweets = 0, mentions = 0;
    std::int64_t tokens_total = 0, char_total = 0;
    std::int64_t slang = 0, hyperbolic = 0, contraction = 0, stopwords = 0, phrases = 0;
    std::vector<std::int64_t> liwc_totals(n_liwc, 0);

    for (const auto& tweet : timeline.tweets) {
        retweets += tweet.retweets;
        mentions += static_cast<std::int64_t>(tweet.mentions.size());

        const std::vector<std::string> tokens = tokenize(tweet.text);
        tokens_total += static_cast<std::int64_t>(tokens.size());
        for (const auto& tok : tokens) char_total += static_cast<std::int64_t>(tok.size());

        auto total_matches = [&](const std::optional<Lexicon>& lex) -> std::int64_t {
            return lex ? Lexicon::total(lex->match_counts(tokens)) : 0;
        };
        slang += total_matches(lexicons.slang);
        hyperbolic += total_matches(lexicons.hyperbolic);
        contraction += total_matches(lexicons.contraction);
        stopwords += total_matches(lexicons.stopwords);
        phrases += total_matches(lexicons.phrases);
        if (lexicons.liwc) {
            const CategoryCounts counts = lexicons.liwc->match_counts(tokens);
            for (std::size_t ci = 0; ci < n_liwc; ++ci) liwc_totals[ci] += counts.counts[ci];
        }
    }

    const double denominator = normalization == Normalization::PerTweet
                                   ? static_cast<double>(n)
                                   : static_cast<double>(tokens_total);
    auto rate = [&](std::int64_t total) {
        return denominator > 0.0 ? static_cast<double>(total) / denominator : 0.0;
    };

    fv.avg_retweets_per_tweet = static_cast<double>(retweets) / static_cast<double>(n);
    fv.avg_mentions_per_tweet = static_cast<double>(mentions) / static_cast<double>(n);
    fv.follower_count = static_cast<double>(timeline.follower_count);
    fv.slang_frac = rate(slang);
    fv.hyperbolic_frac = rate(hyperbolic);
    fv.contraction_frac = rate(contraction);
    fv.tweet_count = static_cast<double>(n);
    fv.word_count = static_cast<double>(tokens_total);
    fv.total_word_length = static_cast<double>(char_total);
    fv.stopword_count = static_cast<double>(stopwords);
    fv.common_phrase_count = static_cast<double>(phrases);
    for (std::size_t ci = 0; ci < n_liwc; ++ci) fv.liwc_fracs[ci] = rate(liwc_totals[ci]);
    return fv;
}

}  // namespace exagg
