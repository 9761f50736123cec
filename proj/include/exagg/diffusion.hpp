#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "exagg/corpus.hpp"
#include "exagg/errors.hpp"
#include "exagg/exaggeration.hpp"
#include "exagg/lexicon.hpp"
#include "exagg/time_util.hpp"

namespace exagg {

// ---------------------------------------------------------------------------
// URL canonicalization: lowercase host, strip scheme, trailing slashes and
// tracking query parameters. No network resolution of shorteners.

namespace detail {

inline bool is_tracking_param(std::string_view key) {
    std::string k;
    k.reserve(key.size());
    for (char c : key) k.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    if (k.rfind("utm_", 0) == 0) return true;
    static const char* exact[] = {"fbclid", "gclid",   "dclid", "igshid", "mc_cid", "mc_eid",
                                  "ref_src", "ref_url", "cmp",   "cmpid",  "smid",   "spm"};
    for (const char* e : exact) {
        if (k == e) return true;
    }
    return false;
}

inline bool strip_scheme(std::string& s) {
    auto matches = [&](std::string_view scheme) {
        if (s.size() < scheme.size()) return false;
        for (std::size_t i = 0; i < scheme.size(); ++i) {
            char c = s[i];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if (c != scheme[i]) return false;
        }
        return true;
    };
    if (matches("https://")) {
        s.erase(0, 8);
        return true;
    }
    if (matches("http://")) {
        s.erase(0, 7);
        return true;
    }
    return false;
}

}  // namespace detail

inline std::string canonicalize_url(std::string_view url) {
    std::string s(url);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    detail::strip_scheme(s);

    std::string query;
    if (const std::size_t q = s.find('?'); q != std::string::npos) {
        query = s.substr(q + 1);
        s.erase(q);
    }

    const std::size_t host_end = std::min(s.find('/'), s.size());
    for (std::size_t i = 0; i < host_end; ++i) {
        if (s[i] >= 'A' && s[i] <= 'Z') s[i] = static_cast<char>(s[i] - 'A' + 'a');
    }
    while (!s.empty() && s.back() == '/') s.pop_back();

    if (!query.empty()) {
        std::string kept;
        std::size_t start = 0;
        while (start <= query.size()) {
            std::size_t end = query.find('&', start);
            if (end == std::string::npos) end = query.size();
            const std::string_view param(query.data() + start, end - start);
            const std::string_view key = param.substr(0, std::min(param.find('='), param.size()));
            if (!param.empty() && !detail::is_tracking_param(key)) {
                if (!kept.empty()) kept.push_back('&');
                kept += param;
            }
            if (end == query.size()) break;
            start = end + 1;
        }
        if (!kept.empty()) {
            s.push_back('?');
            s += kept;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Retention filtering

/// Keeps tweets posted strictly after the article and carrying at least one
/// url that canonically matches an article url (the anti-spam rule).
inline std::vector<Tweet> filter_tweets(const std::vector<Tweet>& tweets, const Document& article) {
    if (!article.publish_date) {
        throw Error(ErrorCode::MissingPublishDate, "article '" + article.id + "' has no publish_date");
    }
    std::vector<std::string> article_urls;
    article_urls.reserve(article.urls.size());
    for (const auto& u : article.urls) article_urls.push_back(canonicalize_url(u));

    std::vector<Tweet> retained;
    for (const auto& tweet : tweets) {
        if (tweet.created_at <= *article.publish_date) continue;
        bool url_match = false;
        for (const auto& u : tweet.urls) {
            const std::string c = canonicalize_url(u);
            if (std::find(article_urls.begin(), article_urls.end(), c) != article_urls.end()) {
                url_match = true;
                break;
            }
        }
        if (url_match) retained.push_back(tweet);
    }
    return retained;
}

/// Corpus-wide retention pass with diagnostics; groups tweets per article
/// and applies filter_tweets to each.
struct RetentionResult {
    std::vector<Tweet> retained;
    std::vector<std::string> articles_without_date;
    std::size_t dropped_unresolvable = 0;
    std::size_t dropped_by_filter = 0;
};

inline RetentionResult apply_retention(const Corpus& corpus) {
    RetentionResult result;
    std::map<std::string, std::vector<Tweet>> by_article;
    for (const auto& tweet : corpus.tweets) {
        if (corpus.article_of(tweet) == nullptr) {
            ++result.dropped_unresolvable;
            continue;
        }
        by_article[tweet.article_ref].push_back(tweet);
    }
    std::map<std::string, bool> dateless;
    for (const auto& [article_id, tweets] : by_article) {
        const Document* article = corpus.find_document(article_id);
        if (!article->publish_date) {
            if (!dateless[article_id]) {
                dateless[article_id] = true;
                result.articles_without_date.push_back(article_id);
            }
            result.dropped_by_filter += tweets.size();
            continue;
        }
        auto kept = filter_tweets(tweets, *article);
        result.dropped_by_filter += tweets.size() - kept.size();
        for (auto& t : kept) result.retained.push_back(std::move(t));
    }
    return result;
}

// ---------------------------------------------------------------------------
// EN / NEN partition

/// EN holds tweets whose article is overall-exaggerated under `scale`
/// against its reference journal; everything else goes to NEN.
inline std::pair<std::vector<Tweet>, std::vector<Tweet>> partition_en_nen(
    const std::vector<Tweet>& tweets, const Corpus& corpus, StrengthScale scale) {
    std::pair<std::vector<Tweet>, std::vector<Tweet>> out;
    std::unordered_map<std::string, bool> article_exaggerated;
    for (const auto& tweet : tweets) {
        auto it = article_exaggerated.find(tweet.article_ref);
        if (it == article_exaggerated.end()) {
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
            it = article_exaggerated
                     .emplace(tweet.article_ref, label(*article, *journal, scale).overall)
                     .first;
        }
        (it->second ? out.first : out.second).push_back(tweet);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text cleaning

inline const std::vector<std::string>& default_domain_words() {
    static const std::vector<std::string> words = {"news", "bbc", "telegraph"};
    return words;
}

namespace detail {

inline bool iequal_at(std::string_view haystack, std::size_t pos, std::string_view needle) {
    if (pos + needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i < needle.size(); ++i) {
        char a = haystack[pos + i];
        char b = needle[i];
        if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
        if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
        if (a != b) return false;
    }
    return true;
}

inline bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace detail

/// Strips the article headline (all case-insensitive occurrences),
/// @mentions, and configurable domain words, then collapses whitespace.
inline std::string clean_text(std::string_view text, std::string_view headline,
                              const std::vector<std::string>& domain_words = default_domain_words()) {
    std::string s(text);

    if (!headline.empty()) {
        std::size_t pos = 0;
        while (pos + headline.size() <= s.size()) {
            if (detail::iequal_at(s, pos, headline)) {
                s.replace(pos, headline.size(), " ");
            } else {
                ++pos;
            }
        }
    }

    // @mentions
    std::string no_mentions;
    no_mentions.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '@' && i + 1 < s.size() && detail::is_word_char(s[i + 1])) {
            i += 1;
            while (i < s.size() && detail::is_word_char(s[i])) ++i;
            no_mentions.push_back(' ');
        } else {
            no_mentions.push_back(s[i]);
            ++i;
        }
    }
    s = std::move(no_mentions);

    // domain words, whole-word, case-insensitive
    for (const auto& word : domain_words) {
        if (word.empty()) continue;
        std::size_t pos = 0;
        while (pos + word.size() <= s.size()) {
            const bool boundary_left = pos == 0 || !detail::is_word_char(s[pos - 1]);
            const bool boundary_right =
                pos + word.size() == s.size() || !detail::is_word_char(s[pos + word.size()]);
            if (boundary_left && boundary_right && detail::iequal_at(s, pos, word)) {
                s.replace(pos, word.size(), " ");
            } else {
                ++pos;
            }
        }
    }

    // collapse whitespace
    std::string out;
    out.reserve(s.size());
    bool in_space = true;
    for (char c : s) {
        const bool space = c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
        if (space) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

/// Returns copies of `tweets` with text cleaned against each tweet's own
/// article headline.
inline std::vector<Tweet> clean_tweets(const std::vector<Tweet>& tweets, const Corpus& corpus,
                                       const std::vector<std::string>& domain_words = default_domain_words()) {
    std::vector<Tweet> out;
    out.reserve(tweets.size());
    for (const auto& tweet : tweets) {
        const Document* article = corpus.article_of(tweet);
        const std::string_view headline =
            (article != nullptr && article->headline) ? std::string_view(*article->headline) : std::string_view();
        Tweet cleaned = tweet;
        cleaned.text = clean_text(tweet.text, headline, domain_words);
        out.push_back(std::move(cleaned));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Arrival buckets

enum class ArrivalBucket { Early, Mid, Late };

inline std::string_view to_string(ArrivalBucket b) {
    switch (b) {
        case ArrivalBucket::Early: return "early";
        case ArrivalBucket::Mid: return "mid";
        case ArrivalBucket::Late: return "late";
    }
    return "";
}

/// Early: dt <= early_seconds (1 day); Mid: up to late_seconds (365 days),
/// boundary inclusive; Late beyond. Non-positive dt never reaches bucketing.
struct BucketBoundaries {
    std::int64_t early_seconds = kSecondsPerDay;
    std::int64_t late_seconds = 365 * kSecondsPerDay;
};

inline ArrivalBucket bucket_of(std::int64_t dt_seconds, const BucketBoundaries& bounds = {}) {
    if (dt_seconds <= bounds.early_seconds) return ArrivalBucket::Early;
    if (dt_seconds <= bounds.late_seconds) return ArrivalBucket::Mid;
    return ArrivalBucket::Late;
}

/// Seconds from the referenced article's publication to the tweet.
inline std::int64_t arrival_delta(const Tweet& tweet, const Corpus& corpus) {
    const Document* article = corpus.article_of(tweet);
    if (article == nullptr) {
        throw Error(ErrorCode::DanglingReference,
                    "tweet '" + tweet.id + "' references unknown article '" + tweet.article_ref + "'");
    }
    if (!article->publish_date) {
        throw Error(ErrorCode::MissingPublishDate, "article '" + article->id + "' has no publish_date");
    }
    return tweet.created_at - *article->publish_date;
}

struct ArrivalFractions {
    double early = 0.0;
    double mid = 0.0;
    double late = 0.0;
    std::size_t n = 0;
};

inline ArrivalFractions arrival_distribution(const std::vector<Tweet>& tweets, const Corpus& corpus,
                                             const BucketBoundaries& bounds = {}) {
    if (tweets.empty()) throw Error(ErrorCode::EmptyGroup, "arrival_distribution on empty group");
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& tweet : tweets) {
        ++counts[static_cast<int>(bucket_of(arrival_delta(tweet, corpus), bounds))];
    }
    ArrivalFractions out;
    out.n = tweets.size();
    const double n = static_cast<double>(tweets.size());
    out.early = static_cast<double>(counts[0]) / n;
    out.mid = static_cast<double>(counts[1]) / n;
    out.late = static_cast<double>(counts[2]) / n;
    return out;
}

// ---------------------------------------------------------------------------
// Per-tweet attribute means (likes, retweets, hashtags, mentions)

struct AttributeStats {
    double likes = 0.0;
    double retweets = 0.0;
    double hashtags = 0.0;
    double mentions = 0.0;
    std::size_t n = 0;
};

inline AttributeStats attribute_stats(const std::vector<Tweet>& tweets) {
    if (tweets.empty()) throw Error(ErrorCode::EmptyGroup, "attribute_stats on empty group");
    AttributeStats out;
    out.n = tweets.size();
    std::int64_t likes = 0, retweets = 0, hashtags = 0, mentions = 0;
    for (const auto& t : tweets) {
        likes += t.likes;
        retweets += t.retweets;
        hashtags += static_cast<std::int64_t>(t.hashtags.size());
        mentions += static_cast<std::int64_t>(t.mentions.size());
    }
    const double n = static_cast<double>(tweets.size());
    out.likes = static_cast<double>(likes) / n;
    out.retweets = static_cast<double>(retweets) / n;
    out.hashtags = static_cast<double>(hashtags) / n;
    out.mentions = static_cast<double>(mentions) / n;
    return out;
}

// ---------------------------------------------------------------------------
// Ratio-of-ratios per lexicon category

/// Match-bearing tweet counts per (group, bucket) — the stability guard data.
struct RatioSupport {
    std::int64_t e_early = 0;
    std::int64_t e_late = 0;
    std::int64_t ne_early = 0;
    std::int64_t ne_late = 0;

    std::int64_t min() const {
        return std::min(std::min(e_early, e_late), std::min(ne_early, ne_late));
    }
};

struct RatioReport {
    std::string category;
    StrengthScale scale = StrengthScale::Seven;
    // per-tweet mean match counts; absent when the bucket has no tweets
    std::optional<double> e_early;
    std::optional<double> e_late;
    std::optional<double> ne_early;
    std::optional<double> ne_late;
    // ratios; absent whenever a denominator is zero or undefined
    std::optional<double> r_en;
    std::optional<double> r_nen;
    std::optional<double> r;
    RatioSupport support;
    // raw data the fractions were derived from
    std::int64_t total_e_early = 0, total_e_late = 0, total_ne_early = 0, total_ne_late = 0;
};

struct CategoryRatioResult {
    std::vector<RatioReport> reports;  // one per lexicon category, in category order
    std::size_t n_e_early = 0, n_e_late = 0, n_ne_early = 0, n_ne_late = 0;

    bool any_bucket_empty() const {
        return n_e_early == 0 || n_e_late == 0 || n_ne_early == 0 || n_ne_late == 0;
    }
};

/// Mid-bucket tweets are excluded: the comparison is early vs late only.
/// Tweet texts are expected to be cleaned (clean_tweets) beforehand.
inline CategoryRatioResult category_ratios(const std::vector<Tweet>& en_tweets,
                                           const std::vector<Tweet>& nen_tweets, const Corpus& corpus,
                                           const Lexicon& lexicon, StrengthScale scale,
                                           const BucketBoundaries& bounds = {}) {
    const std::size_t n_categories = lexicon.category_names().size();
    struct Accum {
        std::vector<std::int64_t> totals;
        std::vector<std::int64_t> bearing;
        std::size_t n = 0;
    };
    Accum acc[4];  // e_early, e_late, ne_early, ne_late
    for (auto& a : acc) {
        a.totals.assign(n_categories, 0);
        a.bearing.assign(n_categories, 0);
    }

    auto accumulate = [&](const std::vector<Tweet>& tweets, bool exaggerated) {
        for (const auto& tweet : tweets) {
            const ArrivalBucket bucket = bucket_of(arrival_delta(tweet, corpus), bounds);
            if (bucket == ArrivalBucket::Mid) continue;
            Accum& a = acc[(exaggerated ? 0 : 2) + (bucket == ArrivalBucket::Late ? 1 : 0)];
            ++a.n;
            const CategoryCounts counts = lexicon.match_counts(tokenize(tweet.text));
            for (std::size_t ci = 0; ci < n_categories; ++ci) {
                a.totals[ci] += counts.counts[ci];
                if (counts.counts[ci] > 0) ++a.bearing[ci];
            }
        }
    };
    accumulate(en_tweets, true);
    accumulate(nen_tweets, false);

    CategoryRatioResult result;
    result.n_e_early = acc[0].n;
    result.n_e_late = acc[1].n;
    result.n_ne_early = acc[2].n;
    result.n_ne_late = acc[3].n;

    auto fraction = [](std::int64_t total, std::size_t n) -> std::optional<double> {
        if (n == 0) return std::nullopt;
        return static_cast<double>(total) / static_cast<double>(n);
    };

    for (std::size_t ci = 0; ci < n_categories; ++ci) {
        RatioReport rep;
        rep.category = lexicon.category_names()[ci];
        rep.scale = scale;
        rep.total_e_early = acc[0].totals[ci];
        rep.total_e_late = acc[1].totals[ci];
        rep.total_ne_early = acc[2].totals[ci];
        rep.total_ne_late = acc[3].totals[ci];
        rep.e_early = fraction(acc[0].totals[ci], acc[0].n);
        rep.e_late = fraction(acc[1].totals[ci], acc[1].n);
        rep.ne_early = fraction(acc[2].totals[ci], acc[2].n);
        rep.ne_late = fraction(acc[3].totals[ci], acc[3].n);
        rep.support.e_early = acc[0].bearing[ci];
        rep.support.e_late = acc[1].bearing[ci];
        rep.support.ne_early = acc[2].bearing[ci];
        rep.support.ne_late = acc[3].bearing[ci];

        if (rep.e_early && rep.e_late && *rep.e_early > 0.0) rep.r_en = *rep.e_late / *rep.e_early;
        if (rep.ne_early && rep.ne_late && *rep.ne_early > 0.0) rep.r_nen = *rep.ne_late / *rep.ne_early;
        if (rep.r_en && rep.r_nen && *rep.r_nen > 0.0) rep.r = *rep.r_en / *rep.r_nen;
        result.reports.push_back(std::move(rep));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Extreme-category flagging with the cross-scale consistency guard

struct FlagThresholds {
    double hi = 1.5;
    double lo = 1.0 / 1.5;
    std::int64_t min_support = 5;
};

struct FlagResult {
    std::vector<std::string> high;
    std::vector<std::string> low;
};

/// A category is flagged only when its ratio is extreme in the SAME
/// direction under all three scale variants and every contributing
/// (group, bucket) meets the minimum support. This mirrors the false-signal
/// guard: a category extreme under 7/4-class but not 2-class is dropped,
/// as is one backed by just one or two tweets.
inline FlagResult flag_extremes(const std::vector<RatioReport>& seven,
                                const std::vector<RatioReport>& four,
                                const std::vector<RatioReport>& two,
                                const FlagThresholds& thresholds = {}) {
    std::map<std::string, std::vector<const RatioReport*>> by_category;
    for (const auto* reports : {&seven, &four, &two}) {
        for (const auto& rep : *reports) by_category[rep.category].push_back(&rep);
    }

    FlagResult result;
    for (const auto& [category, reports] : by_category) {
        if (reports.size() != 3) continue;  // must exist under all three scales
        bool all_high = true, all_low = true, supported = true;
        for (const RatioReport* rep : reports) {
            if (!rep->r) {
                all_high = all_low = false;
                break;
            }
            if (*rep->r < thresholds.hi) all_high = false;
            if (*rep->r > thresholds.lo) all_low = false;
            if (rep->support.min() < thresholds.min_support) supported = false;
        }
        if (!supported) continue;
        if (all_high) result.high.push_back(category);
        if (all_low) result.low.push_back(category);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Opinion / realization trends

struct TrendPoint {
    std::string group;  // "en" | "nen"
    ArrivalBucket bucket = ArrivalBucket::Early;
    std::optional<double> fraction;  // mean matches per tweet; absent if bucket empty
    std::size_t n = 0;
};

/// Mean matches per tweet (all categories of the role lexicon summed) in the
/// early and late buckets of both groups.
inline std::vector<TrendPoint> trend(const std::vector<Tweet>& en_tweets,
                                     const std::vector<Tweet>& nen_tweets, const Corpus& corpus,
                                     const Lexicon& lexicon, const BucketBoundaries& bounds = {}) {
    if (en_tweets.empty() && nen_tweets.empty()) {
        throw Error(ErrorCode::EmptyGroup, "trend on empty tweet groups");
    }
    std::int64_t totals[4] = {0, 0, 0, 0};
    std::size_t ns[4] = {0, 0, 0, 0};
    auto accumulate = [&](const std::vector<Tweet>& tweets, bool exaggerated) {
        for (const auto& tweet : tweets) {
            const ArrivalBucket bucket = bucket_of(arrival_delta(tweet, corpus), bounds);
            if (bucket == ArrivalBucket::Mid) continue;
            const int slot = (exaggerated ? 0 : 2) + (bucket == ArrivalBucket::Late ? 1 : 0);
            ++ns[slot];
            totals[slot] += Lexicon::total(lexicon.match_counts(tokenize(tweet.text)));
        }
    };
    accumulate(en_tweets, true);
    accumulate(nen_tweets, false);

    std::vector<TrendPoint> points;
    const char* groups[2] = {"en", "nen"};
    for (int g = 0; g < 2; ++g) {
        for (int b = 0; b < 2; ++b) {
            TrendPoint p;
            p.group = groups[g];
            p.bucket = b == 0 ? ArrivalBucket::Early : ArrivalBucket::Late;
            p.n = ns[g * 2 + b];
            if (p.n > 0) {
                p.fraction = static_cast<double>(totals[g * 2 + b]) / static_cast<double>(p.n);
            }
            points.push_back(std::move(p));
        }
    }
    return points;
}

}  // namespace exagg
