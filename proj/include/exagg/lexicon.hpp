#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "exagg/corpus.hpp"
#include "exagg/errors.hpp"

namespace exagg {

/// Lowercased tokens split on whitespace and punctuation. Apostrophized
/// contractions stay whole ("you're"), URLs are dropped, '#' is stripped
/// from hashtags.
inline std::vector<std::string> tokenize(std::string_view text) {
    auto lower = [](char c) -> char {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    };
    auto is_token_char = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '\'' || static_cast<unsigned char>(c) >= 0x80;
    };

    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::string_view(" \t\r\n\f\v").find(text[i]) != std::string_view::npos) ++i;
        std::size_t end = i;
        while (end < text.size() && std::string_view(" \t\r\n\f\v").find(text[end]) == std::string_view::npos) ++end;
        if (end == i) break;
        std::string_view chunk = text.substr(i, end - i);
        i = end;

        // URLs vanish entirely
        std::string lowered;
        lowered.reserve(chunk.size());
        for (char c : chunk) lowered.push_back(lower(c));
        if (lowered.find("http://") != std::string::npos ||
            lowered.find("https://") != std::string::npos || lowered.rfind("www.", 0) == 0) {
            continue;
        }

        while (!chunk.empty() && chunk.front() == '#') chunk.remove_prefix(1);

        std::string token;
        auto flush = [&] {
            while (!token.empty() && token.front() == '\'') token.erase(token.begin());
            while (!token.empty() && token.back() == '\'') token.pop_back();
            if (!token.empty()) tokens.push_back(token);
            token.clear();
        };
        for (char c : chunk) {
            if (is_token_char(c)) {
                token.push_back(lower(c));
            } else {
                flush();
            }
        }
        flush();
    }
    return tokens;
}

namespace detail {

struct PhraseToken {
    std::string text;
    bool is_stem = false;
};

struct Category {
    std::vector<std::string> literals;               // sorted
    std::vector<std::string> stems;                  // sorted, '*' stripped
    std::vector<std::vector<PhraseToken>> phrases;   // each >= 2 tokens
};

inline bool token_matches(const PhraseToken& p, const std::string& token) {
    if (p.is_stem) return token.size() >= p.text.size() && token.compare(0, p.text.size(), p.text) == 0;
    return token == p.text;
}

}  // namespace detail

/// Match counts for one text against every category of a lexicon. `counts`
/// aligns with Lexicon::category_names().
struct CategoryCounts {
    std::vector<std::int64_t> counts;
    std::int64_t token_count = 0;
};

/// A named set of word/stem/phrase categories. Immutable once constructed;
/// safe to share across threads.
class Lexicon {
public:
    Lexicon() = default;

    /// `patterns`: category -> raw patterns. A trailing '*' marks a stem,
    /// an embedded space marks a multi-token phrase. Patterns are stored
    /// lowercased.
    Lexicon(std::string name, const std::map<std::string, std::vector<std::string>>& patterns)
        : name_(std::move(name)) {
        for (const auto& [category, pats] : patterns) {
            if (category.empty()) throw Error(ErrorCode::ParseError, "empty category name");
            category_names_.push_back(category);
            detail::Category cat;
            for (const auto& raw : pats) add_pattern(cat, raw);
            std::sort(cat.literals.begin(), cat.literals.end());
            cat.literals.erase(std::unique(cat.literals.begin(), cat.literals.end()), cat.literals.end());
            std::sort(cat.stems.begin(), cat.stems.end());
            cat.stems.erase(std::unique(cat.stems.begin(), cat.stems.end()), cat.stems.end());
            categories_.push_back(std::move(cat));
        }
        build_index();
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& category_names() const { return category_names_; }

    std::size_t category_index(std::string_view category) const {
        const auto it = std::lower_bound(category_names_.begin(), category_names_.end(), category);
        if (it == category_names_.end() || *it != category) {
            throw Error(ErrorCode::UnknownEnum,
                        "lexicon '" + name_ + "' has no category '" + std::string(category) + "'");
        }
        return static_cast<std::size_t>(it - category_names_.begin());
    }

    /// Literal patterns match whole tokens, stems match prefixes, phrases
    /// match consecutive runs greedily left-to-right without overlap.
    /// A token contributes at most once per category; tokens consumed by a
    /// phrase do not additionally match that category's single-token
    /// patterns.
    CategoryCounts match_counts(const std::vector<std::string>& tokens) const {
        CategoryCounts out;
        out.counts.assign(categories_.size(), 0);
        out.token_count = static_cast<std::int64_t>(tokens.size());
        if (tokens.empty() || categories_.empty()) return out;

        // phrase pass per category that owns phrases; consumed masks feed
        // the token pass so phrase tokens are not double counted
        std::map<std::size_t, std::vector<std::uint8_t>> phrase_consumed;
        for (std::size_t ci : phrase_categories_) {
            const auto& phrases = categories_[ci].phrases;
            std::vector<std::uint8_t> consumed(tokens.size(), 0);
            std::size_t pos = 0;
            while (pos < tokens.size()) {
                std::size_t best_len = 0;
                for (const auto& phrase : phrases) {
                    if (phrase.size() <= best_len || pos + phrase.size() > tokens.size()) continue;
                    bool match = true;
                    for (std::size_t k = 0; k < phrase.size(); ++k) {
                        if (!detail::token_matches(phrase[k], tokens[pos + k])) {
                            match = false;
                            break;
                        }
                    }
                    if (match) best_len = phrase.size();
                }
                if (best_len > 0) {
                    ++out.counts[ci];
                    for (std::size_t k = 0; k < best_len; ++k) consumed[pos + k] = 1;
                    pos += best_len;
                } else {
                    ++pos;
                }
            }
            phrase_consumed.emplace(ci, std::move(consumed));
        }

        // token pass: one hash probe per prefix length covers all stems
        std::vector<std::uint8_t> hit(categories_.size(), 0);
        for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
            const std::string& token = tokens[pos];
            std::fill(hit.begin(), hit.end(), 0);
            if (const auto it = literal_index_.find(token); it != literal_index_.end()) {
                for (std::uint32_t ci : it->second) hit[ci] = 1;
            }
            const std::size_t max_len = std::min(token.size(), max_stem_len_);
            for (std::size_t len = min_stem_len_; len <= max_len; ++len) {
                const auto it = stem_index_.find(token.substr(0, len));
                if (it != stem_index_.end()) {
                    for (std::uint32_t ci : it->second) hit[ci] = 1;
                }
            }
            for (std::size_t ci = 0; ci < categories_.size(); ++ci) {
                if (!hit[ci]) continue;
                const auto mask = phrase_consumed.find(ci);
                if (mask != phrase_consumed.end() && mask->second[pos]) continue;
                ++out.counts[ci];
            }
        }
        return out;
    }

    std::int64_t count_for(const CategoryCounts& counts, std::string_view category) const {
        return counts.counts[category_index(category)];
    }

    /// Sum of match counts across every category.
    static std::int64_t total(const CategoryCounts& counts) {
        std::int64_t sum = 0;
        for (auto c : counts.counts) sum += c;
        return sum;
    }

private:
    void add_pattern(detail::Category& cat, std::string_view raw) {
        std::string lowered;
        lowered.reserve(raw.size());
        for (char c : raw) {
            lowered.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
        }
        if (lowered.empty()) throw Error(ErrorCode::ParseError, "empty pattern");

        if (lowered.find(' ') != std::string::npos) {
            std::vector<detail::PhraseToken> phrase;
            std::size_t start = 0;
            while (start < lowered.size()) {
                std::size_t end = lowered.find(' ', start);
                if (end == std::string::npos) end = lowered.size();
                if (end > start) {
                    detail::PhraseToken pt;
                    pt.text = lowered.substr(start, end - start);
                    if (pt.text.back() == '*') {
                        pt.text.pop_back();
                        pt.is_stem = true;
                    }
                    if (pt.text.empty()) throw Error(ErrorCode::ParseError, "bare '*' in phrase");
                    phrase.push_back(std::move(pt));
                }
                start = end + 1;
            }
            if (phrase.size() < 2) {
                throw Error(ErrorCode::ParseError, "phrase pattern needs at least 2 tokens: '" +
                                                       std::string(raw) + "'");
            }
            cat.phrases.push_back(std::move(phrase));
        } else if (lowered.back() == '*') {
            lowered.pop_back();
            if (lowered.empty()) throw Error(ErrorCode::ParseError, "bare '*' pattern");
            cat.stems.push_back(std::move(lowered));
        } else {
            cat.literals.push_back(std::move(lowered));
        }
    }

    void build_index() {
        min_stem_len_ = SIZE_MAX;
        max_stem_len_ = 0;
        for (std::size_t ci = 0; ci < categories_.size(); ++ci) {
            for (const auto& lit : categories_[ci].literals) {
                literal_index_[lit].push_back(static_cast<std::uint32_t>(ci));
            }
            for (const auto& stem : categories_[ci].stems) {
                stem_index_[stem].push_back(static_cast<std::uint32_t>(ci));
                min_stem_len_ = std::min(min_stem_len_, stem.size());
                max_stem_len_ = std::max(max_stem_len_, stem.size());
            }
            if (!categories_[ci].phrases.empty()) phrase_categories_.push_back(ci);
        }
        if (min_stem_len_ == SIZE_MAX) min_stem_len_ = 1;
    }

    std::string name_;
    std::vector<std::string> category_names_;  // sorted (map iteration order)
    std::vector<detail::Category> categories_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> literal_index_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> stem_index_;
    std::vector<std::size_t> phrase_categories_;
    std::size_t min_stem_len_ = 1;
    std::size_t max_stem_len_ = 0;
};

/// Simple TSV: "category<TAB>pattern" per line; '#' starts a comment.
inline Lexicon load_lexicon_tsv(std::string_view text, std::string name) {
    std::map<std::string, std::vector<std::string>> patterns;
    std::uint64_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view line =
            text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line[0] != '#') {
            const std::size_t tab = line.find('\t');
            if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": expected category<TAB>pattern");
            }
            patterns[std::string(line.substr(0, tab))].emplace_back(line.substr(tab + 1));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return Lexicon(std::move(name), patterns);
}

/// LIWC-style .dic: a %-delimited header of "id<TAB>category" lines followed
/// by "word<TAB>id[<TAB>id...]" entries. Trailing '*' on a word is a stem.
inline Lexicon load_lexicon_dic(std::string_view text, std::string name) {
    std::map<int, std::string> id_to_category;
    std::map<std::string, std::vector<std::string>> patterns;

    int percent_seen = 0;
    std::uint64_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view line =
            text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);

        if (!line.empty()) {
            if (line == "%") {
                ++percent_seen;
            } else if (percent_seen == 1) {
                const std::size_t tab = line.find('\t');
                if (tab == std::string_view::npos) {
                    throw Error(ErrorCode::ParseError,
                                "line " + std::to_string(line_no) + ": expected id<TAB>category");
                }
                const auto id = detail::parse_int(line.substr(0, tab));
                if (!id) {
                    throw Error(ErrorCode::ParseError,
                                "line " + std::to_string(line_no) + ": bad category id");
                }
                id_to_category[static_cast<int>(*id)] = std::string(line.substr(tab + 1));
            } else if (percent_seen >= 2) {
                std::size_t tab = line.find('\t');
                if (tab == std::string_view::npos) {
                    throw Error(ErrorCode::ParseError,
                                "line " + std::to_string(line_no) + ": expected word<TAB>ids");
                }
                const std::string word(line.substr(0, tab));
                std::string_view rest = line.substr(tab + 1);
                bool any = false;
                while (!rest.empty()) {
                    std::size_t next = rest.find_first_of("\t ");
                    const std::string_view tok = rest.substr(0, next);
                    if (!tok.empty()) {
                        const auto id = detail::parse_int(tok);
                        if (!id || id_to_category.find(static_cast<int>(*id)) == id_to_category.end()) {
                            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                                                   ": unknown category id '" +
                                                                   std::string(tok) + "'");
                        }
                        patterns[id_to_category[static_cast<int>(*id)]].push_back(word);
                        any = true;
                    }
                    if (next == std::string_view::npos) break;
                    rest.remove_prefix(next + 1);
                }
                if (!any) {
                    throw Error(ErrorCode::ParseError,
                                "line " + std::to_string(line_no) + ": word without category ids");
                }
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (percent_seen < 2) throw Error(ErrorCode::ParseError, "missing %-delimited category header");
    // every declared category exists even if no word references it
    for (const auto& [id, category] : id_to_category) patterns.try_emplace(category);
    return Lexicon(std::move(name), patterns);
}

inline Lexicon load_lexicon_file(const std::string& path, std::string name) {
    const std::string text = detail::read_file(path);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".dic") == 0) {
        return load_lexicon_dic(text, std::move(name));
    }
    return load_lexicon_tsv(text, std::move(name));
}

enum class Normalization { PerTweet, PerWord };

/// Mean matches for one category: PerTweet divides the total count by the
/// number of tweets, PerWord by the total token count.
inline double mean_per_tweet(const std::vector<Tweet>& tweets, const Lexicon& lexicon,
                             std::string_view category, Normalization normalization) {
    if (tweets.empty()) throw Error(ErrorCode::EmptyGroup, "mean_per_tweet on empty tweet set");
    const std::size_t ci = lexicon.category_index(category);
    std::int64_t total = 0;
    std::int64_t token_total = 0;
    for (const auto& tweet : tweets) {
        const auto counts = lexicon.match_counts(tokenize(tweet.text));
        total += counts.counts[ci];
        token_total += counts.token_count;
    }
    if (normalization == Normalization::PerTweet) {
        return static_cast<double>(total) / static_cast<double>(tweets.size());
    }
    if (token_total == 0) return 0.0;
    return static_cast<double>(total) / static_cast<double>(token_total);
}

}  // namespace exagg
