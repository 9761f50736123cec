#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "exagg/csv.hpp"
#include "exagg/errors.hpp"
#include "exagg/log.hpp"
#include "exagg/time_util.hpp"

namespace exagg {

enum class Kind { Journal, PressRelease, NewsArticle };

enum class Discipline {
    Lifestyle,
    MentalHealth,
    Childhood,
    Treatment,
    ObservationalIdentification,
    Policy,
    Ageing,
    PhysicalDisease,
    NotMentioned,
};

enum class Sample { Human, NonHuman };

inline std::string_view to_string(Kind k) {
    switch (k) {
        case Kind::Journal: return "journal";
        case Kind::PressRelease: return "press_release";
        case Kind::NewsArticle: return "news_article";
    }
    return "";
}

inline std::optional<Kind> parse_kind(std::string_view s) {
    if (s == "journal") return Kind::Journal;
    if (s == "press_release") return Kind::PressRelease;
    if (s == "news_article") return Kind::NewsArticle;
    return std::nullopt;
}

inline std::string_view to_string(Discipline d) {
    switch (d) {
        case Discipline::Lifestyle: return "lifestyle";
        case Discipline::MentalHealth: return "mental_health";
        case Discipline::Childhood: return "childhood";
        case Discipline::Treatment: return "treatment";
        case Discipline::ObservationalIdentification: return "observational_identification";
        case Discipline::Policy: return "policy";
        case Discipline::Ageing: return "ageing";
        case Discipline::PhysicalDisease: return "physical_disease";
        case Discipline::NotMentioned: return "not_mentioned";
    }
    return "";
}

inline std::optional<Discipline> parse_discipline(std::string_view s) {
    if (s == "lifestyle") return Discipline::Lifestyle;
    if (s == "mental_health") return Discipline::MentalHealth;
    if (s == "childhood") return Discipline::Childhood;
    if (s == "treatment") return Discipline::Treatment;
    if (s == "observational_identification") return Discipline::ObservationalIdentification;
    if (s == "policy") return Discipline::Policy;
    if (s == "ageing") return Discipline::Ageing;
    if (s == "physical_disease") return Discipline::PhysicalDisease;
    if (s == "not_mentioned") return Discipline::NotMentioned;
    return std::nullopt;
}

inline constexpr Discipline kAllDisciplines[] = {
    Discipline::Lifestyle,       Discipline::MentalHealth,
    Discipline::Childhood,       Discipline::Treatment,
    Discipline::ObservationalIdentification,
    Discipline::Policy,          Discipline::Ageing,
    Discipline::PhysicalDisease, Discipline::NotMentioned,
};

inline std::string_view to_string(Sample s) {
    return s == Sample::Human ? "human" : "non_human";
}

inline std::optional<Sample> parse_sample(std::string_view s) {
    if (s == "human") return Sample::Human;
    if (s == "non_human") return Sample::NonHuman;
    return std::nullopt;
}

/// An annotated journal paper, press release, or news article.
struct Document {
    std::string id;
    Kind kind = Kind::Journal;
    std::string source;  // venue / university / news agency
    Discipline discipline = Discipline::NotMentioned;
    int strength7 = 1;  // 1..7
    int advice = 1;     // 1..4
    Sample sample = Sample::NonHuman;
    std::optional<std::string> journal_ref;
    std::optional<UtcSeconds> publish_date;
    std::optional<std::string> headline;
    std::vector<std::string> urls;
};

struct Tweet {
    std::string id;
    std::string text;
    UtcSeconds created_at = 0;
    std::int64_t likes = 0;
    std::int64_t retweets = 0;
    std::vector<std::string> hashtags;
    std::vector<std::string> mentions;
    std::vector<std::string> urls;
    std::string author_id;
    std::string article_ref;  // empty only for timeline tweets
};

struct UserTimeline {
    std::string user_id;
    std::int64_t follower_count = 0;
    std::vector<Tweet> tweets;  // kept sorted ascending by created_at
};

struct Corpus {
    std::map<std::string, Document> documents;
    std::vector<Tweet> tweets;
    std::map<std::string, UserTimeline> timelines;

    const Document* find_document(const std::string& id) const {
        auto it = documents.find(id);
        return it == documents.end() ? nullptr : &it->second;
    }

    /// Reference journal of a press release / news article, or null.
    const Document* journal_of(const Document& doc) const {
        if (!doc.journal_ref) return nullptr;
        const Document* j = find_document(*doc.journal_ref);
        return (j != nullptr && j->kind == Kind::Journal) ? j : nullptr;
    }

    const Document* article_of(const Tweet& tweet) const {
        const Document* a = find_document(tweet.article_ref);
        return (a != nullptr && a->kind == Kind::NewsArticle) ? a : nullptr;
    }
};

enum class Format { CSV, JSON };

template <typename T>
struct LoadResult {
    std::vector<T> items;
    std::vector<RowError> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

namespace detail {

inline const std::vector<std::string>& document_columns() {
    static const std::vector<std::string> cols = {
        "id",      "kind",        "source",       "discipline", "strength7", "advice",
        "sample",  "journal_ref", "publish_date", "headline",   "urls"};
    return cols;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool neg = false;
    if (s[0] == '-') {
        neg = true;
        pos = 1;
        if (s.size() == 1) return std::nullopt;
    }
    std::int64_t v = 0;
    for (; pos < s.size(); ++pos) {
        if (s[pos] < '0' || s[pos] > '9') return std::nullopt;
        v = v * 10 + (s[pos] - '0');
    }
    return neg ? -v : v;
}

inline std::vector<std::string> split_pipe(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t end = s.find('|', start);
        const std::string_view part = s.substr(start, end == std::string_view::npos ? s.size() - start : end - start);
        if (!part.empty()) out.emplace_back(part);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct DocumentRow {
    std::map<std::string, std::string> fields;
    std::uint64_t line = 0;
};

inline void validate_document_row(const DocumentRow& row, LoadResult<Document>& result,
                                  std::map<std::string, std::uint64_t>& seen_ids) {
    auto field = [&](const char* name) -> const std::string& { return row.fields.at(name); };

    Document doc;
    doc.id = field("id");
    if (doc.id.empty()) {
        result.errors.push_back({row.line, ErrorCode::MissingField, "empty id"});
        return;
    }

    const auto kind = parse_kind(field("kind"));
    if (!kind) {
        result.errors.push_back({row.line, ErrorCode::UnknownEnum, "unknown kind '" + field("kind") + "'"});
        return;
    }
    doc.kind = *kind;
    doc.source = field("source");

    const auto discipline = parse_discipline(field("discipline"));
    if (discipline) {
        doc.discipline = *discipline;
    } else {
        doc.discipline = Discipline::NotMentioned;
        result.warnings.push_back("row " + std::to_string(row.line) + ": unknown discipline '" +
                                  field("discipline") + "' mapped to not_mentioned");
    }

    const auto strength = parse_int(field("strength7"));
    if (!strength || *strength < 1 || *strength > 7) {
        result.errors.push_back({row.line, ErrorCode::OutOfRangeLevel,
                                 "strength7 '" + field("strength7") + "' not in 1..7"});
        return;
    }
    doc.strength7 = static_cast<int>(*strength);

    const auto advice = parse_int(field("advice"));
    if (!advice || *advice < 1 || *advice > 4) {
        result.errors.push_back({row.line, ErrorCode::OutOfRangeLevel,
                                 "advice '" + field("advice") + "' not in 1..4"});
        return;
    }
    doc.advice = static_cast<int>(*advice);

    const auto sample = parse_sample(field("sample"));
    if (!sample) {
        result.errors.push_back({row.line, ErrorCode::UnknownEnum, "unknown sample '" + field("sample") + "'"});
        return;
    }
    doc.sample = *sample;

    if (!field("journal_ref").empty()) doc.journal_ref = field("journal_ref");

    if (!field("publish_date").empty()) {
        const auto t = parse_rfc3339(field("publish_date"));
        if (!t) {
            result.errors.push_back(
                {row.line, ErrorCode::ParseError, "bad publish_date '" + field("publish_date") + "'"});
            return;
        }
        doc.publish_date = *t;
    }

    if (!field("headline").empty()) doc.headline = field("headline");
    doc.urls = split_pipe(field("urls"));

    const auto [it, inserted] = seen_ids.emplace(doc.id, row.line);
    if (!inserted) {
        result.errors.push_back({row.line, ErrorCode::DuplicateId,
                                 "duplicate id '" + doc.id + "' (first seen at row " +
                                     std::to_string(it->second) + ")"});
        return;
    }
    result.items.push_back(std::move(doc));
}

}  // namespace detail

/// Parses documents from canonical CSV text. Row errors are collected, not
/// thrown: every input row lands in items or in errors.
inline LoadResult<Document> load_documents_csv(std::string_view text) {
    LoadResult<Document> result;
    const auto records = csv::parse(text);
    if (records.empty() || (records.size() == 1 && records[0].fields.size() == 1 && records[0].fields[0].empty())) {
        throw Error(ErrorCode::MissingColumn, "empty file: missing header");
    }

    const auto& header = records[0].fields;
    std::map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < header.size(); ++i) column_index[header[i]] = i;
    for (const auto& col : detail::document_columns()) {
        if (column_index.find(col) == column_index.end()) {
            throw Error(ErrorCode::MissingColumn, "missing column '" + col + "'");
        }
    }

    std::map<std::string, std::uint64_t> seen_ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // trailing blank line
        if (rec.fields.size() < header.size()) {
            result.errors.push_back({rec.line, ErrorCode::ParseError,
                                     "expected " + std::to_string(header.size()) + " fields, got " +
                                         std::to_string(rec.fields.size())});
            continue;
        }
        detail::DocumentRow row;
        row.line = rec.line;
        for (const auto& col : detail::document_columns()) row.fields[col] = rec.fields[column_index[col]];
        detail::validate_document_row(row, result, seen_ids);
    }
    return result;
}

/// Parses documents from a canonical JSON array (same field names as CSV,
/// optional fields omitted or null).
inline LoadResult<Document> load_documents_json(std::string_view text) {
    LoadResult<Document> result;
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_array()) throw Error(ErrorCode::ParseError, "document JSON must be an array");

    std::map<std::string, std::uint64_t> seen_ids;
    std::uint64_t index = 0;
    for (const auto& obj : root) {
        ++index;
        if (!obj.is_object()) {
            result.errors.push_back({index, ErrorCode::ParseError, "array element is not an object"});
            continue;
        }
        detail::DocumentRow row;
        row.line = index;
        bool missing = false;
        for (const auto& col : detail::document_columns()) {
            if (obj.contains(col) && !obj[col].is_null()) {
                if (col == "urls") {
                    std::string joined;
                    if (obj[col].is_array()) {
                        for (const auto& u : obj[col]) {
                            if (!joined.empty()) joined.push_back('|');
                            joined += u.get<std::string>();
                        }
                    }
                    row.fields[col] = joined;
                } else if (obj[col].is_string()) {
                    row.fields[col] = obj[col].get<std::string>();
                } else if (obj[col].is_number_integer()) {
                    row.fields[col] = std::to_string(obj[col].get<std::int64_t>());
                } else {
                    row.fields[col] = obj[col].dump();
                }
            } else if (col == "journal_ref" || col == "publish_date" || col == "headline" || col == "urls") {
                row.fields[col] = "";
            } else {
                result.errors.push_back({index, ErrorCode::MissingField, "missing field '" + col + "'"});
                missing = true;
                break;
            }
        }
        if (missing) continue;
        detail::validate_document_row(row, result, seen_ids);
    }
    return result;
}

inline LoadResult<Document> load_documents(const std::string& path, Format format) {
    const std::string text = detail::read_file(path);
    return format == Format::CSV ? load_documents_csv(text) : load_documents_json(text);
}

namespace detail {

inline bool get_string_array(const nlohmann::json& obj, const char* key, std::vector<std::string>& out,
                             std::string& why) {
    const auto& v = obj.at(key);
    if (!v.is_array()) {
        why = std::string(key) + " must be an array";
        return false;
    }
    for (const auto& e : v) {
        if (!e.is_string()) {
            why = std::string(key) + " must contain strings";
            return false;
        }
        out.push_back(e.get<std::string>());
    }
    return true;
}

/// Shared by the tweet and timeline loaders. `require_article_ref` is false
/// for timeline tweets.
inline std::optional<Tweet> parse_tweet_object(const nlohmann::json& obj, std::uint64_t line,
                                               bool require_article_ref, std::vector<RowError>& errors) {
    static const char* required[] = {"id", "text", "created_at", "likes", "retweets",
                                     "hashtags", "mentions", "urls"};
    for (const char* key : required) {
        if (!obj.contains(key)) {
            errors.push_back({line, ErrorCode::MissingField, std::string("missing field '") + key + "'"});
            return std::nullopt;
        }
    }
    if (require_article_ref && !obj.contains("article_ref")) {
        errors.push_back({line, ErrorCode::MissingField, "missing field 'article_ref'"});
        return std::nullopt;
    }

    Tweet t;
    try {
        t.id = obj.at("id").get<std::string>();
        t.text = obj.at("text").get<std::string>();
        const auto created = parse_rfc3339(obj.at("created_at").get<std::string>());
        if (!created) {
            errors.push_back({line, ErrorCode::ParseError,
                              "bad created_at '" + obj.at("created_at").get<std::string>() + "'"});
            return std::nullopt;
        }
        t.created_at = *created;
        t.likes = obj.at("likes").get<std::int64_t>();
        t.retweets = obj.at("retweets").get<std::int64_t>();
        if (t.likes < 0 || t.retweets < 0) {
            errors.push_back({line, ErrorCode::ParseError, "negative engagement count"});
            return std::nullopt;
        }
        std::string why;
        if (!get_string_array(obj, "hashtags", t.hashtags, why) ||
            !get_string_array(obj, "mentions", t.mentions, why) ||
            !get_string_array(obj, "urls", t.urls, why)) {
            errors.push_back({line, ErrorCode::ParseError, why});
            return std::nullopt;
        }
        if (obj.contains("author_id") && obj.at("author_id").is_string()) {
            t.author_id = obj.at("author_id").get<std::string>();
        }
        if (obj.contains("article_ref") && obj.at("article_ref").is_string()) {
            t.article_ref = obj.at("article_ref").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        errors.push_back({line, ErrorCode::ParseError, e.what()});
        return std::nullopt;
    }
    return t;
}

}  // namespace detail

/// One JSON object per non-empty line. Malformed lines are reported with
/// their line number; well-formed lines still load.
inline LoadResult<Tweet> load_tweets_jsonl(std::string_view text) {
    LoadResult<Tweet> result;
    std::uint64_t line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view raw =
            text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        const bool blank = raw.find_first_not_of(" \t") == std::string_view::npos;
        if (!blank) {
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(raw);
                if (!obj.is_object()) throw Error(ErrorCode::ParseError, "line is not a JSON object");
                if (!obj.contains("author_id")) {
                    result.errors.push_back({line, ErrorCode::MissingField, "missing field 'author_id'"});
                } else if (auto t = detail::parse_tweet_object(obj, line, /*require_article_ref=*/true,
                                                              result.errors)) {
                    result.items.push_back(std::move(*t));
                }
            } catch (const nlohmann::json::parse_error& e) {
                result.errors.push_back({line, ErrorCode::ParseError, e.what()});
            } catch (const Error& e) {
                result.errors.push_back({line, e.code(), e.what()});
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return result;
}

inline LoadResult<Tweet> load_tweets(const std::string& path) {
    return load_tweets_jsonl(detail::read_file(path));
}

inline LoadResult<UserTimeline> load_timelines_jsonl(std::string_view text) {
    LoadResult<UserTimeline> result;
    std::map<std::string, std::uint64_t> seen_ids;
    std::uint64_t line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view raw =
            text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        const bool blank = raw.find_first_not_of(" \t") == std::string_view::npos;
        if (!blank) {
            try {
                const auto obj = nlohmann::json::parse(raw);
                if (!obj.is_object() || !obj.contains("user_id") || !obj.contains("follower_count") ||
                    !obj.contains("tweets")) {
                    result.errors.push_back(
                        {line, ErrorCode::MissingField, "timeline needs user_id, follower_count, tweets"});
                } else {
                    UserTimeline tl;
                    tl.user_id = obj.at("user_id").get<std::string>();
                    tl.follower_count = obj.at("follower_count").get<std::int64_t>();
                    if (tl.follower_count < 0) {
                        result.errors.push_back({line, ErrorCode::ParseError, "negative follower_count"});
                    } else {
                        bool tweets_ok = true;
                        for (const auto& tj : obj.at("tweets")) {
                            auto t = detail::parse_tweet_object(tj, line, /*require_article_ref=*/false,
                                                                result.errors);
                            if (!t) {
                                tweets_ok = false;
                                break;
                            }
                            if (t->author_id.empty()) t->author_id = tl.user_id;
                            tl.tweets.push_back(std::move(*t));
                        }
                        if (tweets_ok) {
                            const auto [it, inserted] = seen_ids.emplace(tl.user_id, line);
                            if (!inserted) {
                                result.errors.push_back(
                                    {line, ErrorCode::DuplicateId,
                                     "duplicate user_id '" + tl.user_id + "' (first seen at line " +
                                         std::to_string(it->second) + ")"});
                            } else {
                                std::sort(tl.tweets.begin(), tl.tweets.end(),
                                          [](const Tweet& a, const Tweet& b) {
                                              return a.created_at != b.created_at
                                                         ? a.created_at < b.created_at
                                                         : a.id < b.id;
                                          });
                                result.items.push_back(std::move(tl));
                            }
                        }
                    }
                }
            } catch (const nlohmann::json::exception& e) {
                result.errors.push_back({line, ErrorCode::ParseError, e.what()});
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return result;
}

inline LoadResult<UserTimeline> load_timelines(const std::string& path) {
    return load_timelines_jsonl(detail::read_file(path));
}

/// Cross-reference diagnostics. Kind violations are hard errors; unresolved
/// references are enumerated so callers can exclude and report them.
struct LinkReport {
    std::vector<std::string> journals_with_ref;       // kind rule violations
    std::vector<std::string> documents_missing_ref;   // press/news without journal_ref
    std::vector<std::string> dangling_journal_refs;   // ref present but unresolvable
    std::vector<std::string> dangling_article_refs;   // tweet ids with bad article_ref

    bool clean() const {
        return journals_with_ref.empty() && documents_missing_ref.empty() &&
               dangling_journal_refs.empty() && dangling_article_refs.empty();
    }
};

inline LinkReport link(const Corpus& corpus) {
    LinkReport report;
    for (const auto& [id, doc] : corpus.documents) {
        if (doc.kind == Kind::Journal) {
            if (doc.journal_ref) report.journals_with_ref.push_back(id);
        } else if (!doc.journal_ref) {
            report.documents_missing_ref.push_back(id);
        } else {
            const Document* j = corpus.find_document(*doc.journal_ref);
            if (j == nullptr || j->kind != Kind::Journal) report.dangling_journal_refs.push_back(id);
        }
    }
    for (const auto& tweet : corpus.tweets) {
        if (corpus.article_of(tweet) == nullptr) report.dangling_article_refs.push_back(tweet.id);
    }
    return report;
}

inline void link_or_throw(const Corpus& corpus) {
    const LinkReport report = link(corpus);
    if (report.clean()) return;
    std::string ids;
    auto add = [&](const std::vector<std::string>& v) {
        for (const auto& id : v) {
            if (!ids.empty()) ids += ", ";
            ids += id;
        }
    };
    add(report.journals_with_ref);
    add(report.documents_missing_ref);
    add(report.dangling_journal_refs);
    add(report.dangling_article_refs);
    throw Error(ErrorCode::DanglingReference, "unresolved or invalid references: " + ids);
}

inline Corpus make_corpus(std::vector<Document> documents, std::vector<Tweet> tweets = {},
                          std::vector<UserTimeline> timelines = {}) {
    Corpus corpus;
    for (auto& doc : documents) {
        std::string id = doc.id;
        corpus.documents.emplace(std::move(id), std::move(doc));
    }
    corpus.tweets = std::move(tweets);
    for (auto& tl : timelines) {
        std::string id = tl.user_id;
        corpus.timelines.emplace(std::move(id), std::move(tl));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Canonical serialization. Field order is fixed so identical corpora always
// produce identical bytes.

inline nlohmann::ordered_json document_to_json(const Document& doc) {
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["kind"] = to_string(doc.kind);
    j["source"] = doc.source;
    j["discipline"] = to_string(doc.discipline);
    j["strength7"] = doc.strength7;
    j["advice"] = doc.advice;
    j["sample"] = to_string(doc.sample);
    if (doc.journal_ref) j["journal_ref"] = *doc.journal_ref;
    if (doc.publish_date) j["publish_date"] = format_rfc3339(*doc.publish_date);
    if (doc.headline) j["headline"] = *doc.headline;
    j["urls"] = doc.urls;
    return j;
}

inline std::string documents_to_json(const std::vector<Document>& docs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& doc : docs) arr.push_back(document_to_json(doc));
    return arr.dump(2) + "\n";
}

inline nlohmann::ordered_json tweet_to_json(const Tweet& tweet) {
    nlohmann::ordered_json j;
    j["id"] = tweet.id;
    j["text"] = tweet.text;
    j["created_at"] = format_rfc3339(tweet.created_at);
    j["likes"] = tweet.likes;
    j["retweets"] = tweet.retweets;
    j["hashtags"] = tweet.hashtags;
    j["mentions"] = tweet.mentions;
    j["urls"] = tweet.urls;
    j["author_id"] = tweet.author_id;
    if (!tweet.article_ref.empty()) j["article_ref"] = tweet.article_ref;
    return j;
}

inline std::string tweets_to_jsonl(const std::vector<Tweet>& tweets) {
    std::string out;
    for (const auto& t : tweets) {
        out += tweet_to_json(t).dump();
        out.push_back('\n');
    }
    return out;
}

}  // namespace exagg
