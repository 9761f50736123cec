#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exagg/corpus.hpp"
#include "exagg/errors.hpp"

namespace exagg {

/// Granularity of the strength-of-statement comparison. Advice and sample
/// comparisons are unaffected by the choice.
enum class StrengthScale { Seven, Four, Two };

inline constexpr StrengthScale kAllScales[] = {StrengthScale::Seven, StrengthScale::Four,
                                               StrengthScale::Two};

inline std::string_view to_string(StrengthScale s) {
    switch (s) {
        case StrengthScale::Seven: return "seven";
        case StrengthScale::Four: return "four";
        case StrengthScale::Two: return "two";
    }
    return "";
}

inline std::optional<StrengthScale> parse_scale(std::string_view s) {
    if (s == "seven") return StrengthScale::Seven;
    if (s == "four") return StrengthScale::Four;
    if (s == "two") return StrengthScale::Two;
    return std::nullopt;
}

/// Coarsens a 1..7 strength level. Seven is the identity; Four folds
/// (1,2)->1, (3,4)->2, (5,6)->3, 7->4; Two folds 1..6->1, 7->2.
inline int quantize(int level, StrengthScale scale) {
    if (level < 1 || level > 7) {
        throw Error(ErrorCode::OutOfRange, "strength level " + std::to_string(level) + " not in 1..7");
    }
    switch (scale) {
        case StrengthScale::Seven: return level;
        case StrengthScale::Four: return (level + 1) / 2;
        case StrengthScale::Two: return level == 7 ? 2 : 1;
    }
    return level;
}

struct ExaggerationLabel {
    bool strength = false;
    bool advice = false;
    bool sample = false;
    bool overall = false;
    StrengthScale scale = StrengthScale::Seven;
};

/// Decides the three per-dimension flags for a derived document against its
/// reference journal. Strict inequality throughout: equal levels are never
/// exaggeration.
inline ExaggerationLabel label(const Document& doc, const Document& journal, StrengthScale scale) {
    if (journal.kind != Kind::Journal || doc.kind == Kind::Journal) {
        throw Error(ErrorCode::KindMismatch,
                    "label() needs a press_release/news_article against a journal");
    }
    if (!doc.journal_ref || *doc.journal_ref != journal.id) {
        throw Error(ErrorCode::RefMismatch,
                    "document '" + doc.id + "' does not reference journal '" + journal.id + "'");
    }

    ExaggerationLabel out;
    out.scale = scale;
    out.strength = quantize(doc.strength7, scale) > quantize(journal.strength7, scale);
    out.advice = doc.advice > journal.advice;
    out.sample = doc.sample == Sample::Human && journal.sample == Sample::NonHuman;
    out.overall = out.strength || out.advice || out.sample;
    return out;
}

enum class GroupBy { Source, Discipline };

inline std::optional<GroupBy> parse_group_by(std::string_view s) {
    if (s == "source") return GroupBy::Source;
    if (s == "discipline") return GroupBy::Discipline;
    return std::nullopt;
}

struct GroupStats {
    std::string group_key;
    Kind doc_kind = Kind::NewsArticle;
    std::size_t n = 0;
    double pct_overall = 0.0;
    double pct_strength = 0.0;
    double pct_advice = 0.0;
    double pct_sample = 0.0;
};

/// Documents of the requested kind whose journal reference does not resolve;
/// these are excluded from aggregation and belong in a diagnostics report.
inline std::vector<std::string> unresolved_documents(const Corpus& corpus, Kind kind) {
    std::vector<std::string> out;
    for (const auto& [id, doc] : corpus.documents) {
        if (doc.kind == kind && corpus.journal_of(doc) == nullptr) out.push_back(id);
    }
    return out;
}

/// Per-group exaggeration percentages for one document kind under one scale,
/// sorted descending by overall percentage (ties broken by group key).
inline std::vector<GroupStats> aggregate(const Corpus& corpus, GroupBy group_by, Kind kind_filter,
                                         StrengthScale scale) {
    struct Tally {
        std::size_t n = 0, overall = 0, strength = 0, advice = 0, sample = 0;
    };
    std::map<std::string, Tally> tallies;

    for (const auto& [id, doc] : corpus.documents) {
        if (doc.kind != kind_filter) continue;
        const Document* journal = corpus.journal_of(doc);
        if (journal == nullptr) continue;  // excluded; see unresolved_documents()

        const ExaggerationLabel lab = label(doc, *journal, scale);
        const std::string key = group_by == GroupBy::Source
                                    ? doc.source
                                    : std::string(to_string(doc.discipline));
        Tally& t = tallies[key];
        ++t.n;
        t.overall += lab.overall ? 1 : 0;
        t.strength += lab.strength ? 1 : 0;
        t.advice += lab.advice ? 1 : 0;
        t.sample += lab.sample ? 1 : 0;
    }

    std::vector<GroupStats> stats;
    stats.reserve(tallies.size());
    for (const auto& [key, t] : tallies) {
        GroupStats g;
        g.group_key = key;
        g.doc_kind = kind_filter;
        g.n = t.n;
        const double n = static_cast<double>(t.n);
        g.pct_overall = 100.0 * static_cast<double>(t.overall) / n;
        g.pct_strength = 100.0 * static_cast<double>(t.strength) / n;
        g.pct_advice = 100.0 * static_cast<double>(t.advice) / n;
        g.pct_sample = 100.0 * static_cast<double>(t.sample) / n;
        stats.push_back(std::move(g));
    }
    std::sort(stats.begin(), stats.end(), [](const GroupStats& a, const GroupStats& b) {
        if (a.pct_overall != b.pct_overall) return a.pct_overall > b.pct_overall;
        return a.group_key < b.group_key;
    });
    return stats;
}

}  // namespace exagg
