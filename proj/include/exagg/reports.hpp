#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exagg/corpus.hpp"
#include "exagg/csv.hpp"
#include "exagg/diffusion.hpp"
#include "exagg/errors.hpp"
#include "exagg/exaggeration.hpp"
#include "exagg/learn.hpp"
#include "exagg/profiler.hpp"

namespace exagg {

// ---------------------------------------------------------------------------
// Formatting. Fixed formats keep every emitted file byte-stable across runs
// and thread counts.

inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string fmt_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string fmt_optional(const std::optional<double>& v) {
    return v ? fmt_number(*v) : std::string();
}

// ---------------------------------------------------------------------------
// Atomic file output: write to a temp sibling, then rename into place.

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// FNV-1a 64-bit, used for input provenance in run manifests.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view data) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

// ---------------------------------------------------------------------------
// CSV emitters

inline std::string labels_csv(const Corpus& corpus, const std::vector<StrengthScale>& scales) {
    std::string out = "document_id,kind,source,discipline,journal_id,scale,strength,advice,sample,overall\n";
    for (const auto& [id, doc] : corpus.documents) {
        if (doc.kind == Kind::Journal) continue;
        const Document* journal = corpus.journal_of(doc);
        if (journal == nullptr) continue;
        for (const StrengthScale scale : scales) {
            const ExaggerationLabel lab = label(doc, *journal, scale);
            out += csv::join_row({id, std::string(to_string(doc.kind)), doc.source,
                                  std::string(to_string(doc.discipline)), journal->id,
                                  std::string(to_string(scale)), lab.strength ? "true" : "false",
                                  lab.advice ? "true" : "false", lab.sample ? "true" : "false",
                                  lab.overall ? "true" : "false"});
        }
    }
    return out;
}

inline std::string group_stats_csv(const std::vector<std::pair<StrengthScale, std::vector<GroupStats>>>& by_scale) {
    std::string out = "group_key,kind,scale,n,pct_overall,pct_strength,pct_advice,pct_sample\n";
    for (const auto& [scale, stats] : by_scale) {
        for (const auto& g : stats) {
            out += csv::join_row({g.group_key, std::string(to_string(g.doc_kind)),
                                  std::string(to_string(scale)), std::to_string(g.n),
                                  fmt_fixed(g.pct_overall, 3), fmt_fixed(g.pct_strength, 3),
                                  fmt_fixed(g.pct_advice, 3), fmt_fixed(g.pct_sample, 3)});
        }
    }
    return out;
}

struct ArrivalRow {
    StrengthScale scale;
    std::string group;  // "en" | "nen" | "all"
    ArrivalFractions fractions;
};

inline std::string arrival_csv(const std::vector<ArrivalRow>& rows) {
    std::string out = "scale,group,early,mid,late\n";
    for (const auto& row : rows) {
        out += csv::join_row({std::string(to_string(row.scale)), row.group,
                              fmt_number(row.fractions.early), fmt_number(row.fractions.mid),
                              fmt_number(row.fractions.late)});
    }
    return out;
}

struct AttributeRow {
    StrengthScale scale;
    std::string group;
    AttributeStats stats;
};

inline std::string attributes_csv(const std::vector<AttributeRow>& rows) {
    std::string out = "scale,group,likes,retweets,hashtags,mentions\n";
    for (const auto& row : rows) {
        out += csv::join_row({std::string(to_string(row.scale)), row.group,
                              fmt_fixed(row.stats.likes, 2), fmt_fixed(row.stats.retweets, 2),
                              fmt_fixed(row.stats.hashtags, 2), fmt_fixed(row.stats.mentions, 2)});
    }
    return out;
}

inline std::string ratios_csv(const std::vector<CategoryRatioResult>& results) {
    std::string out =
        "category,scale,eEarly,eLate,neEarly,neLate,r_en,r_nen,r,"
        "support_e_early,support_e_late,support_ne_early,support_ne_late\n";
    for (const auto& result : results) {
        for (const auto& rep : result.reports) {
            out += csv::join_row({rep.category, std::string(to_string(rep.scale)),
                                  fmt_optional(rep.e_early), fmt_optional(rep.e_late),
                                  fmt_optional(rep.ne_early), fmt_optional(rep.ne_late),
                                  fmt_optional(rep.r_en), fmt_optional(rep.r_nen), fmt_optional(rep.r),
                                  std::to_string(rep.support.e_early), std::to_string(rep.support.e_late),
                                  std::to_string(rep.support.ne_early),
                                  std::to_string(rep.support.ne_late)});
        }
    }
    return out;
}

/// Re-reads ratios.csv rows (the flag command consumes the diffusion
/// command's output).
inline std::vector<RatioReport> ratios_from_csv(std::string_view text) {
    const auto records = csv::parse(text);
    if (records.empty()) throw Error(ErrorCode::ParseError, "empty ratios csv");
    std::vector<RatioReport> out;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& fields = records[i].fields;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 13) {
            throw Error(ErrorCode::ParseError,
                        "ratios csv row " + std::to_string(records[i].line) + " has " +
                            std::to_string(fields.size()) + " fields, expected 13");
        }
        RatioReport rep;
        rep.category = fields[0];
        const auto scale = parse_scale(fields[1]);
        if (!scale) {
            throw Error(ErrorCode::ParseError,
                        "ratios csv row " + std::to_string(records[i].line) + ": bad scale '" + fields[1] + "'");
        }
        rep.scale = *scale;
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        rep.e_early = opt(fields[2]);
        rep.e_late = opt(fields[3]);
        rep.ne_early = opt(fields[4]);
        rep.ne_late = opt(fields[5]);
        rep.r_en = opt(fields[6]);
        rep.r_nen = opt(fields[7]);
        rep.r = opt(fields[8]);
        rep.support.e_early = std::stoll(fields[9]);
        rep.support.e_late = std::stoll(fields[10]);
        rep.support.ne_early = std::stoll(fields[11]);
        rep.support.ne_late = std::stoll(fields[12]);
        out.push_back(std::move(rep));
    }
    return out;
}

inline std::string flags_json(const FlagResult& flags, const FlagThresholds& thresholds,
                              const std::map<std::string, std::map<std::string, double>>& r_by_category) {
    nlohmann::ordered_json j;
    j["hi_threshold"] = thresholds.hi;
    j["lo_threshold"] = thresholds.lo;
    j["min_support"] = thresholds.min_support;
    auto section = [&](const std::vector<std::string>& names) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& name : names) {
            nlohmann::ordered_json entry;
            entry["category"] = name;
            if (const auto it = r_by_category.find(name); it != r_by_category.end()) {
                entry["r"] = it->second;
            }
            arr.push_back(std::move(entry));
        }
        return arr;
    };
    j["high"] = section(flags.high);
    j["low"] = section(flags.low);
    return j.dump(2) + "\n";
}

struct TrendRow {
    std::string role;  // "opinion" | "realize"
    StrengthScale scale;
    TrendPoint point;
};

inline std::string trend_csv(const std::vector<TrendRow>& rows) {
    std::string out = "role,scale,group,bucket,fraction,n\n";
    for (const auto& row : rows) {
        out += csv::join_row({row.role, std::string(to_string(row.scale)), row.point.group,
                              std::string(to_string(row.point.bucket)), fmt_optional(row.point.fraction),
                              std::to_string(row.point.n)});
    }
    return out;
}

struct UserFeatureRow {
    std::string user_id;
    UserCategory category;
    FeatureVector features;
};

inline std::string features_csv(const std::vector<UserFeatureRow>& rows,
                                const std::vector<std::string>& feature_columns) {
    std::vector<std::string> header = {"user_id", "category", "binary_class"};
    header.insert(header.end(), feature_columns.begin(), feature_columns.end());
    std::string out = csv::join_row(header);
    for (const auto& row : rows) {
        std::vector<std::string> fields = {row.user_id, std::string(to_string(row.category)),
                                           std::string(to_string(binary_class_of(row.category)))};
        for (double v : row.features.flat()) fields.push_back(fmt_number(v));
        out += csv::join_row(fields);
    }
    return out;
}

inline std::string features_schema_json(const std::vector<std::string>& feature_columns) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["key_columns"] = {"user_id", "category", "binary_class"};
    j["feature_columns"] = feature_columns;
    j["label_rule"] = "binary_class II (ex2/ex3plus) is the positive class (label 1)";
    return j.dump(2) + "\n";
}

/// Loads features.csv back into a Dataset (labels: II -> 1, I -> 0).
struct FeatureTable {
    std::vector<std::string> user_ids;
    Dataset dataset;
};

inline FeatureTable features_from_csv(std::string_view text) {
    const auto records = csv::parse(text);
    if (records.empty() || records[0].fields.size() < 4) {
        throw Error(ErrorCode::ParseError, "features csv needs key columns plus at least one feature");
    }
    const auto& header = records[0].fields;
    if (header[0] != "user_id" || header[1] != "category" || header[2] != "binary_class") {
        throw Error(ErrorCode::MissingColumn, "features csv must start with user_id,category,binary_class");
    }
    FeatureTable table;
    table.dataset.feature_names.assign(header.begin() + 3, header.end());
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& fields = records[i].fields;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::ParseError,
                        "features csv row " + std::to_string(records[i].line) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        }
        table.user_ids.push_back(fields[0]);
        if (fields[2] != "I" && fields[2] != "II") {
            throw Error(ErrorCode::ParseError, "features csv row " + std::to_string(records[i].line) +
                                                   ": binary_class must be I or II");
        }
        table.dataset.labels.push_back(fields[2] == "II" ? 1 : 0);
        std::vector<double> row;
        row.reserve(fields.size() - 3);
        for (std::size_t c = 3; c < fields.size(); ++c) {
            try {
                row.push_back(std::stod(fields[c]));
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "features csv row " + std::to_string(records[i].line) +
                                                       ": bad number '" + fields[c] + "'");
            }
        }
        table.dataset.features.push_back(std::move(row));
    }
    if (!table.dataset.labels.empty()) {
        bool has0 = false, has1 = false;
        for (int y : table.dataset.labels) (y == 0 ? has0 : has1) = true;
        if (has0 && has1) table.dataset.class_weights = class_weights(table.dataset.labels);
    }
    return table;
}

inline std::string eval_csv(const CvResult& cv, const std::string& classifier) {
    std::string out = "classifier,fold,precision,recall,f1\n";
    for (const auto& fm : cv.folds) {
        out += csv::join_row({classifier, std::to_string(fm.fold), fmt_fixed(fm.metrics.precision, 6),
                              fmt_fixed(fm.metrics.recall, 6), fmt_fixed(fm.metrics.f1, 6)});
    }
    out += csv::join_row({classifier, "mean", fmt_fixed(cv.mean_precision, 6),
                          fmt_fixed(cv.mean_recall, 6), fmt_fixed(cv.mean_f1, 6)});
    out += csv::join_row({classifier, "std", fmt_fixed(cv.std_precision, 6),
                          fmt_fixed(cv.std_recall, 6), fmt_fixed(cv.std_f1, 6)});
    return out;
}

}  // namespace exagg
