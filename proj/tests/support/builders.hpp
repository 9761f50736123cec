// Shared fixture builders for the test suites.

#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exagg/corpus.hpp"
#include "exagg/learn.hpp"
#include "exagg/rng.hpp"

namespace builders {

inline exagg::Document journal(std::string id, int strength = 3, int advice = 1,
                               exagg::Sample sample = exagg::Sample::NonHuman) {
    exagg::Document d;
    d.id = std::move(id);
    d.kind = exagg::Kind::Journal;
    d.source = "jrnl";
    d.discipline = exagg::Discipline::Lifestyle;
    d.strength7 = strength;
    d.advice = advice;
    d.sample = sample;
    return d;
}

inline exagg::Document derived(std::string id, exagg::Kind kind, std::string journal_ref,
                               int strength = 3, int advice = 1,
                               exagg::Sample sample = exagg::Sample::NonHuman) {
    exagg::Document d;
    d.id = std::move(id);
    d.kind = kind;
    d.source = kind == exagg::Kind::PressRelease ? "uni" : "agency";
    d.discipline = exagg::Discipline::Lifestyle;
    d.strength7 = strength;
    d.advice = advice;
    d.sample = sample;
    d.journal_ref = std::move(journal_ref);
    return d;
}

inline exagg::Tweet tweet(std::string id, std::string article_ref, exagg::UtcSeconds created_at,
                          std::string text = "", std::vector<std::string> urls = {}) {
    exagg::Tweet t;
    t.id = std::move(id);
    t.article_ref = std::move(article_ref);
    t.created_at = created_at;
    t.text = std::move(text);
    t.urls = std::move(urls);
    t.author_id = "u_" + t.id;
    return t;
}

/// Two Gaussian clusters with the requested imbalance; labels 0 (majority)
/// and 1 (minority), cluster means +/- `separation` on every dimension.
inline exagg::Dataset two_clusters(std::size_t n, std::size_t d, double imbalance_ratio,
                                   double separation, std::uint64_t seed) {
    exagg::Rng rng(seed);
    auto normal = [&rng]() {
        const double u1 = rng.next_double();
        const double u2 = rng.next_double();
        return std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    exagg::Dataset ds;
    const std::size_t n_minority =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) / (imbalance_ratio + 1.0)));
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i < n_minority ? 1 : 0;
        const double center = label == 1 ? separation : -separation;
        std::vector<double> row(d);
        for (auto& v : row) v = center + normal();
        ds.features.push_back(std::move(row));
        ds.labels.push_back(label);
    }
    for (std::size_t j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
    ds.class_weights = exagg::class_weights(ds.labels);
    return ds;
}

/// Unique scratch directory under the system temp root.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("exagg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace builders
