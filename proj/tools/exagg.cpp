// Command-line front end: each subcommand drives one analysis stage over
// file-based inputs and writes its outputs atomically, so identical inputs,
// config and seed always reproduce identical bytes.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exagg/corpus.hpp"
#include "exagg/diffusion.hpp"
#include "exagg/errors.hpp"
#include "exagg/exaggeration.hpp"
#include "exagg/learn.hpp"
#include "exagg/lexicon.hpp"
#include "exagg/log.hpp"
#include "exagg/profiler.hpp"
#include "exagg/reports.hpp"
#include "exagg/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct InputFile {
    std::string role;
    std::string path;
};

void write_manifest(const fs::path& outdir, const std::string& command,
                    const std::map<std::string, std::string>& config,
                    const std::vector<InputFile>& inputs, std::vector<std::string> outputs) {
    ordered_json j;
    j["format_version"] = 1;
    j["tool"] = {{"name", exagg::kToolName}, {"version", exagg::kToolVersion}};
    j["command"] = command;
    j["config"] = config;
    ordered_json in_arr = ordered_json::array();
    for (const auto& input : inputs) {
        const std::string bytes = exagg::detail::read_file(input.path);
        in_arr.push_back({{"role", input.role},
                          {"path", input.path},
                          {"fnv1a64", exagg::fnv1a64_hex(bytes)},
                          {"bytes", bytes.size()}});
    }
    j["inputs"] = std::move(in_arr);
    std::sort(outputs.begin(), outputs.end());
    outputs.push_back("manifest.json");
    j["outputs"] = outputs;
    exagg::write_file_atomic(outdir / "manifest.json", j.dump(2) + "\n");
}

int fail_with_json(exagg::ErrorCode code, const std::string& message) {
    ordered_json j;
    j["error"] = {{"code", exagg::error_code_name(code)}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return 2;
}

std::vector<exagg::StrengthScale> scales_from_string(const std::string& s) {
    if (s == "all") {
        return {exagg::StrengthScale::Seven, exagg::StrengthScale::Four, exagg::StrengthScale::Two};
    }
    return {*exagg::parse_scale(s)};
}

exagg::Format format_of(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? exagg::Format::JSON
                                                                              : exagg::Format::CSV;
}

ordered_json row_errors_json(const std::string& file, const std::vector<exagg::RowError>& errors) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : errors) {
        arr.push_back({{"file", file},
                       {"line", e.line},
                       {"code", exagg::error_code_name(e.code)},
                       {"message", e.message}});
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Shared option bundles

struct CorpusOptions {
    std::string documents;
    std::string tweets;
    std::string timelines;
};

struct LexiconOptions {
    std::string liwc;
    std::string opinion;
    std::string realize;
    std::string slang;
    std::string hyperbolic;
    std::string contraction;
    std::string stopwords;
    std::string phrases;
};

void add_lexicon_flags(CLI::App* sub, LexiconOptions& opts) {
    sub->add_option("--liwc", opts.liwc, "LIWC-style lexicon (.dic or TSV)")->check(CLI::ExistingFile);
    sub->add_option("--opinion", opts.opinion, "opinion-phrase lexicon (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--realize", opts.realize, "realization-word lexicon (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--slang", opts.slang, "slang lexicon (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--hyperbolic", opts.hyperbolic, "hyperbolic-word lexicon (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--contraction", opts.contraction, "contraction lexicon (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--stopwords", opts.stopwords, "stop-word lexicon (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--phrases", opts.phrases, "common-phrase lexicon (TSV)")->check(CLI::ExistingFile);
}

struct LoadedCorpus {
    exagg::Corpus corpus;
    std::vector<exagg::RowError> document_errors;
    std::vector<exagg::RowError> tweet_errors;
    std::vector<exagg::RowError> timeline_errors;
    std::vector<std::string> warnings;
};

LoadedCorpus load_corpus(const CorpusOptions& opts) {
    LoadedCorpus out;
    std::vector<exagg::Document> documents;
    std::vector<exagg::Tweet> tweets;
    std::vector<exagg::UserTimeline> timelines;
    if (!opts.documents.empty()) {
        auto res = exagg::load_documents(opts.documents, format_of(opts.documents));
        documents = std::move(res.items);
        out.document_errors = std::move(res.errors);
        out.warnings.insert(out.warnings.end(), res.warnings.begin(), res.warnings.end());
    }
    if (!opts.tweets.empty()) {
        auto res = exagg::load_tweets(opts.tweets);
        tweets = std::move(res.items);
        out.tweet_errors = std::move(res.errors);
    }
    if (!opts.timelines.empty()) {
        auto res = exagg::load_timelines(opts.timelines);
        timelines = std::move(res.items);
        out.timeline_errors = std::move(res.errors);
    }
    out.corpus = exagg::make_corpus(std::move(documents), std::move(tweets), std::move(timelines));
    return out;
}

// Tweets whose article and journal chain both resolve; anything else is
// reported, not silently dropped.
std::pair<std::vector<exagg::Tweet>, std::size_t> resolvable_tweets(const std::vector<exagg::Tweet>& tweets,
                                                                    const exagg::Corpus& corpus) {
    std::vector<exagg::Tweet> kept;
    std::size_t dropped = 0;
    for (const auto& tweet : tweets) {
        const exagg::Document* article = corpus.article_of(tweet);
        if (article == nullptr || corpus.journal_of(*article) == nullptr) {
            ++dropped;
            continue;
        }
        kept.push_back(tweet);
    }
    return {std::move(kept), dropped};
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const CorpusOptions& corpus_opts, const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    LoadedCorpus loaded = load_corpus(corpus_opts);
    const exagg::LinkReport linkrep = exagg::link(loaded.corpus);

    std::map<std::string, std::map<std::string, std::size_t>> by_kind_discipline;
    std::map<std::string, std::size_t> by_kind;
    for (const auto& [id, doc] : loaded.corpus.documents) {
        ++by_kind[std::string(exagg::to_string(doc.kind))];
        ++by_kind_discipline[std::string(exagg::to_string(doc.kind))]
                            [std::string(exagg::to_string(doc.discipline))];
    }

    ordered_json summary;
    summary["documents"] = {{"total", loaded.corpus.documents.size()},
                            {"by_kind", by_kind},
                            {"by_kind_discipline", by_kind_discipline}};
    summary["tweets"] = {{"total", loaded.corpus.tweets.size()},
                         {"row_errors", loaded.tweet_errors.size()}};
    summary["timelines"] = {{"total", loaded.corpus.timelines.size()},
                            {"row_errors", loaded.timeline_errors.size()}};
    ordered_json errors = ordered_json::array();
    for (const auto& e : row_errors_json(corpus_opts.documents, loaded.document_errors)) errors.push_back(e);
    for (const auto& e : row_errors_json(corpus_opts.tweets, loaded.tweet_errors)) errors.push_back(e);
    for (const auto& e : row_errors_json(corpus_opts.timelines, loaded.timeline_errors)) errors.push_back(e);
    summary["row_errors"] = errors;
    summary["warnings"] = loaded.warnings;
    summary["link"] = {{"journals_with_ref", linkrep.journals_with_ref},
                       {"documents_missing_ref", linkrep.documents_missing_ref},
                       {"dangling_journal_refs", linkrep.dangling_journal_refs},
                       {"dangling_article_refs", linkrep.dangling_article_refs}};

    exagg::write_file_atomic(outdir / "corpus_summary.json", summary.dump(2) + "\n");

    std::map<std::string, std::string> config;
    std::vector<InputFile> inputs;
    if (!corpus_opts.documents.empty()) {
        config["documents"] = corpus_opts.documents;
        inputs.push_back({"documents", corpus_opts.documents});
    }
    if (!corpus_opts.tweets.empty()) {
        config["tweets"] = corpus_opts.tweets;
        inputs.push_back({"tweets", corpus_opts.tweets});
    }
    if (!corpus_opts.timelines.empty()) {
        config["timelines"] = corpus_opts.timelines;
        inputs.push_back({"timelines", corpus_opts.timelines});
    }
    write_manifest(outdir, "ingest", config, inputs, {"corpus_summary.json"});

    const std::size_t row_error_count =
        loaded.document_errors.size() + loaded.tweet_errors.size() + loaded.timeline_errors.size();
    if (row_error_count > 0 || !linkrep.journals_with_ref.empty()) {
        return fail_with_json(exagg::ErrorCode::ParseError,
                              std::to_string(row_error_count) + " row error(s), " +
                                  std::to_string(linkrep.journals_with_ref.size()) +
                                  " journal kind violation(s); see corpus_summary.json");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// label / report

int cmd_label(const CorpusOptions& corpus_opts, const std::string& scale_str,
              const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    LoadedCorpus loaded = load_corpus(corpus_opts);

    exagg::write_file_atomic(outdir / "labels.csv",
                             exagg::labels_csv(loaded.corpus, scales_from_string(scale_str)));

    ordered_json diagnostics;
    diagnostics["unresolved_press_releases"] =
        exagg::unresolved_documents(loaded.corpus, exagg::Kind::PressRelease);
    diagnostics["unresolved_news_articles"] =
        exagg::unresolved_documents(loaded.corpus, exagg::Kind::NewsArticle);
    exagg::write_file_atomic(outdir / "diagnostics.json", diagnostics.dump(2) + "\n");

    write_manifest(outdir, "label", {{"documents", corpus_opts.documents}, {"scale", scale_str}},
                   {{"documents", corpus_opts.documents}}, {"labels.csv", "diagnostics.json"});
    return 0;
}

int cmd_report(const CorpusOptions& corpus_opts, const std::string& group_by_str,
               const std::string& kind_str, const std::string& scale_str,
               const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    LoadedCorpus loaded = load_corpus(corpus_opts);

    const exagg::GroupBy group_by = *exagg::parse_group_by(group_by_str);
    const exagg::Kind kind = kind_str == "press" ? exagg::Kind::PressRelease : exagg::Kind::NewsArticle;

    std::vector<std::pair<exagg::StrengthScale, std::vector<exagg::GroupStats>>> by_scale;
    for (const exagg::StrengthScale scale : scales_from_string(scale_str)) {
        by_scale.emplace_back(scale, exagg::aggregate(loaded.corpus, group_by, kind, scale));
    }
    exagg::write_file_atomic(outdir / "report.csv", exagg::group_stats_csv(by_scale));

    ordered_json diagnostics;
    diagnostics["unresolved_documents"] = exagg::unresolved_documents(loaded.corpus, kind);
    exagg::write_file_atomic(outdir / "diagnostics.json", diagnostics.dump(2) + "\n");

    write_manifest(outdir, "report",
                   {{"documents", corpus_opts.documents},
                    {"group_by", group_by_str},
                    {"kind", kind_str},
                    {"scale", scale_str}},
                   {{"documents", corpus_opts.documents}}, {"report.csv", "diagnostics.json"});
    return 0;
}

// ---------------------------------------------------------------------------
// diffusion

int cmd_diffusion(const CorpusOptions& corpus_opts, const LexiconOptions& lex_opts,
                  const std::string& scale_str, double early_days, double year_days,
                  const std::vector<std::string>& domain_words, const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    LoadedCorpus loaded = load_corpus(corpus_opts);
    const exagg::Corpus& corpus = loaded.corpus;

    const exagg::Lexicon liwc = exagg::load_lexicon_file(lex_opts.liwc, "liwc");
    std::optional<exagg::Lexicon> opinion, realize;
    if (!lex_opts.opinion.empty()) opinion = exagg::load_lexicon_file(lex_opts.opinion, "opinion");
    if (!lex_opts.realize.empty()) realize = exagg::load_lexicon_file(lex_opts.realize, "realize");

    exagg::BucketBoundaries bounds;
    bounds.early_seconds = static_cast<std::int64_t>(early_days * exagg::kSecondsPerDay);
    bounds.late_seconds = static_cast<std::int64_t>(year_days * exagg::kSecondsPerDay);

    const exagg::RetentionResult retention = exagg::apply_retention(corpus);
    auto [usable, dropped_unlabeled] = resolvable_tweets(retention.retained, corpus);
    if (usable.empty()) {
        throw exagg::Error(exagg::ErrorCode::EmptyGroup,
                           "no usable tweets after retention filtering and reference resolution");
    }
    const std::vector<exagg::Tweet> cleaned = exagg::clean_tweets(usable, corpus, domain_words);

    std::vector<exagg::ArrivalRow> arrival_rows;
    std::vector<exagg::AttributeRow> attribute_rows;
    std::vector<exagg::CategoryRatioResult> ratio_results;
    std::vector<exagg::TrendRow> trend_rows;
    ordered_json summary;
    summary["retention"] = {{"retained", usable.size()},
                            {"dropped_by_filter", retention.dropped_by_filter},
                            {"dropped_unresolvable_article", retention.dropped_unresolvable},
                            {"dropped_unresolvable_journal", dropped_unlabeled},
                            {"articles_without_publish_date", retention.articles_without_date}};

    ordered_json per_scale = ordered_json::object();
    for (const exagg::StrengthScale scale : scales_from_string(scale_str)) {
        const auto [en, nen] = exagg::partition_en_nen(cleaned, corpus, scale);

        ordered_json scale_summary;
        scale_summary["tweet_en"] = en.size();
        scale_summary["tweet_nen"] = nen.size();

        arrival_rows.push_back({scale, "all", exagg::arrival_distribution(cleaned, corpus, bounds)});
        if (!en.empty()) arrival_rows.push_back({scale, "en", exagg::arrival_distribution(en, corpus, bounds)});
        if (!nen.empty()) arrival_rows.push_back({scale, "nen", exagg::arrival_distribution(nen, corpus, bounds)});
        if (!en.empty()) attribute_rows.push_back({scale, "en", exagg::attribute_stats(en)});
        if (!nen.empty()) attribute_rows.push_back({scale, "nen", exagg::attribute_stats(nen)});

        exagg::CategoryRatioResult ratios =
            exagg::category_ratios(en, nen, corpus, liwc, scale, bounds);
        scale_summary["buckets"] = {{"en_early", ratios.n_e_early},
                                    {"en_late", ratios.n_e_late},
                                    {"nen_early", ratios.n_ne_early},
                                    {"nen_late", ratios.n_ne_late}};
        if (ratios.any_bucket_empty()) {
            scale_summary["empty_bucket"] = true;  // EmptyBucket: reported, not fatal
        }
        ratio_results.push_back(std::move(ratios));

        if (opinion) {
            for (auto& p : exagg::trend(en, nen, corpus, *opinion, bounds)) {
                trend_rows.push_back({"opinion", scale, std::move(p)});
            }
        }
        if (realize) {
            for (auto& p : exagg::trend(en, nen, corpus, *realize, bounds)) {
                trend_rows.push_back({"realize", scale, std::move(p)});
            }
        }
        per_scale[std::string(exagg::to_string(scale))] = std::move(scale_summary);
    }
    summary["scales"] = std::move(per_scale);

    exagg::write_file_atomic(outdir / "arrival.csv", exagg::arrival_csv(arrival_rows));
    exagg::write_file_atomic(outdir / "attributes.csv", exagg::attributes_csv(attribute_rows));
    exagg::write_file_atomic(outdir / "ratios.csv", exagg::ratios_csv(ratio_results));
    exagg::write_file_atomic(outdir / "trend.csv", exagg::trend_csv(trend_rows));
    exagg::write_file_atomic(outdir / "diffusion_summary.json", summary.dump(2) + "\n");

    std::map<std::string, std::string> config = {{"documents", corpus_opts.documents},
                                                 {"tweets", corpus_opts.tweets},
                                                 {"liwc", lex_opts.liwc},
                                                 {"scale", scale_str},
                                                 {"early_days", exagg::fmt_number(early_days)},
                                                 {"year_days", exagg::fmt_number(year_days)}};
    std::string joined_domains;
    for (const auto& w : domain_words) {
        if (!joined_domains.empty()) joined_domains.push_back(',');
        joined_domains += w;
    }
    config["domain_words"] = joined_domains;
    std::vector<InputFile> inputs = {{"documents", corpus_opts.documents},
                                     {"tweets", corpus_opts.tweets},
                                     {"liwc", lex_opts.liwc}};
    if (opinion) {
        config["opinion"] = lex_opts.opinion;
        inputs.push_back({"opinion", lex_opts.opinion});
    }
    if (realize) {
        config["realize"] = lex_opts.realize;
        inputs.push_back({"realize", lex_opts.realize});
    }
    write_manifest(outdir, "diffusion", config, inputs,
                   {"arrival.csv", "attributes.csv", "ratios.csv", "trend.csv", "diffusion_summary.json"});
    return 0;
}

// ---------------------------------------------------------------------------
// flag

int cmd_flag(const std::string& ratios_path, double hi, double lo, std::int64_t min_support,
             const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    const auto all_reports = exagg::ratios_from_csv(exagg::detail::read_file(ratios_path));

    std::vector<exagg::RatioReport> seven, four, two;
    for (const auto& rep : all_reports) {
        switch (rep.scale) {
            case exagg::StrengthScale::Seven: seven.push_back(rep); break;
            case exagg::StrengthScale::Four: four.push_back(rep); break;
            case exagg::StrengthScale::Two: two.push_back(rep); break;
        }
    }
    if (seven.empty() || four.empty() || two.empty()) {
        throw exagg::Error(exagg::ErrorCode::ConfigError,
                           "ratios csv must contain rows for all of seven, four and two scales");
    }

    exagg::FlagThresholds thresholds;
    thresholds.hi = hi;
    thresholds.lo = lo;
    thresholds.min_support = min_support;
    const exagg::FlagResult flags = exagg::flag_extremes(seven, four, two, thresholds);

    std::map<std::string, std::map<std::string, double>> r_by_category;
    for (const auto& rep : all_reports) {
        if (rep.r) r_by_category[rep.category][std::string(exagg::to_string(rep.scale))] = *rep.r;
    }
    exagg::write_file_atomic(outdir / "flags.json", exagg::flags_json(flags, thresholds, r_by_category));

    write_manifest(outdir, "flag",
                   {{"ratios", ratios_path},
                    {"hi", exagg::fmt_number(hi)},
                    {"lo", exagg::fmt_number(lo)},
                    {"min_support", std::to_string(min_support)}},
                   {{"ratios", ratios_path}}, {"flags.json"});
    return 0;
}

// ---------------------------------------------------------------------------
// profile

int cmd_profile(const CorpusOptions& corpus_opts, const LexiconOptions& lex_opts,
                const std::string& scale_str, bool per_word, const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    LoadedCorpus loaded = load_corpus(corpus_opts);
    const exagg::Corpus& corpus = loaded.corpus;
    const exagg::StrengthScale scale = *exagg::parse_scale(scale_str);
    const exagg::Normalization normalization =
        per_word ? exagg::Normalization::PerWord : exagg::Normalization::PerTweet;

    exagg::RoleLexicons lexicons;
    if (!lex_opts.liwc.empty()) lexicons.liwc = exagg::load_lexicon_file(lex_opts.liwc, "liwc");
    if (!lex_opts.slang.empty()) lexicons.slang = exagg::load_lexicon_file(lex_opts.slang, "slang");
    if (!lex_opts.hyperbolic.empty()) {
        lexicons.hyperbolic = exagg::load_lexicon_file(lex_opts.hyperbolic, "hyperbolic");
    }
    if (!lex_opts.contraction.empty()) {
        lexicons.contraction = exagg::load_lexicon_file(lex_opts.contraction, "contraction");
    }
    if (!lex_opts.stopwords.empty()) {
        lexicons.stopwords = exagg::load_lexicon_file(lex_opts.stopwords, "stopwords");
    }
    if (!lex_opts.phrases.empty()) lexicons.phrases = exagg::load_lexicon_file(lex_opts.phrases, "phrases");

    // group the collected tweets by author once; only resolvable chains count
    auto [usable, dropped_unresolvable] = resolvable_tweets(corpus.tweets, corpus);
    std::map<std::string, std::vector<exagg::Tweet>> by_author;
    for (auto& tweet : usable) by_author[tweet.author_id].push_back(std::move(tweet));

    std::vector<exagg::UserFeatureRow> rows;
    std::vector<std::string> skipped_empty;
    std::map<std::string, std::size_t> category_counts;
    for (const auto& [user_id, timeline] : corpus.timelines) {
        if (timeline.tweets.empty()) {
            skipped_empty.push_back(user_id);
            continue;
        }
        const auto it = by_author.find(user_id);
        const std::size_t n_exaggerated =
            it == by_author.end()
                ? 0
                : exagg::count_exaggerated_articles(it->second, corpus, scale);
        exagg::UserFeatureRow row;
        row.user_id = user_id;
        row.category = exagg::category_of_count(n_exaggerated);
        row.features = exagg::extract_features(timeline, lexicons, normalization);
        ++category_counts[std::string(exagg::to_string(row.category))];
        rows.push_back(std::move(row));
    }

    std::size_t users_without_timeline = 0;
    for (const auto& [author, tweets] : by_author) {
        if (corpus.timelines.find(author) == corpus.timelines.end()) ++users_without_timeline;
    }

    const std::vector<std::string> columns = exagg::feature_names(lexicons);
    exagg::write_file_atomic(outdir / "features.csv", exagg::features_csv(rows, columns));
    exagg::write_file_atomic(outdir / "features.schema.json", exagg::features_schema_json(columns));

    ordered_json summary;
    summary["users"] = rows.size();
    summary["category_counts"] = category_counts;
    summary["skipped_empty_timelines"] = skipped_empty;
    summary["users_without_timeline"] = users_without_timeline;
    summary["tweets_dropped_unresolvable"] = dropped_unresolvable;
    exagg::write_file_atomic(outdir / "profile_summary.json", summary.dump(2) + "\n");

    std::map<std::string, std::string> config = {{"documents", corpus_opts.documents},
                                                 {"tweets", corpus_opts.tweets},
                                                 {"timelines", corpus_opts.timelines},
                                                 {"scale", scale_str},
                                                 {"normalization", per_word ? "per_word" : "per_tweet"}};
    std::vector<InputFile> inputs = {{"documents", corpus_opts.documents},
                                     {"tweets", corpus_opts.tweets},
                                     {"timelines", corpus_opts.timelines}};
    auto add_lex = [&](const char* role, const std::string& path) {
        if (!path.empty()) {
            config[role] = path;
            inputs.push_back({role, path});
        }
    };
    add_lex("liwc", lex_opts.liwc);
    add_lex("slang", lex_opts.slang);
    add_lex("hyperbolic", lex_opts.hyperbolic);
    add_lex("contraction", lex_opts.contraction);
    add_lex("stopwords", lex_opts.stopwords);
    add_lex("phrases", lex_opts.phrases);
    write_manifest(outdir, "profile", config, inputs,
                   {"features.csv", "features.schema.json", "profile_summary.json"});
    return 0;
}

// ---------------------------------------------------------------------------
// train-eval

int cmd_traineval(const std::string& features_path, const std::string& model_str, std::size_t k,
                  std::uint64_t seed, std::size_t n_trees, std::size_t max_depth, std::size_t min_leaf,
                  double feature_fraction, unsigned threads, const std::string& outdir_str) {
    const fs::path outdir(outdir_str);
    const exagg::FeatureTable table = exagg::features_from_csv(exagg::detail::read_file(features_path));

    exagg::ModelSpec spec;
    spec.kind = model_str == "nb" ? exagg::ModelSpec::Kind::NaiveBayes : exagg::ModelSpec::Kind::Forest;
    spec.params.n_trees = n_trees;
    spec.params.max_depth = max_depth;
    spec.params.min_leaf = min_leaf;
    spec.params.feature_fraction = feature_fraction;
    spec.params.seed = seed;

    const exagg::CvResult cv = exagg::cross_validate(table.dataset, spec, k, seed, threads);
    exagg::write_file_atomic(outdir / "eval.csv", exagg::eval_csv(cv, spec.name()));

    const exagg::Model model = exagg::train_model(table.dataset, spec, threads);
    exagg::write_file_atomic(outdir / "model.json",
                             exagg::model_to_json(model, table.dataset.feature_names));

    std::map<std::string, std::string> config = {
        {"features", features_path},       {"model", spec.name()},
        {"k", std::to_string(k)},          {"seed", std::to_string(seed)},
        {"trees", std::to_string(n_trees)}, {"max_depth", std::to_string(max_depth)},
        {"min_leaf", std::to_string(min_leaf)},
        {"feature_fraction", exagg::fmt_number(feature_fraction)}};
    write_manifest(outdir, "train-eval", config, {{"features", features_path}},
                   {"eval.csv", "model.json"});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exaggerated health-news analysis toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(exagg::kToolName) + " " + exagg::kToolVersion);

    CorpusOptions corpus_opts;
    LexiconOptions lex_opts;
    std::string outdir;
    std::string scale = "all";
    std::string group_by;
    std::string kind;
    std::string ratios_path;
    std::string features_path;
    std::string model = "forest";
    double hi = 1.5, lo = 1.0 / 1.5;
    std::int64_t min_support = 5;
    double early_days = 1.0, year_days = 365.0;
    std::vector<std::string> domain_words = exagg::default_domain_words();
    bool per_word = false;
    std::size_t k = 10, n_trees = 100, max_depth = 0, min_leaf = 1;
    double feature_fraction = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    const auto scale_values = CLI::IsMember({"seven", "four", "two", "all"});
    const auto single_scale_values = CLI::IsMember({"seven", "four", "two"});

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", outdir, "output directory")->required();
        sub->add_option("--threads", threads, "worker cap, 0 = all cores (results are identical)");
        sub->set_config("--config", "", "flat key=value config file; flags override");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "validate and link the corpus files");
    ingest->add_option("--documents", corpus_opts.documents, "documents CSV/JSON")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--tweets", corpus_opts.tweets, "tweets JSONL")->check(CLI::ExistingFile);
    ingest->add_option("--timelines", corpus_opts.timelines, "timelines JSONL")->check(CLI::ExistingFile);
    add_common(ingest);

    CLI::App* label_cmd = app.add_subcommand("label", "per-document exaggeration labels");
    label_cmd->add_option("--documents", corpus_opts.documents, "documents CSV/JSON")
        ->required()
        ->check(CLI::ExistingFile);
    label_cmd->add_option("--scale", scale, "strength scale variant")->check(scale_values);
    add_common(label_cmd);

    CLI::App* report = app.add_subcommand("report", "exaggeration percentages by group");
    report->add_option("--documents", corpus_opts.documents, "documents CSV/JSON")
        ->required()
        ->check(CLI::ExistingFile);
    report->add_option("--group-by", group_by, "grouping key")
        ->required()
        ->check(CLI::IsMember({"source", "discipline"}));
    report->add_option("--kind", kind, "document kind")
        ->required()
        ->check(CLI::IsMember({"press", "news"}));
    report->add_option("--scale", scale, "strength scale variant")->check(scale_values);
    add_common(report);

    CLI::App* diffusion = app.add_subcommand("diffusion", "arrival, attribute and LIWC-ratio analysis");
    diffusion->add_option("--documents", corpus_opts.documents, "documents CSV/JSON")
        ->required()
        ->check(CLI::ExistingFile);
    diffusion->add_option("--tweets", corpus_opts.tweets, "tweets JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    add_lexicon_flags(diffusion, lex_opts);
    diffusion->get_option("--liwc")->required();
    diffusion->add_option("--scale", scale, "strength scale variant")->check(scale_values);
    diffusion->add_option("--early-days", early_days, "early bucket boundary in days");
    diffusion->add_option("--year-days", year_days, "mid/late boundary in days");
    diffusion->add_option("--domain-words", domain_words, "domain words removed from tweet text")
        ->delimiter(',');
    add_common(diffusion);

    CLI::App* flag = app.add_subcommand("flag", "extreme categories across all three scales");
    flag->add_option("--ratios", ratios_path, "ratios.csv from a --scale all diffusion run")
        ->required()
        ->check(CLI::ExistingFile);
    flag->add_option("--hi", hi, "high-ratio threshold");
    flag->add_option("--lo", lo, "low-ratio threshold");
    flag->add_option("--min-support", min_support, "minimum match-bearing tweets per bucket");
    add_common(flag);

    CLI::App* profile = app.add_subcommand("profile", "user categories and feature vectors");
    profile->add_option("--documents", corpus_opts.documents, "documents CSV/JSON")
        ->required()
        ->check(CLI::ExistingFile);
    profile->add_option("--tweets", corpus_opts.tweets, "tweets JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    profile->add_option("--timelines", corpus_opts.timelines, "timelines JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    add_lexicon_flags(profile, lex_opts);
    profile->add_option("--scale", scale, "strength scale variant")
        ->default_val("seven")
        ->check(single_scale_values);
    profile->add_flag("--per-word", per_word, "normalize lexical fractions per word instead of per tweet");
    add_common(profile);

    CLI::App* traineval = app.add_subcommand("train-eval", "cross-validated user classification");
    traineval->add_option("--features", features_path, "features.csv from the profile command")
        ->required()
        ->check(CLI::ExistingFile);
    traineval->add_option("--model", model, "classifier")->check(CLI::IsMember({"nb", "forest"}));
    traineval->add_option("--k", k, "number of stratified folds");
    traineval->add_option("--seed", seed, "seed for folds and forest randomness")->required();
    traineval->add_option("--trees", n_trees, "number of trees");
    traineval->add_option("--max-depth", max_depth, "tree depth cap, 0 = unlimited");
    traineval->add_option("--min-leaf", min_leaf, "minimum samples per leaf");
    traineval->add_option("--feature-fraction", feature_fraction,
                          "fraction of features tried per split, 0 = sqrt(d)");
    add_common(traineval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return fail_with_json(exagg::ErrorCode::ConfigError, e.what());
    }

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(corpus_opts, outdir);
        if (app.got_subcommand(label_cmd)) return cmd_label(corpus_opts, scale, outdir);
        if (app.got_subcommand(report)) return cmd_report(corpus_opts, group_by, kind, scale, outdir);
        if (app.got_subcommand(diffusion)) {
            return cmd_diffusion(corpus_opts, lex_opts, scale, early_days, year_days, domain_words,
                                 outdir);
        }
        if (app.got_subcommand(flag)) return cmd_flag(ratios_path, hi, lo, min_support, outdir);
        if (app.got_subcommand(profile)) return cmd_profile(corpus_opts, lex_opts, scale, per_word, outdir);
        if (app.got_subcommand(traineval)) {
            return cmd_traineval(features_path, model, k, seed, n_trees, max_depth, min_leaf,
                                 feature_fraction, threads, outdir);
        }
    } catch (const exagg::Error& e) {
        return fail_with_json(e.code(), e.what());
    } catch (const std::exception& e) {
        return fail_with_json(exagg::ErrorCode::IoError, e.what());
    }
    return 0;
}
