#include "trendscope/pipeline.h"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "trendscope/clustering.h"
#include "trendscope/corpus.h"
#include "trendscope/csv.h"
#include "trendscope/features.h"
#include "trendscope/filtering.h"
#include "trendscope/sentiment.h"
#include "trendscope/textprep.h"
#include "trendscope/trends.h"

namespace trendscope::pipeline {

namespace fs = std::filesystem;

std::string to_string(Stage s) {
    switch (s) {
        case Stage::Ingest: return "ingest";
        case Stage::Impute: return "impute";
        case Stage::Preprocess: return "preprocess";
        case Stage::CountryFilter: return "country_filter";
        case Stage::TopicFilter: return "topic_filter";
        case Stage::Embed: return "embed";
        case Stage::Sentiment: return "sentiment";
        case Stage::Cluster: return "cluster";
        case Stage::Label: return "label";
        case Stage::Trends: return "trends";
        case Stage::Forecasts: return "forecasts";
        case Stage::Emit: return "emit";
    }
    return "unknown";
}

namespace {

// Output files are staged as `<name>.partial` and promoted together.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    fs::path stage(const std::string& name) {
        names_.push_back(name);
        return dir_ / (name + ".partial");
    }

    void promote() {
        for (const auto& n : names_) {
            std::error_code ec;
            fs::rename(dir_ / (n + ".partial"), dir_ / n, ec);
            if (ec) fail(ErrorKind::Io, "cannot finalize " + (dir_ / n).string() + ": " + ec.message());
        }
    }

    const std::vector<std::string>& names() const { return names_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    os << body;
}

template <class F>
auto in_stage(Stage s, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), "stage " + to_string(s) + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Internal, "stage " + to_string(s) + ": " + e.what());
    }
}

corpus::Format input_format(const Config& cfg, const fs::path& input) {
    const auto f = cfg.get("format");
    if (f == "auto") return corpus::detect_format(input);
    auto parsed = corpus::parse_format(f);
    if (!parsed) fail(ErrorKind::Config, "unknown format '" + f + "'");
    return *parsed;
}

std::optional<fs::path> optional_path(const Config& cfg, const std::string& key) {
    auto v = cfg.get(key);
    if (v.empty()) return std::nullopt;
    return fs::path(v);
}

}  // namespace

report::RunReport run_pipeline(const Config& cfg, Stage until) {
    report::RunReport rep;
    for (const auto& [k, v] : cfg.entries()) {
        if (k != "out") rep.config[k] = v;
    }
    Outputs out(cfg.get("out"));
    const auto seed = cfg.get_u64("seed");
    auto reached = [&](Stage s) { return static_cast<int>(s) <= static_cast<int>(until); };
    auto finish = [&]() {
        rep.artifacts = out.names();
        rep.artifacts.push_back("run_report.json");
        auto report_path = out.stage("run_report.json");
        write_text(report_path, report::to_json(rep).dump(2) + "\n");
        out.promote();
        return rep;
    };

    // ingest
    auto corp = in_stage(Stage::Ingest, [&] {
        const fs::path input = cfg.get("input");
        if (input.empty()) fail(ErrorKind::Usage, "no input file configured (set `input` or pass --input)");
        corpus::IngestOptions opts;
        opts.range = corpus::TimeRange::dates(cfg.get("range_start"), cfg.get("range_end"));
        return corpus::ingest(input, input_format(cfg, input), opts);
    });
    rep.counts.ingested = static_cast<std::int64_t>(corp.posts.size());
    rep.counts.rejected = static_cast<std::int64_t>(corp.rejects.size());
    rep.warnings.insert(rep.warnings.end(), corp.warnings.begin(), corp.warnings.end());
    if (until == Stage::Ingest) {
        corpus::write_jsonl(out.stage("corpus.jsonl"), corp.posts);
        std::string rej = "line,reason\n";
        for (const auto& r : corp.rejects) rej += csv::join_row({std::to_string(r.line), r.reason}) + "\n";
        write_text(out.stage("rejects.csv"), rej);
        return finish();
    }

    // impute
    corp = in_stage(Stage::Impute, [&] {
        std::set<corpus::ImputeField> fields;
        for (const auto& f : cfg.get_list("impute_fields")) {
            auto parsed = corpus::parse_impute_field(f);
            if (!parsed) fail(ErrorKind::Config, "unknown impute field '" + f + "'");
            fields.insert(*parsed);
        }
        if (corp.posts.empty()) return corp;
        return corpus::impute_missing(corp, fields).corpus;
    });

    // preprocess
    const auto prep = in_stage(Stage::Preprocess, [&] {
        return textprep::Preprocessor::from_files(cfg.get("stopwords_en"), cfg.get("stopwords_ar"), cfg.get("lemmas"));
    });
    auto clean = in_stage(Stage::Preprocess, [&] { return textprep::preprocess_all(prep, corp.posts); });
    if (until == Stage::Preprocess || until == Stage::Impute) {
        textprep::write_clean_jsonl(out.stage("clean_posts.jsonl"), clean);
        return finish();
    }

    // country and topic filters
    auto country = in_stage(Stage::CountryFilter, [&] {
        auto spec = filtering::CountryFilterSpec::make(cfg.get_list("geo_names"), cfg.get_list("hashtag_keys"),
                                                       cfg.get_list("city_names"), prep);
        return filtering::country_filter(clean, spec);
    });
    rep.counts.country_kept = static_cast<std::int64_t>(country.kept.size());
    filtering::TopicLexicon lexicon;
    auto topic = in_stage(Stage::TopicFilter, [&] {
        lexicon = filtering::TopicLexicon::load(cfg.get("lexicon"), prep);
        return filtering::topic_filter(country.kept, lexicon);
    });
    auto& kept = topic.kept;
    rep.counts.topic_kept = static_cast<std::int64_t>(kept.size());

    std::set<std::string> country_ids;
    std::set<std::string> topic_ids;
    for (const auto& p : country.kept) country_ids.insert(p.id);
    for (const auto& p : kept) topic_ids.insert(p.id);
    const auto corpus_years = corpus::yearly_counts(corp.posts);
    std::map<int, std::int64_t> kept_years;
    for (const auto& p : kept) ++kept_years[corpus::year_of(p.timestamp)];
    rep.yearly = report::yearly_table(corpus_years, kept_years);
    {
        std::vector<int> years;
        for (const auto& [y, c] : corpus_years) years.push_back(y);
        report::emit_yearly_table(out.stage("yearly_table.csv"), rep.yearly);
        auto rows = report::keyword_frequency(lexicon, topic.hits, years);
        report::emit_keyword_frequency(out.stage("keyword_frequency.csv"), out.stage("keyword_frequency.json"), rows);
    }
    auto write_stages = [&](const std::map<std::string, int>& cluster_of) {
        std::string body = "post_id,year,country_kept,topic_kept,cluster\n";
        for (const auto& p : corp.posts) {
            auto c = cluster_of.find(p.id);
            body += csv::join_row({p.id, std::to_string(corpus::year_of(p.timestamp)),
                                   country_ids.count(p.id) ? "1" : "0", topic_ids.count(p.id) ? "1" : "0",
                                   c == cluster_of.end() ? "" : std::to_string(c->second)}) +
                    "\n";
        }
        write_text(out.stage("post_stages.csv"), body);
    };
    if (!reached(Stage::Embed)) {
        write_stages({});
        textprep::write_clean_jsonl(out.stage("kept_posts.jsonl"), kept);
        return finish();
    }

    // embed
    auto vectors = in_stage(Stage::Embed, [&] {
        if (auto ext = optional_path(cfg, "external_vectors")) {
            const auto policy = cfg.get("coverage_policy") == "fail" ? features::CoveragePolicy::Fail
                                                                     : features::CoveragePolicy::Warn;
            std::vector<std::string> ids;
            for (const auto& p : kept) ids.push_back(p.id);
            auto loaded = features::load_external_vectors(*ext, ids, policy);
            rep.warnings.insert(rep.warnings.end(), loaded.warnings.begin(), loaded.warnings.end());
            std::vector<features::FeatureVector> vs;
            for (const auto& p : kept) {
                auto it = loaded.vectors.find(p.id);
                features::FeatureVector fv;
                fv.post_id = p.id;
                fv.values = it == loaded.vectors.end() ? std::vector<double>(loaded.dimension, 0.0) : it->second.values;
                fv.norm = features::euclidean_norm(fv.values);
                vs.push_back(std::move(fv));
            }
            return vs;
        }
        const auto dim = static_cast<std::size_t>(cfg.get_int("dimension"));
        if (kept.empty()) return std::vector<features::FeatureVector>{};
        return features::embed_all(kept, features::fit_vocabulary(kept), dim);
    });
    if (until == Stage::Embed) {
        write_stages({});
        features::write_vectors_tsv(out.stage("vectors.tsv"), vectors);
        return finish();
    }

    // sentiment
    const double tau = cfg.get_double("tau");
    auto scores = in_stage(Stage::Sentiment, [&] {
        std::vector<sentiment::SentimentResult> rs;
        if (auto ext = optional_path(cfg, "external_scores")) {
            std::vector<std::string> ids;
            for (const auto& p : kept) ids.push_back(p.id);
            auto loaded = sentiment::load_external_scores(*ext, ids, tau, &rep.warnings);
            std::map<std::string, sentiment::SentimentResult> by_id;
            for (auto& r : loaded) by_id[r.post_id] = r;
            for (const auto& p : kept) {
                auto it = by_id.find(p.id);
                rs.push_back(it == by_id.end() ? sentiment::SentimentResult{p.id, sentiment::Label::Neutral, 0.0} : it->second);
            }
        } else {
            auto lex = sentiment::SentimentLexicon::load(cfg.get("sentiment_lexicon"), prep);
            for (const auto& p : kept) rs.push_back(sentiment::score_lexicon(p, lex, tau));
        }
        if (!rs.empty()) rep.sentiment_shares = sentiment::sentiment_distribution(rs);
        if (auto gold_path = optional_path(cfg, "gold_sentiment")) {
            auto gold = sentiment::load_gold_labels(*gold_path);
            std::vector<std::string> labeled;
            for (const auto& p : kept) {
                if (gold.count(p.id)) labeled.push_back(p.id);
            }
            const auto ratios = cfg.get_list("split_ratios");
            if (ratios.size() != 3) fail(ErrorKind::Config, "split_ratios needs three values");
            sentiment::SplitRatios r{std::stod(ratios[0]), std::stod(ratios[1]), std::stod(ratios[2])};
            rep.evaluation = sentiment::evaluate(rs, gold, sentiment::make_split(labeled, r, seed));
        }
        return rs;
    });
    {
        std::string body = "post_id,score,label\n";
        for (const auto& s : scores) {
            body += csv::join_row({s.post_id, trends::format_number(s.score), std::string(sentiment::to_string(s.label))}) + "\n";
        }
        write_text(out.stage("sentiment.csv"), body);
        nlohmann::ordered_json j;
        if (rep.sentiment_shares) {
            j["shares"] = {{"positive", rep.sentiment_shares->positive},
                           {"negative", rep.sentiment_shares->negative},
                           {"neutral", rep.sentiment_shares->neutral}};
        }
        j["count"] = scores.size();
        if (rep.evaluation) j["evaluation"] = report::to_json(*rep.evaluation);
        write_text(out.stage("sentiment_distribution.json"), j.dump(2) + "\n");
    }
    if (until == Stage::Sentiment) {
        write_stages({});
        return finish();
    }

    // cluster and label
    clustering::ClusterModel model;
    in_stage(Stage::Cluster, [&] {
        clustering::HdbscanParams params;
        params.min_cluster_size = static_cast<std::size_t>(cfg.get_int("min_cluster_size"));
        params.min_samples = static_cast<std::size_t>(cfg.get_int("min_samples"));
        params.metric = clustering::parse_metric(cfg.get("metric"));
        params.lambda_eps = cfg.get_double("lambda_eps");
        clustering::Matrix points;
        points.reserve(vectors.size());
        for (const auto& v : vectors) points.push_back(v.values);
        if (points.size() <= params.min_samples) {
            rep.warnings.push_back("too few posts to cluster (" + std::to_string(points.size()) + "), all marked noise");
            model.params = params;
            model.n = points.size();
            model.labels.assign(points.size(), -1);
        } else {
            model = clustering::hdbscan(points, params);
        }
    });
    for (int l : model.labels) (l < 0 ? rep.counts.noise : rep.counts.clustered) += 1;
    rep.clusters = in_stage(Stage::Label, [&] {
        std::map<int, std::string> names;
        for (const auto& [k, v] : cfg.with_prefix("cluster_name.")) {
            try {
                names[std::stoi(k)] = v;
            } catch (const std::exception&) {
                fail(ErrorKind::Config, "cluster_name key needs a numeric id: " + k);
            }
        }
        auto summaries =
            clustering::label_clusters(kept, model.labels, static_cast<std::size_t>(cfg.get_int("top_k")), names);
        clustering::assign_keywords(summaries, lexicon, kept, model.labels);
        return summaries;
    });
    {
        std::vector<std::string> ids;
        std::map<std::string, int> cluster_of;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            ids.push_back(kept[i].id);
            cluster_of[kept[i].id] = model.labels[i];
        }
        write_text(out.stage("clusters.json"), clustering::to_json(model, rep.clusters, ids).dump(2) + "\n");
        report::emit_cluster_table(out.stage("clusters.csv"), rep.clusters);
        write_stages(cluster_of);
    }
    if (!reached(Stage::Trends)) return finish();

    // trends and forecasts
    const auto bucket = in_stage(Stage::Trends, [&] { return trends::parse_bucket(cfg.get("bucket")); });
    auto series = in_stage(Stage::Trends, [&] {
        std::vector<double> s;
        for (const auto& r : scores) s.push_back(r.score);
        return trends::build_series(kept, s, model.labels, bucket, &rep.warnings);
    });
    std::vector<trends::Forecast> forecasts;
    if (reached(Stage::Forecasts)) {
        forecasts = in_stage(Stage::Forecasts, [&] {
            trends::ForecastOptions fo;
            fo.model = trends::parse_model(cfg.get("model"));
            fo.horizon = static_cast<std::size_t>(cfg.get_int("horizon"));
            if (auto hs = cfg.get("horizon_start"); !hs.empty()) fo.horizon_start = trends::parse_period(hs, bucket);
            fo.lstm.window = static_cast<std::size_t>(cfg.get_int("window"));
            fo.lstm.hidden = static_cast<std::size_t>(cfg.get_int("hidden"));
            fo.lstm.lr = cfg.get_double("lr");
            fo.lstm.epochs = static_cast<std::size_t>(cfg.get_int("epochs"));
            fo.lstm.clip_norm = cfg.get_double("clip_norm");
            fo.lstm.seed = seed;
            return trends::forecast_all(series, fo, &rep.warnings);
        });
    }
    in_stage(Stage::Emit, [&] { trends::write_trends_csv(out.stage("trends.csv"), series, forecasts); });
    return in_stage(Stage::Emit, finish);
}

report::YearlyTable yearly_table_from_stages(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const auto records = csv::parse(ss.str());
    if (records.empty() || records[0].fields.size() < 4 || records[0].fields[1] != "year") {
        fail(ErrorKind::Data, path.string() + ": not a post_stages.csv file");
    }
    std::map<int, std::int64_t> total;
    std::map<int, std::int64_t> kept;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i].fields;
        if (f.size() < 4) fail(ErrorKind::Data, path.string() + ":" + std::to_string(records[i].line) + ": short row");
        const int year = std::stoi(f[1]);
        ++total[year];
        if (f[3] == "1") ++kept[year];
    }
    return report::yearly_table(total, kept);
}

}  // namespace trendscope::pipeline
