#include <catch_amalgamated.hpp>

#include <random>

#include "support.h"
#include "trendscope/pipeline.h"
#include "trendscope/report.h"
#include "trendscope/synth.h"

using namespace trendscope;
using namespace trendscope::report;
namespace fs = std::filesystem;

namespace {

const std::map<int, std::int64_t> kTotals = {{2018, 3000}, {2019, 3500}, {2020, 4000}, {2021, 5000},
                                             {2022, 5500}, {2023, 4500}, {2024, 4500}};
const std::map<int, std::int64_t> kKept = {{2018, 240}, {2019, 350}, {2020, 480}, {2021, 750},
                                           {2022, 990}, {2023, 900}, {2024, 990}};

// a small corpus of the default shape, written once per process
const fs::path& small_corpus() {
    static testing::TempDir dir;
    static const fs::path path = [] {
        auto spec = synth::SynthSpec::defaults();
        for (auto& t : spec.totals) t /= 10;
        synth::write(synth::generate(spec), dir.path());
        return dir / "posts.jsonl";
    }();
    return path;
}

Config small_config(const fs::path& out) {
    auto cfg = Config::defaults();
    cfg.set("input", small_corpus().string());
    cfg.set("out", out.string());
    cfg.set("gold_sentiment", (small_corpus().parent_path() / "gold_sentiment.tsv").string());
    cfg.set("min_cluster_size", "8");
    cfg.set("min_samples", "8");
    return cfg;
}

}  // namespace

TEST_CASE("yearly table on the Table 1 replica") {
    const auto t = yearly_table(kTotals, kKept);
    REQUIRE(t.rows.size() == 7);
    const std::vector<double> pct = {8.0, 10.0, 12.0, 15.0, 18.0, 20.0, 22.0};
    for (std::size_t i = 0; i < 7; ++i) CHECK(t.rows[i].pct == pct[i]);
    CHECK(t.total == 30000);
    CHECK(t.kept == 4700);
    CHECK(t.pct == 15.7);
    const auto csv = yearly_table_csv(t);
    CHECK(csv.rfind("year,total,pct,kept\n2018,3000,8.0,240\n", 0) == 0);
    CHECK(csv.find("\ntotal,30000,15.7,4700\n") != std::string::npos);
}

TEST_CASE("yearly table edge cases") {
    const auto one = yearly_table({{2020, 10}}, {{2020, 1}});
    CHECK(one.rows[0].pct == 10.0);
    CHECK(one.pct == 10.0);

    const auto none = yearly_table({{2020, 10}, {2021, 5}}, {});
    CHECK(none.rows[0].pct == 0.0);
    CHECK(none.rows[1].kept == 0);
    CHECK(none.pct == 0.0);
    CHECK(yearly_table_csv(none).find("total,15,0.0,0") != std::string::npos);

    CHECK_THROWS_AS(yearly_table({{2020, 10}}, {{2021, 1}}), Error);
    CHECK_THROWS_AS(yearly_table({{2020, 1}}, {{2020, 2}}), Error);
}

TEST_CASE("keyword frequency rows") {
    const auto& prep = testing::bundled_prep();
    const auto lex = filtering::TopicLexicon::from_phrases("t", {"solar", "trees", "carbon"}, prep);
    filtering::HitCounts hits;
    hits.per_entry = {{0, 3}, {1, 5}};
    hits.per_entry_year[0] = {{2020, 1}, {2021, 2}};
    hits.per_entry_year[1] = {{2020, 5}};
    const auto rows = keyword_frequency(lex, hits, {2020, 2021});
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].keyword == "trees");
    CHECK(rows[0].count == 5);
    CHECK(rows[1].count == 0);
    CHECK(rows[2].keyword == "solar");
    CHECK(rows[4].keyword == "carbon");
    CHECK(rows[4].count == 0);
    CHECK(rows[5].count == 0);

    testing::TempDir dir;
    emit_keyword_frequency(dir / "k.csv", dir / "k.json", rows);
    CHECK(testing::slurp(dir / "k.csv").rfind("keyword,year,count\ntrees,2020,5\n", 0) == 0);
    CHECK(nlohmann::json::parse(testing::slurp(dir / "k.json")).is_array());
}

TEST_CASE("cluster table") {
    testing::TempDir dir;
    clustering::ClusterSummary s;
    s.cluster_id = 0;
    s.name = "solar";
    s.size = 12;
    s.top_terms = {{"solar", 2.0}, {"grid", 1.0}};
    s.keywords = {"Solar power", "#SolarPower"};
    emit_cluster_table(dir / "c.csv", {s});
    CHECK(testing::slurp(dir / "c.csv") ==
          "cluster_id,name,size,top_terms,keywords\n0,solar,12,solar|grid,Solar power|#SolarPower\n");
}

TEST_CASE("pipeline end to end on a small corpus") {
    testing::TempDir out;
    const auto rep = pipeline::run_pipeline(small_config(out.path()));
    for (const auto& a : rep.artifacts) CHECK(fs::exists(out / a));
    for (const char* name : {"yearly_table.csv", "keyword_frequency.csv", "clusters.json", "trends.csv",
                             "sentiment_distribution.json", "run_report.json", "post_stages.csv"}) {
        CHECK(fs::exists(out / name));
    }
    for (const auto& e : fs::directory_iterator(out.path())) CHECK(e.path().extension() != ".partial");

    const auto& c = rep.counts;
    CHECK(c.ingested == 3000);
    CHECK(c.ingested >= c.country_kept);
    CHECK(c.country_kept >= c.topic_kept);
    CHECK(c.topic_kept >= c.clustered + c.noise);
    CHECK(rep.yearly.pct == 15.7);
    REQUIRE(rep.sentiment_shares.has_value());
    CHECK(rep.evaluation.has_value());

    const auto recomputed = pipeline::yearly_table_from_stages(out / "post_stages.csv");
    CHECK(yearly_table_csv(recomputed) == testing::slurp(out / "yearly_table.csv"));

    const auto report_json = nlohmann::json::parse(testing::slurp(out / "run_report.json"));
    CHECK(report_json.contains("counts"));
}

TEST_CASE("keyword rows add up to the filter hits") {
    testing::TempDir out;
    auto cfg = small_config(out.path());
    pipeline::run_pipeline(cfg, pipeline::Stage::TopicFilter);
    const auto& prep = testing::bundled_prep();
    const auto lex = filtering::TopicLexicon::load(cfg.get("lexicon"), prep);
    const auto kept = textprep::read_clean_jsonl(out / "kept_posts.jsonl");
    const auto direct = filtering::topic_filter(kept, lex);

    std::map<std::string, std::int64_t> from_csv;
    std::istringstream in(testing::slurp(out / "keyword_frequency.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        // keywords may contain commas only inside quotes; the bundled lexicon has none
        const auto last = line.rfind(',');
        const auto mid = line.rfind(',', last - 1);
        from_csv[line.substr(0, mid)] += std::stoll(line.substr(last + 1));
    }
    for (std::size_t i = 0; i < lex.entries().size(); ++i) {
        const auto it = direct.hits.per_entry.find(i);
        CHECK(from_csv[lex.entries()[i].surface] == (it == direct.hits.per_entry.end() ? 0 : it->second));
    }
}

TEST_CASE("a missing lexicon fails in the topic filter stage") {
    testing::TempDir out;
    auto cfg = small_config(out.path());
    cfg.set("lexicon", "/nonexistent/lexicon.txt");
    try {
        pipeline::run_pipeline(cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.rfind("stage topic_filter:", 0) == 0);
        CHECK(msg.find("/nonexistent/lexicon.txt") != std::string::npos);
    }
    CHECK_FALSE(fs::exists(out / "run_report.json"));
    CHECK_FALSE(fs::exists(out / "corpus.jsonl"));
}

TEST_CASE("reruns are byte-identical") {
    testing::TempDir a;
    testing::TempDir b;
    pipeline::run_pipeline(small_config(a.path()));
    pipeline::run_pipeline(small_config(b.path()));
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a.path())) {
        const auto name = e.path().filename().string();
        CHECK(testing::slurp(e.path()) == testing::slurp(b / name));
        ++files;
    }
    CHECK(files >= 10);
}

// ---------------------------------------------------------------------------
// properties

TEST_CASE("property: stage counts shrink and the yearly table is recomputable") {
    std::mt19937_64 rng(81);
    const std::vector<std::string> words = {"solar power", "#Vision2030", "football", "coffee", "renewable energy",
                                            "afforestation", "music", "carbon capture and storage", "weather"};
    const std::vector<std::string> geos = {"Saudi Arabia", "KSA", "Egypt", "", "UAE"};
    testing::TempDir work;
    for (int round = 0; round < 100; ++round) {
        std::string body;
        const int n = 1 + static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) {
            std::string text;
            for (int k = 0; k < 3; ++k) text += words[rng() % words.size()] + " ";
            if (rng() % 5 == 0) text += "#riyadh";
            nlohmann::json j = {{"id", "p" + std::to_string(i)},
                                {"timestamp", std::to_string(2018 + rng() % 7) + "-03-01T00:00:00Z"},
                                {"text", text}};
            const auto& g = geos[rng() % geos.size()];
            if (!g.empty()) j["geo"] = g;
            body += j.dump() + "\n";
            if (rng() % 10 == 0) body += "{bad\n";
        }
        const auto input = work.write("in" + std::to_string(round) + ".jsonl", body);
        auto cfg = Config::defaults();
        cfg.set("input", input.string());
        cfg.set("out", (work / ("out" + std::to_string(round))).string());
        cfg.set("min_cluster_size", "3");
        cfg.set("min_samples", "3");
        cfg.set("dimension", "32");
        report::RunReport rep;
        try {
            rep = pipeline::run_pipeline(cfg, pipeline::Stage::Label);
        } catch (const Error& e) {
            // more malformed than well-formed lines is a legitimate refusal
            CHECK(std::string(e.what()).rfind("stage ingest:", 0) == 0);
            continue;
        }
        const auto& c = rep.counts;
        CHECK(c.ingested >= c.country_kept);
        CHECK(c.country_kept >= c.topic_kept);
        CHECK(c.topic_kept >= c.clustered + c.noise);
        const auto recomputed = pipeline::yearly_table_from_stages(work / ("out" + std::to_string(round)) / "post_stages.csv");
        CHECK(recomputed.total == rep.yearly.total);
        CHECK(recomputed.kept == rep.yearly.kept);
        CHECK(yearly_table_csv(recomputed) == yearly_table_csv(rep.yearly));
    }
}
