#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "support.h"
#include "trendscope/synth.h"

using namespace trendscope;
using namespace trendscope::synth;

namespace {

struct Aggregates {
    std::map<int, std::int64_t> totals;
    std::map<sentiment::Label, std::int64_t> sentiment;
    std::map<int, std::int64_t> clusters;
    std::size_t gold = 0;
};

Aggregates aggregate(const SynthCorpus& c) {
    Aggregates a;
    a.totals = corpus::yearly_counts(c.posts);
    for (const auto& [id, l] : c.gold_sentiment) ++a.sentiment[l];
    for (const auto& [id, t] : c.gold_clusters) ++a.clusters[t];
    a.gold = c.gold_sentiment.size();
    return a;
}

SynthSpec scaled(std::int64_t divisor, std::uint64_t seed) {
    auto s = SynthSpec::defaults();
    for (auto& t : s.totals) t /= divisor;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("apportionment by largest remainder") {
    CHECK(apportion(10, {0.5, 0.3, 0.2}) == std::vector<std::int64_t>{5, 3, 2});
    CHECK(apportion(101, {0.8, 0.1, 0.1}) == std::vector<std::int64_t>{81, 10, 10});
    CHECK(apportion(3, {1, 1}) == std::vector<std::int64_t>{2, 1});
    CHECK(apportion(0, {0.5, 0.5}) == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("default spec encodes Table 1 and the sentiment mix") {
    const auto spec = SynthSpec::defaults();
    CHECK(spec.totals == std::vector<std::int64_t>{3000, 3500, 4000, 5000, 5500, 4500, 4500});
    CHECK(spec.shares == std::vector<double>{0.08, 0.10, 0.12, 0.15, 0.18, 0.20, 0.22});
    CHECK(spec.templates.size() == 4);

    const auto c = generate(spec);
    CHECK(c.posts.size() == 30000);
    CHECK(c.gold_sentiment.size() == 4700);
    const auto a = aggregate(c);
    CHECK(a.sentiment.at(sentiment::Label::Positive) == 2350);
    CHECK(a.sentiment.at(sentiment::Label::Negative) == 1410);
    CHECK(a.sentiment.at(sentiment::Label::Neutral) == 940);
    CHECK(a.totals.at(2018) == 3000);
    CHECK(a.totals.at(2024) == 4500);
}

TEST_CASE("invalid specs are refused") {
    auto s = SynthSpec::defaults();
    s.shares[0] = 1.2;
    CHECK_THROWS_AS(generate(s), Error);
    s = SynthSpec::defaults();
    s.positive = 0.6;
    CHECK_THROWS_AS(generate(s), Error);
    s = SynthSpec::defaults();
    s.templates.resize(1);
    CHECK_THROWS_AS(generate(s), Error);
    s = SynthSpec::defaults();
    s.shares.pop_back();
    CHECK_THROWS_AS(generate(s), Error);
}

TEST_CASE("written corpus ingests cleanly and gold files align") {
    testing::TempDir dir;
    const auto c = generate(scaled(20, 5));
    write(c, dir.path());
    const auto ingested = corpus::ingest(dir / "posts.jsonl", corpus::Format::Jsonl);
    CHECK(ingested.posts.size() == c.posts.size());
    CHECK(ingested.rejects.empty());
    const auto gold = sentiment::load_gold_labels(dir / "gold_sentiment.tsv");
    CHECK(gold.size() == c.gold_sentiment.size());
    std::set<std::string> ids;
    for (const auto& p : c.posts) ids.insert(p.id);
    for (const auto& [id, l] : gold) CHECK(ids.count(id) == 1);
    CHECK(testing::slurp(dir / "gold_clusters.tsv").find('\t') != std::string::npos);
}

TEST_CASE("generation is deterministic") {
    const auto a = generate(scaled(10, 9));
    const auto b = generate(scaled(10, 9));
    CHECK(a.posts == b.posts);
    CHECK(a.gold_sentiment == b.gold_sentiment);
    CHECK(a.gold_clusters == b.gold_clusters);
}

// ---------------------------------------------------------------------------
// properties

TEST_CASE("property: seeds change texts but not aggregates") {
    std::mt19937_64 rng(91);
    const auto base = generate(scaled(30, 1));
    const auto agg = aggregate(base);
    for (int round = 0; round < 100; ++round) {
        const auto other = generate(scaled(30, 2 + rng() % 1'000'000));
        const auto a = aggregate(other);
        CHECK(a.totals == agg.totals);
        CHECK(a.sentiment == agg.sentiment);
        CHECK(a.clusters == agg.clusters);
        std::size_t same = 0;
        for (std::size_t i = 0; i < base.posts.size(); ++i) same += base.posts[i].text == other.posts[i].text;
        CHECK(same < base.posts.size() / 2);
    }
}

TEST_CASE("property: shares and template counts follow the spec") {
    std::mt19937_64 rng(92);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        SynthSpec s = SynthSpec::defaults();
        s.seed = rng();
        const std::size_t years = 1 + rng() % 4;
        s.totals.clear();
        s.shares.clear();
        for (std::size_t y = 0; y < years; ++y) {
            s.totals.push_back(static_cast<std::int64_t>(20 + rng() % 200));
            s.shares.push_back(u(rng) * 0.5);
        }
        const double p = u(rng);
        const double n = (1 - p) * u(rng);
        s.positive = p;
        s.negative = n;
        s.neutral = 1 - p - n;
        s.templates.resize(2 + rng() % 3);

        const auto c = generate(s);
        auto a = aggregate(c);
        std::int64_t topical = 0;
        for (std::size_t y = 0; y < years; ++y) {
            const int year = s.first_year + static_cast<int>(y);
            CHECK(a.totals.at(year) == s.totals[y]);
            topical += std::llround(s.shares[y] * static_cast<double>(s.totals[y]));
        }
        CHECK(static_cast<std::int64_t>(a.gold) == topical);
        const auto mix = apportion(topical, {s.positive, s.negative, s.neutral});
        CHECK(a.sentiment[sentiment::Label::Positive] == mix[0]);
        CHECK(a.sentiment[sentiment::Label::Negative] == mix[1]);
        CHECK(a.sentiment[sentiment::Label::Neutral] == mix[2]);

        std::set<int> templates;
        for (const auto& [id, t] : c.gold_clusters) {
            if (t >= 0) templates.insert(t);
        }
        CHECK(templates.size() <= s.templates.size());
        for (int t : templates) CHECK(t < static_cast<int>(s.templates.size()));
        if (topical >= 10 * static_cast<std::int64_t>(s.templates.size())) CHECK(templates.size() == s.templates.size());
    }
}
