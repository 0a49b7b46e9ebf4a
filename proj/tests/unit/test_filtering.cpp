#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "support.h"
#include "trendscope/filtering.h"

using namespace trendscope;
using namespace trendscope::filtering;

namespace {

CleanPost prepped(const std::string& id, const std::string& text, std::optional<std::string> geo = std::nullopt,
                  int year = 2022) {
    auto raw = testing::raw(id, text, year);
    raw.geo = std::move(geo);
    return testing::bundled_prep().preprocess(raw);
}

std::vector<std::string> ids(const std::vector<CleanPost>& posts) {
    std::vector<std::string> out;
    for (const auto& p : posts) out.push_back(p.id);
    return out;
}

const TopicLexicon& bundled_lexicon() {
    static const auto lex = TopicLexicon::load(testing::data_path("sustainability_lexicon.txt"), testing::bundled_prep());
    return lex;
}

}  // namespace

TEST_CASE("country filter keeps geo, hashtag and city mentions") {
    const auto spec = CountryFilterSpec::defaults(testing::bundled_prep());
    CHECK(is_country_relevant(prepped("a", "hello", "Saudi Arabia"), spec));
    CHECK(is_country_relevant(prepped("b", "hello #riyadh"), spec));
    CHECK_FALSE(is_country_relevant(prepped("c", "hello", "Egypt"), spec));
    CHECK(is_country_relevant(prepped("d", "new towers in Jeddah"), spec));
    CHECK(is_country_relevant(prepped("e", "hello #KSA", "Egypt"), spec));
    CHECK(is_country_relevant(prepped("f", "hello", "  ksa "), spec));

    auto r = country_filter({prepped("a", "x", "KSA"), prepped("b", "x", "Egypt"), prepped("c", "x")}, spec);
    CHECK(ids(r.kept) == std::vector<std::string>{"a"});
    CHECK(r.discarded == 2);
}

TEST_CASE("topic filter matches n-grams and hashtags") {
    const auto& prep = testing::bundled_prep();
    auto lex = TopicLexicon::from_phrases("t", {"renewable energy", "#SaudiGreenInitiative"}, prep);

    auto r = topic_filter({prepped("a", "Renewable energy is growing"), prepped("b", "love #SaudiGreenInitiative"),
                           prepped("c", "football tonight")},
                          lex);
    CHECK(ids(r.kept) == std::vector<std::string>{"a", "b"});
    CHECK(r.hits.per_entry.at(0) == 1);
    CHECK(r.hits.per_entry.at(1) == 1);
    CHECK(r.hits.per_entry_year.at(0).at(2022) == 1);
}

TEST_CASE("a post counts once per entry however often it repeats it") {
    auto lex = TopicLexicon::from_phrases("t", {"solar"}, testing::bundled_prep());
    auto r = topic_filter({prepped("a", "solar solar solar")}, lex);
    CHECK(r.hits.per_entry.at(0) == 1);
}

TEST_CASE("empty lexicon is a configuration error") {
    try {
        topic_filter({prepped("a", "x")}, TopicLexicon{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
}

TEST_CASE("bundled lexicon covers the keyword groups in both scripts") {
    const auto& lex = bundled_lexicon();
    CHECK(lex.entries().size() > 20);
    const auto& prep = testing::bundled_prep();
    for (const auto& text : {"Big plans for the NEOM eco-city project", "#SaudiGreenInitiative today", "solar power farms",
                             "مشاريع #الطاقة_المتجددة", "emissions reduction is working", "Vision 2030"}) {
        CHECK_FALSE(lex.matches(prep.preprocess(testing::raw("x", text))).empty());
    }
    CHECK(lex.matches(prep.preprocess(testing::raw("x", "football match tonight"))).empty());
}

TEST_CASE("sustainability share") {
    auto s = sustainability_share({{2018, 3'000'000}, {2024, 4'500'000}, {2025, 0}},
                                  {{2018, 240'000}, {2024, 990'000}});
    CHECK(s.at(2018) == 8.0);
    CHECK(s.at(2024) == 22.0);
    CHECK(s.count(2025) == 0);
    CHECK(round1(4700.0 / 30000.0 * 100) == 15.7);
    CHECK(round1(0.05) == 0.1);
}

TEST_CASE("hit counters merge by addition") {
    HitCounts a;
    a.per_entry = {{0, 2}, {1, 1}};
    a.per_entry_year[0] = {{2020, 2}};
    HitCounts b;
    b.per_entry = {{1, 3}, {2, 4}};
    b.per_entry_year[0] = {{2020, 1}, {2021, 1}};
    a.merge(b);
    CHECK(a.per_entry == std::map<std::size_t, std::int64_t>{{0, 2}, {1, 4}, {2, 4}});
    CHECK(a.per_entry_year[0] == std::map<int, std::int64_t>{{2020, 3}, {2021, 1}});
}

// ---------------------------------------------------------------------------
// properties

namespace {

const std::vector<std::string> kWords = {"solar", "energy", "renewable", "football", "music", "trees", "neom",
                                         "riyadh", "carbon", "tourism", "green", "coffee", "#ksa", "#vision2030",
                                         "cairo", "جدة", "الطاقة", "مشاريع"};
const std::vector<std::string> kGeos = {"Saudi Arabia", "KSA", "Egypt", "UAE", "saudi arabia"};

std::vector<CleanPost> random_posts(std::mt19937_64& rng, int n) {
    std::vector<CleanPost> posts;
    for (int i = 0; i < n; ++i) {
        std::string text;
        const int len = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < len; ++k) text += kWords[rng() % kWords.size()] + " ";
        std::optional<std::string> geo;
        if (rng() % 2) geo = kGeos[rng() % kGeos.size()];
        posts.push_back(prepped("p" + std::to_string(i), text, geo, 2018 + static_cast<int>(rng() % 7)));
    }
    return posts;
}

}  // namespace

TEST_CASE("property: adding a lexicon entry never shrinks the kept set") {
    std::mt19937_64 rng(31);
    const auto& prep = testing::bundled_prep();
    for (int round = 0; round < 150; ++round) {
        const auto posts = random_posts(rng, 15);
        std::vector<std::string> phrases = {kWords[rng() % kWords.size()]};
        const auto before = topic_filter(posts, TopicLexicon::from_phrases("t", phrases, prep));
        phrases.push_back(kWords[rng() % kWords.size()] + " " + kWords[rng() % kWords.size()]);
        phrases.push_back(kWords[rng() % kWords.size()]);
        const auto after = topic_filter(posts, TopicLexicon::from_phrases("t", phrases, prep));
        auto a = ids(before.kept);
        auto b = ids(after.kept);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
}

TEST_CASE("property: country filter is idempotent and kept counts add up") {
    std::mt19937_64 rng(32);
    const auto spec = CountryFilterSpec::defaults(testing::bundled_prep());
    for (int round = 0; round < 150; ++round) {
        const auto posts = random_posts(rng, 15);
        const auto once = country_filter(posts, spec);
        const auto twice = country_filter(once.kept, spec);
        CHECK(ids(twice.kept) == ids(once.kept));
        CHECK(twice.discarded == 0);
        CHECK(once.kept.size() + static_cast<std::size_t>(once.discarded) == posts.size());

        const auto topical = topic_filter(once.kept, bundled_lexicon());
        std::map<int, std::int64_t> years;
        for (const auto& p : topical.kept) ++years[corpus::year_of(p.timestamp)];
        std::int64_t by_year = 0;
        for (const auto& [y, n] : years) by_year += n;
        CHECK(by_year == static_cast<std::int64_t>(topical.kept.size()));
    }
}
