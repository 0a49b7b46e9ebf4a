#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "support.h"
#include "trendscope/sentiment.h"

using namespace trendscope;
using namespace trendscope::sentiment;
using testing::clean;

namespace {

std::vector<std::string> make_ids(int n, const std::string& prefix = "id") {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("lexicon scoring") {
    SentimentLexicon none;
    auto empty = score_lexicon(clean("a", {}), none);
    CHECK(empty.score == 0.0);
    CHECK(empty.label == Label::Neutral);

    auto pos = score_lexicon(clean("b", {"great", "solar"}), SentimentLexicon({{"great", 1.0}}));
    CHECK(pos.score == Catch::Approx(0.5));
    CHECK(pos.label == Label::Positive);

    auto neg = score_lexicon(clean("c", {"terrible", "delay"}), SentimentLexicon({{"terrible", -1.0}, {"delay", -0.5}}));
    CHECK(neg.score == Catch::Approx(-0.75));
    CHECK(neg.label == Label::Negative);
}

TEST_CASE("matched n-grams contribute and scores clamp") {
    SentimentLexicon lex({{"not good", -1.0}, {"good", 0.5}});
    auto r = score_lexicon(clean("a", {"not", "good"}), lex);
    CHECK(r.score == Catch::Approx(-0.25));
    auto sat = score_lexicon(clean("b", {"good", "good", "good"}), SentimentLexicon({{"good", 1.0}, {"good good", 1.0}}));
    CHECK(sat.score == 1.0);
}

TEST_CASE("label band") {
    CHECK(label_for(0.1) == Label::Neutral);
    CHECK(label_for(0.1000001) == Label::Positive);
    CHECK(label_for(-0.1) == Label::Neutral);
    CHECK(label_for(-0.11) == Label::Negative);
    CHECK(label_for(0.3, 0.5) == Label::Neutral);
}

TEST_CASE("lexicon weights are validated") {
    SentimentLexicon lex;
    CHECK_THROWS_AS(lex.add("x", 1.5), Error);
    lex.add("x", 0.5);
    lex.add("x", -0.5);
    CHECK(lex.weight("x") == 0.5);
}

TEST_CASE("bundled lexicon loads normalized terms") {
    auto lex = SentimentLexicon::load(testing::data_path("sentiment_lexicon.tsv"), testing::bundled_prep());
    CHECK(lex.size() > 20);
    CHECK(lex.weight("great") == 1.0);
    for (const auto& [t, w] : lex.weights()) {
        CHECK(w >= -1.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("external scores") {
    testing::TempDir dir;
    auto r = load_external_scores(dir.write("s.tsv", "a\t0.9\nb\t0.05\nc\t-0.4\n"), {"a", "b", "c"});
    REQUIRE(r.size() == 3);
    CHECK(r[0].label == Label::Positive);
    CHECK(r[1].label == Label::Neutral);
    CHECK(r[2].label == Label::Negative);

    try {
        load_external_scores(dir.write("bad.tsv", "a\t0.2\nb\t1.7\n"), {"a", "b"});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Data);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    Warnings w;
    load_external_scores(dir / "s.tsv", {"a", "b", "c", "d"}, kDefaultTau, &w);
    CHECK(w.size() == 1);
}

TEST_CASE("stored scores reload with the same labels") {
    testing::TempDir dir;
    std::vector<SentimentResult> rs = {{"a", Label::Positive, 0.25}, {"b", Label::Negative, -1.0}, {"c", Label::Neutral, 0.0}};
    write_scores_tsv(dir / "s.tsv", rs);
    auto back = load_external_scores(dir / "s.tsv", {"a", "b", "c"});
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].score == rs[i].score);
        CHECK(back[i].label == rs[i].label);
    }
}

TEST_CASE("split sizes follow largest remainders") {
    CHECK(split_sizes(100, {}) == std::array<std::size_t, 3>{80, 10, 10});
    CHECK(split_sizes(101, {}) == std::array<std::size_t, 3>{81, 10, 10});
    CHECK(split_sizes(1000, {}) == std::array<std::size_t, 3>{800, 100, 100});
    CHECK(split_sizes(10, {}) == std::array<std::size_t, 3>{8, 1, 1});
    CHECK(split_sizes(15, {}) == std::array<std::size_t, 3>{12, 2, 1});
}

TEST_CASE("splits partition the labeled ids deterministically") {
    const auto ids = make_ids(100);
    auto a = make_split(ids, {}, 7);
    auto b = make_split(ids, {}, 7);
    CHECK(a.train_ids.size() == 80);
    CHECK(a.validation_ids.size() == 10);
    CHECK(a.test_ids.size() == 10);
    CHECK(a.train_ids == b.train_ids);
    CHECK(a.test_ids == b.test_ids);
    CHECK(make_split(ids, {}, 8).test_ids != a.test_ids);

    CHECK_THROWS_AS(make_split(make_ids(9), {}, 1), Error);
}

TEST_CASE("evaluation on a hand-built case") {
    EvalSplit split;
    split.test_ids = make_ids(10, "t");
    split.train_ids = {"x"};
    const std::vector<Label> g = {Label::Positive, Label::Positive, Label::Positive, Label::Positive, Label::Negative,
                                  Label::Negative, Label::Negative, Label::Neutral,  Label::Neutral,  Label::Neutral};
    const std::vector<Label> p = {Label::Positive, Label::Positive, Label::Positive, Label::Negative, Label::Negative,
                                  Label::Negative, Label::Positive, Label::Neutral,  Label::Neutral,  Label::Negative};
    std::map<std::string, Label> gold{{"x", Label::Positive}};
    std::vector<SentimentResult> results{{"x", Label::Negative, -1.0}};
    for (int i = 0; i < 10; ++i) {
        gold[split.test_ids[i]] = g[i];
        results.push_back({split.test_ids[i], p[i], 0.0});
    }
    auto m = evaluate(results, gold, split);
    CHECK(m.evaluated == 10);
    CHECK(m.accuracy == Catch::Approx(0.7));
    CHECK(m.confusion[0] == std::array<std::int64_t, 3>{3, 1, 0});
    CHECK(m.confusion[1] == std::array<std::int64_t, 3>{1, 2, 0});
    CHECK(m.confusion[2] == std::array<std::int64_t, 3>{0, 1, 2});
    CHECK(m.per_class[0].precision == Catch::Approx(0.75));
    CHECK(m.per_class[0].recall == Catch::Approx(0.75));
    CHECK(m.per_class[1].precision == Catch::Approx(0.5));
    CHECK(m.per_class[1].recall == Catch::Approx(2.0 / 3));
    CHECK(m.per_class[1].f1 == Catch::Approx(4.0 / 7));
    CHECK(m.per_class[2].precision == Catch::Approx(1.0));
    CHECK(m.per_class[2].f1 == Catch::Approx(0.8));
    CHECK(m.per_class[2].support == 3);
}

TEST_CASE("perfect and all-neutral predictions") {
    const auto ids = make_ids(100);
    std::map<std::string, Label> gold;
    std::vector<SentimentResult> perfect;
    std::vector<SentimentResult> neutral;
    for (int i = 0; i < 100; ++i) {
        const Label l = i % 10 < 5 ? Label::Positive : i % 10 < 8 ? Label::Negative : Label::Neutral;
        gold[ids[i]] = l;
        perfect.push_back({ids[i], l, 0.0});
        neutral.push_back({ids[i], Label::Neutral, 0.0});
    }
    EvalSplit all;
    all.test_ids = ids;
    auto m = evaluate(perfect, gold, all);
    CHECK(m.accuracy == 1.0);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (r != c) CHECK(m.confusion[r][c] == 0);
        }
    }
    CHECK(evaluate(neutral, gold, all).accuracy == Catch::Approx(0.2));

    gold.erase(ids[3]);
    CHECK_THROWS_AS(evaluate(perfect, gold, all), Error);
}

TEST_CASE("sentiment distribution") {
    std::vector<SentimentResult> rs;
    for (int i = 0; i < 5; ++i) rs.push_back({"p", Label::Positive, 1});
    for (int i = 0; i < 3; ++i) rs.push_back({"n", Label::Negative, -1});
    for (int i = 0; i < 2; ++i) rs.push_back({"u", Label::Neutral, 0});
    auto s = sentiment_distribution(rs);
    CHECK(s.positive == Catch::Approx(0.5));
    CHECK(s.negative == Catch::Approx(0.3));
    CHECK(s.neutral == Catch::Approx(0.2));
    std::reverse(rs.begin(), rs.end());
    auto r = sentiment_distribution(rs);
    CHECK(r.positive == s.positive);
    CHECK(r.negative == s.negative);

    auto all = sentiment_distribution({{"a", Label::Positive, 1}});
    CHECK(all.positive == 1.0);
    CHECK(all.neutral == 0.0);
    CHECK_THROWS_AS(sentiment_distribution({}), Error);
}

// ---------------------------------------------------------------------------
// properties

TEST_CASE("property: labels recompute from scores") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const SentimentLexicon lex({{"good", 0.6}, {"bad", -0.7}, {"ok", 0.1}, {"very bad", -0.3}});
    const std::vector<std::string> pool = {"good", "bad", "ok", "very", "solar", "tree"};
    for (int round = 0; round < 300; ++round) {
        const double tau = std::abs(u(rng)) * 0.5;
        std::vector<std::string> tokens;
        const int n = static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) tokens.push_back(pool[rng() % pool.size()]);
        const auto r = score_lexicon(clean("x", tokens), lex, tau);
        CHECK(r.score >= -1.0);
        CHECK(r.score <= 1.0);
        CHECK(label_for(r.score, tau) == r.label);
        const Label expect = r.score > tau ? Label::Positive : r.score < -tau ? Label::Negative : Label::Neutral;
        CHECK(r.label == expect);
    }
}

TEST_CASE("property: scores ignore token order") {
    std::mt19937_64 rng(52);
    const SentimentLexicon lex({{"good", 0.6}, {"bad", -0.7}, {"ok", 0.1}, {"great", 1.0}});
    const std::vector<std::string> pool = {"good", "bad", "ok", "great", "solar", "tree", "wind"};
    for (int round = 0; round < 300; ++round) {
        std::vector<std::string> tokens;
        const int n = static_cast<int>(rng() % 10);
        for (int i = 0; i < n; ++i) tokens.push_back(pool[rng() % pool.size()]);
        auto shuffled = tokens;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(score_lexicon(clean("x", tokens), lex).score == score_lexicon(clean("x", shuffled), lex).score);
    }
}

TEST_CASE("property: splits ignore input order and partition the ids") {
    std::mt19937_64 rng(53);
    for (int round = 0; round < 150; ++round) {
        const int n = 10 + static_cast<int>(rng() % 200);
        auto ids = make_ids(n, "u" + std::to_string(round) + "_");
        const std::uint64_t seed = rng();
        const auto a = make_split(ids, {}, seed);
        std::swap(ids[rng() % ids.size()], ids[rng() % ids.size()]);
        std::shuffle(ids.begin(), ids.end(), rng);
        const auto b = make_split(ids, {}, seed);
        CHECK(as_set(a.train_ids) == as_set(b.train_ids));
        CHECK(as_set(a.validation_ids) == as_set(b.validation_ids));
        CHECK(as_set(a.test_ids) == as_set(b.test_ids));

        const auto sizes = split_sizes(n, {});
        CHECK(a.train_ids.size() == sizes[0]);
        CHECK(a.validation_ids.size() == sizes[1]);
        CHECK(a.test_ids.size() == sizes[2]);
        CHECK(std::abs(static_cast<double>(sizes[0]) - 0.8 * n) <= 1.0);
        CHECK(std::abs(static_cast<double>(sizes[1]) - 0.1 * n) <= 1.0);
        CHECK(std::abs(static_cast<double>(sizes[2]) - 0.1 * n) <= 1.0);

        std::set<std::string> all;
        for (const auto* part : {&a.train_ids, &a.validation_ids, &a.test_ids}) all.insert(part->begin(), part->end());
        CHECK(all.size() == static_cast<std::size_t>(n));
    }
}
