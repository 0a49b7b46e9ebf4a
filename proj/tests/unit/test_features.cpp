#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.h"
#include "trendscope/features.h"

using namespace trendscope;
using namespace trendscope::features;
using testing::clean;

namespace {

double cosine(const FeatureVector& a, const FeatureVector& b) {
    double dot = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    return dot;
}

}  // namespace

TEST_CASE("document frequencies") {
    auto two = fit_vocabulary({clean("a", {"solar", "panel"}), clean("b", {"solar"})});
    CHECK(two.documents == 2);
    CHECK(two.df_of("solar") == 2);
    CHECK(two.df_of("solar panel") == 1);

    auto three = fit_vocabulary({clean("a", {"wind"}), clean("b", {"solar"}), clean("c", {"solar"})});
    CHECK(three.documents == 3);
    CHECK(three.df_of("wind") == 1);
    CHECK(three.df_of("never seen") == 1);

    CHECK_THROWS_AS(fit_vocabulary({}), Error);
}

TEST_CASE("a term repeated in one post counts once towards df") {
    auto s = fit_vocabulary({clean("a", {"solar", "solar", "solar"})});
    CHECK(s.df_of("solar") == 1);
    CHECK(s.df_of("solar solar") == 1);
}

TEST_CASE("term hash is a fixed function") {
    // values computed independently from the FNV-1a/splitmix64 definition
    CHECK(term_hash("") == 0x5611e9487151d58eULL);
    CHECK(term_hash("solar") == 0x8c623a101a2d4de4ULL);
    CHECK(term_hash("الطاقه") == 0xb6e3785c362d92ebULL);
    CHECK(term_hash("saudi green") == 0x0db6bec3e8710580ULL);
}

TEST_CASE("hashed tf-idf matches a direct computation") {
    const std::vector<CleanPost> posts = {clean("a", {"solar", "panel", "solar"}), clean("b", {"solar", "wind"}),
                                          clean("c", {"tree"})};
    const auto stats = fit_vocabulary(posts);
    const std::size_t dim = 64;
    const auto fv = embed_hashed_tfidf(posts[0], stats, dim);

    // tf: solar 2, panel 1, "solar panel" 1, "panel solar" 1, "solar panel solar" 1
    const std::vector<std::pair<std::string, double>> terms = {
        {"solar", 2 * (1 + std::log(3.0 / 2))},
        {"panel", 1 + std::log(3.0)},
        {"solar panel", 1 + std::log(3.0)},
        {"panel solar", 1 + std::log(3.0)},
        {"solar panel solar", 1 + std::log(3.0)},
    };
    std::vector<double> expect(dim, 0.0);
    for (const auto& [t, w] : terms) {
        const auto h = term_hash(t);
        expect[h % dim] += ((h >> 63) ? -1.0 : 1.0) * w;
    }
    double n = 0;
    for (double v : expect) n += v * v;
    n = std::sqrt(n);
    for (std::size_t i = 0; i < dim; ++i) CHECK(fv.values[i] == Catch::Approx(expect[i] / n).margin(1e-12));
    CHECK(fv.norm == Catch::Approx(1.0).margin(1e-12));
    CHECK(fv.post_id == "a");
}

TEST_CASE("empty posts embed to the zero vector") {
    const auto stats = fit_vocabulary({clean("a", {"solar"})});
    const auto fv = embed_hashed_tfidf(clean("e", {}), stats, 16);
    CHECK(fv.norm == 0.0);
    CHECK(std::all_of(fv.values.begin(), fv.values.end(), [](double v) { return v == 0.0; }));
    CHECK_THROWS_AS(embed_hashed_tfidf(clean("e", {}), stats, 1), Error);
}

TEST_CASE("identical posts embed identically") {
    const auto stats = fit_vocabulary({clean("a", {"solar", "wind"}), clean("b", {"tree"})});
    const auto x = embed_hashed_tfidf(clean("x", {"solar", "wind", "tree"}), stats, 256);
    const auto y = embed_hashed_tfidf(clean("y", {"solar", "wind", "tree"}), stats, 256);
    CHECK(x.values == y.values);
}

TEST_CASE("external vectors in TSV and JSONL") {
    testing::TempDir dir;
    std::string tsv;
    for (const char* id : {"a", "b", "c"}) {
        tsv += std::string(id) + "\t";
        for (int i = 0; i < 384; ++i) tsv += (i ? "," : "") + std::to_string(i * 0.001);
        tsv += "\n";
    }
    auto v = load_external_vectors(dir.write("v.tsv", tsv), {"a", "b", "c"});
    CHECK(v.vectors.size() == 3);
    CHECK(v.dimension == 384);
    CHECK(v.warnings.empty());

    auto j = load_external_vectors(dir.write("v.jsonl", "{\"id\":\"a\",\"vec\":[3,4]}\n{\"id\":\"z\",\"vec\":[1,0]}\n"),
                                   {"a", "b"});
    CHECK(j.vectors.at("a").norm == Catch::Approx(5.0));
    CHECK(j.missing == std::vector<std::string>{"b"});
    CHECK(j.warnings.size() == 2);  // extra id and missing id

    CHECK_THROWS_AS(load_external_vectors(dir / "v.jsonl", {"a", "b"}, CoveragePolicy::Fail), Error);
}

TEST_CASE("external vectors with mixed dimensions are rejected") {
    testing::TempDir dir;
    std::string tsv;
    for (int r = 0; r < 3; ++r) {
        const int d = r == 1 ? 384 : 512;
        tsv += "p" + std::to_string(r) + "\t";
        for (int i = 0; i < d; ++i) tsv += i ? ",0.5" : "0.5";
        tsv += "\n";
    }
    try {
        load_external_vectors(dir.write("v.tsv", tsv), {"p0", "p1", "p2"});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Data);
    }
}

TEST_CASE("missing external ids are listed") {
    testing::TempDir dir;
    auto v = load_external_vectors(dir.write("v.tsv", "a\t1,0\nb\t0,1\nc\t1,1\nd\t0,0\n"), {"a", "b", "c", "d", "e"});
    CHECK(v.vectors.size() == 4);
    CHECK(v.missing == std::vector<std::string>{"e"});
    REQUIRE(v.warnings.size() == 1);
    CHECK(v.warnings[0].find("e") != std::string::npos);
}

TEST_CASE("written vectors read back unchanged") {
    testing::TempDir dir;
    const auto stats = fit_vocabulary({clean("a", {"solar", "wind"}), clean("b", {"tree", "desert"})});
    const auto vs = embed_all({clean("a", {"solar", "wind"}), clean("b", {"tree", "desert"})}, stats, 32);
    write_vectors_tsv(dir / "v.tsv", vs);
    auto back = load_external_vectors(dir / "v.tsv", {"a", "b"});
    CHECK(back.vectors.at("a").values == vs[0].values);
    CHECK(back.vectors.at("b").values == vs[1].values);
}

// ---------------------------------------------------------------------------
// properties

namespace {

std::vector<CleanPost> random_corpus(std::mt19937_64& rng, int n, const std::string& prefix = "w") {
    std::vector<CleanPost> posts;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> tokens;
        const int len = static_cast<int>(rng() % 8);
        for (int k = 0; k < len; ++k) tokens.push_back(prefix + std::to_string(rng() % 20));
        posts.push_back(clean("p" + std::to_string(i), tokens));
    }
    return posts;
}

}  // namespace

TEST_CASE("property: norms are zero or one and df stays within N") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 200; ++round) {
        const auto posts = random_corpus(rng, 1 + static_cast<int>(rng() % 15));
        const auto stats = fit_vocabulary(posts);
        for (const auto& [t, df] : stats.df) {
            CHECK(df >= 1);
            CHECK(df <= stats.documents);
        }
        for (const auto& fv : embed_all(posts, stats, 2 + rng() % 300)) {
            const bool ok = fv.norm == 0.0 || std::abs(fv.norm - 1.0) <= 1e-9;
            CHECK(ok);
            CHECK(std::abs(euclidean_norm(fv.values) - fv.norm) <= 1e-9);
        }
    }
}

TEST_CASE("property: permuting posts leaves each vector unchanged") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 100; ++round) {
        auto posts = random_corpus(rng, 2 + static_cast<int>(rng() % 10));
        const auto stats = fit_vocabulary(posts);
        const auto before = embed_all(posts, stats, 128);
        std::vector<std::size_t> order(posts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<CleanPost> shuffled;
        for (auto i : order) shuffled.push_back(posts[i]);
        const auto after = embed_all(shuffled, fit_vocabulary(shuffled), 128);
        for (std::size_t k = 0; k < order.size(); ++k) CHECK(after[k].values == before[order[k]].values);
    }
}

TEST_CASE("property: disjoint vocabularies are nearly orthogonal at dim 4096") {
    std::mt19937_64 rng(43);
    int below = 0;
    const int rounds = 200;
    for (int round = 0; round < rounds; ++round) {
        auto a = random_corpus(rng, 1, "left")[0];
        auto b = random_corpus(rng, 1, "right")[0];
        if (a.tokens.empty()) a = clean("a", {"left"});
        if (b.tokens.empty()) b = clean("b", {"right"});
        const auto stats = fit_vocabulary({a, b});
        const double c = cosine(embed_hashed_tfidf(a, stats, 4096), embed_hashed_tfidf(b, stats, 4096));
        if (std::abs(c) < 0.1) ++below;
    }
    CHECK(below >= rounds * 99 / 100);
}
