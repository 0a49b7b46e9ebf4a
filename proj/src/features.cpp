#include "trendscope/features.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trendscope::features {

double euclidean_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::int64_t VocabularyStats::df_of(const std::string& term) const {
    auto it = df.find(term);
    return it == df.end() ? 1 : it->second;
}

void VocabularyStats::merge(const VocabularyStats& other) {
    for (const auto& [t, n] : other.df) df[t] += n;
    documents += other.documents;
}

std::map<std::string, std::int64_t> term_counts(const CleanPost& post) {
    std::map<std::string, std::int64_t> tf;
    for (const auto& t : post.tokens) ++tf[t];
    for (const auto& g : post.ngrams) ++tf[g];
    return tf;
}

VocabularyStats fit_vocabulary(const std::vector<CleanPost>& posts) {
    if (posts.empty()) fail(ErrorKind::Data, "cannot fit vocabulary on zero posts");
    VocabularyStats stats;
    stats.documents = static_cast<std::int64_t>(posts.size());
    for (const auto& p : posts) {
        for (const auto& [term, n] : term_counts(p)) ++stats.df[term];
    }
    return stats;
}

std::uint64_t term_hash(std::string_view term) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ 0x5452454e44534350ULL;  // offset basis ^ seed
    for (unsigned char c : term) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

FeatureVector embed_hashed_tfidf(const CleanPost& post, const VocabularyStats& stats, std::size_t dim) {
    if (dim < 2) fail(ErrorKind::Usage, "embedding dimension must be at least 2");
    FeatureVector fv;
    fv.post_id = post.id;
    fv.values.assign(dim, 0.0);
    const double n_docs = static_cast<double>(std::max<std::int64_t>(stats.documents, 1));
    for (const auto& [term, tf] : term_counts(post)) {
        const double df = static_cast<double>(std::max<std::int64_t>(stats.df_of(term), 1));
        const double weight = static_cast<double>(tf) * (1.0 + std::log(n_docs / df));
        const auto h = term_hash(term);
        const double sign = (h >> 63) ? -1.0 : 1.0;
        fv.values[h % dim] += sign * weight;
    }
    double norm = euclidean_norm(fv.values);
    if (norm > 0.0) {
        for (auto& v : fv.values) v /= norm;
        fv.norm = euclidean_norm(fv.values);
    }
    return fv;
}

std::vector<FeatureVector> embed_all(const std::vector<CleanPost>& posts, const VocabularyStats& stats,
                                     std::size_t dim) {
    std::vector<FeatureVector> out(posts.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < posts.size(); ++i) out[i] = embed_hashed_tfidf(posts[i], stats, dim);
    return out;
}

namespace {

std::vector<double> parse_values(std::string_view s, const std::string& where) {
    std::vector<double> v;
    for (const auto& part : split(s, ',')) {
        auto t = trim(part);
        try {
            std::size_t pos = 0;
            double d = std::stod(t, &pos);
            if (pos != t.size() || !std::isfinite(d)) throw std::invalid_argument(t);
            v.push_back(d);
        } catch (const std::exception&) {
            fail(ErrorKind::Data, where + ": not a finite number: '" + t + "'");
        }
    }
    return v;
}

}  // namespace

ExternalVectors load_external_vectors(const std::filesystem::path& path,
                                      const std::vector<std::string>& expected_ids, CoveragePolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read vector file: " + path.string());
    auto ext = path.extension().string();
    const bool jsonl = ext == ".jsonl" || ext == ".json";
    std::set<std::string> expected(expected_ids.begin(), expected_ids.end());

    ExternalVectors out;
    std::size_t ignored = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        FeatureVector fv;
        if (jsonl) {
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
                fv.post_id = obj.at("id").get<std::string>();
                fv.values = obj.at("vec").get<std::vector<double>>();
            } catch (const nlohmann::json::exception& e) {
                fail(ErrorKind::Data, where + ": " + e.what());
            }
        } else {
            auto tab = line.find('\t');
            if (tab == std::string::npos) fail(ErrorKind::Data, where + ": expected post_id<TAB>values");
            fv.post_id = trim(std::string_view(line).substr(0, tab));
            fv.values = parse_values(std::string_view(line).substr(tab + 1), where);
        }
        if (fv.values.empty()) fail(ErrorKind::Data, where + ": empty vector");
        if (out.dimension == 0) out.dimension = fv.values.size();
        if (fv.values.size() != out.dimension) {
            fail(ErrorKind::Data, where + ": dimension " + std::to_string(fv.values.size()) +
                                      " differs from " + std::to_string(out.dimension));
        }
        if (!expected.count(fv.post_id)) {
            ++ignored;
            continue;
        }
        fv.norm = euclidean_norm(fv.values);
        out.vectors[fv.post_id] = std::move(fv);
    }
    if (ignored > 0) {
        out.warnings.push_back(path.string() + ": ignored " + std::to_string(ignored) + " vectors for unexpected ids");
    }
    for (const auto& id : expected_ids) {
        if (!out.vectors.count(id)) out.missing.push_back(id);
    }
    if (!out.missing.empty()) {
        std::string msg = path.string() + ": no vector for " + std::to_string(out.missing.size()) + " of " +
                          std::to_string(expected_ids.size()) + " posts:";
        for (std::size_t i = 0; i < std::min<std::size_t>(out.missing.size(), 10); ++i) msg += " " + out.missing[i];
        if (policy == CoveragePolicy::Fail) fail(ErrorKind::Data, msg);
        out.warnings.push_back(msg);
    }
    return out;
}

void write_vectors_tsv(const std::filesystem::path& path, const std::vector<FeatureVector>& vectors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    char buf[32];
    for (const auto& v : vectors) {
        os << v.post_id << '\t';
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", v.values[i]);
            if (i) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace trendscope::features
