#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trendscope/textprep.h"

namespace trendscope::features {

using textprep::CleanPost;

struct FeatureVector {
    std::string post_id;
    std::vector<double> values;
    double norm = 0.0;  // Euclidean norm of `values`
};

double euclidean_norm(const std::vector<double>& v);

/// Document frequencies over tokens and n-grams.
struct VocabularyStats {
    std::unordered_map<std::string, std::int64_t> df;
    std::int64_t documents = 0;

    /// Unseen terms count as df = 1, i.e. maximal idf.
    std::int64_t df_of(const std::string& term) const;
    void merge(const VocabularyStats& other);
};

/// Throws Error(Data) on empty input.
VocabularyStats fit_vocabulary(const std::vector<CleanPost>& posts);

/// Bag of tokens and n-grams of a post, with multiplicity, in sorted order.
std::map<std::string, std::int64_t> term_counts(const CleanPost& post);

/// Stable 64-bit term hash (FNV-1a with a splitmix64 finalizer, fixed seed).
std::uint64_t term_hash(std::string_view term);

/// Signed feature hashing of tf * (1 + ln(N / df)) followed by L2 normalization.
/// An all-zero vector is returned as is with norm 0. Requires dim >= 2.
FeatureVector embed_hashed_tfidf(const CleanPost& post, const VocabularyStats& stats, std::size_t dim);

std::vector<FeatureVector> embed_all(const std::vector<CleanPost>& posts, const VocabularyStats& stats,
                                     std::size_t dim);

enum class CoveragePolicy { Warn, Fail };

struct ExternalVectors {
    std::map<std::string, FeatureVector> vectors;
    std::size_t dimension = 0;
    std::vector<std::string> missing;  // expected ids without a row
    Warnings warnings;
};

/// Reads `post_id<TAB>v1,...,vD` (TSV) or `{"id": ..., "vec": [...]}` (.jsonl/.json).
/// Rows of differing dimension are fatal; ids outside `expected_ids` are ignored
/// with a warning; missing ids warn or fail depending on `policy`.
ExternalVectors load_external_vectors(const std::filesystem::path& path,
                                      const std::vector<std::string>& expected_ids,
                                      CoveragePolicy policy = CoveragePolicy::Warn);

/// Writes vectors in the TSV layout load_external_vectors() reads.
void write_vectors_tsv(const std::filesystem::path& path, const std::vector<FeatureVector>& vectors);

}  // namespace trendscope::features
