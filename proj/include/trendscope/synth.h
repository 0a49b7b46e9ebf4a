#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "trendscope/corpus.h"
#include "trendscope/sentiment.h"

namespace trendscope::synth {

struct SynthTemplate {
    std::string name;
    std::vector<std::string> phrases;     // lexicon keywords, hashtags included
    std::vector<std::string> vocabulary;  // topical words outside the lexicon
};

struct SynthSpec {
    std::uint64_t seed = 42;
    int first_year = 2018;
    std::vector<std::int64_t> totals;  // posts per year
    std::vector<double> shares;        // sustainability share per year
    double positive = 0.5;
    double negative = 0.3;
    double neutral = 0.2;
    std::vector<SynthTemplate> templates;
    double noise_fraction = 0.02;        // sustainability posts mixing two templates
    double offshore_keyword_rate = 0.3;  // non-Saudi posts that still mention lexicon terms
    double missing_rate = 0.05;          // per engagement counter

    /// Table 1 at 1:1000, a 50/30/20 sentiment mix and the four Table 2 keyword groups.
    static SynthSpec defaults();
    /// Throws Error(Usage) on an infeasible spec.
    void validate() const;
};

struct SynthCorpus {
    std::vector<corpus::RawPost> posts;
    std::vector<std::pair<std::string, sentiment::Label>> gold_sentiment;  // sustainability posts only
    std::vector<std::pair<std::string, int>> gold_clusters;                // template id, -1 for mixed posts
};

SynthCorpus generate(const SynthSpec& spec);

/// Largest-remainder apportionment of `n` over `weights`; ties go to the lower index.
std::vector<std::int64_t> apportion(std::int64_t n, const std::vector<double>& weights);

/// Writes `posts.jsonl`, `gold_sentiment.tsv` and `gold_clusters.tsv` into `dir`.
void write(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace trendscope::synth
