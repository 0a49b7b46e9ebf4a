#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trendscope/textprep.h"

namespace trendscope::sentiment {

using textprep::CleanPost;

enum class Label { Positive = 0, Negative = 1, Neutral = 2 };

std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

inline constexpr double kDefaultTau = 0.1;

/// positive iff score > tau, negative iff score < -tau, neutral otherwise.
Label label_for(double score, double tau = kDefaultTau);

struct SentimentResult {
    std::string post_id;
    Label label = Label::Neutral;
    double score = 0.0;  // in [-1, 1]
};

/// Normalized term -> polarity weight in [-1, 1].
class SentimentLexicon {
public:
    SentimentLexicon() = default;
    explicit SentimentLexicon(const std::map<std::string, double>& weights);

    /// Throws Error(Data) for weights outside [-1, 1]. An existing term keeps its first weight.
    void add(const std::string& term, double weight);
    /// TSV `term<TAB>weight`; terms go through the preprocessor's token chain.
    static SentimentLexicon load(const std::filesystem::path& path, const textprep::Preprocessor& prep);

    std::optional<double> weight(const std::string& term) const;
    std::size_t size() const { return weights_.size(); }
    const std::map<std::string, double>& weights() const { return weights_; }

private:
    std::map<std::string, double> weights_;
};

/// Sum of matched token and n-gram weights over max(1, token_count), clamped to [-1, 1].
SentimentResult score_lexicon(const CleanPost& post, const SentimentLexicon& lexicon, double tau = kDefaultTau);

/// TSV `post_id<TAB>score`. Labels are recomputed from scores with `tau`.
/// A score outside [-1, 1] is fatal with its row number.
std::vector<SentimentResult> load_external_scores(const std::filesystem::path& path,
                                                  const std::vector<std::string>& expected_ids,
                                                  double tau = kDefaultTau, Warnings* warnings = nullptr);

void write_scores_tsv(const std::filesystem::path& path, const std::vector<SentimentResult>& results);

/// TSV `post_id<TAB>{positive|negative|neutral}`.
std::map<std::string, Label> load_gold_labels(const std::filesystem::path& path);

struct EvalSplit {
    std::vector<std::string> train_ids;
    std::vector<std::string> validation_ids;
    std::vector<std::string> test_ids;
};

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

/// Partition sizes by largest-remainder rounding of the ratios.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

/// Seeded shuffle keyed on (seed, id) so the partition ignores input order.
/// Requires at least 10 distinct ids.
EvalSplit make_split(const std::vector<std::string>& labeled_ids, const SplitRatios& ratios,
                     std::uint64_t seed);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
};

struct EvalMetrics {
    double accuracy = 0.0;
    std::array<ClassMetrics, 3> per_class{};  // indexed by Label
    /// rows = gold, columns = predicted, both indexed by Label
    std::array<std::array<std::int64_t, 3>, 3> confusion{};
    std::int64_t evaluated = 0;
};

/// Metrics over `split.test_ids` only.
EvalMetrics evaluate(const std::vector<SentimentResult>& results, const std::map<std::string, Label>& gold,
                     const EvalSplit& split);

struct SentimentShares {
    double positive = 0.0;
    double negative = 0.0;
    double neutral = 0.0;
};

/// Throws Error(Data) on empty input.
SentimentShares sentiment_distribution(const std::vector<SentimentResult>& results);

}  // namespace trendscope::sentiment
