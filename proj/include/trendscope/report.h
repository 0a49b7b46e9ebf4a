#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trendscope/clustering.h"
#include "trendscope/config.h"
#include "trendscope/filtering.h"
#include "trendscope/sentiment.h"

namespace trendscope::report {

struct YearRow {
    int year = 0;
    std::int64_t total = 0;
    double pct = 0.0;  // one decimal
    std::int64_t kept = 0;
};

struct YearlyTable {
    std::vector<YearRow> rows;
    std::int64_t total = 0;
    std::int64_t kept = 0;
    double pct = 0.0;
};

/// Kept years must be a subset of corpus years; corpus years without kept posts read as 0.
YearlyTable yearly_table(const std::map<int, std::int64_t>& corpus_counts,
                         const std::map<int, std::int64_t>& kept_counts);

/// `year,total,pct,kept` plus a `total` footer row.
std::string yearly_table_csv(const YearlyTable& table);
void emit_yearly_table(const std::filesystem::path& path, const YearlyTable& table);

struct KeywordRow {
    std::string keyword;
    int year = 0;
    std::int64_t count = 0;
};

/// Long format over `years`; keywords by total count descending, then by name.
std::vector<KeywordRow> keyword_frequency(const filtering::TopicLexicon& lexicon, const filtering::HitCounts& hits,
                                          const std::vector<int>& years);
void emit_keyword_frequency(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                            const std::vector<KeywordRow>& rows);

/// Table 2 shape: `cluster_id,name,size,top_terms,keywords`, list cells joined by '|'.
void emit_cluster_table(const std::filesystem::path& path, const std::vector<clustering::ClusterSummary>& summaries);

struct StageCounts {
    std::int64_t ingested = 0;
    std::int64_t rejected = 0;
    std::int64_t country_kept = 0;
    std::int64_t topic_kept = 0;
    std::int64_t clustered = 0;
    std::int64_t noise = 0;
};

struct RunReport {
    std::map<std::string, std::string> config;
    StageCounts counts;
    YearlyTable yearly;
    std::optional<sentiment::SentimentShares> sentiment_shares;
    std::optional<sentiment::EvalMetrics> evaluation;
    std::vector<clustering::ClusterSummary> clusters;
    std::vector<std::string> artifacts;  // file names relative to the output directory
    Warnings warnings;
};

nlohmann::ordered_json to_json(const sentiment::EvalMetrics& m);
nlohmann::ordered_json to_json(const RunReport& report);

}  // namespace trendscope::report
