#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trendscope/common.h"

namespace trendscope::corpus {

enum class Platform { X, Facebook, Instagram, TikTok, GoogleNews, Reddit, Other };

std::string_view to_string(Platform p);
/// Case-insensitive; "twitter" maps to X, anything unrecognised to Other.
Platform parse_platform(std::string_view s);

/// Largest accepted engagement count. Keeps any sum of a few million posts
/// far away from int64 overflow.
inline constexpr std::int64_t kMaxCount = std::int64_t{1} << 40;

struct EngagementMetrics {
    std::int64_t likes = 0;
    std::int64_t comments = 0;
    std::int64_t shares = 0;
    std::int64_t saves = 0;

    std::int64_t total() const { return likes + comments + shares + saves; }
    bool operator==(const EngagementMetrics&) const = default;
};

/// Engagement as crawled: each counter may be missing independently.
struct Engagement {
    std::optional<std::int64_t> likes;
    std::optional<std::int64_t> comments;
    std::optional<std::int64_t> shares;
    std::optional<std::int64_t> saves;

    /// Missing counters read as zero.
    EngagementMetrics resolved() const;
    bool operator==(const Engagement&) const = default;
};

struct RawPost {
    std::string id;
    Platform platform = Platform::Other;
    std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
    std::string text;
    std::optional<std::string> geo;
    std::vector<std::string> hashtags;  // lowercase, no leading '#'
    Engagement engagement;
    std::optional<std::string> lang;

    bool operator==(const RawPost&) const = default;
};

struct Reject {
    int line = 0;
    std::string reason;
    bool operator==(const Reject&) const = default;
};

struct Provenance {
    std::vector<std::string> sources;
    std::int64_t ingested_at = 0;  // wall-clock seconds; never written to run outputs
};

struct Corpus {
    std::vector<RawPost> posts;
    Provenance provenance;
    std::map<int, std::int64_t> counts;  // per calendar year
    std::vector<Reject> rejects;
    Warnings warnings;
};

/// Builds a corpus and its per-year counts from an ordered post list.
Corpus make_corpus(std::vector<RawPost> posts);

enum class Format { Jsonl, Csv };

/// Picks the format from the file extension (.csv, otherwise JSONL).
Format detect_format(const std::filesystem::path& path);
std::optional<Format> parse_format(std::string_view s);

struct TimeRange {
    std::int64_t start = 0;  // inclusive
    std::int64_t end = 0;    // exclusive
    static TimeRange years(int first, int last);
    static TimeRange dates(std::string_view first_day, std::string_view last_day);
};

struct IngestOptions {
    TimeRange range = TimeRange::years(2018, 2024);
    /// Samples of offending lines quoted in the fatal schema error.
    std::size_t error_samples = 5;
};

/// Reads a JSONL or CSV file. Malformed records are collected in `rejects`;
/// more than half malformed is a fatal data error.
Corpus ingest(const std::filesystem::path& path, Format format, const IngestOptions& opts = {});
Corpus ingest_text(std::string_view text, Format format, const std::string& source,
                   const IngestOptions& opts = {});

enum class ImputeField { Geo, Likes, Comments, Shares, Saves };

std::optional<ImputeField> parse_impute_field(std::string_view s);
std::string_view to_string(ImputeField f);

struct ImputeResult {
    Corpus corpus;
    std::map<ImputeField, std::int64_t> imputed;  // per field, number of values filled
};

/// Fills missing values with the per-platform mode, falling back to the corpus-wide
/// mode. Ties go to the smallest value.
ImputeResult impute_missing(const Corpus& corpus, const std::set<ImputeField>& fields);

std::map<int, std::int64_t> yearly_counts(const Corpus& corpus);
std::map<int, std::int64_t> yearly_counts(const std::vector<RawPost>& posts);

// Time helpers
std::optional<std::int64_t> parse_timestamp(std::string_view iso);
std::string format_timestamp(std::int64_t ts);
int year_of(std::int64_t ts);
int month_of(std::int64_t ts);
std::int64_t make_timestamp(int year, int month, int day, int hour = 0, int minute = 0,
                            int second = 0);

// Record (de)serialisation in the ingestion schema.
nlohmann::ordered_json to_json(const RawPost& post);
/// Throws Error(Data) with a reason when the object violates the schema.
RawPost post_from_json(const nlohmann::json& obj);

void write_jsonl(const std::filesystem::path& path, const std::vector<RawPost>& posts);
std::string to_jsonl(const std::vector<RawPost>& posts);

}  // namespace trendscope::corpus
