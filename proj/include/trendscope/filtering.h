#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trendscope/textprep.h"

namespace trendscope::filtering {

using textprep::CleanPost;

/// Criteria for attributing a post to Saudi Arabia. Geo and hashtag entries are
/// stored normalized; city names additionally in their token-chain form so they
/// match stemmed tokens and n-grams.
struct CountryFilterSpec {
    std::set<std::string> geo_names;
    std::set<std::string> hashtag_keys;
    std::set<std::string> city_names;
    std::set<std::string> city_terms;

    static CountryFilterSpec make(const std::vector<std::string>& geo_names,
                                  const std::vector<std::string>& hashtag_keys,
                                  const std::vector<std::string>& city_names,
                                  const textprep::Preprocessor& prep);
    static CountryFilterSpec defaults(const textprep::Preprocessor& prep);
};

bool is_country_relevant(const CleanPost& post, const CountryFilterSpec& spec);

struct CountryFilterResult {
    std::vector<CleanPost> kept;
    std::int64_t discarded = 0;
};

CountryFilterResult country_filter(const std::vector<CleanPost>& posts, const CountryFilterSpec& spec);

struct LexiconEntry {
    std::string surface;  // as written in the lexicon file
    std::string key;      // token-chain form, space-joined
    bool is_hashtag = false;
    std::size_t term_count = 0;
};

class TopicLexicon {
public:
    TopicLexicon() = default;
    TopicLexicon(std::string name, std::vector<LexiconEntry> entries);

    /// Entries are passed through the preprocessor so they compare equal to
    /// post tokens and n-grams. Duplicate keys keep their first surface form.
    static TopicLexicon from_phrases(std::string name, const std::vector<std::string>& phrases,
                                     const textprep::Preprocessor& prep);
    /// One entry per line; `#lexicon-name:` lines set the name; blank lines skipped.
    static TopicLexicon load(const std::filesystem::path& path, const textprep::Preprocessor& prep);

    const std::string& name() const { return name_; }
    const std::vector<LexiconEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    void add(LexiconEntry entry);

    /// Indices of the entries a post mentions.
    std::vector<std::size_t> matches(const CleanPost& post) const;

private:
    std::string name_;
    std::vector<LexiconEntry> entries_;
    std::map<std::string, std::size_t> by_key_;
};

/// Number of posts mentioning each entry, keyed by entry index.
/// Merging two partial counters is plain addition.
struct HitCounts {
    std::map<std::size_t, std::int64_t> per_entry;
    std::map<std::size_t, std::map<int, std::int64_t>> per_entry_year;

    void merge(const HitCounts& other);
};

struct TopicFilterResult {
    std::vector<CleanPost> kept;
    HitCounts hits;
};

/// Throws Error(Config) on an empty lexicon.
TopicFilterResult topic_filter(const std::vector<CleanPost>& posts, const TopicLexicon& lexicon);

/// 100 * kept / total per year, rounded to one decimal; years with zero total are absent.
std::map<int, double> sustainability_share(const std::map<int, std::int64_t>& corpus_by_year,
                                           const std::map<int, std::int64_t>& kept_by_year);

/// One-decimal rounding used for every reported percentage.
double round1(double pct);

}  // namespace trendscope::filtering
