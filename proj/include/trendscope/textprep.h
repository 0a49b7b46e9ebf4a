#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "trendscope/common.h"
#include "trendscope/corpus.h"

namespace trendscope::textprep {

/// A post after noise removal, normalization, tokenization, stop-word removal,
/// lemmatization and n-gram generation. Carries every RawPost field; `hashtags`
/// holds the normalized union of the crawled tags and in-text '#' tokens.
struct CleanPost : corpus::RawPost {
    std::string cleaned_text;
    std::vector<std::string> tokens;
    std::vector<std::string> ngrams;
    std::size_t token_count = 0;
};

/// Strips URLs, emoji and anything other than letters, combining marks, digits,
/// whitespace, '_' and apostrophes. '#' survives only when it starts a word.
/// Whitespace is collapsed and the result trimmed.
std::string remove_noise(std::string_view text);

/// NFC, case folding, Arabic orthographic folding (tashkeel and tatweel removed,
/// alef variants to bare alef, ta marbuta to ha, alef maqsura to ya) and
/// decimal digits of any script to ASCII. `lang` is accepted for API symmetry;
/// the mapping does not depend on it.
std::string normalize(std::string_view text, std::optional<std::string_view> lang = std::nullopt);

/// Whitespace split. Tokens carrying no letter or digit are dropped and
/// edge apostrophes trimmed; hashtags keep their leading '#'.
std::vector<std::string> tokenize(std::string_view text);

/// "ar" when the token contains Arabic script, otherwise "en".
std::string detect_language(std::string_view token);

inline bool is_hashtag(std::string_view token) { return !token.empty() && token.front() == '#'; }

/// Language-keyed stop sets. Entries are stored normalized.
class StopWordList {
public:
    void add(const std::string& lang, std::string_view word);
    /// One word per line, UTF-8, '#' starts a comment line.
    void load(const std::string& lang, const std::filesystem::path& path);
    bool has_language(const std::string& lang) const { return sets_.count(lang) > 0; }
    bool contains(const std::string& lang, std::string_view word) const;
    std::size_t size(const std::string& lang) const;

private:
    std::map<std::string, std::unordered_set<std::string>> sets_;
};

/// `lang` is a language key, or "auto" to pick the set per token by script.
/// Unknown languages fall back to English with a warning. Hashtags are kept.
std::vector<std::string> filter_stopwords(const std::vector<std::string>& tokens,
                                          const StopWordList& stoplist, std::string_view lang,
                                          Warnings* warnings = nullptr);

std::string porter_stem(std::string_view word);
std::string arabic_light_stem(std::string_view word);

/// English goes through Porter, Arabic through the light stemmer ("auto" picks
/// by script). Hashtags and tokens shorter than 3 letters come back unchanged.
std::string stem(std::string_view token, std::string_view lang = "auto");

/// Surface form -> dictionary form, keyed by language.
class LemmaTable {
public:
    /// Throws Error(Data) if `lemma` is itself mapped to something else, or if
    /// `surface` is already used as a lemma elsewhere with a different target.
    void add(std::string_view surface, std::string_view lemma);
    /// TSV `surface<TAB>lemma`; the language of each row follows its script.
    void load(const std::filesystem::path& path);
    std::optional<std::string> lookup(const std::string& lang, std::string_view surface) const;
    std::size_t size() const;

private:
    std::map<std::string, std::unordered_map<std::string, std::string>> tables_;
};

/// Table lookup, falling back to stem() on a miss. Hashtags pass through.
std::string lemmatize(std::string_view token, const LemmaTable& table, std::string_view lang = "auto");

/// All contiguous bigrams, then all contiguous trigrams, space-joined.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens);

struct PreprocessConfig {
    /// Language used for stop words when a post carries no hint; "auto" detects per token.
    std::string default_lang = "auto";
};

/// Holds the language resources and applies the full cleaning chain.
class Preprocessor {
public:
    Preprocessor(StopWordList stopwords, LemmaTable lemmas, PreprocessConfig config = {});

    /// Stop lists and lemma table found in a data directory
    /// (stopwords_en.txt, stopwords_ar.txt, lemmas.tsv).
    static Preprocessor from_files(const std::filesystem::path& stop_en,
                                   const std::filesystem::path& stop_ar,
                                   const std::filesystem::path& lemmas, PreprocessConfig config = {});

    CleanPost preprocess(const corpus::RawPost& post) const;

    /// Token chain without n-grams: the form lexicon entries are matched in.
    std::vector<std::string> terms(std::string_view phrase) const;
    /// terms() joined with single spaces, i.e. the same shape ngrams() emits.
    std::string key(std::string_view phrase) const;

    const StopWordList& stopwords() const { return stopwords_; }
    const LemmaTable& lemmas() const { return lemmas_; }

private:
    // stop-word removal and lemmatization over already tokenized text
    std::vector<std::string> finish(const std::vector<std::string>& tokens) const;

    StopWordList stopwords_;
    LemmaTable lemmas_;
    PreprocessConfig config_;
};

std::vector<CleanPost> preprocess_all(const Preprocessor& prep, const std::vector<corpus::RawPost>& posts);

// CleanPost records extend the ingestion JSONL schema with
// `cleaned_text`, `tokens` and `ngrams`.
nlohmann::ordered_json to_json(const CleanPost& post);
CleanPost clean_post_from_json(const nlohmann::json& obj);
void write_clean_jsonl(const std::filesystem::path& path, const std::vector<CleanPost>& posts);
std::vector<CleanPost> read_clean_jsonl(const std::filesystem::path& path);

}  // namespace trendscope::textprep
