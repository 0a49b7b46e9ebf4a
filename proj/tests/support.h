#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "trendscope/corpus.h"
#include "trendscope/textprep.h"

namespace testing {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(TRENDSCOPE_DATA_DIR) / name;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("trendscope_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

    std::filesystem::path write(const std::string& name, const std::string& body) const {
        auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << body;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline const trendscope::textprep::Preprocessor& bundled_prep() {
    static const auto prep = trendscope::textprep::Preprocessor::from_files(
        data_path("stopwords_en.txt"), data_path("stopwords_ar.txt"), data_path("lemmas.tsv"));
    return prep;
}

inline trendscope::corpus::RawPost raw(const std::string& id, const std::string& text, int year = 2022) {
    trendscope::corpus::RawPost p;
    p.id = id;
    p.text = text;
    p.timestamp = trendscope::corpus::make_timestamp(year, 6, 1);
    return p;
}

/// Post with the given tokens and their n-grams, no text.
inline trendscope::textprep::CleanPost clean(const std::string& id, std::vector<std::string> tokens, int year = 2022) {
    trendscope::textprep::CleanPost p;
    p.id = id;
    p.timestamp = trendscope::corpus::make_timestamp(year, 6, 1);
    p.ngrams = trendscope::textprep::ngrams(tokens);
    p.token_count = tokens.size();
    p.tokens = std::move(tokens);
    return p;
}

inline std::vector<std::string> random_words(std::mt19937_64& rng, const std::vector<std::string>& pool, std::size_t max_len) {
    std::vector<std::string> out(rng() % (max_len + 1));
    for (auto& w : out) w = pool[rng() % pool.size()];
    return out;
}

}  // namespace testing
