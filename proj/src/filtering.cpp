#include "trendscope/filtering.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace trendscope::filtering {

CountryFilterSpec CountryFilterSpec::make(const std::vector<std::string>& geo_names,
                                          const std::vector<std::string>& hashtag_keys,
                                          const std::vector<std::string>& city_names,
                                          const textprep::Preprocessor& prep) {
    CountryFilterSpec spec;
    for (const auto& g : geo_names) spec.geo_names.insert(textprep::normalize(trim(g)));
    for (const auto& h : hashtag_keys) {
        auto n = textprep::normalize(trim(h));
        n.erase(std::remove(n.begin(), n.end(), '#'), n.end());
        if (!n.empty()) spec.hashtag_keys.insert(n);
    }
    for (const auto& c : city_names) {
        auto n = textprep::normalize(trim(c));
        if (n.empty()) continue;
        spec.city_names.insert(n);
        spec.city_terms.insert(n);
        auto key = prep.key(c);
        if (!key.empty()) spec.city_terms.insert(key);
    }
    return spec;
}

CountryFilterSpec CountryFilterSpec::defaults(const textprep::Preprocessor& prep) {
    return make({"saudi arabia", "ksa"}, {"ksa", "saudi"},
                {"riyadh", "jeddah", "dammam", "mecca", "medina", "neom"}, prep);
}

bool is_country_relevant(const CleanPost& post, const CountryFilterSpec& spec) {
    if (post.geo && spec.geo_names.count(textprep::normalize(trim(*post.geo)))) return true;
    for (const auto& h : post.hashtags) {
        if (spec.hashtag_keys.count(h) || spec.city_names.count(h)) return true;
    }
    for (const auto& t : post.tokens) {
        if (spec.city_terms.count(t)) return true;
    }
    for (const auto& g : post.ngrams) {
        if (spec.city_terms.count(g)) return true;
    }
    return false;
}

CountryFilterResult country_filter(const std::vector<CleanPost>& posts, const CountryFilterSpec& spec) {
    CountryFilterResult r;
    for (const auto& p : posts) {
        if (is_country_relevant(p, spec)) r.kept.push_back(p);
        else ++r.discarded;
    }
    return r;
}

// ---------------------------------------------------------------------------

TopicLexicon::TopicLexicon(std::string name, std::vector<LexiconEntry> entries) : name_(std::move(name)) {
    for (auto& e : entries) add(std::move(e));
}

void TopicLexicon::add(LexiconEntry entry) {
    if (entry.key.empty() || by_key_.count(entry.key)) return;
    if (entry.term_count == 0) entry.term_count = split(entry.key, ' ').size();
    entry.is_hashtag = textprep::is_hashtag(entry.key);
    by_key_[entry.key] = entries_.size();
    entries_.push_back(std::move(entry));
}

TopicLexicon TopicLexicon::from_phrases(std::string name, const std::vector<std::string>& phrases,
                                        const textprep::Preprocessor& prep) {
    TopicLexicon lex;
    lex.name_ = std::move(name);
    for (const auto& p : phrases) {
        auto surface = trim(p);
        if (surface.empty()) continue;
        auto terms = prep.terms(surface);
        if (terms.empty()) continue;
        std::string key;
        for (std::size_t i = 0; i < terms.size(); ++i) key += (i ? " " : "") + terms[i];
        lex.add({surface, key, false, terms.size()});
    }
    return lex;
}

TopicLexicon TopicLexicon::load(const std::filesystem::path& path, const textprep::Preprocessor& prep) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read topic lexicon: " + path.string());
    std::string name = path.stem().string();
    std::vector<std::string> phrases;
    std::string line;
    const std::string marker = "#lexicon-name:";
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty()) continue;
        if (t.rfind(marker, 0) == 0) {
            name = trim(std::string_view(t).substr(marker.size()));
            continue;
        }
        phrases.push_back(t);
    }
    return from_phrases(std::move(name), phrases, prep);
}

std::vector<std::size_t> TopicLexicon::matches(const CleanPost& post) const {
    std::vector<std::size_t> hit;
    auto probe = [&](const std::string& term) {
        if (auto it = by_key_.find(term); it != by_key_.end()) hit.push_back(it->second);
    };
    for (const auto& t : post.tokens) probe(t);
    for (const auto& g : post.ngrams) probe(g);
    for (const auto& h : post.hashtags) probe("#" + h);

    // Entries longer than a trigram are matched as contiguous token runs.
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        const auto& entry = entries_[e];
        if (entry.term_count <= 3) continue;
        auto terms = split(entry.key, ' ');
        if (terms.size() > post.tokens.size()) continue;
        auto it = std::search(post.tokens.begin(), post.tokens.end(), terms.begin(), terms.end());
        if (it != post.tokens.end()) hit.push_back(e);
    }
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    return hit;
}

void HitCounts::merge(const HitCounts& other) {
    for (const auto& [e, n] : other.per_entry) per_entry[e] += n;
    for (const auto& [e, years] : other.per_entry_year) {
        for (const auto& [y, n] : years) per_entry_year[e][y] += n;
    }
}

TopicFilterResult topic_filter(const std::vector<CleanPost>& posts, const TopicLexicon& lexicon) {
    if (lexicon.empty()) fail(ErrorKind::Config, "topic lexicon '" + lexicon.name() + "' has no entries");
    TopicFilterResult r;
    for (const auto& p : posts) {
        auto m = lexicon.matches(p);
        if (m.empty()) continue;
        int year = corpus::year_of(p.timestamp);
        for (auto e : m) {
            ++r.hits.per_entry[e];
            ++r.hits.per_entry_year[e][year];
        }
        r.kept.push_back(p);
    }
    return r;
}

double round1(double pct) { return std::round(pct * 10.0) / 10.0; }

std::map<int, double> sustainability_share(const std::map<int, std::int64_t>& corpus_by_year,
                                           const std::map<int, std::int64_t>& kept_by_year) {
    std::map<int, double> out;
    for (const auto& [year, total] : corpus_by_year) {
        if (total <= 0) continue;
        auto it = kept_by_year.find(year);
        std::int64_t kept = it == kept_by_year.end() ? 0 : it->second;
        if (kept > total) {
            fail(ErrorKind::Data, "kept count exceeds total for year " + std::to_string(year));
        }
        out[year] = round1(100.0 * static_cast<double>(kept) / static_cast<double>(total));
    }
    return out;
}

}  // namespace trendscope::filtering
