#include "trendscope/sentiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "trendscope/features.h"

namespace trendscope::sentiment {

std::string_view to_string(Label l) {
    switch (l) {
        case Label::Positive: return "positive";
        case Label::Negative: return "negative";
        case Label::Neutral: return "neutral";
    }
    return "neutral";
}

std::optional<Label> parse_label(std::string_view s) {
    auto t = trim(s);
    if (t == "positive") return Label::Positive;
    if (t == "negative") return Label::Negative;
    if (t == "neutral") return Label::Neutral;
    return std::nullopt;
}

Label label_for(double score, double tau) {
    if (score > tau) return Label::Positive;
    if (score < -tau) return Label::Negative;
    return Label::Neutral;
}

SentimentLexicon::SentimentLexicon(const std::map<std::string, double>& weights) {
    for (const auto& [t, w] : weights) add(t, w);
}

void SentimentLexicon::add(const std::string& term, double weight) {
    if (!(weight >= -1.0 && weight <= 1.0)) {
        fail(ErrorKind::Data, "sentiment weight for '" + term + "' outside [-1, 1]");
    }
    if (!term.empty()) weights_.emplace(term, weight);
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path, const textprep::Preprocessor& prep) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read sentiment lexicon: " + path.string());
    SentimentLexicon lex;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tab = t.find('\t');
        if (tab == std::string::npos) {
            fail(ErrorKind::Data, path.string() + ":" + std::to_string(lineno) + ": expected term<TAB>weight");
        }
        double w = 0.0;
        try {
            w = std::stod(t.substr(tab + 1));
        } catch (const std::exception&) {
            fail(ErrorKind::Data, path.string() + ":" + std::to_string(lineno) + ": bad weight");
        }
        lex.add(prep.key(t.substr(0, tab)), w);
    }
    return lex;
}

std::optional<double> SentimentLexicon::weight(const std::string& term) const {
    auto it = weights_.find(term);
    if (it == weights_.end()) return std::nullopt;
    return it->second;
}

SentimentResult score_lexicon(const CleanPost& post, const SentimentLexicon& lexicon, double tau) {
    double sum = 0.0;
    // sorted bag of terms: the score does not depend on token order
    for (const auto& [term, count] : features::term_counts(post)) {
        if (auto w = lexicon.weight(term)) sum += static_cast<double>(count) * *w;
    }
    double score = sum / static_cast<double>(std::max<std::size_t>(1, post.token_count));
    score = std::clamp(score, -1.0, 1.0);
    return {post.id, label_for(score, tau), score};
}

std::vector<SentimentResult> load_external_scores(const std::filesystem::path& path,
                                                  const std::vector<std::string>& expected_ids, double tau,
                                                  Warnings* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read score file: " + path.string());
    std::vector<SentimentResult> out;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty()) continue;
        const auto where = path.string() + ":" + std::to_string(lineno);
        auto tab = t.find('\t');
        if (tab == std::string::npos) fail(ErrorKind::Data, where + ": expected post_id<TAB>score");
        SentimentResult r;
        r.post_id = trim(t.substr(0, tab));
        auto s = trim(t.substr(tab + 1));
        try {
            std::size_t pos = 0;
            r.score = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            fail(ErrorKind::Data, where + ": score is not a number: '" + s + "'");
        }
        if (!(r.score >= -1.0 && r.score <= 1.0)) {
            fail(ErrorKind::Data, where + ": score " + s + " outside [-1, 1]");
        }
        r.label = label_for(r.score, tau);
        seen.insert(r.post_id);
        out.push_back(std::move(r));
    }
    if (warnings) {
        std::size_t missing = 0;
        for (const auto& id : expected_ids) missing += seen.count(id) ? 0 : 1;
        if (missing) warnings->push_back(path.string() + ": no score for " + std::to_string(missing) + " posts");
    }
    return out;
}

void write_scores_tsv(const std::filesystem::path& path, const std::vector<SentimentResult>& results) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    char buf[32];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%.17g", r.score);
        os << r.post_id << '\t' << buf << '\n';
    }
}

std::map<std::string, Label> load_gold_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read gold label file: " + path.string());
    std::map<std::string, Label> gold;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty()) continue;
        auto tab = t.find('\t');
        auto label = tab == std::string::npos ? std::nullopt : parse_label(t.substr(tab + 1));
        if (!label) {
            fail(ErrorKind::Data, path.string() + ":" + std::to_string(lineno) + ": expected post_id<TAB>label");
        }
        gold[trim(t.substr(0, tab))] = *label;
    }
    return gold;
}

// ---------------------------------------------------------------------------
// evaluation harness

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
    const std::array<double, 3> r{ratios.train, ratios.validation, ratios.test};
    const double total = r[0] + r[1] + r[2];
    if (!(total > 0.0) || r[0] < 0.0 || r[1] < 0.0 || r[2] < 0.0) {
        fail(ErrorKind::Usage, "split ratios must be non-negative with a positive sum");
    }
    std::array<std::size_t, 3> sizes{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        double quota = r[i] / total * static_cast<double>(n);
        sizes[i] = static_cast<std::size_t>(std::floor(quota));
        remainder[i] = quota - std::floor(quota);
        assigned += sizes[i];
    }
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
    return sizes;
}

EvalSplit make_split(const std::vector<std::string>& labeled_ids, const SplitRatios& ratios, std::uint64_t seed) {
    std::vector<std::string> ids(labeled_ids);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 10) {
        fail(ErrorKind::Data, "need at least 10 labeled ids for a split, got " + std::to_string(ids.size()));
    }
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    const std::uint64_t s = mix(seed);
    std::vector<std::pair<std::uint64_t, std::string>> keyed;
    keyed.reserve(ids.size());
    for (auto& id : ids) keyed.emplace_back(mix(features::term_hash(id) ^ s), std::move(id));
    std::sort(keyed.begin(), keyed.end());

    auto sizes = split_sizes(keyed.size(), ratios);
    EvalSplit split;
    std::size_t i = 0;
    for (; i < sizes[0]; ++i) split.train_ids.push_back(keyed[i].second);
    for (; i < sizes[0] + sizes[1]; ++i) split.validation_ids.push_back(keyed[i].second);
    for (; i < keyed.size(); ++i) split.test_ids.push_back(keyed[i].second);
    return split;
}

EvalMetrics evaluate(const std::vector<SentimentResult>& results, const std::map<std::string, Label>& gold,
                     const EvalSplit& split) {
    std::map<std::string, Label> predicted;
    for (const auto& r : results) predicted[r.post_id] = r.label;
    EvalMetrics m;
    for (const auto& id : split.test_ids) {
        auto g = gold.find(id);
        if (g == gold.end()) fail(ErrorKind::Data, "no gold label for test id " + id);
        auto p = predicted.find(id);
        if (p == predicted.end()) fail(ErrorKind::Data, "no prediction for test id " + id);
        ++m.confusion[static_cast<int>(g->second)][static_cast<int>(p->second)];
        ++m.evaluated;
    }
    std::int64_t correct = 0;
    for (int c = 0; c < 3; ++c) {
        correct += m.confusion[c][c];
        std::int64_t tp = m.confusion[c][c];
        std::int64_t gold_total = 0;
        std::int64_t pred_total = 0;
        for (int k = 0; k < 3; ++k) {
            gold_total += m.confusion[c][k];
            pred_total += m.confusion[k][c];
        }
        auto& cm = m.per_class[c];
        cm.support = gold_total;
        cm.precision = pred_total ? static_cast<double>(tp) / static_cast<double>(pred_total) : 0.0;
        cm.recall = gold_total ? static_cast<double>(tp) / static_cast<double>(gold_total) : 0.0;
        cm.f1 = (cm.precision + cm.recall) > 0.0 ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall) : 0.0;
    }
    m.accuracy = m.evaluated ? static_cast<double>(correct) / static_cast<double>(m.evaluated) : 0.0;
    return m;
}

SentimentShares sentiment_distribution(const std::vector<SentimentResult>& results) {
    if (results.empty()) fail(ErrorKind::Data, "sentiment distribution of zero results");
    std::array<std::int64_t, 3> counts{};
    for (const auto& r : results) ++counts[static_cast<int>(r.label)];
    const double n = static_cast<double>(results.size());
    return {counts[0] / n, counts[1] / n, counts[2] / n};
}

}  // namespace trendscope::sentiment
