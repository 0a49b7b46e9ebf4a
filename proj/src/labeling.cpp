#include <algorithm>
#include <cmath>

#include "trendscope/clustering.h"
#include "trendscope/features.h"

namespace trendscope::clustering {

std::vector<ClusterSummary> label_clusters(const std::vector<textprep::CleanPost>& posts,
                                           const std::vector<int>& labels, std::size_t k,
                                           const std::map<int, std::string>& name_overrides) {
    if (posts.size() != labels.size()) fail(ErrorKind::Internal, "label count does not match post count");
    std::map<int, std::map<std::string, std::int64_t>> tf;
    std::map<int, std::size_t> sizes;
    std::map<std::string, std::int64_t> tf_all;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (labels[i] < 0) continue;
        ++sizes[labels[i]];
        auto& bag = tf[labels[i]];
        for (const auto& [t, c] : features::term_counts(posts[i])) {
            bag[t] += c;
            tf_all[t] += c;
        }
    }
    if (sizes.empty()) return {};

    std::int64_t mass = 0;
    for (const auto& [t, c] : tf_all) mass += c;
    const double A = static_cast<double>(mass) / static_cast<double>(sizes.size());

    std::vector<ClusterSummary> out;
    for (const auto& [cid, size] : sizes) {
        if (size == 0) fail(ErrorKind::Internal, "empty cluster " + std::to_string(cid));
        ClusterSummary s;
        s.cluster_id = cid;
        s.size = size;
        for (const auto& [t, c] : tf[cid]) {
            s.top_terms.push_back({t, static_cast<double>(c) * std::log(1.0 + A / static_cast<double>(tf_all.at(t)))});
        }
        std::sort(s.top_terms.begin(), s.top_terms.end(), [](const TermScore& a, const TermScore& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.term < b.term;
        });
        if (s.top_terms.size() > k) s.top_terms.resize(k);
        if (auto o = name_overrides.find(cid); o != name_overrides.end()) {
            s.name = o->second;
        } else if (!s.top_terms.empty()) {
            s.name = s.top_terms.front().term;
        }
        out.push_back(std::move(s));
    }
    return out;
}

void assign_keywords(std::vector<ClusterSummary>& summaries, const filtering::TopicLexicon& lexicon,
                     const std::vector<textprep::CleanPost>& posts, const std::vector<int>& labels) {
    if (posts.size() != labels.size()) fail(ErrorKind::Internal, "label count does not match post count");
    std::map<std::size_t, std::map<int, std::int64_t>> mentions;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (labels[i] < 0) continue;
        for (auto e : lexicon.matches(posts[i])) ++mentions[e][labels[i]];
    }
    std::map<int, ClusterSummary*> by_id;
    for (auto& s : summaries) {
        s.keywords.clear();
        by_id[s.cluster_id] = &s;
    }
    for (std::size_t e = 0; e < lexicon.entries().size(); ++e) {
        auto m = mentions.find(e);
        if (m == mentions.end()) continue;
        int best = -1;
        std::int64_t best_n = 0;
        for (const auto& [cid, n] : m->second) {
            if (n > best_n) {
                best = cid;
                best_n = n;
            }
        }
        if (auto s = by_id.find(best); s != by_id.end()) s->second->keywords.push_back(lexicon.entries()[e].surface);
    }
}

nlohmann::ordered_json to_json(const ClusterModel& model, const std::vector<ClusterSummary>& summaries,
                               const std::vector<std::string>& post_ids) {
    nlohmann::ordered_json j;
    j["params"] = {{"min_cluster_size", model.params.min_cluster_size},
                   {"min_samples", model.params.min_samples},
                   {"metric", to_string(model.params.metric)},
                   {"lambda_eps", model.params.lambda_eps}};
    j["post_ids"] = post_ids;
    j["labels"] = model.labels;
    auto& tree = j["condensed_tree"] = nlohmann::ordered_json::array();
    for (const auto& e : model.condensed_tree) tree.push_back({e.parent, e.child, e.lambda, e.child_size});
    auto& stab = j["stabilities"] = nlohmann::ordered_json::object();
    for (const auto& [c, s] : model.stabilities) stab[std::to_string(c)] = s;
    j["selected"] = model.selected;
    auto& mst = j["mst_edges"] = nlohmann::ordered_json::array();
    for (const auto& e : model.mst_edges) mst.push_back({e.i, e.j, e.weight});
    auto& sums = j["summaries"] = nlohmann::ordered_json::array();
    for (const auto& s : summaries) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& t : s.top_terms) terms.push_back({t.term, t.score});
        sums.push_back({{"cluster_id", s.cluster_id}, {"name", s.name}, {"size", s.size}, {"top_terms", terms}, {"keywords", s.keywords}});
    }
    return j;
}

}  // namespace trendscope::clustering
