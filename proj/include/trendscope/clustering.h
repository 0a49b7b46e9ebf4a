#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "trendscope/common.h"
#include "trendscope/filtering.h"
#include "trendscope/textprep.h"

namespace trendscope::clustering {

using Matrix = std::vector<std::vector<double>>;

enum class Metric { Euclidean, Cosine };

Metric parse_metric(const std::string& s);
std::string to_string(Metric m);

struct HdbscanParams {
    std::size_t min_cluster_size = 15;
    std::size_t min_samples = 15;
    Metric metric = Metric::Cosine;  // Euclidean on L2-normalized rows
    double lambda_eps = 1e-12;       // lambda_max = 1 / lambda_eps
};

struct MstEdge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 0.0;
};

/// Node ids: points are 0..n-1, condensed clusters are n.. with the root at n.
struct CondensedEdge {
    std::int64_t parent = 0;
    std::int64_t child = 0;
    double lambda = 0.0;
    std::int64_t child_size = 0;
};

struct ClusterModel {
    std::size_t n = 0;
    std::vector<int> labels;                     // -1 = noise
    std::vector<CondensedEdge> condensed_tree;
    std::map<std::int64_t, double> stabilities;  // condensed cluster id -> stability
    std::vector<std::int64_t> selected;          // condensed cluster id of each output label
    std::vector<MstEdge> mst_edges;
    HdbscanParams params;

    int cluster_count() const { return static_cast<int>(selected.size()); }
};

double euclidean(const std::vector<double>& a, const std::vector<double>& b);

/// Copy of `points` prepared for `metric` (cosine rows are L2-normalized; zero rows stay zero).
Matrix prepare(const Matrix& points, Metric metric);

/// Distance to the k-th nearest neighbour, self excluded. Requires 1 <= k < n.
std::vector<double> core_distances(const Matrix& points, std::size_t k);

inline double mutual_reachability(double core_i, double core_j, double d) {
    return std::max(std::max(core_i, core_j), d);
}

/// Prim over an implicit complete graph, O(n^2) time and O(n) memory. Ties pick the lowest index.
std::vector<MstEdge> prim_mst(std::size_t n, const std::function<double(std::size_t, std::size_t)>& weight);

/// MST of the mutual-reachability graph of already prepared points.
std::vector<MstEdge> build_mst(const Matrix& points, const std::vector<double>& core);
std::vector<MstEdge> build_mst(const Matrix& points, const HdbscanParams& params);

/// Single-linkage hierarchy from the MST, condensed by min_cluster_size.
std::vector<CondensedEdge> condense_tree(const std::vector<MstEdge>& mst, std::size_t n,
                                         std::size_t min_cluster_size, double lambda_eps = 1e-12);

/// Birth lambda of each condensed cluster. The root is born at the largest MST edge.
std::map<std::int64_t, double> birth_lambdas(const std::vector<CondensedEdge>& tree, std::size_t n);

struct Extraction {
    std::vector<int> labels;
    std::map<std::int64_t, double> stabilities;
    std::vector<std::int64_t> selected;
};

/// Excess-of-mass selection. The root is selectable only when the tree has no split.
Extraction extract_clusters(const std::vector<CondensedEdge>& tree, std::size_t n, std::size_t min_cluster_size);

ClusterModel hdbscan(const Matrix& points, const HdbscanParams& params);

// ---------------------------------------------------------------------------
// labeling

struct TermScore {
    std::string term;
    double score = 0.0;
};

struct ClusterSummary {
    int cluster_id = 0;
    std::string name;
    std::vector<TermScore> top_terms;  // non-increasing score, ties lexicographic
    std::size_t size = 0;
    std::vector<std::string> keywords;  // lexicon entries assigned to this cluster
};

/// c-TF-IDF: score(t,c) = tf(t,c) * ln(1 + A / tf_all(t)), A = mean term mass per cluster.
std::vector<ClusterSummary> label_clusters(const std::vector<textprep::CleanPost>& posts,
                                           const std::vector<int>& labels, std::size_t k,
                                           const std::map<int, std::string>& name_overrides = {});

/// Gives each lexicon entry to the cluster with the most member posts mentioning it
/// (ties to the lowest id) and records it in that cluster's `keywords`. Unmentioned entries stay unassigned.
void assign_keywords(std::vector<ClusterSummary>& summaries, const filtering::TopicLexicon& lexicon,
                     const std::vector<textprep::CleanPost>& posts, const std::vector<int>& labels);

nlohmann::ordered_json to_json(const ClusterModel& model, const std::vector<ClusterSummary>& summaries,
                               const std::vector<std::string>& post_ids);

}  // namespace trendscope::clustering
