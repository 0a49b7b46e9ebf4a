#include "trendscope/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace trendscope::clustering {

Metric parse_metric(const std::string& s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "cosine") return Metric::Cosine;
    fail(ErrorKind::Config, "unknown metric '" + s + "' (expected euclidean or cosine)");
}

std::string to_string(Metric m) { return m == Metric::Euclidean ? "euclidean" : "cosine"; }

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    const std::size_t d = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < d; ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

Matrix prepare(const Matrix& points, Metric metric) {
    Matrix out(points);
    if (metric == Metric::Cosine) {
        for (auto& row : out) {
            double s = 0.0;
            for (double v : row) s += v * v;
            if (s > 0.0) {
                const double inv = 1.0 / std::sqrt(s);
                for (double& v : row) v *= inv;
            }
        }
    }
    return out;
}

std::vector<double> core_distances(const Matrix& points, std::size_t k) {
    const std::size_t n = points.size();
    if (k < 1 || k >= n) {
        fail(ErrorKind::Usage, "core distance needs 1 <= k < n (k=" + std::to_string(k) + ", n=" +
                                   std::to_string(n) + ")");
    }
    std::vector<double> core(n);
#pragma omp parallel
    {
        std::vector<double> row(n - 1);
#pragma omp for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            std::size_t m = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) row[m++] = euclidean(points[i], points[j]);
            }
            std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
            core[i] = row[k - 1];
        }
    }
    return core;
}

namespace {

template <class Weight>
std::vector<MstEdge> prim(std::size_t n, Weight&& weight) {
    std::vector<MstEdge> edges;
    if (n < 2) return edges;
    edges.reserve(n - 1);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, inf);
    std::vector<std::size_t> from(n, 0);
    std::size_t cur = 0;
    in_tree[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        double next_w = inf;
        for (std::size_t j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            const double w = weight(cur, j);
            if (w < best[j]) {
                best[j] = w;
                from[j] = cur;
            }
            if (next == n || best[j] < next_w) {
                next = j;
                next_w = best[j];
            }
        }
        in_tree[next] = 1;
        edges.push_back({std::min(from[next], next), std::max(from[next], next), next_w});
        cur = next;
    }
    return edges;
}

}  // namespace

std::vector<MstEdge> prim_mst(std::size_t n, const std::function<double(std::size_t, std::size_t)>& weight) {
    return prim(n, weight);
}

std::vector<MstEdge> build_mst(const Matrix& points, const std::vector<double>& core) {
    if (points.size() < 2) fail(ErrorKind::Usage, "MST needs at least 2 points");
    if (core.size() != points.size()) fail(ErrorKind::Internal, "core distance count mismatch");
    return prim(points.size(), [&](std::size_t i, std::size_t j) {
        return mutual_reachability(core[i], core[j], euclidean(points[i], points[j]));
    });
}

std::vector<MstEdge> build_mst(const Matrix& points, const HdbscanParams& params) {
    auto prepared = prepare(points, params.metric);
    return build_mst(prepared, core_distances(prepared, params.min_samples));
}

// ---------------------------------------------------------------------------
// condensed tree

namespace {

struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

// Node ids 0..n-1 are points, n+k is the k-th merge.
std::vector<Merge> single_linkage(std::vector<MstEdge> mst, std::size_t n) {
    std::stable_sort(mst.begin(), mst.end(), [](const MstEdge& a, const MstEdge& b) { return a.weight < b.weight; });
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::size_t> size(2 * n - 1, 1);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<Merge> merges;
    merges.reserve(n - 1);
    std::size_t next = n;
    for (const auto& e : mst) {
        const std::size_t a = find(e.i);
        const std::size_t b = find(e.j);
        if (a == b) fail(ErrorKind::Internal, "MST contains a cycle");
        merges.push_back({a, b, e.weight, size[a] + size[b]});
        parent[a] = parent[b] = next;
        size[next] = size[a] + size[b];
        ++next;
    }
    return merges;
}

}  // namespace

std::vector<CondensedEdge> condense_tree(const std::vector<MstEdge>& mst, std::size_t n,
                                         std::size_t min_cluster_size, double lambda_eps) {
    if (n < 2 || mst.size() != n - 1) fail(ErrorKind::Internal, "condense_tree needs n-1 MST edges");
    const auto merges = single_linkage(mst, n);
    const std::size_t root = 2 * n - 2;
    const double lambda_max = 1.0 / lambda_eps;
    auto lambda_of = [&](double d) { return d > lambda_eps ? std::min(1.0 / d, lambda_max) : lambda_max; };
    auto size_of = [&](std::size_t node) { return node < n ? std::size_t{1} : merges[node - n].size; };

    std::vector<CondensedEdge> tree;
    std::vector<std::int64_t> relabel(2 * n - 1, -1);
    relabel[root] = static_cast<std::int64_t>(n);
    std::int64_t next_label = static_cast<std::int64_t>(n) + 1;

    // every leaf below `node` leaves `parent` at lambda
    auto fall_out = [&](std::size_t node, std::int64_t parent, double lambda) {
        std::vector<std::size_t> stack{node};
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            if (x < n) {
                tree.push_back({parent, static_cast<std::int64_t>(x), lambda, 1});
            } else {
                stack.push_back(merges[x - n].right);
                stack.push_back(merges[x - n].left);
            }
        }
    };

    // breadth-first so that cluster ids grow with depth
    std::vector<std::size_t> queue{root};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const std::size_t node = queue[qi];
        if (node < n) continue;
        const auto& m = merges[node - n];
        const double lambda = lambda_of(m.distance);
        const std::int64_t label = relabel[node];
        const std::size_t ls = size_of(m.left);
        const std::size_t rs = size_of(m.right);
        const bool left_big = ls >= min_cluster_size;
        const bool right_big = rs >= min_cluster_size;
        if (left_big && right_big) {
            for (std::size_t child : {m.left, m.right}) {
                relabel[child] = next_label++;
                tree.push_back({label, relabel[child], lambda, static_cast<std::int64_t>(size_of(child))});
                queue.push_back(child);
            }
        } else if (!left_big && !right_big) {
            fall_out(m.left, label, lambda);
            fall_out(m.right, label, lambda);
        } else {
            const std::size_t keep = left_big ? m.left : m.right;
            const std::size_t drop = left_big ? m.right : m.left;
            fall_out(drop, label, lambda);
            relabel[keep] = label;
            queue.push_back(keep);
        }
    }
    return tree;
}

std::map<std::int64_t, double> birth_lambdas(const std::vector<CondensedEdge>& tree, std::size_t n) {
    std::map<std::int64_t, double> birth;
    const auto root = static_cast<std::int64_t>(n);
    // the first split out of the root happens at the largest MST edge, i.e. the smallest lambda
    double root_birth = std::numeric_limits<double>::infinity();
    for (const auto& e : tree) {
        if (e.parent == root) root_birth = std::min(root_birth, e.lambda);
        if (e.child >= root) birth[e.child] = e.lambda;
    }
    birth[root] = std::isfinite(root_birth) ? root_birth : 0.0;
    return birth;
}

Extraction extract_clusters(const std::vector<CondensedEdge>& tree, std::size_t n, std::size_t min_cluster_size) {
    Extraction out;
    out.labels.assign(n, -1);
    if (n == 0) return out;
    const auto root = static_cast<std::int64_t>(n);
    const auto birth = birth_lambdas(tree, n);

    std::map<std::int64_t, std::vector<std::int64_t>> children;
    std::map<std::int64_t, std::int64_t> parent_of;
    for (const auto& [c, b] : birth) out.stabilities[c] = 0.0;
    for (const auto& e : tree) {
        out.stabilities[e.parent] += (e.lambda - birth.at(e.parent)) * static_cast<double>(e.child_size);
        if (e.child >= root) {
            children[e.parent].push_back(e.child);
            parent_of[e.child] = e.parent;
        }
    }
    for (auto& [c, s] : out.stabilities) s = std::max(0.0, s);

    // bottom-up: children always carry larger ids than their parent
    std::map<std::int64_t, bool> is_selected;
    std::map<std::int64_t, double> subtree;
    for (auto it = out.stabilities.rbegin(); it != out.stabilities.rend(); ++it) {
        const std::int64_t c = it->first;
        auto ch = children.find(c);
        if (ch == children.end()) {
            is_selected[c] = true;
            subtree[c] = it->second;
            continue;
        }
        double child_sum = 0.0;
        for (auto k : ch->second) child_sum += subtree[k];
        // the root competes only when it never splits; otherwise its stem mass would always win
        if (c == root || child_sum > it->second) {
            is_selected[c] = false;
            subtree[c] = child_sum;
        } else {
            is_selected[c] = true;
            subtree[c] = it->second;
            std::vector<std::int64_t> stack(ch->second);
            while (!stack.empty()) {
                auto d = stack.back();
                stack.pop_back();
                is_selected[d] = false;
                if (auto dc = children.find(d); dc != children.end()) {
                    stack.insert(stack.end(), dc->second.begin(), dc->second.end());
                }
            }
        }
    }

    // a point belongs to the selected ancestor of the cluster it falls out of
    std::map<std::int64_t, std::vector<std::size_t>> members;
    for (const auto& e : tree) {
        if (e.child >= root) continue;
        std::int64_t c = e.parent;
        while (!is_selected[c] && c != root) c = parent_of.at(c);
        if (!is_selected[c]) continue;
        if (e.lambda > birth.at(c)) members[c].push_back(static_cast<std::size_t>(e.child));
    }
    for (auto& [c, pts] : members) {
        if (pts.size() < min_cluster_size) continue;
        const int label = static_cast<int>(out.selected.size());
        out.selected.push_back(c);
        for (auto p : pts) out.labels[p] = label;
    }
    return out;
}

ClusterModel hdbscan(const Matrix& points, const HdbscanParams& params) {
    if (params.min_cluster_size < 2) fail(ErrorKind::Usage, "min_cluster_size must be >= 2");
    if (params.min_samples < 1) fail(ErrorKind::Usage, "min_samples must be >= 1");
    ClusterModel model;
    model.params = params;
    model.n = points.size();
    if (points.size() < 2) {
        model.labels.assign(points.size(), -1);
        return model;
    }
    if (params.min_samples >= points.size()) {
        fail(ErrorKind::Usage, "min_samples (" + std::to_string(params.min_samples) + ") must be below the point count (" +
                                   std::to_string(points.size()) + ")");
    }
    model.mst_edges = build_mst(points, params);
    model.condensed_tree = condense_tree(model.mst_edges, model.n, params.min_cluster_size, params.lambda_eps);
    auto ex = extract_clusters(model.condensed_tree, model.n, params.min_cluster_size);
    model.labels = std::move(ex.labels);
    model.stabilities = std::move(ex.stabilities);
    model.selected = std::move(ex.selected);
    return model;
}

}  // namespace trendscope::clustering
