// Copyright 2026 The fopf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fopf/cost_queue.hpp"
#include "fopf/dataset.hpp"
#include "fopf/detail/parallel.hpp"
#include "fopf/distance.hpp"
#include "fopf/log.hpp"

namespace fopf {

/// The k_max nearest other samples of every node, sorted by (distance,
/// index). Graphs for any k <= k_max are prefixes of these lists.
class NeighborTable {
public:
    NeighborTable(const Dataset& d, std::size_t k_max, Metric metric) : k_max_(k_max) {
        const std::size_t n = d.size();
        if (n < 2 || k_max < 1 || k_max > n - 1)
            throw ConfigError("k must lie in [1, " + std::to_string(n > 0 ? n - 1 : 0) + "], got " +
                              std::to_string(k_max));
        idx_.resize(n * k_max);
        dist_.resize(n * k_max);
        std::vector<std::pair<double, NodeId>> row;
        row.reserve(n - 1);
        for (NodeId q = 0; q < n; ++q) {
            row.clear();
            auto xq = d.features(q);
            for (NodeId u = 0; u < n; ++u)
                if (u != q) row.emplace_back(distance_unchecked(metric, xq, d.features(u)), u);
            std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k_max), row.end());
            for (std::size_t j = 0; j < k_max; ++j) {
                dist_[q * k_max + j] = row[j].first;
                idx_[q * k_max + j] = row[j].second;
            }
        }
    }

    std::size_t size() const noexcept { return k_max_ == 0 ? 0 : idx_.size() / k_max_; }
    std::size_t k_max() const noexcept { return k_max_; }
    NodeId neighbor(NodeId q, std::size_t j) const noexcept { return idx_[q * k_max_ + j]; }
    double weight(NodeId q, std::size_t j) const noexcept { return dist_[q * k_max_ + j]; }

private:
    std::size_t k_max_;
    std::vector<NodeId> idx_;
    std::vector<double> dist_;
};

/// Symmetrized k-NN graph. `knn` keeps the directed k nearest lists;
/// `adjacency` holds those plus the reverse arcs.
struct KnnGraph {
    std::size_t k = 0;
    std::vector<std::vector<NodeId>> knn;
    std::vector<std::vector<NodeId>> adjacency;
    std::vector<std::vector<double>> weight;
    double d_f = 0.0;

    std::size_t size() const noexcept { return adjacency.size(); }
};

inline KnnGraph build_knn_graph(const NeighborTable& table, std::size_t k) {
    if (k < 1 || k > table.k_max())
        throw ConfigError("k must lie in [1, " + std::to_string(table.k_max()) + "], got " + std::to_string(k));
    const std::size_t n = table.size();
    KnnGraph g;
    g.k = k;
    g.knn.resize(n);
    g.adjacency.resize(n);
    g.weight.resize(n);
    for (NodeId q = 0; q < n; ++q) {
        for (std::size_t j = 0; j < k; ++j) {
            g.knn[q].push_back(table.neighbor(q, j));
            g.adjacency[q].push_back(table.neighbor(q, j));
            g.weight[q].push_back(table.weight(q, j));
        }
    }
    // Reverse arcs (ascending source), skipping ones already present.
    std::vector<std::vector<std::pair<NodeId, double>>> incoming(n);
    for (NodeId q = 0; q < n; ++q)
        for (std::size_t j = 0; j < k; ++j) incoming[g.knn[q][j]].emplace_back(q, table.weight(q, j));
    std::vector<NodeId> mark(n, kNoNode);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId u : g.knn[v]) mark[u] = v;
        for (auto [q, w] : incoming[v]) {
            if (mark[q] == v) continue;
            g.adjacency[v].push_back(q);
            g.weight[v].push_back(w);
        }
    }
    for (const auto& ws : g.weight)
        for (double w : ws) g.d_f = std::max(g.d_f, w);
    return g;
}

inline KnnGraph build_knn_graph(const Dataset& d, std::size_t k, Metric metric) {
    return build_knn_graph(NeighborTable(d, k, metric), k);
}

struct DensityMap {
    std::vector<double> rho;
    double psi = 0.0;

    double min() const { return *std::min_element(rho.begin(), rho.end()); }
    double max() const { return *std::max_element(rho.begin(), rho.end()); }
};

/// Gaussian-kernel density with bandwidth psi = d_f / 3, averaged over each
/// node's (symmetrized) adjacency list.
///
/// A graph whose arcs all have zero length has no usable bandwidth. That is
/// an error unless `degenerate_df` > 0 is supplied to stand in for d_f.
inline DensityMap compute_density(const KnnGraph& g, double degenerate_df = 0.0) {
    double df = g.d_f;
    if (!(df > 0.0)) {
        if (!(degenerate_df > 0.0))
            throw DataError("density: maximum arc weight is 0 (all neighbouring samples coincide)");
        df = degenerate_df;
    }
    DensityMap m;
    m.psi = df / 3.0;
    const double two_psi2 = 2.0 * m.psi * m.psi;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * m.psi * m.psi);
    m.rho.resize(g.size());
    for (NodeId q = 0; q < g.size(); ++q) {
        double acc = 0.0;
        for (double w : g.weight[q]) acc += std::exp(-(w * w) / two_psi2);
        m.rho[q] = norm * acc / static_cast<double>(g.weight[q].size());
    }
    return m;
}

struct DeltaPolicy {
    double relative = 1e-6;
    double floor = 1e-12;

    double delta(const DensityMap& m) const { return std::max(floor, (m.max() - m.min()) * relative); }
};

struct ClusterOptions {
    DeltaPolicy delta;
    double degenerate_df = 0.0; // see compute_density
    std::size_t jobs = 1;       // used by the best-k search
};

struct ClusterModel {
    std::size_t k_star = 0;
    DensityMap densities;
    std::vector<int> cluster_label;   // 1..n_clusters
    std::vector<double> path_value;
    std::vector<NodeId> roots;        // in the order they were found
    std::vector<NodeId> predecessor;
    double delta = 0.0;

    std::size_t size() const noexcept { return cluster_label.size(); }
    std::size_t n_clusters() const noexcept { return roots.size(); }
};

/// Maxima-rooted competition maximizing the minimum density along paths.
/// Every node starts at rho - delta; a node that leaves the queue without
/// a predecessor becomes a root with value rho and opens a new cluster.
inline ClusterModel cluster(const KnnGraph& g, const DensityMap& dens, const DeltaPolicy& policy = {}) {
    const std::size_t n = g.size();
    ClusterModel m;
    m.k_star = g.k;
    m.densities = dens;
    m.delta = policy.delta(dens);
    m.cluster_label.assign(n, 0);
    m.path_value.resize(n);
    m.predecessor.assign(n, kNoNode);

    CostQueue<double, QueueOrder::max_first> queue(n);
    for (NodeId q = 0; q < n; ++q) {
        m.path_value[q] = dens.rho[q] - m.delta;
        queue.push(q, m.path_value[q]);
    }
    int next_label = 1;
    while (!queue.empty()) {
        NodeId q = queue.pop();
        if (m.predecessor[q] == kNoNode) {
            m.cluster_label[q] = next_label++;
            m.path_value[q] = dens.rho[q];
            m.roots.push_back(q);
        }
        for (NodeId u : g.adjacency[q]) {
            if (!queue.contains(u) || !(m.path_value[u] < m.path_value[q])) continue;
            double cst = std::min(m.path_value[q], dens.rho[u]);
            if (cst > m.path_value[u]) {
                m.cluster_label[u] = m.cluster_label[q];
                m.predecessor[u] = q;
                m.path_value[u] = cst;
                queue.update(u, cst);
            }
        }
    }
    return m;
}

inline ClusterModel cluster(const Dataset& d, std::size_t k, Metric metric, const ClusterOptions& options = {}) {
    KnnGraph g = build_knn_graph(d, k, metric);
    return cluster(g, compute_density(g, options.degenerate_df), options.delta);
}

/// Sum over clusters of W'/(W + W'), where W and W' are the internal and
/// crossing similarity mass (similarity 1/(1+distance)) of the arcs leaving
/// the cluster's nodes. Zero-mass clusters contribute 0.
inline double normalized_cut(const ClusterModel& m, const KnnGraph& g) {
    if (m.size() != g.size()) throw DataError("normalized_cut: model and graph sizes differ");
    std::vector<double> inner(m.n_clusters() + 1, 0.0);
    std::vector<double> cross(m.n_clusters() + 1, 0.0);
    for (NodeId u = 0; u < g.size(); ++u) {
        const int lu = m.cluster_label[u];
        for (std::size_t j = 0; j < g.adjacency[u].size(); ++j) {
            double s = 1.0 / (1.0 + g.weight[u][j]);
            if (m.cluster_label[g.adjacency[u][j]] == lu) inner[static_cast<std::size_t>(lu)] += s;
            else cross[static_cast<std::size_t>(lu)] += s;
        }
    }
    double cut = 0.0;
    for (std::size_t c = 1; c <= m.n_clusters(); ++c) {
        double total = inner[c] + cross[c];
        if (total > 0.0) cut += cross[c] / total;
        else log::debug("normalized_cut: cluster " + std::to_string(c) + " has no incident similarity mass");
    }
    return cut;
}

/// Normalized cut for every k in [1, k_max] over one neighbour table.
struct CutProfile {
    std::vector<double> cut; // cut[k-1]

    std::size_t k_max() const noexcept { return cut.size(); }

    // Smallest k in [1, k_max] with minimal cut.
    std::size_t best_k(std::size_t k_max) const {
        if (k_max < 1 || k_max > cut.size()) throw ConfigError("best_k: k_max outside the profiled range");
        std::size_t best = 1;
        for (std::size_t k = 2; k <= k_max; ++k)
            if (cut[k - 1] < cut[best - 1]) best = k;
        return best;
    }
};

inline CutProfile cut_profile(const NeighborTable& table, std::size_t k_max, const ClusterOptions& options = {}) {
    CutProfile p;
    p.cut.resize(k_max);
    detail::parallel_for(k_max, options.jobs, [&](std::size_t i) {
        KnnGraph g = build_knn_graph(table, i + 1);
        ClusterModel m = cluster(g, compute_density(g, options.degenerate_df), options.delta);
        p.cut[i] = normalized_cut(m, g);
    });
    return p;
}

struct BestK {
    std::size_t k_star = 0;
    ClusterModel model;
    KnnGraph graph;
    CutProfile profile;
};

inline ClusterModel cluster_at(const NeighborTable& table, std::size_t k, const ClusterOptions& options,
                               KnnGraph* graph_out = nullptr) {
    KnnGraph g = build_knn_graph(table, k);
    ClusterModel m = cluster(g, compute_density(g, options.degenerate_df), options.delta);
    if (graph_out) *graph_out = std::move(g);
    return m;
}

/// Clusters for k = 1..k_max and keeps the k with the smallest normalized
/// cut (ties: smaller k).
inline BestK find_best_k(const Dataset& d, std::size_t k_max, Metric metric, const ClusterOptions& options = {}) {
    if (d.size() < 2 || k_max < 1 || k_max > d.size() - 1)
        throw ConfigError("k_max must lie in [1, " + std::to_string(d.size() > 0 ? d.size() - 1 : 0) + "], got " +
                          std::to_string(k_max));
    NeighborTable table(d, k_max, metric);
    BestK out;
    out.profile = cut_profile(table, k_max, options);
    out.k_star = out.profile.best_k(k_max);
    out.model = cluster_at(table, out.k_star, options, &out.graph);
    return out;
}

inline std::string cluster_assignments_csv(const ClusterModel& m) {
    std::string out = "id,cluster_label,rho,path_value\n";
    for (NodeId u = 0; u < m.size(); ++u) {
        out += std::to_string(u) + ',' + std::to_string(m.cluster_label[u]) + ',' +
               format_double(m.densities.rho[u]) + ',' + format_double(m.path_value[u]) + '\n';
    }
    return out;
}

} // namespace fopf
