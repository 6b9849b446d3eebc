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
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "fopf/cost_queue.hpp"
#include "fopf/dataset.hpp"
#include "fopf/distance.hpp"
#include "fopf/mst.hpp"

namespace fopf {

/// Trained optimum-path forest: cost map C, label map L and predecessor
/// map O over the training samples, plus the cost-sorted scan order used
/// at classification time.
struct SupervisedModel {
    std::shared_ptr<const Dataset> training;
    Metric metric = Metric::euclidean;
    std::vector<double> cost;
    std::vector<ClassId> label;
    std::vector<NodeId> predecessor;
    PrototypeSet prototypes;
    std::vector<NodeId> order; // ascending (cost, index)

    std::size_t size() const noexcept { return cost.size(); }
    std::size_t n_features() const noexcept { return training ? training->n_features() : 0; }

    bool is_prototype(NodeId u) const { return prototypes.contains(u); }
};

struct Prediction {
    ClassId label = 0;
    double cost = 0.0;
    NodeId conqueror = kNoNode;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct TrainOptions {
    // Propagate costs along the MST only instead of the full competition
    // over the complete graph. Same result when all arc weights differ.
    bool mst_fast_path = false;
};

namespace detail {

struct ForestMaps {
    std::vector<double> cost;
    std::vector<ClassId> label;
    std::vector<NodeId> predecessor;
};

/// Prototype competition on the complete graph.
///
/// The offer to u from q is weight[u] * max{C(q), d(q,u)}. Every node is
/// conquered once, by ascending cost with FIFO ties, and only nodes still
/// waiting receive offers; this fixes L and an acyclic predecessor forest
/// rooted at the prototypes. With every weight equal to 1 this is the plain
/// f_max competition.
///
/// The stored cost map is the fixed point of
/// C(u) = min_q weight[u] * max{C(q), d(q,u)}, the best cost over walks.
/// When all weights are >= 1 each offer is at least C(q), the conquest is
/// already optimal and its costs are kept. When all weights are <= 1, a
/// node u with weight < 1 can bounce between itself and its nearest
/// neighbour v, which discounts every earlier arc by weight[u]*weight[v]
/// per round, so C(u) = weight[u] * min_v d(u,v) exactly. Nodes with weight
/// 1 then take the plain f_max optimum over the settled values.
inline ForestMaps compete(const Dataset& d, Metric metric, const PrototypeSet& prototypes,
                          std::span<const double> weight) {
    const std::size_t n = d.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto [wmin, wmax] = std::minmax_element(weight.begin(), weight.end());
    if (!(*wmin > 0.0) || !std::isfinite(*wmax))
        throw ConfigError("competition weights must be positive and finite");
    if (*wmin < 1.0 && *wmax > 1.0)
        throw ConfigError("competition weights must lie all in (0, 1] or all in [1, inf)");

    ForestMaps m{std::vector<double>(n, inf), std::vector<ClassId>(n, 0), std::vector<NodeId>(n, kNoNode)};
    std::vector<bool> is_proto(n, false);
    CostQueue<double> queue(n);
    for (NodeId p : prototypes.members) {
        m.cost[p] = 0.0;
        m.label[p] = d.label(p);
        is_proto[p] = true;
        queue.push(p, 0.0);
    }

    std::vector<bool> done(n, false);
    while (!queue.empty()) {
        NodeId q = queue.pop();
        done[q] = true;
        const double cq = m.cost[q];
        auto xq = d.features(q);
        for (NodeId u = 0; u < n; ++u) {
            if (done[u]) continue;
            const double w = weight[u];
            if (!(w * cq < m.cost[u])) continue;
            const double cst = w * std::max(cq, distance_unchecked(metric, xq, d.features(u)));
            if (cst < m.cost[u]) {
                m.label[u] = m.label[q];
                m.predecessor[u] = q;
                m.cost[u] = cst;
                queue.push_or_update(u, cst);
            }
        }
    }
    if (!(*wmin < 1.0)) return m;

    // Discounted nodes: weight times the nearest-neighbour distance.
    std::vector<bool> settled(n, false);
    for (NodeId u = 0; u < n; ++u) {
        if (is_proto[u] || !(weight[u] < 1.0)) {
            settled[u] = is_proto[u];
            continue;
        }
        double nn = inf;
        auto xu = d.features(u);
        for (NodeId v = 0; v < n; ++v)
            if (v != u) nn = std::min(nn, distance_unchecked(metric, xu, d.features(v)));
        m.cost[u] = weight[u] * nn;
        settled[u] = true;
    }

    // Undiscounted nodes: f_max Dijkstra seeded by every settled value.
    std::vector<double> best(n, inf);
    CostQueue<double> rest(n);
    for (NodeId u = 0; u < n; ++u) {
        if (settled[u]) continue;
        auto xu = d.features(u);
        for (NodeId q = 0; q < n; ++q)
            if (settled[q]) best[u] = std::min(best[u], std::max(m.cost[q], distance_unchecked(metric, xu, d.features(q))));
        rest.push(u, best[u]);
    }
    while (!rest.empty()) {
        NodeId q = rest.pop();
        settled[q] = true;
        m.cost[q] = best[q];
        auto xq = d.features(q);
        for (NodeId u = 0; u < n; ++u) {
            if (settled[u] || !(best[q] < best[u])) continue;
            const double cst = std::max(best[q], distance_unchecked(metric, xq, d.features(u)));
            if (cst < best[u]) {
                best[u] = cst;
                rest.update(u, cst);
            }
        }
    }
    return m;
}

/// f_max propagation restricted to the MST edges.
inline ForestMaps compete_on_tree(const Dataset& d, const Mst& mst, const PrototypeSet& prototypes) {
    const std::size_t n = d.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::pair<NodeId, double>>> adj(n);
    for (NodeId v = 0; v < n; ++v) {
        NodeId p = mst.parent[v];
        if (p == kNoNode) continue;
        adj[p].emplace_back(v, mst.edge_weight[v]);
        adj[v].emplace_back(p, mst.edge_weight[v]);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    ForestMaps m{std::vector<double>(n, inf), std::vector<ClassId>(n, 0), std::vector<NodeId>(n, kNoNode)};
    CostQueue<double> queue(n);
    for (NodeId p : prototypes.members) {
        m.cost[p] = 0.0;
        m.label[p] = d.label(p);
        queue.push(p, 0.0);
    }
    while (!queue.empty()) {
        NodeId q = queue.pop();
        for (auto [u, w] : adj[q]) {
            if (!(m.cost[q] < m.cost[u])) continue;
            double cst = std::max(m.cost[q], w);
            if (cst < m.cost[u]) {
                m.label[u] = m.label[q];
                m.predecessor[u] = q;
                m.cost[u] = cst;
                queue.push_or_update(u, cst);
            }
        }
    }
    return m;
}

inline std::vector<NodeId> cost_order(std::span<const double> cost) {
    std::vector<NodeId> order(cost.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return cost[a] < cost[b]; });
    return order;
}

inline SupervisedModel assemble(std::shared_ptr<const Dataset> training, Metric metric, PrototypeSet prototypes,
                                ForestMaps maps) {
    SupervisedModel model;
    model.training = std::move(training);
    model.metric = metric;
    model.order = cost_order(maps.cost);
    model.cost = std::move(maps.cost);
    model.label = std::move(maps.label);
    model.predecessor = std::move(maps.predecessor);
    model.prototypes = std::move(prototypes);
    return model;
}

inline void require_trainable(const Dataset& d) {
    if (d.size() < 2) throw DataError("training needs at least 2 samples, got " + std::to_string(d.size()));
}

} // namespace detail

/// Trains with an explicit prototype set. Exposed for tests and for
/// callers that pick prototypes some other way.
inline SupervisedModel train_with_prototypes(std::shared_ptr<const Dataset> d, Metric metric,
                                             PrototypeSet prototypes) {
    detail::require_trainable(*d);
    if (prototypes.members.empty()) throw ConfigError("prototype set is empty");
    std::sort(prototypes.members.begin(), prototypes.members.end());
    for (NodeId p : prototypes.members)
        if (p >= d->size()) throw ConfigError("prototype index out of range");
    const std::vector<double> ones(d->size(), 1.0);
    auto maps = detail::compete(*d, metric, prototypes, ones);
    return detail::assemble(std::move(d), metric, std::move(prototypes), std::move(maps));
}

/// Supervised OPF training: MST boundary prototypes, then the f_max
/// competition (or its MST-only shortcut when requested).
inline SupervisedModel train(std::shared_ptr<const Dataset> d, Metric metric = Metric::euclidean,
                             TrainOptions options = {}) {
    detail::require_trainable(*d);
    Mst mst = compute_mst(*d, metric);
    PrototypeSet prototypes = find_prototypes(*d, mst);
    if (options.mst_fast_path) {
        auto maps = detail::compete_on_tree(*d, mst, prototypes);
        return detail::assemble(std::move(d), metric, std::move(prototypes), std::move(maps));
    }
    const std::vector<double> ones(d->size(), 1.0);
    auto maps = detail::compete(*d, metric, prototypes, ones);
    return detail::assemble(std::move(d), metric, std::move(prototypes), std::move(maps));
}

inline SupervisedModel train(const Dataset& d, Metric metric = Metric::euclidean, TrainOptions options = {}) {
    return train(std::make_shared<const Dataset>(d), metric, options);
}

/// Cheapest offer max{C(q), d(q,x)} over the training set. Candidates are
/// scanned by ascending stored cost, so the first one whose cost alone
/// reaches the best offer ends the scan; ties go to the earlier candidate.
inline Prediction classify_one(const SupervisedModel& m, std::span<const double> x) {
    if (x.size() != m.n_features())
        throw DataError("classify: sample has " + std::to_string(x.size()) + " features, model expects " +
                        std::to_string(m.n_features()));
    Prediction best{0, std::numeric_limits<double>::infinity(), kNoNode};
    for (NodeId q : m.order) {
        const double cq = m.cost[q];
        if (cq >= best.cost) break;
        const double cst = std::max(cq, distance_unchecked(m.metric, m.training->features(q), x));
        if (cst < best.cost) best = {m.label[q], cst, q};
    }
    return best;
}

inline std::vector<Prediction> classify_batch(const SupervisedModel& m, const Dataset& t) {
    if (!t.empty() && t.n_features() != m.n_features())
        throw DataError("classify: dataset has " + std::to_string(t.n_features()) + " features, model expects " +
                        std::to_string(m.n_features()));
    std::vector<Prediction> out;
    out.reserve(t.size());
    for (NodeId i = 0; i < t.size(); ++i) out.push_back(classify_one(m, t.features(i)));
    return out;
}

} // namespace fopf
