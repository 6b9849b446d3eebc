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
#include <limits>
#include <vector>

#include "fopf/dataset.hpp"
#include "fopf/distance.hpp"

namespace fopf {

struct Mst {
    std::vector<NodeId> parent;      // kNoNode for the root
    std::vector<double> edge_weight; // weight of the edge to parent, 0 at the root
    NodeId root = 0;

    std::size_t size() const noexcept { return parent.size(); }

    double total_weight() const noexcept {
        double w = 0.0;
        for (double e : edge_weight) w += e;
        return w;
    }
};

/// Prim's algorithm over the implicit complete graph, rooted at node 0.
/// O(n^2) time, O(n) memory. The next node is the one with the lightest
/// connection (ties: smaller index); a node's parent only changes on a
/// strictly lighter edge.
inline Mst compute_mst(const Dataset& d, Metric metric) {
    const std::size_t n = d.size();
    if (n == 0) throw DataError("compute_mst: empty dataset");
    constexpr double inf = std::numeric_limits<double>::infinity();

    Mst t;
    t.parent.assign(n, kNoNode);
    t.edge_weight.assign(n, 0.0);
    t.root = 0;
    std::vector<double> key(n, inf);
    std::vector<bool> in_tree(n, false);
    key[0] = 0.0;

    for (std::size_t step = 0; step < n; ++step) {
        NodeId u = kNoNode;
        for (NodeId v = 0; v < n; ++v)
            if (!in_tree[v] && (u == kNoNode || key[v] < key[u])) u = v;
        in_tree[u] = true;
        t.edge_weight[u] = u == t.root ? 0.0 : key[u];
        auto xu = d.features(u);
        for (NodeId v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            double w = distance_unchecked(metric, xu, d.features(v));
            if (w < key[v]) {
                key[v] = w;
                t.parent[v] = u;
            }
        }
    }
    return t;
}

struct PrototypeSet {
    std::vector<NodeId> members; // ascending

    bool contains(NodeId u) const { return std::binary_search(members.begin(), members.end(), u); }
    std::size_t size() const noexcept { return members.size(); }
};

/// Nodes incident to an MST edge joining two different labels. With a
/// single class there is no such edge and the MST root stands alone.
inline PrototypeSet find_prototypes(const Dataset& d, const Mst& mst) {
    if (mst.size() != d.size())
        throw DataError("find_prototypes: MST spans " + std::to_string(mst.size()) + " nodes, dataset has " +
                        std::to_string(d.size()));
    std::vector<bool> is_proto(d.size(), false);
    for (NodeId v = 0; v < d.size(); ++v) {
        NodeId p = mst.parent[v];
        if (p != kNoNode && d.label(p) != d.label(v)) is_proto[p] = is_proto[v] = true;
    }
    PrototypeSet out;
    for (NodeId v = 0; v < d.size(); ++v)
        if (is_proto[v]) out.members.push_back(v);
    if (out.members.empty() && !d.empty()) out.members.push_back(mst.root);
    return out;
}

} // namespace fopf
