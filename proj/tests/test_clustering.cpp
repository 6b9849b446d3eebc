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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "fopf/clustering.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fopf {
namespace {

bool contains(const std::vector<NodeId>& v, NodeId x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void expect_cluster_invariants(const ClusterModel& m, const KnnGraph& g) {
    const auto& rho = m.densities.rho;
    std::set<int> labels(m.cluster_label.begin(), m.cluster_label.end());
    EXPECT_EQ(labels.size(), m.n_clusters());
    EXPECT_EQ(*labels.begin(), 1);
    EXPECT_EQ(*labels.rbegin(), static_cast<int>(m.n_clusters()));
    for (NodeId r : m.roots) {
        EXPECT_EQ(m.predecessor[r], kNoNode);
        EXPECT_EQ(m.path_value[r], rho[r]);
        for (NodeId v : g.adjacency[r]) EXPECT_LE(rho[v], rho[r]) << "root " << r << " has a denser neighbour";
    }
    for (NodeId u = 0; u < m.size(); ++u) {
        EXPECT_GE(m.path_value[u], rho[u] - m.delta);
        EXPECT_LE(m.path_value[u], rho[u]);
        if (m.predecessor[u] == kNoNode) {
            EXPECT_TRUE(contains(m.roots, u));
            continue;
        }
        NodeId p = m.predecessor[u];
        EXPECT_TRUE(contains(g.adjacency[p], u));
        EXPECT_EQ(m.path_value[u], std::min(m.path_value[p], rho[u]));
        EXPECT_EQ(m.cluster_label[u], m.cluster_label[p]);
    }
}

TEST(KnnGraph, ThreeCollinearPoints) {
    Dataset d = testing::points_1d({0, 1, 3}, {1, 1, 1}, 1);
    KnnGraph g = build_knn_graph(d, 1, Metric::euclidean);
    EXPECT_EQ(g.knn[0], (std::vector<NodeId>{1}));
    EXPECT_EQ(g.knn[1], (std::vector<NodeId>{0}));
    EXPECT_EQ(g.knn[2], (std::vector<NodeId>{1}));
    EXPECT_EQ(g.adjacency[1], (std::vector<NodeId>{0, 2}));
    EXPECT_EQ(g.adjacency[2], (std::vector<NodeId>{1}));
    EXPECT_EQ(g.d_f, 2.0);
}

TEST(KnnGraph, FullNeighbourhoodIsCompleteGraph) {
    std::mt19937_64 rng(20);
    Dataset d = oracle::random_dataset(rng, 9, 2, 1);
    KnnGraph g = build_knn_graph(d, 8, Metric::euclidean);
    double max_pair = 0.0;
    for (NodeId a = 0; a < 9; ++a) {
        EXPECT_EQ(g.adjacency[a].size(), 8u);
        for (NodeId b = 0; b < 9; ++b) max_pair = std::max(max_pair, distance(Metric::euclidean, d.features(a), d.features(b)));
    }
    EXPECT_EQ(g.d_f, max_pair);
}

TEST(KnnGraph, DuplicatesGiveZeroWeightArcs) {
    Dataset d = testing::points_1d({2, 2, 7}, {1, 1, 1}, 1);
    KnnGraph g = build_knn_graph(d, 1, Metric::euclidean);
    EXPECT_EQ(g.weight[0][0], 0.0);
    EXPECT_EQ(g.d_f, 5.0);
}

TEST(KnnGraph, KOutOfRangeIsConfigError) {
    Dataset d = testing::line_fixture();
    EXPECT_THROW(build_knn_graph(d, 0, Metric::euclidean), ConfigError);
    EXPECT_THROW(build_knn_graph(d, 4, Metric::euclidean), ConfigError);
}

TEST(KnnGraphProperty, OutDegreeAndSymmetry) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + rng() % 30;
        Dataset d = oracle::random_dataset(rng, n, 2, 1);
        std::size_t k = 1 + rng() % (n - 1);
        KnnGraph g = build_knn_graph(d, k, Metric::euclidean);
        double df = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            EXPECT_EQ(g.knn[u].size(), k);
            std::set<NodeId> uniq(g.adjacency[u].begin(), g.adjacency[u].end());
            EXPECT_EQ(uniq.size(), g.adjacency[u].size());
            for (std::size_t j = 0; j < g.adjacency[u].size(); ++j) {
                NodeId v = g.adjacency[u][j];
                EXPECT_TRUE(contains(g.adjacency[v], u));
                EXPECT_EQ(g.weight[u][j], distance(Metric::euclidean, d.features(u), d.features(v)));
                df = std::max(df, g.weight[u][j]);
            }
        }
        EXPECT_EQ(g.d_f, df);
    }
}

TEST(Density, TwoPointsAtDistanceThree) {
    Dataset d = testing::points_1d({0, 3}, {1, 1}, 1);
    DensityMap m = compute_density(build_knn_graph(d, 1, Metric::euclidean));
    double expected = std::exp(-4.5) / std::sqrt(2.0 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(m.psi, 1.0);
    EXPECT_NEAR(m.rho[0], expected, 1e-15);
    EXPECT_NEAR(m.rho[1], expected, 1e-15);
    EXPECT_NEAR(m.rho[0], 0.004432, 5e-7);
}

TEST(Density, CoincidingNeighbourGivesTheMaximum) {
    Dataset d = testing::points_1d({0, 0, 5, 6}, {1, 1, 1, 1}, 1);
    DensityMap m = compute_density(build_knn_graph(d, 1, Metric::euclidean));
    EXPECT_DOUBLE_EQ(m.rho[0], 1.0 / std::sqrt(2.0 * std::numbers::pi * m.psi * m.psi));
}

TEST(Density, EquidistantPointsShareOneValue) {
    Dataset d(2, {0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2}, {1, 1, 1}, 1);
    DensityMap m = compute_density(build_knn_graph(d, 2, Metric::euclidean));
    EXPECT_NEAR(m.rho[0], m.rho[1], 1e-12);
    EXPECT_NEAR(m.rho[0], m.rho[2], 1e-12);
}

TEST(Density, AllCoincidentIsDataErrorUnlessFloorGiven) {
    Dataset d = testing::points_1d({1, 1, 1}, {1, 1, 1}, 1);
    KnnGraph g = build_knn_graph(d, 1, Metric::euclidean);
    EXPECT_THROW(compute_density(g), DataError);
    ClusterOptions opt;
    opt.degenerate_df = 1e-3;
    ClusterModel m = cluster(d, 1, Metric::euclidean, opt);
    EXPECT_EQ(m.n_clusters(), 1u);
}

TEST(DensityProperty, PositiveAndBounded) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        Dataset d = oracle::random_dataset(rng, 5 + trial, 3, 1);
        DensityMap m = compute_density(build_knn_graph(d, 1 + trial % 4, Metric::euclidean));
        double top = 1.0 / std::sqrt(2.0 * std::numbers::pi * m.psi * m.psi);
        for (double r : m.rho) {
            EXPECT_GT(r, 0.0);
            EXPECT_LE(r, top);
        }
    }
}

TEST(Cluster, TwoSeparatedPairs) {
    Dataset d = testing::points_1d({0, 0.1, 5, 5.1}, {1, 1, 1, 1}, 1);
    ClusterModel m = cluster(d, 1, Metric::euclidean);
    ASSERT_EQ(m.n_clusters(), 2u);
    EXPECT_EQ(m.cluster_label[0], m.cluster_label[1]);
    EXPECT_EQ(m.cluster_label[2], m.cluster_label[3]);
    EXPECT_NE(m.cluster_label[0], m.cluster_label[2]);
}

TEST(ClusterProperty, InvariantsAndMaxMinOracle) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + trial % 9;
        Dataset d = oracle::random_dataset(rng, n, 2, 1);
        std::size_t k = 1 + rng() % std::min<std::size_t>(3, n - 1);
        KnnGraph g = build_knn_graph(d, k, Metric::euclidean);
        ClusterModel m = cluster(g, compute_density(g));
        expect_cluster_invariants(m, g);
        auto ref = oracle::max_min_density(g.adjacency, m.densities.rho, m.roots);
        for (NodeId u = 0; u < n; ++u) EXPECT_NEAR(m.path_value[u], ref[u], 1e-9);
    }
}

TEST(NormalizedCut, HandBuiltFourNodeGraph) {
    KnnGraph g;
    g.k = 1;
    g.adjacency = {{1}, {0, 2}, {1, 3}, {2}};
    g.weight = {{1.0}, {1.0, 3.0}, {3.0, 1.0}, {1.0}};
    g.knn = g.adjacency;
    ClusterModel m;
    m.cluster_label = {1, 1, 2, 2};
    m.roots = {0, 3};
    // Each cluster: internal mass 2 * 1/2, crossing mass 1/4.
    EXPECT_NEAR(normalized_cut(m, g), 2 * (0.25 / 1.25), 1e-15);
    m.cluster_label = {1, 1, 1, 1};
    m.roots = {0};
    EXPECT_EQ(normalized_cut(m, g), 0.0);
}

TEST(NormalizedCut, DisconnectedComponentsScoreZero) {
    Dataset d = testing::points_1d({0, 0.1, 5, 5.1}, {1, 1, 1, 1}, 1);
    KnnGraph g = build_knn_graph(d, 1, Metric::euclidean);
    EXPECT_EQ(normalized_cut(cluster(g, compute_density(g)), g), 0.0);
}

TEST(BestK, SingleCandidate) {
    std::mt19937_64 rng(24);
    Dataset d = oracle::random_dataset(rng, 12, 2, 1);
    EXPECT_EQ(find_best_k(d, 1, Metric::euclidean).k_star, 1u);
    EXPECT_THROW(find_best_k(d, 12, Metric::euclidean), ConfigError);
}

TEST(BestK, SeparatedBlobs) {
    Dataset d = generate_synthetic(SyntheticKind::blobs, 40, 3, 2);
    BestK a = find_best_k(d, 15, Metric::euclidean);
    BestK b = find_best_k(d, 15, Metric::euclidean);
    EXPECT_EQ(a.k_star, b.k_star);
    EXPECT_EQ(a.model.cluster_label, b.model.cluster_label);
    EXPECT_GE(a.model.n_clusters(), 2u);
    std::size_t crossing = 0;
    for (NodeId u = 0; u < d.size(); ++u) {
        for (NodeId v : a.graph.adjacency[u]) crossing += d.label(u) != d.label(v);
        for (NodeId v = 0; v < d.size(); ++v)
            if (a.model.cluster_label[u] == a.model.cluster_label[v]) {
                EXPECT_EQ(d.label(u), d.label(v));
            }
    }
    EXPECT_EQ(crossing, 0u);
}

TEST(BestK, ProfileAgreesWithDirectClustering) {
    std::mt19937_64 rng(25);
    Dataset d = oracle::random_dataset(rng, 40, 2, 1);
    BestK best = find_best_k(d, 12, Metric::euclidean);
    double best_cut = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= 12; ++k) {
        KnnGraph g = build_knn_graph(d, k, Metric::euclidean);
        double cut = normalized_cut(cluster(g, compute_density(g)), g);
        EXPECT_EQ(best.profile.cut[k - 1], cut);
        if (cut < best_cut) {
            best_cut = cut;
            best_k = k;
        }
    }
    EXPECT_EQ(best.k_star, best_k);
    EXPECT_EQ(best.model.cluster_label, cluster(d, best_k, Metric::euclidean).cluster_label);
}

TEST(BestK, ParallelProfileMatchesSerial) {
    std::mt19937_64 rng(26);
    Dataset d = oracle::random_dataset(rng, 60, 2, 1);
    NeighborTable table(d, 20, Metric::euclidean);
    ClusterOptions par;
    par.jobs = 4;
    EXPECT_EQ(cut_profile(table, 20).cut, cut_profile(table, 20, par).cut);
}

// Cluster counts fall with k overall but not step by step: a larger
// neighbourhood can split a plateau and add a maximum.
TEST(ClusterFixture, ClusterCountTrendsDownWithK) {
    for (const char* name : {"blobs.csv", "rings.csv"}) {
        Dataset d = load_csv(testing::data_path(name), true);
        const std::size_t first = cluster(d, 1, Metric::euclidean).n_clusters();
        std::size_t last = first;
        for (std::size_t k = 2; k <= 30; ++k) {
            last = cluster(d, k, Metric::euclidean).n_clusters();
            EXPECT_LE(last, first) << name << " k=" << k;
        }
        EXPECT_LT(last, first) << name;
    }
}

TEST(Cluster, AssignmentsCsvHeader) {
    Dataset d = testing::points_1d({0, 0.1, 5, 5.1}, {1, 1, 1, 1}, 1);
    std::string csv = cluster_assignments_csv(cluster(d, 1, Metric::euclidean));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,cluster_label,rho,path_value");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

} // namespace
} // namespace fopf
