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

#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "fopf/fuzzy.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fopf {
namespace {

TEST(Membership, EndpointsAndMidpoint) {
    std::vector<double> rho{1.0, 3.0, 2.0};
    MembershipMap low = membership_from_density(rho, 0.2, 1);
    EXPECT_DOUBLE_EQ(low.value[0], 0.2);
    EXPECT_EQ(low.value[1], 1.0);
    EXPECT_DOUBLE_EQ(low.value[2], 0.4);
    MembershipMap high = membership_from_density(rho, 1.2, 1);
    EXPECT_DOUBLE_EQ(high.value[0], 1.2);
    EXPECT_EQ(high.value[1], 1.0);
    MembershipMap one = membership_from_density(rho, 1.0, 1);
    for (double f : one.value) EXPECT_EQ(f, 1.0);
    EXPECT_EQ(low.params.rho_min, 1.0);
    EXPECT_EQ(low.params.rho_max, 3.0);
}

TEST(Membership, EqualDensitiesFallBackToOne) {
    std::vector<double> rho{0.5, 0.5, 0.5};
    MembershipMap m = membership_from_density(rho, 0.2, 1);
    EXPECT_TRUE(m.degenerate);
    for (double f : m.value) EXPECT_EQ(f, 1.0);
}

TEST(Membership, SigmaOutsideRangeIsConfigError) {
    std::vector<double> rho{1.0, 2.0};
    EXPECT_THROW(membership_from_density(rho, 0.1, 1), ConfigError);
    EXPECT_THROW(membership_from_density(rho, 1.3, 1), ConfigError);
    EXPECT_THROW(train_fuzzy(testing::line_fixture(), 0.0, 1), ConfigError);
}

TEST(MembershipProperty, BoundsAndMonotonicity) {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> rho(2 + trial % 30);
        for (auto& r : rho) r = u(rng);
        double sigma = 0.2 + 0.2 * (trial % 6);
        MembershipMap m = membership_from_density(rho, sigma, 1);
        for (std::size_t i = 0; i < rho.size(); ++i) {
            EXPECT_GE(m.value[i], std::min(sigma, 1.0) - 1e-15);
            EXPECT_LE(m.value[i], std::max(sigma, 1.0) + 1e-15);
            for (std::size_t j = 0; j < rho.size(); ++j) {
                if (!(rho[i] < rho[j])) continue;
                if (sigma < 1.0) {
                    EXPECT_LE(m.value[i], m.value[j]);
                } else if (sigma > 1.0) {
                    EXPECT_GE(m.value[i], m.value[j]);
                }
            }
        }
    }
}

TEST(FuzzyTrain, SigmaOneReproducesStandardOpf) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Dataset d = oracle::random_dataset(rng, 10 + trial * 5, 2, 1 + trial % 4);
        auto shared = std::make_shared<const Dataset>(d);
        SupervisedModel plain = train(shared);
        FuzzyModel fuzzy = train_fuzzy(shared, 1.0, std::min<std::size_t>(10, d.size() - 1));
        EXPECT_EQ(fuzzy.forest.label, plain.label);
        EXPECT_EQ(fuzzy.forest.cost, plain.cost);
        EXPECT_EQ(fuzzy.forest.predecessor, plain.predecessor);
        for (NodeId i = 0; i < d.size(); ++i) EXPECT_EQ(classify_fuzzy(fuzzy, d.features(i)), classify_one(plain, d.features(i)));
    }
}

TEST(FuzzyTrain, SinglePrototypeLabelsEverything) {
    Dataset d = testing::points_1d({0, 1, 2.5, 4, 7}, {1, 1, 1, 1, 1}, 1);
    FuzzyModel m = train_fuzzy(d, 0.2, 2);
    ASSERT_EQ(m.forest.prototypes.size(), 1u);
    for (ClassId l : m.forest.label) EXPECT_EQ(l, 1);
}

TEST(FuzzyTrain, PrototypeClassificationHasZeroCost) {
    Dataset d = testing::line_fixture();
    FuzzyModel m = train_fuzzy(d, 0.2, 3);
    for (NodeId p : m.forest.prototypes.members) {
        Prediction pr = classify_fuzzy(m, d.features(p));
        EXPECT_EQ(pr.cost, 0.0);
        EXPECT_EQ(pr.label, d.label(p));
    }
}

TEST(FuzzyTrain, LineFixtureOfferTable) {
    Dataset d = testing::line_fixture();
    FuzzyModel m = train_fuzzy(d, 0.2, 3);
    std::vector<double> x{2.0};
    // Offers max{C(q), |q - 2|} enumerated over every training node.
    double best = std::numeric_limits<double>::infinity();
    ClassId winner = 0;
    for (NodeId q : m.forest.order) {
        double offer = std::max(m.forest.cost[q], std::abs(d.features(q)[0] - 2.0));
        if (offer < best) {
            best = offer;
            winner = m.forest.label[q];
        }
    }
    Prediction p = classify_fuzzy(m, x);
    EXPECT_EQ(p.label, winner);
    EXPECT_EQ(p.cost, best);
}

TEST(FuzzyProperty, CostsMatchWalkOracle) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 3 + trial % 8;
        Dataset d = oracle::random_dataset(rng, n, 2, 1 + trial % 3);
        double sigma = 0.2 + 0.2 * (trial % 6);
        FuzzyModel m = train_fuzzy(d, sigma, std::min<std::size_t>(3, n - 1));
        auto w = oracle::distance_matrix(d, Metric::euclidean);
        auto ref = oracle::weighted_walk_cost(w, m.forest.prototypes.members, m.membership.value);
        for (NodeId u = 0; u < n; ++u) EXPECT_NEAR(m.forest.cost[u], ref[u], 1e-9) << "trial " << trial;
        for (NodeId p : m.forest.prototypes.members) EXPECT_EQ(m.forest.cost[p], 0.0);
    }
}

TEST(FuzzyProperty, ForestIsAcyclicAndRootedAtPrototypes) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        Dataset d = oracle::random_dataset(rng, 10 + trial, 2, 2 + trial % 2);
        FuzzyModel m = train_fuzzy(d, 0.2 * (1 + trial % 6), 5);
        for (NodeId u = 0; u < d.size(); ++u) {
            NodeId x = u;
            std::size_t steps = 0;
            while (m.forest.predecessor[x] != kNoNode) {
                x = m.forest.predecessor[x];
                ASSERT_LE(++steps, d.size());
            }
            EXPECT_TRUE(m.forest.is_prototype(x));
            EXPECT_EQ(m.forest.label[u], d.label(x));
        }
    }
}

// Two close nodes far from the only prototype discount each other's
// offers, so the optimum is weight times their gap.
TEST(FuzzyTrain, MutualDiscountReachesTheFixedPoint) {
    auto d = std::make_shared<const Dataset>(testing::points_1d({0.0, 1.0, 1.1}, {1, 1, 1}, 1));
    MembershipMap mm;
    mm.value = {1.0, 0.5, 0.5};
    mm.params.sigma = 0.5;
    FuzzyModel m = train_fuzzy_with(d, Metric::euclidean, {{0}}, mm);
    EXPECT_NEAR(m.forest.cost[1], 0.05, 1e-12);
    EXPECT_NEAR(m.forest.cost[2], 0.05, 1e-12);
}

TEST(FuzzyTrain, DuplicatePointsSettleAtZero) {
    auto d = std::make_shared<const Dataset>(
        testing::points_1d({0, 1, 2, 3, 3, 4, 5, 6, 20, 21, 22, 23, 23, 24}, {1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2}, 2));
    for (double sigma : {0.2, 0.6, 0.99}) {
        FuzzyModel m = train_fuzzy(d, sigma, 3);
        EXPECT_EQ(m.forest.cost[3], 0.0);
        EXPECT_EQ(m.forest.cost[4], 0.0);
        EXPECT_EQ(m.forest.cost[11], 0.0);
        EXPECT_EQ(m.forest.cost[12], 0.0);
    }
}

TEST(FuzzyTrain, MixedWeightsAreRejected) {
    auto d = std::make_shared<const Dataset>(testing::line_fixture());
    MembershipMap mm;
    mm.value = {1.0, 0.5, 1.2, 1.0};
    EXPECT_THROW(train_fuzzy_with(d, Metric::euclidean, {{1, 2}}, mm), ConfigError);
    mm.value = {1.0, 0.0, 1.0, 1.0};
    EXPECT_THROW(train_fuzzy_with(d, Metric::euclidean, {{1, 2}}, mm), ConfigError);
}

TEST(FuzzyTrain, MembershipSizeMismatchIsDataError) {
    auto d = std::make_shared<const Dataset>(testing::line_fixture());
    MembershipMap mm;
    mm.value = {1.0, 1.0};
    EXPECT_THROW(train_fuzzy_with(d, Metric::euclidean, {{1, 2}}, mm), DataError);
}

} // namespace
} // namespace fopf
