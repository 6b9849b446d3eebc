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

#include <cmath>
#include <random>
#include <vector>

#include "fopf/wilcoxon.hpp"
#include "oracles.hpp"

namespace fopf {
namespace {

TEST(Wilcoxon, AllZeroDifferencesAreIndeterminate) {
    std::vector<double> a{1, 2, 3, 4, 5, 6};
    WilcoxonResult r = wilcoxon_signed_rank(a, a);
    EXPECT_TRUE(r.indeterminate);
    EXPECT_EQ(r.n_effective, 0u);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_FALSE(r.significant);
}

TEST(Wilcoxon, FivePositiveDifferences) {
    std::vector<double> a{1, 2, 3, 4, 5}, b(5, 0.0);
    WilcoxonResult r = wilcoxon_signed_rank(a, b);
    EXPECT_FALSE(r.indeterminate);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.w_statistic, 0.0);
    EXPECT_EQ(r.w_plus, 15.0);
    EXPECT_DOUBLE_EQ(r.p_value, 0.0625);
    EXPECT_FALSE(r.significant);
}

TEST(Wilcoxon, FewerThanFiveNonzeroIsIndeterminate) {
    std::vector<double> a{1, 2, 3, 4, 5}, b{0, 0, 0, 0, 5};
    WilcoxonResult r = wilcoxon_signed_rank(a, b);
    EXPECT_TRUE(r.indeterminate);
    EXPECT_EQ(r.n_effective, 4u);
}

TEST(Wilcoxon, LengthMismatchIsDataError) {
    std::vector<double> a{1, 2, 3}, b{1, 2};
    EXPECT_THROW(wilcoxon_signed_rank(a, b), DataError);
}

TEST(Wilcoxon, LargeSampleUsesNormalApproximation) {
    std::vector<double> a(40), b(40, 0.0);
    for (int i = 0; i < 40; ++i) a[i] = i + 1;
    WilcoxonResult r = wilcoxon_signed_rank(a, b);
    EXPECT_FALSE(r.exact);
    // W = 0, mean 410, variance 40*41*81/24 = 5535.
    double z = (410.0 - 0.5) / std::sqrt(5535.0);
    EXPECT_NEAR(r.p_value, std::erfc(z / std::sqrt(2.0)), 1e-12);
    EXPECT_TRUE(r.significant);
}

TEST(WilcoxonProperty, ExactModeMatchesSignEnumeration) {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 5 + rng() % 10;
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse grid so ties and zero differences occur.
            a[i] = static_cast<double>(rng() % 7) * 0.25;
            b[i] = static_cast<double>(rng() % 7) * 0.25;
        }
        WilcoxonResult r = wilcoxon_signed_rank(a, b);
        if (r.indeterminate) continue;
        EXPECT_TRUE(r.exact);
        EXPECT_NEAR(r.p_value, oracle::wilcoxon_enumerated_p(a, b), 1e-12);
        EXPECT_EQ(r.w_statistic, std::min(r.w_plus, r.w_minus));
    }
}

TEST(WilcoxonProperty, SymmetricInArgumentOrder) {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 5 + rng() % 40;
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = g(rng);
            b[i] = g(rng) + 0.3;
        }
        EXPECT_EQ(wilcoxon_signed_rank(a, b).p_value, wilcoxon_signed_rank(b, a).p_value);
    }
}

} // namespace
} // namespace fopf
