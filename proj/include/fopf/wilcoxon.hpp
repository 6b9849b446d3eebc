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
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fopf/error.hpp"

namespace fopf {

struct WilcoxonResult {
    double w_statistic = 0.0; // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    double p_value = 1.0;     // two-sided
    std::size_t n_effective = 0;
    bool exact = false;
    bool indeterminate = false; // fewer than kMinEffective nonzero differences
    bool significant = false;
    double alpha = 0.05;

    static constexpr std::size_t kMinEffective = 5;
    static constexpr std::size_t kExactLimit = 25;
};

namespace detail {

// Average ranks of |d|, doubled so that tied ranks stay integral.
inline std::vector<std::uint64_t> doubled_ranks(std::span<const double> abs_diff) {
    const std::size_t n = abs_diff.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return abs_diff[a] < abs_diff[b]; });
    std::vector<std::uint64_t> rank2(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && abs_diff[idx[j + 1]] == abs_diff[idx[i]]) ++j;
        // ranks i+1..j+1 averaged, times two
        std::uint64_t r2 = static_cast<std::uint64_t>(i + 1 + j + 1);
        for (std::size_t t = i; t <= j; ++t) rank2[idx[t]] = r2;
        i = j + 1;
    }
    return rank2;
}

} // namespace detail

/// Two-sided Wilcoxon signed-rank test on paired scores. Zero differences
/// are dropped and tied |differences| share their average rank. Up to 25
/// effective pairs the p-value comes from the exact null distribution of
/// the signed-rank sum over the observed ranks (ties included); beyond that
/// a tie-corrected normal approximation with continuity correction is used.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           double alpha = 0.05) {
    if (a.size() != b.size())
        throw DataError("wilcoxon: paired samples differ in length (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    WilcoxonResult r;
    r.alpha = alpha;
    std::vector<double> abs_diff;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d == 0.0) continue;
        abs_diff.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    const std::size_t n = abs_diff.size();
    r.n_effective = n;
    if (n < WilcoxonResult::kMinEffective) {
        r.indeterminate = true;
        r.p_value = 1.0;
        return r;
    }

    auto rank2 = detail::doubled_ranks(abs_diff);
    std::uint64_t plus2 = 0;
    std::uint64_t total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (positive[i]) plus2 += rank2[i];
    }
    const std::uint64_t minus2 = total2 - plus2;
    const std::uint64_t w2 = std::min(plus2, minus2);
    r.w_plus = static_cast<double>(plus2) / 2.0;
    r.w_minus = static_cast<double>(minus2) / 2.0;
    r.w_statistic = static_cast<double>(w2) / 2.0;

    if (n <= WilcoxonResult::kExactLimit) {
        // count[s] = number of sign assignments whose doubled W+ equals s.
        std::vector<double> count(total2 + 1, 0.0);
        count[0] = 1.0;
        std::uint64_t reach = 0;
        for (std::size_t i = 0; i < n; ++i) {
            reach += rank2[i];
            for (std::uint64_t s = reach; s >= rank2[i]; --s) {
                count[s] += count[s - rank2[i]];
                if (s == rank2[i]) break;
            }
        }
        double tail = 0.0;
        for (std::uint64_t s = 0; s <= w2; ++s) tail += count[s];
        const double p = 2.0 * tail / std::ldexp(1.0, static_cast<int>(n));
        r.p_value = std::min(1.0, p);
        r.exact = true;
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double tie_term = 0.0;
        std::vector<std::uint64_t> sorted = rank2;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            tie_term += t * t * t - t;
            i = j;
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        const double diff = std::max(0.0, std::abs(r.w_statistic - mean) - 0.5);
        const double z = var > 0.0 ? diff / std::sqrt(var) : 0.0;
        r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
    r.significant = r.p_value < alpha;
    return r;
}

} // namespace fopf
