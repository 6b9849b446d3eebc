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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fopf/dataset.hpp"
#include "fopf/error.hpp"

namespace fopf {

/// Accuracy is the plain proportion correct; F1 is macro-averaged with an
/// absent class scoring 0. Balanced accuracy (mean recall over the classes
/// present in the truth) is reported alongside for comparison.
struct Metrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double balanced_accuracy = 0.0;
    std::vector<double> per_class_f1;              // index c-1
    std::vector<std::vector<std::size_t>> confusion; // [truth-1][predicted-1]

    std::size_t n_classes() const noexcept { return confusion.size(); }
    std::size_t total() const noexcept {
        std::size_t t = 0;
        for (const auto& row : confusion)
            for (auto c : row) t += c;
        return t;
    }
};

inline Metrics metrics_from_confusion(std::vector<std::vector<std::size_t>> confusion) {
    Metrics m;
    const std::size_t k = confusion.size();
    m.confusion = std::move(confusion);
    std::size_t total = 0;
    std::size_t correct = 0;
    std::vector<std::size_t> row_sum(k, 0);
    std::vector<std::size_t> col_sum(k, 0);
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t p = 0; p < k; ++p) {
            auto c = m.confusion[t][p];
            total += c;
            row_sum[t] += c;
            col_sum[p] += c;
        }
        correct += m.confusion[t][t];
    }
    if (total == 0) throw DataError("metrics: empty confusion matrix");
    m.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    m.per_class_f1.assign(k, 0.0);
    double recall_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const auto tp = m.confusion[c][c];
        const auto denom = row_sum[c] + col_sum[c]; // 2tp + fp + fn
        if (denom > 0) m.per_class_f1[c] = 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
        if (row_sum[c] > 0) {
            recall_sum += static_cast<double>(tp) / static_cast<double>(row_sum[c]);
            ++present;
        }
    }
    double f1_sum = 0.0;
    for (double f : m.per_class_f1) f1_sum += f;
    m.macro_f1 = k > 0 ? f1_sum / static_cast<double>(k) : 0.0;
    m.balanced_accuracy = present > 0 ? recall_sum / static_cast<double>(present) : 0.0;
    return m;
}

/// Labels are 1-based class ids. `n_classes` of 0 means the largest label
/// seen in either input.
inline Metrics compute_metrics(std::span<const ClassId> truth, std::span<const ClassId> predicted,
                               std::size_t n_classes = 0) {
    if (truth.size() != predicted.size())
        throw DataError("metrics: " + std::to_string(truth.size()) + " truth labels vs " +
                        std::to_string(predicted.size()) + " predictions");
    if (truth.empty()) throw DataError("metrics: empty input");
    std::size_t k = n_classes;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 1 || predicted[i] < 1) throw DataError("metrics: class ids must be >= 1");
        k = std::max({k, static_cast<std::size_t>(truth[i]), static_cast<std::size_t>(predicted[i])});
    }
    std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++confusion[static_cast<std::size_t>(truth[i] - 1)][static_cast<std::size_t>(predicted[i] - 1)];
    return metrics_from_confusion(std::move(confusion));
}

} // namespace fopf
