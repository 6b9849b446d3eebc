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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fopf/clustering.hpp"
#include "fopf/dataset.hpp"
#include "fopf/log.hpp"
#include "fopf/mst.hpp"
#include "fopf/supervised.hpp"

namespace fopf {

inline constexpr double kSigmaMin = 0.2;
inline constexpr double kSigmaMax = 1.2;

inline void validate_sigma(double sigma) {
    if (!(sigma >= kSigmaMin - 1e-12 && sigma <= kSigmaMax + 1e-12))
        throw ConfigError("sigma must lie in [0.2, 1.2], got " + format_double(sigma));
}

struct MembershipParams {
    double sigma = 1.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
};

/// Per-training-sample membership. `degenerate` is set when every density
/// was equal and the map fell back to F = 1.
struct MembershipMap {
    std::vector<double> value;
    MembershipParams params;
    std::size_t k_used = 0;
    bool degenerate = false;

    std::size_t size() const noexcept { return value.size(); }
};

/// F(x) = (1 - sigma) * ((rho(x) - rho_min) / (rho_max - rho_min))^2 + sigma.
/// The densest sample gets exactly 1 and the sparsest exactly sigma.
inline MembershipMap membership_from_density(std::span<const double> rho, double sigma, std::size_t k_used) {
    validate_sigma(sigma);
    if (rho.empty()) throw DataError("membership: empty density map");
    MembershipMap m;
    m.k_used = k_used;
    m.params.sigma = sigma;
    m.params.rho_min = *std::min_element(rho.begin(), rho.end());
    m.params.rho_max = *std::max_element(rho.begin(), rho.end());
    m.value.resize(rho.size());
    const double range = m.params.rho_max - m.params.rho_min;
    if (!(range > 0.0)) {
        log::warn("membership: all densities are equal; using F = 1 (standard OPF costs)");
        m.degenerate = true;
        std::fill(m.value.begin(), m.value.end(), 1.0);
        return m;
    }
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] == m.params.rho_max) {
            m.value[i] = 1.0;
            continue;
        }
        const double t = (rho[i] - m.params.rho_min) / range;
        m.value[i] = (1.0 - sigma) * t * t + sigma;
    }
    return m;
}

/// Densities from the best-k clustering of the training set, then F.
inline MembershipMap compute_membership(const Dataset& d, double sigma, std::size_t k_max, Metric metric,
                                        const ClusterOptions& options = {}) {
    validate_sigma(sigma);
    BestK best = find_best_k(d, k_max, metric, options);
    return membership_from_density(best.model.densities.rho, sigma, best.k_star);
}

struct FuzzyModel {
    SupervisedModel forest;
    MembershipMap membership;

    std::size_t size() const noexcept { return forest.size(); }
};

/// Fuzzy competition from an explicit prototype set and membership map.
inline FuzzyModel train_fuzzy_with(std::shared_ptr<const Dataset> d, Metric metric, PrototypeSet prototypes,
                                   MembershipMap membership) {
    detail::require_trainable(*d);
    if (membership.size() != d->size())
        throw DataError("membership map covers " + std::to_string(membership.size()) + " samples, dataset has " +
                        std::to_string(d->size()));
    if (prototypes.members.empty()) throw ConfigError("prototype set is empty");
    std::sort(prototypes.members.begin(), prototypes.members.end());
    auto maps = detail::compete(*d, metric, prototypes, membership.value);
    return {detail::assemble(std::move(d), metric, std::move(prototypes), std::move(maps)), std::move(membership)};
}

/// Fuzzy OPF training with a precomputed membership map (MST prototypes).
inline FuzzyModel train_fuzzy(std::shared_ptr<const Dataset> d, Metric metric, MembershipMap membership) {
    detail::require_trainable(*d);
    PrototypeSet prototypes = find_prototypes(*d, compute_mst(*d, metric));
    return train_fuzzy_with(std::move(d), metric, std::move(prototypes), std::move(membership));
}

/// Full Fuzzy OPF training: best-k clustering for densities, membership,
/// MST prototypes and the membership-weighted competition.
inline FuzzyModel train_fuzzy(std::shared_ptr<const Dataset> d, double sigma, std::size_t k_max,
                              Metric metric = Metric::euclidean, const ClusterOptions& options = {}) {
    detail::require_trainable(*d);
    MembershipMap membership = compute_membership(*d, sigma, k_max, metric, options);
    return train_fuzzy(std::move(d), metric, std::move(membership));
}

inline FuzzyModel train_fuzzy(const Dataset& d, double sigma, std::size_t k_max, Metric metric = Metric::euclidean,
                              const ClusterOptions& options = {}) {
    return train_fuzzy(std::make_shared<const Dataset>(d), sigma, k_max, metric, options);
}

/// Test samples carry no membership, so the offer is the plain
/// max{C(q), d(q,x)} over the fuzzy-trained cost map.
inline Prediction classify_fuzzy(const FuzzyModel& m, std::span<const double> x) { return classify_one(m.forest, x); }

inline std::vector<Prediction> classify_batch(const FuzzyModel& m, const Dataset& t) {
    return classify_batch(m.forest, t);
}

} // namespace fopf
