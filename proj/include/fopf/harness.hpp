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

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fopf/clustering.hpp"
#include "fopf/dataset.hpp"
#include "fopf/detail/parallel.hpp"
#include "fopf/fuzzy.hpp"
#include "fopf/log.hpp"
#include "fopf/metrics.hpp"
#include "fopf/mst.hpp"
#include "fopf/supervised.hpp"
#include "fopf/wilcoxon.hpp"

namespace fopf {

inline std::vector<std::size_t> default_k_grid() {
    std::vector<std::size_t> g{1};
    for (std::size_t k = 10; k <= 150; k += 10) g.push_back(k);
    return g;
}

inline std::vector<double> default_sigma_grid() { return {0.2, 0.4, 0.6, 0.8, 1.0, 1.2}; }

inline std::vector<ClassId> predicted_labels(const std::vector<Prediction>& preds) {
    std::vector<ClassId> out;
    out.reserve(preds.size());
    for (const auto& p : preds) out.push_back(p.label);
    return out;
}

inline Metrics evaluate(const std::vector<Prediction>& preds, const Dataset& truth) {
    auto labels = predicted_labels(preds);
    return compute_metrics(truth.labels(), labels, truth.n_classes());
}

// ---------------------------------------------------------------------------
// Grid search over (k_max, sigma)

struct GridCell {
    std::size_t k_max = 0;
    double sigma = 0.0;
    std::size_t k_star = 0;
    double accuracy = 0.0;
    bool skipped = false;
};

struct GridSearchReport {
    std::vector<std::size_t> k_grid;
    std::vector<double> sigma_grid;
    std::vector<GridCell> cells; // k-major: cells[ki * |sigma grid| + si]
    bool has_best = false;
    std::size_t best_k_max = 0;
    double best_sigma = 0.0;
    double best_accuracy = 0.0;

    const GridCell& cell(std::size_t ki, std::size_t si) const { return cells.at(ki * sigma_grid.size() + si); }
};

struct GridOptions {
    Metric metric = Metric::euclidean;
    ClusterOptions cluster;
    std::size_t jobs = 1;
};

/// Evaluation accuracy of Fuzzy OPF for every (k_max, sigma) pair.
///
/// One neighbour table and one cut profile serve every k_max (best k for a
/// given k_max is a prefix minimum); densities are computed once per chosen
/// k and shared across sigma. Cells with k_max > |train| - 1 are skipped.
/// Best cell: highest accuracy, then smaller k_max, then smaller sigma.
inline GridSearchReport grid_search(std::shared_ptr<const Dataset> train, const Dataset& eval,
                                    const std::vector<std::size_t>& k_grid, const std::vector<double>& sigma_grid,
                                    const GridOptions& options = {}) {
    if (k_grid.empty() || sigma_grid.empty()) throw ConfigError("grid search needs non-empty k and sigma grids");
    for (double s : sigma_grid) validate_sigma(s);
    detail::require_trainable(*train);
    if (eval.n_features() != train->n_features()) throw DataError("evaluation set dimensionality mismatch");

    GridSearchReport rep;
    rep.k_grid = k_grid;
    rep.sigma_grid = sigma_grid;
    rep.cells.resize(k_grid.size() * sigma_grid.size());

    const std::size_t limit = train->size() - 1;
    std::size_t k_top = 0;
    for (std::size_t k : k_grid) {
        if (k < 1) throw ConfigError("k_max values must be >= 1");
        if (k <= limit) k_top = std::max(k_top, k);
        else log::warn("grid search: k_max=" + std::to_string(k) + " exceeds |train|-1=" + std::to_string(limit) +
                       "; cell skipped");
    }

    std::vector<std::size_t> k_star(k_grid.size(), 0);
    std::map<std::size_t, std::vector<double>> rho_by_k;
    if (k_top > 0) {
        NeighborTable table(*train, k_top, options.metric);
        CutProfile profile = cut_profile(table, k_top, options.cluster);
        for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
            if (k_grid[ki] > limit) continue;
            k_star[ki] = profile.best_k(k_grid[ki]);
            if (!rho_by_k.contains(k_star[ki]))
                rho_by_k[k_star[ki]] = cluster_at(table, k_star[ki], options.cluster).densities.rho;
        }
    }

    // Distinct (k*, sigma) pairs give distinct models; identical pairs share.
    std::vector<std::pair<std::size_t, std::size_t>> jobs; // (k*, sigma index)
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> job_of;
    for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
        if (k_star[ki] == 0) continue;
        for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
            auto key = std::make_pair(k_star[ki], si);
            if (job_of.try_emplace(key, jobs.size()).second) jobs.push_back(key);
        }
    }
    const PrototypeSet prototypes = find_prototypes(*train, compute_mst(*train, options.metric));
    std::vector<double> job_accuracy(jobs.size(), 0.0);
    detail::parallel_for(jobs.size(), options.jobs, [&](std::size_t j) {
        auto [ks, si] = jobs[j];
        auto membership = membership_from_density(rho_by_k.at(ks), sigma_grid[si], ks);
        FuzzyModel model = train_fuzzy_with(train, options.metric, prototypes, std::move(membership));
        job_accuracy[j] = evaluate(classify_batch(model, eval), eval).accuracy;
    });

    for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
        for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
            GridCell& c = rep.cells[ki * sigma_grid.size() + si];
            c.k_max = k_grid[ki];
            c.sigma = sigma_grid[si];
            if (k_star[ki] == 0) {
                c.skipped = true;
                continue;
            }
            c.k_star = k_star[ki];
            c.accuracy = job_accuracy[job_of.at({k_star[ki], si})];
            bool better = !rep.has_best || c.accuracy > rep.best_accuracy ||
                          (c.accuracy == rep.best_accuracy &&
                           (c.k_max < rep.best_k_max || (c.k_max == rep.best_k_max && c.sigma < rep.best_sigma)));
            if (better) {
                rep.has_best = true;
                rep.best_k_max = c.k_max;
                rep.best_sigma = c.sigma;
                rep.best_accuracy = c.accuracy;
            }
        }
    }
    return rep;
}

/// Plot-ready heatmap rows: k_max,sigma,accuracy (empty accuracy when skipped).
inline std::string grid_heatmap_csv(const GridSearchReport& rep) {
    std::string out = "k_max,sigma,accuracy\n";
    for (const auto& c : rep.cells) {
        out += std::to_string(c.k_max) + ',' + format_double(c.sigma) + ',';
        if (!c.skipped) out += format_double(c.accuracy);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-validated experiments

enum class Classifier { opf, fuzzy_opf };

inline std::string_view to_string(Classifier c) noexcept { return c == Classifier::opf ? "OPF" : "Fuzzy-OPF"; }

inline Classifier parse_classifier(std::string_view s) {
    if (s == "opf" || s == "OPF") return Classifier::opf;
    if (s == "fuzzy" || s == "fuzzy-opf" || s == "Fuzzy-OPF") return Classifier::fuzzy_opf;
    throw ConfigError("unknown classifier '" + std::string(s) + "'");
}

struct ExperimentConfig {
    std::size_t runs = 20;
    SplitSpec split;                      // split.seed is the base seed
    std::vector<Classifier> classifiers{Classifier::opf, Classifier::fuzzy_opf};
    std::vector<std::size_t> k_grid = default_k_grid();
    std::vector<double> sigma_grid = default_sigma_grid();
    Metric metric = Metric::euclidean;
    bool scale = false;
    double alpha = 0.05;
    std::size_t jobs = 1;
};

struct RunResult {
    std::uint64_t seed = 0;
    Metrics metrics;
    double train_seconds = 0.0;
    double classify_seconds = 0.0;
    double tuning_seconds = 0.0;         // grid search, Fuzzy-OPF only
    std::optional<std::size_t> k_max;    // tuned, Fuzzy-OPF only
    std::optional<double> sigma;
    std::optional<std::size_t> k_star;
    std::optional<double> eval_accuracy; // best grid cell
};

struct Summary {
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for a single run
};

inline Summary summarize(const std::vector<double>& v) {
    Summary s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

struct ClassifierResults {
    Classifier classifier = Classifier::opf;
    std::vector<RunResult> runs;

    std::vector<double> accuracies() const {
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(r.metrics.accuracy);
        return v;
    }
    template <class Fn>
    Summary summary(Fn field) const {
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(field(r));
        return summarize(v);
    }
};

struct ExperimentReport {
    ExperimentConfig config;
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<ClassifierResults> results;
    std::optional<WilcoxonResult> wilcoxon; // OPF vs Fuzzy-OPF accuracies, when both ran

    const ClassifierResults* find(Classifier c) const {
        for (const auto& r : results)
            if (r.classifier == c) return &r;
        return nullptr;
    }
};

namespace detail {

template <class Fn>
double timed(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

/// For each run r: stratified split with seed base+r; OPF trained on the
/// training part; Fuzzy-OPF tuned by grid search on (train, eval) and
/// retrained on the training part with the best pair; both scored on the
/// test part. Paired Wilcoxon over per-run test accuracies.
inline ExperimentReport run_cv_experiment(const Dataset& d, const ExperimentConfig& cfg) {
    if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
    if (cfg.classifiers.empty()) throw ConfigError("no classifier selected");
    cfg.split.validate();

    ExperimentReport rep;
    rep.config = cfg;
    rep.n_samples = d.size();
    rep.n_features = d.n_features();
    rep.n_classes = d.n_classes();
    for (Classifier c : cfg.classifiers) {
        rep.results.push_back({c, {}});
        rep.results.back().runs.resize(cfg.runs);
    }

    detail::parallel_for(cfg.runs, cfg.jobs, [&](std::size_t r) {
        SplitSpec spec = cfg.split;
        spec.seed = cfg.split.seed + r;
        SplitParts parts = stratified_split(d, spec);
        if (cfg.scale) {
            auto scaler = MinMaxScaler::fit(parts.train);
            parts.train = scaler.apply(parts.train);
            parts.eval = scaler.apply(parts.eval);
            parts.test = scaler.apply(parts.test);
        }
        auto train_set = std::make_shared<const Dataset>(std::move(parts.train));

        for (auto& res : rep.results) {
            RunResult& out = res.runs[r];
            out.seed = spec.seed;
            std::vector<Prediction> preds;
            if (res.classifier == Classifier::opf) {
                SupervisedModel model;
                out.train_seconds = detail::timed([&] { model = train(train_set, cfg.metric); });
                out.classify_seconds = detail::timed([&] { preds = classify_batch(model, parts.test); });
            } else {
                GridSearchReport grid;
                GridOptions gopt;
                gopt.metric = cfg.metric;
                out.tuning_seconds = detail::timed(
                    [&] { grid = grid_search(train_set, parts.eval, cfg.k_grid, cfg.sigma_grid, gopt); });
                if (!grid.has_best) throw ConfigError("grid search produced no valid cell (k grid too large?)");
                FuzzyModel model;
                out.train_seconds = detail::timed([&] {
                    model = train_fuzzy(train_set, grid.best_sigma, grid.best_k_max, cfg.metric);
                });
                out.classify_seconds = detail::timed([&] { preds = classify_batch(model, parts.test); });
                out.k_max = grid.best_k_max;
                out.sigma = grid.best_sigma;
                out.k_star = model.membership.k_used;
                out.eval_accuracy = grid.best_accuracy;
            }
            out.metrics = evaluate(preds, parts.test);
        }
    });

    const auto* opf = rep.find(Classifier::opf);
    const auto* fuzzy = rep.find(Classifier::fuzzy_opf);
    if (opf && fuzzy) rep.wilcoxon = wilcoxon_signed_rank(opf->accuracies(), fuzzy->accuracies(), cfg.alpha);
    return rep;
}

} // namespace fopf
