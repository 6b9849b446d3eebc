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

#include <string>

#include <json.hpp>

#include "fopf/harness.hpp"
#include "fopf/metrics.hpp"
#include "fopf/wilcoxon.hpp"

// JSON views of the harness results. Key order is fixed so that equal
// inputs produce byte-identical files. Wall-clock timings are the only
// non-deterministic values and are emitted only on request.
namespace fopf {

using Json = nlohmann::ordered_json;

inline Json to_json(const Metrics& m) {
    Json j;
    j["accuracy"] = m.accuracy;
    j["macro_f1"] = m.macro_f1;
    j["balanced_accuracy"] = m.balanced_accuracy;
    j["per_class_f1"] = m.per_class_f1;
    j["confusion"] = m.confusion;
    return j;
}

inline Json to_json(const WilcoxonResult& w) {
    Json j;
    j["w_statistic"] = w.w_statistic;
    j["w_plus"] = w.w_plus;
    j["w_minus"] = w.w_minus;
    j["p_value"] = w.p_value;
    j["n_effective"] = w.n_effective;
    j["method"] = w.indeterminate ? "indeterminate" : (w.exact ? "exact" : "normal-approximation");
    j["alpha"] = w.alpha;
    j["significant"] = w.significant;
    return j;
}

inline Json grid_best_json(const GridSearchReport& g) {
    Json j;
    if (g.has_best) {
        j["k_max"] = g.best_k_max;
        j["sigma"] = g.best_sigma;
        j["accuracy"] = g.best_accuracy;
    } else {
        j["k_max"] = nullptr;
        j["sigma"] = nullptr;
        j["accuracy"] = nullptr;
    }
    std::size_t valid = 0;
    for (const auto& c : g.cells) valid += c.skipped ? 0 : 1;
    j["cells"] = g.cells.size();
    j["valid_cells"] = valid;
    return j;
}

inline Json to_json(const ExperimentReport& rep, bool include_timing = false) {
    Json j;
    Json meta;
    meta["accuracy_definition"] = "proportion of correctly classified test samples";
    meta["f1_definition"] = "macro-averaged F1 over classes (absent class scores 0)";
    meta["balanced_accuracy_definition"] = "mean per-class recall over classes present in the test part";
    meta["std_definition"] = "sample standard deviation over runs";
    j["metadata"] = meta;

    Json cfg;
    cfg["runs"] = rep.config.runs;
    cfg["base_seed"] = rep.config.split.seed;
    cfg["split"] = {rep.config.split.train_fraction, rep.config.split.eval_fraction, rep.config.split.test_fraction};
    cfg["metric"] = std::string(to_string(rep.config.metric));
    cfg["k_grid"] = rep.config.k_grid;
    cfg["sigma_grid"] = rep.config.sigma_grid;
    cfg["scale"] = rep.config.scale;
    cfg["alpha"] = rep.config.alpha;
    j["config"] = cfg;

    j["dataset"] = {{"n_samples", rep.n_samples}, {"n_features", rep.n_features}, {"n_classes", rep.n_classes}};

    Json classifiers = Json::array();
    for (const auto& res : rep.results) {
        Json c;
        c["name"] = std::string(to_string(res.classifier));
        auto acc = res.summary([](const RunResult& r) { return r.metrics.accuracy; });
        auto f1 = res.summary([](const RunResult& r) { return r.metrics.macro_f1; });
        auto bal = res.summary([](const RunResult& r) { return r.metrics.balanced_accuracy; });
        c["mean_accuracy"] = acc.mean;
        c["std_accuracy"] = acc.std;
        c["mean_f1"] = f1.mean;
        c["std_f1"] = f1.std;
        c["mean_balanced_accuracy"] = bal.mean;
        if (include_timing) {
            c["mean_train_seconds"] = res.summary([](const RunResult& r) { return r.train_seconds; }).mean;
            c["mean_classify_seconds"] = res.summary([](const RunResult& r) { return r.classify_seconds; }).mean;
            if (res.classifier == Classifier::fuzzy_opf)
                c["mean_tuning_seconds"] = res.summary([](const RunResult& r) { return r.tuning_seconds; }).mean;
        }
        Json runs = Json::array();
        for (const auto& r : res.runs) {
            Json jr;
            jr["seed"] = r.seed;
            jr["metrics"] = to_json(r.metrics);
            if (r.k_max) jr["k_max"] = *r.k_max;
            if (r.sigma) jr["sigma"] = *r.sigma;
            if (r.k_star) jr["k_star"] = *r.k_star;
            if (r.eval_accuracy) jr["eval_accuracy"] = *r.eval_accuracy;
            if (include_timing) {
                jr["train_seconds"] = r.train_seconds;
                jr["classify_seconds"] = r.classify_seconds;
                if (res.classifier == Classifier::fuzzy_opf) jr["tuning_seconds"] = r.tuning_seconds;
            }
            runs.push_back(std::move(jr));
        }
        c["runs"] = std::move(runs);
        classifiers.push_back(std::move(c));
    }
    j["classifiers"] = std::move(classifiers);
    if (rep.wilcoxon) {
        Json w = to_json(*rep.wilcoxon);
        w["pair"] = {"OPF", "Fuzzy-OPF"};
        j["wilcoxon"] = std::move(w);
    }
    return j;
}

/// Timing-only companion document for a report.
inline Json timing_json(const ExperimentReport& rep) {
    Json j = Json::array();
    for (const auto& res : rep.results) {
        Json c;
        c["name"] = std::string(to_string(res.classifier));
        c["mean_train_seconds"] = res.summary([](const RunResult& r) { return r.train_seconds; }).mean;
        c["mean_classify_seconds"] = res.summary([](const RunResult& r) { return r.classify_seconds; }).mean;
        Json per_run = Json::array();
        for (const auto& r : res.runs)
            per_run.push_back({{"train_seconds", r.train_seconds},
                               {"classify_seconds", r.classify_seconds},
                               {"tuning_seconds", r.tuning_seconds}});
        c["runs"] = std::move(per_run);
        j.push_back(std::move(c));
    }
    return j;
}

} // namespace fopf
