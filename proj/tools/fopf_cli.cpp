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


// fopf: command-line front end for training, classification, clustering,
// grid search, cross-validated benchmarks and format conversion.
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 runtime error.
// Errors are reported on stderr as {"error": {"kind": ..., "message": ...}}.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fopf/fopf.hpp"

namespace {

using namespace fopf;

struct Options {
    std::string input;
    std::string eval;
    std::string model;
    std::string output;
    std::string metrics_out;
    std::string metric = "euclidean";
    std::string format;
    std::string k_grid;
    std::string sigma_grid;
    std::string split = "0.6,0.2,0.2";
    std::string classifiers = "opf,fuzzy";
    std::optional<double> sigma;
    std::size_t k_max = 100;
    bool k_max_given = false;
    std::size_t runs = 20;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool header = false;
    bool unlabeled = false;
    bool scale = false;
    bool fast_mst = false;
};

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::runtime: return 4;
    }
    return 4;
}

void report_error(std::string_view kind, std::string_view message) {
    Json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

double parse_real(const std::string& s, const std::string& what) {
    double v = 0.0;
    if (!detail::parse_double(detail::trim(s), v) || !std::isfinite(v))
        throw ConfigError("invalid " + what + " value '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
    std::int64_t v = 0;
    if (!detail::parse_int(detail::trim(s), v) || v < 1) throw ConfigError("invalid " + what + " value '" + s + "'");
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_k_grid(const std::string& s) {
    if (s.empty()) return default_k_grid();
    std::vector<std::size_t> out;
    for (const auto& item : split_list(s, ',')) out.push_back(parse_count(item, "k grid"));
    if (out.empty()) throw ConfigError("empty k grid");
    return out;
}

std::vector<double> parse_sigma_grid(const std::string& s) {
    if (s.empty()) return default_sigma_grid();
    std::vector<double> out;
    for (const auto& item : split_list(s, ',')) {
        out.push_back(parse_real(item, "sigma grid"));
        validate_sigma(out.back());
    }
    if (out.empty()) throw ConfigError("empty sigma grid");
    return out;
}

SplitSpec parse_split(const std::string& s, std::uint64_t seed) {
    auto parts = split_list(s, ',');
    if (parts.size() != 3) throw ConfigError("--split needs three comma-separated fractions");
    SplitSpec spec{parse_real(parts[0], "split"), parse_real(parts[1], "split"), parse_real(parts[2], "split"), seed};
    spec.validate();
    return spec;
}

bool is_csv_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

// Accepts a file path or synthetic:{blobs,rings}:N[:classes].
Dataset load_input(const std::string& spec, const Options& o, bool labeled = true) {
    if (spec.empty()) throw ConfigError("--input is required");
    if (spec.rfind("synthetic:", 0) == 0) {
        auto parts = split_list(spec, ':');
        if (parts.size() < 3 || parts.size() > 4) throw ConfigError("synthetic input must be synthetic:KIND:N[:CLASSES]");
        SyntheticKind kind;
        if (parts[1] == "blobs") kind = SyntheticKind::blobs;
        else if (parts[1] == "rings") kind = SyntheticKind::concentric_rings;
        else throw ConfigError("unknown synthetic kind '" + parts[1] + "'");
        std::size_t n = parse_count(parts[2], "synthetic size");
        std::size_t classes = parts.size() == 4 ? parse_count(parts[3], "synthetic class count") : 3;
        return generate_synthetic(kind, n, o.seed, classes);
    }
    std::string fmt = o.format;
    if (fmt.empty()) fmt = is_csv_path(spec) ? "csv" : "opf";
    if (fmt == "csv") return load_csv(spec, o.header, labeled);
    if (fmt == "opf") return load_opf_binary(spec);
    throw ConfigError("unknown format '" + fmt + "' (expected csv or opf)");
}

std::string sibling_path(const std::string& output, const std::string& suffix) {
    auto slash = output.find_last_of('/');
    auto dot = output.find_last_of('.');
    std::string stem = dot != std::string::npos && (slash == std::string::npos || dot > slash) ? output.substr(0, dot)
                                                                                              : output;
    return stem + suffix;
}

std::size_t clamp_k(std::size_t k, std::size_t n, bool explicit_k) {
    if (n < 2) throw DataError("need at least 2 training samples");
    if (k > n - 1) {
        if (explicit_k)
            log::warn("k_max=" + std::to_string(k) + " exceeds |V|-1=" + std::to_string(n - 1) + "; clamped");
        return n - 1;
    }
    return k;
}

template <class Fn>
double seconds(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ConfigError(std::string(flag) + " is required");
}

// ---------------------------------------------------------------------------

int cmd_train(const Options& o) {
    require(o.model, "--model");
    Metric metric = parse_metric(o.metric);
    if (o.sigma) validate_sigma(*o.sigma);
    Dataset d = load_input(o.input, o);
    std::optional<MinMaxScaler> scaler;
    if (o.scale) {
        scaler = MinMaxScaler::fit(d);
        d = scaler->apply(d);
    }
    auto shared = std::make_shared<const Dataset>(std::move(d));

    ModelFile file;
    double wall = 0.0;
    Json log;
    if (o.sigma) {
        std::size_t k = clamp_k(o.k_max, shared->size(), o.k_max_given);
        FuzzyModel m;
        wall = seconds([&] { m = train_fuzzy(shared, *o.sigma, k, metric); });
        log["model"] = "Fuzzy-OPF";
        log["sigma"] = *o.sigma;
        log["k_max"] = k;
        log["k_star"] = m.membership.k_used;
        file.forest = std::move(m.forest);
        file.membership = std::move(m.membership);
    } else {
        wall = seconds([&] { file.forest = train(shared, metric, {.mst_fast_path = o.fast_mst}); });
        log["model"] = "OPF";
    }
    file.scaler = scaler;
    double max_cost = 0.0;
    for (double c : file.forest.cost) max_cost = std::max(max_cost, c);
    save_model(file, o.model);

    log["n_samples"] = shared->size();
    log["n_features"] = shared->n_features();
    log["n_classes"] = shared->n_classes();
    log["n_prototypes"] = file.forest.prototypes.size();
    log["max_cost"] = max_cost;
    log["wall_seconds"] = wall;
    std::cout << log.dump(2) << '\n';
    return 0;
}

int cmd_classify(const Options& o) {
    require(o.model, "--model");
    require(o.output, "--output");
    ModelFile file = load_model(o.model);
    Dataset t = load_input(o.input, o, !o.unlabeled);
    if (t.n_features() != file.forest.n_features())
        throw DataError("input has " + std::to_string(t.n_features()) + " features, model expects " +
                        std::to_string(file.forest.n_features()));
    if (file.scaler) t = file.scaler->apply(t);

    std::vector<Prediction> preds = classify_batch(file.forest, t);
    const Dataset& train_set = *file.forest.training;
    std::string csv = "id,predicted,cost\n";
    for (NodeId i = 0; i < t.size(); ++i)
        csv += std::to_string(t.source_id(i)) + ',' + std::to_string(train_set.label_value(preds[i].label)) + ',' +
               format_double(preds[i].cost) + '\n';

    std::optional<Json> metrics;
    if (!o.unlabeled) {
        // Map the input's label values onto the model's class ids.
        std::vector<ClassId> truth;
        bool known = true;
        for (NodeId i = 0; i < t.size() && known; ++i) {
            auto value = t.label_value(t.label(i));
            auto vals = train_set.label_values();
            auto it = std::find(vals.begin(), vals.end(), value);
            if (it == vals.end()) known = false;
            else truth.push_back(static_cast<ClassId>(it - vals.begin() + 1));
        }
        if (known) metrics = to_json(compute_metrics(truth, predicted_labels(preds), train_set.n_classes()));
        else log::warn("classify: input contains labels unknown to the model; metrics skipped");
    }

    write_file(o.output, csv);
    if (metrics) {
        std::string text = metrics->dump(2) + '\n';
        if (!o.metrics_out.empty()) write_file(o.metrics_out, text);
        else std::cout << text;
    }
    return 0;
}

int cmd_cluster(const Options& o) {
    require(o.output, "--output");
    Metric metric = parse_metric(o.metric);
    Dataset d = load_input(o.input, o, !o.unlabeled);
    if (o.scale) d = MinMaxScaler::fit(d).apply(d);
    std::size_t k = clamp_k(o.k_max, d.size(), o.k_max_given);
    ClusterOptions copt;
    copt.jobs = o.jobs;
    BestK best = find_best_k(d, k, metric, copt);
    write_file(o.output, cluster_assignments_csv(best.model));
    Json j;
    j["k_max"] = k;
    j["k_star"] = best.k_star;
    j["n_clusters"] = best.model.n_clusters();
    j["normalized_cut"] = best.profile.cut[best.k_star - 1];
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_grid_search(const Options& o) {
    require(o.output, "--output");
    Metric metric = parse_metric(o.metric);
    auto k_grid = parse_k_grid(o.k_grid);
    auto sigma_grid = parse_sigma_grid(o.sigma_grid);
    Dataset train_set;
    Dataset eval_set;
    if (!o.eval.empty()) {
        train_set = load_input(o.input, o);
        eval_set = load_input(o.eval, o);
    } else {
        SplitParts parts = stratified_split(load_input(o.input, o), parse_split(o.split, o.seed));
        train_set = std::move(parts.train);
        eval_set = std::move(parts.eval);
    }
    if (o.scale) {
        auto s = MinMaxScaler::fit(train_set);
        train_set = s.apply(train_set);
        eval_set = s.apply(eval_set);
    }
    GridOptions gopt;
    gopt.metric = metric;
    gopt.jobs = o.jobs;
    GridSearchReport rep =
        grid_search(std::make_shared<const Dataset>(std::move(train_set)), eval_set, k_grid, sigma_grid, gopt);
    std::string best = grid_best_json(rep).dump(2) + '\n';
    write_file(o.output, grid_heatmap_csv(rep));
    write_file(sibling_path(o.output, ".best.json"), best);
    std::cout << best;
    return 0;
}

int cmd_benchmark(const Options& o) {
    require(o.output, "--output");
    ExperimentConfig cfg;
    if (o.runs < 1) throw ConfigError("--runs must be >= 1");
    cfg.runs = o.runs;
    cfg.split = parse_split(o.split, o.seed);
    cfg.metric = parse_metric(o.metric);
    cfg.k_grid = parse_k_grid(o.k_grid);
    cfg.sigma_grid = parse_sigma_grid(o.sigma_grid);
    cfg.scale = o.scale;
    cfg.jobs = o.jobs;
    cfg.classifiers.clear();
    for (const auto& c : split_list(o.classifiers, ',')) cfg.classifiers.push_back(parse_classifier(c));
    Dataset d = load_input(o.input, o);
    ExperimentReport rep = run_cv_experiment(d, cfg);
    write_file(o.output, to_json(rep).dump(2) + '\n');
    write_file(sibling_path(o.output, ".timing.json"), timing_json(rep).dump(2) + '\n');
    Json summary = Json::array();
    for (const auto& r : rep.results) {
        auto acc = r.summary([](const RunResult& x) { return x.metrics.accuracy; });
        summary.push_back({{"classifier", std::string(to_string(r.classifier))},
                           {"mean_accuracy", acc.mean},
                           {"std_accuracy", acc.std}});
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_convert(const Options& o) {
    require(o.output, "--output");
    if (o.format != "csv" && o.format != "opf") throw ConfigError("convert needs --format csv or --format opf");
    Options in = o;
    in.format.clear();
    Dataset d = load_input(o.input, in);
    if (o.format == "csv") save_csv(d, o.output);
    else save_opf_binary(d, o.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimum-path forest classifiers, clustering and evaluation"};
    app.require_subcommand(1);
    Options o;

    auto* train_cmd = app.add_subcommand("train", "Train an OPF or Fuzzy-OPF model");
    auto* classify_cmd = app.add_subcommand("classify", "Classify samples with a trained model");
    auto* cluster_cmd = app.add_subcommand("cluster", "Unsupervised OPF clustering with best-k search");
    auto* grid_cmd = app.add_subcommand("grid-search", "Fuzzy-OPF (k_max, sigma) grid search");
    auto* bench_cmd = app.add_subcommand("benchmark", "Repeated-split OPF vs Fuzzy-OPF experiment");
    auto* convert_cmd = app.add_subcommand("convert", "Convert between CSV and LibOPF binary");

    const std::string format_help = "Input format csv|opf (default: by extension)";
    for (auto* c : {train_cmd, classify_cmd, cluster_cmd, grid_cmd, bench_cmd, convert_cmd}) {
        c->add_option("--input,-i", o.input, "Dataset path or synthetic:KIND:N[:CLASSES]")->required();
        c->add_flag("--header", o.header, "CSV input has a header line");
        c->add_option("--seed", o.seed, "Base seed for splits and synthetic data");
    }
    for (auto* c : {train_cmd, classify_cmd, cluster_cmd, grid_cmd, bench_cmd}) {
        c->add_option("--format", o.format, format_help)->check(CLI::IsMember({"csv", "opf"}));
    }
    for (auto* c : {train_cmd, cluster_cmd, grid_cmd, bench_cmd}) {
        c->add_option("--metric", o.metric, "euclidean | squared-euclidean | manhattan");
        c->add_flag("--scale", o.scale, "Min-max scale features (fitted on training data)");
    }
    for (auto* c : {cluster_cmd, grid_cmd, bench_cmd}) c->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    for (auto* c : {classify_cmd, cluster_cmd, grid_cmd, bench_cmd, convert_cmd})
        c->add_option("--output,-o", o.output, "Output path");

    train_cmd->add_option("--model,-m", o.model, "Model file to write");
    train_cmd->add_option("--sigma", o.sigma, "Membership lower bound; trains Fuzzy-OPF when given");
    train_cmd->add_option("--kmax", o.k_max, "Largest k for the density search (default 100)");
    train_cmd->add_flag("--fast-mst", o.fast_mst, "Propagate costs on the MST only (standard OPF)");

    classify_cmd->add_option("--model,-m", o.model, "Model file to read");
    classify_cmd->add_option("--metrics", o.metrics_out, "Metrics JSON path (default: stdout)");
    classify_cmd->add_flag("--unlabeled", o.unlabeled, "CSV input has no label column");

    cluster_cmd->add_option("--kmax", o.k_max, "Largest k searched (default 100)");
    cluster_cmd->add_flag("--unlabeled", o.unlabeled, "CSV input has no label column");

    grid_cmd->add_option("--eval", o.eval, "Evaluation set (default: split --input)");
    grid_cmd->add_option("--k-grid", o.k_grid, "Comma-separated k_max values (default 1,10,...,150)");
    grid_cmd->add_option("--sigma-grid", o.sigma_grid, "Comma-separated sigma values (default 0.2,...,1.2)");
    grid_cmd->add_option("--split", o.split, "train,eval,test fractions used without --eval");

    bench_cmd->add_option("--runs", o.runs, "Number of repeated splits (default 20)");
    bench_cmd->add_option("--split", o.split, "train,eval,test fractions (default 0.6,0.2,0.2)");
    bench_cmd->add_option("--k-grid", o.k_grid, "Comma-separated k_max values");
    bench_cmd->add_option("--sigma-grid", o.sigma_grid, "Comma-separated sigma values");
    bench_cmd->add_option("--classifiers", o.classifiers, "Comma-separated subset of opf,fuzzy");

    convert_cmd->add_option("--format", o.format, "Output format csv|opf")->required()->check(
        CLI::IsMember({"csv", "opf"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Error& e) {
        report_error("config", e.what());
        return 2;
    }
    o.k_max_given = (train_cmd->count("--kmax") + cluster_cmd->count("--kmax")) > 0;

    try {
        if (*train_cmd) return cmd_train(o);
        if (*classify_cmd) return cmd_classify(o);
        if (*cluster_cmd) return cmd_cluster(o);
        if (*grid_cmd) return cmd_grid_search(o);
        if (*bench_cmd) return cmd_benchmark(o);
        if (*convert_cmd) return cmd_convert(o);
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        report_error("runtime", e.what());
        return 4;
    }
    return 0;
}
