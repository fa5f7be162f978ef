#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "binclust/binclust.hpp"

namespace binclust::cli {

namespace {

void write_matrix(const std::string& path, const BinaryMatrix& m, const std::string& format)
{
    if (format == "sparse") {
        save_sparse(path, m);
    } else {
        save_dense(path, m);
    }
}

// Labels come either from a labels file or from the assignments of a report.
std::vector<std::size_t> load_any_labels(const std::string& path)
{
    std::ifstream probe(path);
    if (!probe) {
        throw DataError("cannot open '" + path + "' for reading");
    }
    char c = 0;
    while (probe.get(c) && std::isspace(static_cast<unsigned char>(c))) {
    }
    if (c == '{') {
        return load_report(path).run.assignments;
    }
    return load_labels(path);
}

std::vector<std::size_t> cluster_sizes(const std::vector<std::size_t>& labels, std::size_t k)
{
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : labels) {
        ++sizes.at(l);
    }
    return sizes;
}

struct GenerateArgs {
    SyntheticSpec spec;
    std::string out;
    std::string labels_out;
    std::string format = "dense";
};

struct ClusterArgs {
    std::string in;
    double alpha = 1.0;
    double a = 1.0;
    AnnealingSchedule schedule;
    std::size_t k_init = 0; // 0: N
    std::uint64_t seed = 0;
    std::string report;
    std::string labels_out;
    std::string order_out;
};

struct EvaluateArgs {
    std::string pred;
    std::string truth;
};

struct BaselineArgs {
    std::string in;
    std::size_t k_max = 15;
    std::size_t n_refs = 10;
    KMeansOptions kmeans;
    std::uint64_t seed = 0;
    std::string report;
    std::string labels_out;
};

struct SummarizeArgs {
    std::string report;
    std::string out;
    std::string names;
};

struct TermFilterArgs {
    std::string in;
    std::string out;
    std::string kept_out;
    TermFilterRule rule;
    std::string format = "dense";
};

struct PercentileArgs {
    std::string in;
    std::string out;
    std::string kept_rows_out;
    double pct = 20.0;
    std::string direction = "below";
    std::string format = "dense";
};

int run_generate(const GenerateArgs& a, std::ostream& out)
{
    const auto synth = generate(a.spec);
    write_matrix(a.out, synth.data, a.format);
    if (!a.labels_out.empty()) {
        save_labels(a.labels_out, synth.labels);
    }
    out << "generated " << synth.data.rows() << "x" << synth.data.cols() << " matrix with "
        << a.spec.k_true << " clusters\n";
    return kExitOk;
}

int run_cluster(const ClusterArgs& a, std::ostream& out)
{
    const BinaryMatrix data = load_matrix(a.in);
    Hyperparams hyper = default_hyperparams(data, a.alpha);
    std::fill(hyper.a.begin(), hyper.a.end(), a.a);
    const std::size_t k_init = a.k_init == 0 ? default_k_init(data) : std::min(a.k_init, data.rows());

    ReportFile report;
    report.run = run(data, hyper, a.schedule, k_init, a.seed);
    report.run.config.a_policy = "constant";
    report.run.config.b_policy = "empirical";
    report.a_value = a.a;
    report.feature_frequencies = cluster_feature_frequencies(report.run.assignments, data);

    if (!a.report.empty()) {
        save_report(a.report, report);
    }
    if (!a.labels_out.empty()) {
        save_labels(a.labels_out, report.run.assignments);
    }
    if (!a.order_out.empty()) {
        save_dense(a.order_out, data.select_rows(cluster_order(report.run.assignments)));
    }
    out << "clusters: " << report.run.n_clusters << "\n"
        << "final score: " << detail::format_double(report.run.score_trace.back()) << "\n";
    return kExitOk;
}

int run_evaluate(const EvaluateArgs& a, std::ostream& out)
{
    const auto pred = load_any_labels(a.pred);
    const auto truth = load_any_labels(a.truth);
    if (pred.size() != truth.size()) {
        throw DataError("label files differ in length (" + std::to_string(pred.size()) + " vs " +
                        std::to_string(truth.size()) + ")");
    }
    if (pred.empty()) {
        throw DataError("label files are empty");
    }
    out << detail::format_double(matched_accuracy(pred, truth)) << "\n";
    return kExitOk;
}

int run_baseline(const BaselineArgs& a, std::ostream& out)
{
    const BinaryMatrix data = load_matrix(a.in);
    std::mt19937_64 rng(a.seed);
    const auto gap = gap_statistic(data, a.k_max, a.n_refs, rng, a.kmeans);

    if (!a.report.empty()) {
        auto to_json_curve = [](const std::vector<double>& v) {
            nlohmann::json arr = nlohmann::json::array();
            for (double x : v) {
                arr.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
            }
            return arr;
        };
        nlohmann::ordered_json j;
        j["chosen_k"] = gap.chosen_k;
        j["seed"] = a.seed;
        j["k_max"] = gap.gap_curve.size();
        j["n_refs"] = a.n_refs;
        j["gap_curve"] = to_json_curve(gap.gap_curve);
        j["sk_curve"] = to_json_curve(gap.sk_curve);
        j["dispersion_curve"] = to_json_curve(gap.dispersion_curve);
        j["ref_dispersion_curve"] = to_json_curve(gap.ref_dispersion_curve);
        j["assignments"] = gap.labels;
        auto f = detail::open_out(a.report);
        f << j.dump(2) << '\n';
    }
    if (!a.labels_out.empty()) {
        save_labels(a.labels_out, gap.labels);
    }
    out << "chosen k: " << gap.chosen_k << "\n";
    return kExitOk;
}

int run_summarize(const SummarizeArgs& a, std::ostream& out)
{
    const auto report = load_report(a.report);
    std::vector<std::string> names;
    if (!a.names.empty()) {
        auto in = detail::open_in(a.names);
        for (std::string line; std::getline(in, line);) {
            if (!detail::trim(line).empty()) {
                names.emplace_back(detail::trim(line));
            }
        }
    }
    const auto sizes = cluster_sizes(report.run.assignments, report.run.n_clusters);
    if (a.out.empty()) {
        write_frequency_csv(out, report.feature_frequencies, sizes, names);
    } else {
        auto f = detail::open_out(a.out);
        write_frequency_csv(f, report.feature_frequencies, sizes, names);
    }
    return kExitOk;
}

int run_term_filter(const TermFilterArgs& a, std::ostream& out)
{
    auto in = detail::open_in(a.in);
    const auto counts = read_counts(in);
    const auto res = term_filter(counts, a.rule);
    write_matrix(a.out, res.data, a.format);
    if (!a.kept_out.empty()) {
        save_labels(a.kept_out, res.kept_columns);
    }
    out << "kept " << res.kept_columns.size() << " of " << counts.cols << " terms\n";
    return kExitOk;
}

int run_percentile(const PercentileArgs& a, std::ostream& out)
{
    auto in = detail::open_in(a.in);
    const auto table = read_real_table(in);
    const auto dir = a.direction == "above" ? ThresholdDirection::Above : ThresholdDirection::Below;
    const auto res = percentile_binarize(table, a.pct, dir);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < res.row_has_missing.size(); ++i) {
        if (!res.row_has_missing[i]) {
            kept.push_back(i);
        }
    }
    if (kept.empty()) {
        throw DataError("every row has missing values");
    }
    write_matrix(a.out, res.data.select_rows(kept), a.format);
    if (!a.kept_rows_out.empty()) {
        save_labels(a.kept_rows_out, kept);
    }
    out << "kept " << kept.size() << " of " << table.size() << " rows\n";
    return kExitOk;
}

const auto kOpenUnit = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 1.0)) {
            return "value must lie strictly between 0 and 1";
        }
        return {};
    },
    "(0,1)");

const auto kOpenPercent = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 100.0)) {
            return "value must lie strictly between 0 and 100";
        }
        return {};
    },
    "(0,100)");

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dirichlet-process Beta-Bernoulli clustering of binary data"};
    app.name("binclust");
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"dense", "sparse"});

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "write a synthetic planted-cluster data set");
    generate_cmd->add_option("--n", gen.spec.n_objects, "number of objects")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--d", gen.spec.n_features, "number of features")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--sd", gen.spec.info_pct, "percent of signal features per cluster")
        ->check(CLI::Range(0.0, 100.0));
    generate_cmd->add_option("--sn", gen.spec.noise_pct, "percent of cells flipped")->check(CLI::Range(0.0, 100.0));
    generate_cmd->add_option("--k-true", gen.spec.k_true, "number of planted clusters")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--seed", gen.spec.seed, "random seed");
    generate_cmd->add_option("--out", gen.out, "matrix output path")->required();
    generate_cmd->add_option("--labels-out", gen.labels_out, "ground-truth labels output path");
    generate_cmd->add_option("--format", gen.format, "matrix format")->check(formats);

    ClusterArgs cl;
    auto* cluster_cmd = app.add_subcommand("cluster", "run the annealed Gibbs sampler");
    cluster_cmd->add_option("--in", cl.in, "binary matrix (dense CSV or sparse)")->required();
    cluster_cmd->add_option("--alpha", cl.alpha, "DP concentration")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--a", cl.a, "Beta presence shape for every feature")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--t-init", cl.schedule.t_init, "initial temperature")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--lambda", cl.schedule.lambda, "cooling factor")->check(kOpenUnit);
    cluster_cmd->add_option("--block", cl.schedule.block, "sweeps between cooling steps")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--sweeps", cl.schedule.n_sweeps, "number of sweeps")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--k-init", cl.k_init, "initial number of random labels (default and cap: N)")
        ->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--seed", cl.seed, "random seed");
    cluster_cmd->add_option("--report", cl.report, "JSON report output path");
    cluster_cmd->add_option("--labels-out", cl.labels_out, "labels output path");
    cluster_cmd->add_option("--order-out", cl.order_out, "CSV of rows reordered by cluster");

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "matched accuracy of predicted labels");
    evaluate_cmd->add_option("--pred", ev.pred, "predicted labels or report")->required();
    evaluate_cmd->add_option("--truth", ev.truth, "true labels")->required();

    BaselineArgs bl;
    auto* baseline_cmd = app.add_subcommand("baseline", "k-means with the gap statistic");
    baseline_cmd->add_option("--in", bl.in, "binary matrix (dense CSV or sparse)")->required();
    baseline_cmd->add_option("--k-max", bl.k_max, "largest k considered")->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--n-refs", bl.n_refs, "reference data sets")->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--restarts", bl.kmeans.n_restarts, "k-means restarts")->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--max-iters", bl.kmeans.max_iters, "Lloyd iterations")->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--seed", bl.seed, "random seed");
    baseline_cmd->add_option("--report", bl.report, "JSON output path");
    baseline_cmd->add_option("--labels-out", bl.labels_out, "labels output path");

    SummarizeArgs sm;
    auto* summarize_cmd = app.add_subcommand("summarize", "per-cluster feature frequencies as CSV");
    summarize_cmd->add_option("--report", sm.report, "JSON report from cluster")->required();
    summarize_cmd->add_option("--out", sm.out, "CSV output path (default: stdout)");
    summarize_cmd->add_option("--names", sm.names, "feature names, one per line");

    auto* preprocess_cmd = app.add_subcommand("preprocess", "turn raw tables into binary matrices");
    preprocess_cmd->require_subcommand(1);

    TermFilterArgs tf;
    auto* tf_cmd = preprocess_cmd->add_subcommand("term-filter", "document-term counts to word presence");
    tf_cmd->add_option("--in", tf.in, "count matrix (CSV or \"N V\" + \"row col count\")")->required();
    tf_cmd->add_option("--out", tf.out, "binary matrix output path")->required();
    tf_cmd->add_option("--kept-out", tf.kept_out, "kept column indices output path");
    tf_cmd->add_option("--min-docs", tf.rule.min_doc_freq, "minimum document frequency");
    tf_cmd->add_option("--min-count", tf.rule.min_peak_count, "minimum peak per-document count");
    tf_cmd->add_option("--format", tf.format, "matrix format")->check(formats);

    PercentileArgs pc;
    auto* pc_cmd = preprocess_cmd->add_subcommand("percentile", "per-column percentile thresholding");
    pc_cmd->add_option("--in", pc.in, "real-valued CSV; empty/NA/NaN/? are missing")->required();
    pc_cmd->add_option("--out", pc.out, "binary matrix output path")->required();
    pc_cmd->add_option("--pct", pc.pct, "percentile")->check(kOpenPercent);
    pc_cmd->add_option("--direction", pc.direction, "mark values below or above the threshold")
        ->check(CLI::IsMember({"below", "above"}));
    pc_cmd->add_option("--kept-rows-out", pc.kept_rows_out, "indices of rows without missing values");
    pc_cmd->add_option("--format", pc.format, "matrix format")->check(formats);

    std::vector<const char*> argv{"binclust"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate_cmd->parsed()) {
            return run_generate(gen, out);
        }
        if (cluster_cmd->parsed()) {
            return run_cluster(cl, out);
        }
        if (evaluate_cmd->parsed()) {
            return run_evaluate(ev, out);
        }
        if (baseline_cmd->parsed()) {
            return run_baseline(bl, out);
        }
        if (summarize_cmd->parsed()) {
            return run_summarize(sm, out);
        }
        if (tf_cmd->parsed()) {
            return run_term_filter(tf, out);
        }
        if (pc_cmd->parsed()) {
            return run_percentile(pc, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

} // namespace binclust::cli
