// lack: experiment harness for constrained multi-view K-means with
// equal, data-driven and label-driven view weights.
//
//   lack gen     --config blobs.json --out data/
//   lack corrupt --dataset data/manifest.json --config corrupt.json --out noisy/
//   lack run     --config exp.json --method LACK --method MLCK --seeds 0,1,2
//   lack eval    predictions.csv truth.csv --out report.json
//
// Exit codes: 0 success, 2 config/validation error, 3 I/O error.

#include "lack/error.hpp"
#include "lack/experiment.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

namespace {

using namespace lack;
using namespace lack::cli;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Overrides {
    std::string config;
    std::string dataset;
    std::string out;
    std::vector<double> tau;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;
    std::vector<int> max_iter;
    bool fixed_labels = false;
    bool resample_labels = false;
    bool normalize = false;
    std::string format;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON experiment config");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed,--seeds", o.seeds, "seed(s), repeatable or comma separated")->delimiter(',');
}

ExperimentConfig resolve(const Overrides& o, bool seeds_pick_blob_seed = false) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (!o.dataset.empty()) cfg.dataset = o.dataset;
    if (!o.out.empty()) cfg.out = o.out;
    if (!o.tau.empty()) cfg.tau = o.tau.back();
    if (!o.seeds.empty()) cfg.seeds = o.seeds;
    if (!o.methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : o.methods) cfg.methods.push_back(parse_method(m));
    }
    if (!o.max_iter.empty()) cfg.max_iter = o.max_iter.back();
    if (o.fixed_labels && o.resample_labels)
        throw ValidationError("--fixed-labels and --resample-labels are exclusive");
    if (o.fixed_labels) cfg.fixed_labels = true;
    if (o.resample_labels) cfg.fixed_labels = false;
    if (o.normalize) cfg.normalize = true;
    if (!o.format.empty()) cfg.format = parse_matrix_format(o.format);
    if (seeds_pick_blob_seed && cfg.blobs && !o.seeds.empty()) cfg.blobs->seed = o.seeds.front();
    cfg.validate();
    return cfg;
}

void print_report(const std::string& label, const EvalReport& r) {
    fmt::print("{:<14} ACC {:6.2f}  F {:6.2f}  P {:6.2f}  R {:6.2f}  (pairwise)  macro-F {:6.2f}  n={}\n",
               label, 100 * r.acc, 100 * r.pairwise.f_score, 100 * r.pairwise.precision,
               100 * r.pairwise.recall, 100 * r.macro.f_score, r.n_eval);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained multi-view K-means experiments (MLCK / DACK / LACK)"};
    app.require_subcommand(1);

    Overrides gen_o, corrupt_o, run_o;
    auto* gen = app.add_subcommand("gen", "write a synthetic blob dataset");
    add_common(gen, gen_o);
    gen->add_option("--format", gen_o.format, "csv or f64bin");

    auto* corrupt = app.add_subcommand("corrupt", "append fake views / add SNR noise to a dataset");
    add_common(corrupt, corrupt_o);
    corrupt->add_option("--dataset", corrupt_o.dataset, "source manifest");
    corrupt->add_option("--format", corrupt_o.format, "csv or f64bin");

    auto* run = app.add_subcommand("run", "run methods over seeds and aggregate metrics");
    add_common(run, run_o);
    run->add_option("--dataset", run_o.dataset, "dataset manifest");
    run->add_option("--tau", run_o.tau, "label ratio in (0, 1]");
    run->add_option("--method,--methods", run_o.methods, "MLCK, DACK, LACK, CK, KMEANS_PER_VIEW")
        ->delimiter(',');
    run->add_option("--max-iter", run_o.max_iter, "iteration cap");
    run->add_flag("--fixed-labels", run_o.fixed_labels, "one labeled set for every seed");
    run->add_flag("--resample-labels", run_o.resample_labels, "draw the labeled set per seed");
    run->add_flag("--normalize", run_o.normalize, "z-score every feature row");

    std::string pred_path, truth_path, eval_out;
    auto* eval = app.add_subcommand("eval", "score a prediction file against the truth");
    eval->add_option("pred", pred_path, "predictions, one class token per line")->required();
    eval->add_option("truth", truth_path, "ground truth, one class token per line")->required();
    eval->add_option("--out", eval_out, "write the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (gen->parsed()) {
            const auto manifest = cmd_gen(resolve(gen_o, true));
            fmt::print("wrote {}\n", manifest.string());
        } else if (corrupt->parsed()) {
            const auto manifest = cmd_corrupt(resolve(corrupt_o));
            fmt::print("wrote {}\n", manifest.string());
        } else if (run->parsed()) {
            const ExperimentConfig cfg = resolve(run_o);
            const RunSummary summary = cmd_run(cfg);
            fmt::print("{:<14} {:>4}  {:>15}  {:>15}  {:>15}  {:>15}\n", "method", "runs", "ACC",
                       "F-score", "Precision", "Recall");
            for (const auto& a : summary.aggregates)
                fmt::print("{:<14} {:>4}  {:6.2f} ± {:6.2f}  {:6.2f} ± {:6.2f}  {:6.2f} ± {:6.2f}  {:6.2f} ± {:6.2f}\n",
                           a.method, a.runs, 100 * a.acc_mean, 100 * a.acc_std, 100 * a.f_mean,
                           100 * a.f_std, 100 * a.precision_mean, 100 * a.precision_std,
                           100 * a.recall_mean, 100 * a.recall_std);
            fmt::print("results in {}\n", cfg.out.string());
        } else if (eval->parsed()) {
            const auto report = cmd_eval(pred_path, truth_path,
                                         eval_out.empty() ? std::nullopt
                                                          : std::optional<fs::path>(eval_out));
            print_report("eval", report);
        }
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
