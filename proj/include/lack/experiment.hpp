#pragma once

#include "lack/metrics.hpp"
#include "lack/mvdata.hpp"
#include "lack/solver.hpp"
#include "lack/synth.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lack::cli {

namespace fs = std::filesystem;

enum class Method { MLCK, DACK, LACK, CK, KMeansPerView };

Method parse_method(const std::string& s);
const char* to_string(Method m);

/// Appends A*B (dim x n, rank `rank`) as a new last view.
struct FakeViewCorruption {
    Index dim = 0;
    Index rank = 0;
    std::uint64_t seed = 0;
    std::optional<double> target_frobenius;
};

/// Replaces the listed views (0-based) with noisy copies at the given linear
/// SNR. View p uses noise seed `seed + p`.
struct NoiseCorruption {
    std::vector<std::size_t> view_ids;
    double snr = 1.0;
    std::uint64_t seed = 0;
};

using Corruption = std::variant<FakeViewCorruption, NoiseCorruption>;

struct ExperimentConfig {
    std::optional<fs::path> dataset;  // manifest path
    std::optional<BlobSpec> blobs;    // inline synthetic data when no manifest
    double tau = 0.1;
    std::vector<std::uint64_t> seeds{0};
    std::vector<Method> methods{Method::LACK};
    std::vector<Corruption> corruptions;
    fs::path out = "results";
    int max_iter = 50;
    bool fixed_labels = true;       // one labeled set (label_seed) shared by all seeds
    std::uint64_t label_seed = 0;
    bool normalize = false;         // per-view z-scoring before solving
    MatrixFormat format = MatrixFormat::Csv;
    LabeledArgminMode labeled_argmin = LabeledArgminMode::PerView;

    void validate() const;
};

/// Parses the JSON config; relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text, const fs::path& base_dir = {});
ExperimentConfig load_config(const fs::path& path);
std::string to_json(const ExperimentConfig& cfg);

struct LoadedData {
    MultiViewDataset dataset;
    LabelEncoding labels;
};

/// Dataset from the manifest or the inline blob spec, corruptions applied.
LoadedData resolve_data(const ExperimentConfig& cfg);

MultiViewDataset apply_corruptions(const MultiViewDataset& ds,
                                   const std::vector<Corruption>& corruptions);

/// Writes the blob dataset described by cfg.blobs to cfg.out. Returns the
/// manifest path.
fs::path cmd_gen(const ExperimentConfig& cfg);

/// Reads cfg.dataset, applies cfg.corruptions, writes the result with a
/// provenance record to cfg.out. Returns the manifest path.
fs::path cmd_corrupt(const ExperimentConfig& cfg);

struct RunRecord {
    std::string method;  // "LACK", ..., or "KMEANS_V<p>" for per-view K-means
    std::uint64_t seed = 0;
    EvalReport report;
    int iterations_run = 0;
    bool converged = false;
    std::vector<double> weights_final;  // normalized; empty for K-means rows
};

struct Aggregate {
    std::string method;
    std::size_t runs = 0;
    // mean and sample standard deviation, as fractions in [0, 1]
    double acc_mean = 0, acc_std = 0;
    double f_mean = 0, f_std = 0;
    double precision_mean = 0, precision_std = 0;
    double recall_mean = 0, recall_std = 0;
    double macro_f_mean = 0, macro_f_std = 0;
};

struct RunSummary {
    std::vector<RunRecord> runs;
    std::vector<Aggregate> aggregates;  // one per method label, in first-run order
};

/// Every (method, seed) run: label sampling, solve, evaluation on the
/// unlabeled samples. Writes config.json, runs/<method>/seed_<s>/{result.json,
/// trace.csv, predictions.csv} and aggregate.csv under cfg.out.
RunSummary cmd_run(const ExperimentConfig& cfg);

/// Aggregates records by method label.
std::vector<Aggregate> aggregate(const std::vector<RunRecord>& runs);

/// Evaluates one token-per-line prediction file against a truth file. Pred
/// tokens are matched against truth tokens by value. Writes JSON when
/// `json_out` is set.
EvalReport cmd_eval(const fs::path& pred_path, const fs::path& truth_path,
                    const std::optional<fs::path>& json_out = std::nullopt);

/// Header of the per-iteration trace CSV.
inline constexpr const char* kTraceSchema = "lack-trace v1";

}  // namespace lack::cli
