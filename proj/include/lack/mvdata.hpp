#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lack {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using ClassId = int;

/// P views over one shared sample axis; view p is m_p x n (features x samples).
class MultiViewDataset {
public:
    MultiViewDataset() = default;

    /// Validates shapes and finiteness. Missing names default to "view<p>".
    explicit MultiViewDataset(std::vector<Matrix> views, std::vector<std::string> names = {});

    const Matrix& view(std::size_t p) const { return views_.at(p); }
    const std::vector<Matrix>& views() const { return views_; }
    const std::string& name(std::size_t p) const { return names_.at(p); }
    const std::vector<std::string>& names() const { return names_; }

    std::size_t num_views() const { return views_.size(); }
    Index num_samples() const { return views_.empty() ? 0 : views_.front().cols(); }
    Index dim(std::size_t p) const { return views_.at(p).rows(); }

private:
    std::vector<Matrix> views_;
    std::vector<std::string> names_;
};

/// Ground truth plus the labeled subset.
struct LabelInfo {
    std::vector<ClassId> ground_truth;  // length n, entries in [0, num_classes)
    int num_classes = 0;
    std::vector<std::size_t> labeled_ids;  // strictly ascending

    std::size_t num_labeled() const { return labeled_ids.size(); }
    std::size_t num_samples() const { return ground_truth.size(); }

    /// Throws ValidationError unless ids are ascending, distinct and in range,
    /// and every class has at least one labeled sample.
    void validate() const;
};

/// Dense class ids in first-appearance order, with the original tokens.
struct LabelEncoding {
    std::vector<ClassId> ids;
    std::vector<std::string> class_names;
};

LabelEncoding encode_labels(std::span<const std::string> tokens);

/// Hard class assignment of n samples; the first `labeled_prefix` columns are
/// the fixed ground-truth block and cannot be reassigned.
class IndicatorMatrix {
public:
    static constexpr ClassId kUnset = -1;

    IndicatorMatrix(int num_classes, std::vector<ClassId> assignments, std::size_t labeled_prefix);

    int num_classes() const { return num_classes_; }
    std::size_t size() const { return assign_.size(); }
    std::size_t labeled_prefix() const { return labeled_; }

    ClassId operator[](std::size_t i) const { return assign_[i]; }
    bool is_set(std::size_t i) const { return assign_[i] != kUnset; }
    bool all_set() const;

    /// Reassigns an unlabeled column. Throws on labeled columns or bad ids.
    void set(std::size_t i, ClassId k);

    const std::vector<ClassId>& assignments() const { return assign_; }
    std::vector<std::size_t> class_counts() const;

    /// c x n one-hot matrix; UNSET columns are zero.
    Matrix to_dense() const;

    friend bool operator==(const IndicatorMatrix&, const IndicatorMatrix&) = default;

private:
    int num_classes_;
    std::vector<ClassId> assign_;
    std::size_t labeled_;
};

/// Per-view centroid matrices; centroids[p] is m_p x c, column k the mean of
/// the view-p samples assigned to class k.
struct CentroidSet {
    std::vector<Matrix> centroids;

    const Matrix& operator[](std::size_t p) const { return centroids[p]; }
    Matrix& operator[](std::size_t p) { return centroids[p]; }
    std::size_t size() const { return centroids.size(); }
};

/// Indicator in "labeled first" sample order together with the reordering.
/// order[j] is the original index of internal column j.
struct LabelConstraint {
    IndicatorMatrix q;
    std::vector<std::size_t> order;
};

/// Labeled samples (ascending) move to the front, unlabeled follow in
/// ascending order; the unlabeled block starts UNSET.
LabelConstraint build_label_constraint(const LabelInfo& labels);

/// Per class, ceil(tau * n_c) samples drawn without replacement.
LabelInfo stratified_label_sample(std::span<const ClassId> ground_truth, int num_classes,
                                  double tau, std::uint64_t seed);

/// Column gather: out.view(p).col(j) == ds.view(p).col(order[j]).
MultiViewDataset permute_samples(const MultiViewDataset& ds, std::span<const std::size_t> order);

/// Inverse of permute_samples applied to a per-sample vector.
std::vector<ClassId> restore_order(std::span<const ClassId> permuted,
                                   std::span<const std::size_t> order);

/// Row-stacks all views into one (sum m_p) x n view.
MultiViewDataset concatenate_views(const MultiViewDataset& ds);

/// Each feature row centred and scaled to unit variance; constant rows are
/// only centred.
MultiViewDataset zscore_views(const MultiViewDataset& ds);

MultiViewDataset append_view(const MultiViewDataset& ds, Matrix view, std::string name);
MultiViewDataset replace_view(const MultiViewDataset& ds, std::size_t p, Matrix view);

// ---------------------------------------------------------------------------
// File formats

enum class MatrixFormat { Csv, F64Bin };

MatrixFormat parse_matrix_format(const std::string& s);
std::string to_string(MatrixFormat f);

/// CSV: one line per feature row, comma-separated, shortest round-trip
/// decimal representation.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

/// "MVM1" magic, u64 rows, u64 cols (little endian), then rows*cols
/// little-endian f64 in column-major order.
Matrix read_f64bin_matrix(const std::filesystem::path& path);
void write_f64bin_matrix(const std::filesystem::path& path, const Matrix& m);

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format);
void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

std::vector<std::string> read_label_tokens(const std::filesystem::path& path);
void write_label_tokens(const std::filesystem::path& path, std::span<const std::string> tokens);

struct ManifestView {
    std::string name;
    std::filesystem::path path;  // resolved against the manifest directory
    MatrixFormat format = MatrixFormat::Csv;
};

struct Manifest {
    std::vector<ManifestView> views;
    std::optional<std::filesystem::path> labels;
    std::string provenance_json;  // raw "provenance" object, empty if absent
};

Manifest read_manifest(const std::filesystem::path& manifest_path);

/// Loads and validates every view listed in the manifest.
MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

/// Loads the manifest's label file; throws ValidationError when absent.
LabelEncoding load_labels(const std::filesystem::path& manifest_path);

struct SaveOptions {
    MatrixFormat format = MatrixFormat::Csv;
    std::string manifest_name = "manifest.json";
    std::string provenance_json;  // embedded verbatim when non-empty
};

/// Writes one matrix per view, the label file (when given) and a manifest
/// with relative paths. Returns the manifest path.
std::filesystem::path save_dataset(const std::filesystem::path& dir, const MultiViewDataset& ds,
                                   std::span<const std::string> label_tokens,
                                   const SaveOptions& opts = {});

/// FNV-1a 64 over shapes and raw f64 bits of every view.
std::uint64_t content_hash(const MultiViewDataset& ds);
std::uint64_t content_hash(std::span<const std::string> tokens);
std::string hex64(std::uint64_t h);

}  // namespace lack
