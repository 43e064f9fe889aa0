#pragma once

#include "lack/mvdata.hpp"
#include "lack/weighting.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace lack {

/// How the labeled samples are classified for the label-driven weight: by
/// each view's own centroids (default) or by the weighted all-view distance.
enum class LabeledArgminMode { PerView, WeightedSum };

struct SolverConfig {
    // Equal       - every view weighted 1/P throughout (MLCK)
    // DataDriven  - d_p = 1 / (2 ||X_p - U_p Q||_F), uniform until Q is fully set (DACK)
    // LabelDriven - d_p = labeled samples that view p's own centroids get right (LACK)
    WeightStrategy strategy = WeightStrategy::LabelDriven;
    int max_iter = 50;
    bool stop_on_q_fixed = true;
    double epsilon = kDefaultWeightEpsilon;
    LabeledArgminMode labeled_argmin = LabeledArgminMode::PerView;
    std::uint64_t seed = 0;  // unconstrained K-means baseline only

    // Global multiplier on every view weight. Assignments are argmins of a
    // weighted sum, so any positive value gives the same result.
    double weight_scale = 1.0;

    // Evaluate the objective around each half-step (costs three extra
    // objective evaluations per iteration).
    bool audit_half_steps = false;

    // Keep the full assignment vector of every iteration in the trace.
    bool keep_history = false;
};

struct IterationRecord {
    int iteration = 0;  // 1-based
    std::vector<double> weights;  // normalized to sum 1
    double objective = 0.0;       // sum_p d_p ||X_p - U_p Q||_F^2 after the D update
    std::size_t changed = 0;      // unlabeled samples whose class changed (all, on iteration 1)
    double wall_seconds = 0.0;

    // Half-step audit, NaN unless SolverConfig::audit_half_steps. With
    // t the current iteration:
    //   before_centroids = J(Q_{t-1}, U_{t-1}, d_{t-1})
    //   after_centroids  = J(Q_{t-1}, U_t,     d_{t-1})
    //   before_assign    = J(Q_{t-1}, U_t,     d_t)
    // Undefined on iteration 1, where Q_0 still has unset columns.
    double objective_before_centroids = std::numeric_limits<double>::quiet_NaN();
    double objective_after_centroids = std::numeric_limits<double>::quiet_NaN();
    double objective_before_assign = std::numeric_limits<double>::quiet_NaN();

    std::vector<ClassId> assignments;  // original sample order, only with keep_history
};

struct SolveTrace {
    std::vector<double> initial_weights;  // normalized, before iteration 1
    std::vector<IterationRecord> records;
};

struct SolveResult {
    std::vector<ClassId> assignments;  // original sample order, labeled entries echo the truth
    WeightVector weights_final;
    SolveTrace trace;
    int iterations_run = 0;
    bool converged = false;
};

// ---------------------------------------------------------------------------
// Building blocks. These work in the internal "labeled first" sample order
// produced by build_label_constraint / permute_samples.

/// U_p = X_p Q^T (Q Q^T)^{-1} over the set columns of Q. Q Q^T is diagonal
/// with the class counts, so column k is the mean of the members of class k.
/// Throws DegenerateClassError when a class has no set member.
CentroidSet init_centroids(const MultiViewDataset& ds, const IndicatorMatrix& q);

/// Same closed form; a class without members keeps its column from `prev`.
CentroidSet update_centroids(const MultiViewDataset& ds, const IndicatorMatrix& q,
                             const CentroidSet& prev);

/// Single-view form of update_centroids, returns the class counts through
/// `counts` when non-null.
Matrix class_means(const Matrix& x, const IndicatorMatrix& q, const Matrix* prev,
                   std::vector<std::size_t>* counts = nullptr);

/// Every unlabeled column goes to argmin_k sum_p d_p ||x^p_i - u^p_k||^2,
/// lowest k on ties. Labeled columns are copied unchanged.
IndicatorMatrix assign_unlabeled(const MultiViewDataset& ds, const CentroidSet& u,
                                 const WeightVector& d, const IndicatorMatrix& q);

/// sum_p d_p ||X_p - U_p Q||_F^2; Q must be fully set.
double objective(const MultiViewDataset& ds, const IndicatorMatrix& q, const CentroidSet& u,
                 const WeightVector& d);

// ---------------------------------------------------------------------------
// Solvers (original sample order in and out).

/// Constrained multi-view K-means with the configured weighting.
SolveResult solve(const MultiViewDataset& ds, const LabelInfo& labels, const SolverConfig& cfg);

/// Single-view constrained K-means on the row-stacked views, equal weight.
SolveResult solve_concatenated(const MultiViewDataset& ds, const LabelInfo& labels,
                               const SolverConfig& cfg);

/// Unconstrained Lloyd K-means with greedy k-means++ seeding drawn by Philox(seed).
/// Empty clusters keep their previous centroid.
std::vector<ClassId> solve_kmeans_single_view(const Matrix& x, int num_classes,
                                              std::uint64_t seed, int max_iter = 100);

}  // namespace lack
