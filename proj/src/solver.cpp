#include "lack/solver.hpp"

#include "lack/error.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace lack {
namespace {

void check_shapes(const MultiViewDataset& ds, const IndicatorMatrix& q) {
    if (static_cast<Index>(q.size()) != ds.num_samples())
        throw ValidationError("indicator length " + std::to_string(q.size()) +
                              " does not match sample count " + std::to_string(ds.num_samples()));
}

void check_centroids(const MultiViewDataset& ds, const CentroidSet& u, int c) {
    if (u.size() != ds.num_views()) throw ValidationError("one centroid matrix per view expected");
    for (std::size_t p = 0; p < ds.num_views(); ++p)
        if (u[p].rows() != ds.dim(p) || u[p].cols() != c)
            throw ValidationError("centroid matrix of view '" + ds.name(p) + "' has wrong shape");
}

WeightVector scaled(WeightVector w, double scale) {
    for (double& v : w.d) v *= scale;
    return w;
}

}  // namespace

Matrix class_means(const Matrix& x, const IndicatorMatrix& q, const Matrix* prev,
                   std::vector<std::size_t>* counts_out) {
    const int c = q.num_classes();
    Matrix sums = Matrix::Zero(x.rows(), c);
    std::vector<std::size_t> counts(static_cast<std::size_t>(c), 0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!q.is_set(i)) continue;
        sums.col(q[i]) += x.col(static_cast<Index>(i));
        ++counts[static_cast<std::size_t>(q[i])];
    }
    for (int k = 0; k < c; ++k) {
        if (counts[k] > 0)
            sums.col(k) /= static_cast<double>(counts[k]);
        else if (prev)
            sums.col(k) = prev->col(k);
    }
    if (counts_out) *counts_out = std::move(counts);
    return sums;
}

CentroidSet init_centroids(const MultiViewDataset& ds, const IndicatorMatrix& q) {
    check_shapes(ds, q);
    CentroidSet u;
    for (std::size_t p = 0; p < ds.num_views(); ++p) {
        std::vector<std::size_t> counts;
        u.centroids.push_back(class_means(ds.view(p), q, nullptr, &counts));
        for (std::size_t k = 0; k < counts.size(); ++k)
            if (counts[k] == 0)
                throw DegenerateClassError("class " + std::to_string(k) +
                                           " has no assigned sample; its centroid is undefined");
    }
    return u;
}

CentroidSet update_centroids(const MultiViewDataset& ds, const IndicatorMatrix& q,
                             const CentroidSet& prev) {
    check_shapes(ds, q);
    check_centroids(ds, prev, q.num_classes());
    CentroidSet u;
    for (std::size_t p = 0; p < ds.num_views(); ++p)
        u.centroids.push_back(class_means(ds.view(p), q, &prev[p]));
    return u;
}

IndicatorMatrix assign_unlabeled(const MultiViewDataset& ds, const CentroidSet& u,
                                 const WeightVector& d, const IndicatorMatrix& q) {
    check_shapes(ds, q);
    const int c = q.num_classes();
    check_centroids(ds, u, c);
    if (d.size() != ds.num_views()) throw ValidationError("one weight per view expected");

    std::vector<ClassId> next = q.assignments();
    for (std::size_t i = q.labeled_prefix(); i < q.size(); ++i) {
        const auto col = static_cast<Index>(i);
        double best = std::numeric_limits<double>::infinity();
        ClassId arg = 0;
        for (int k = 0; k < c; ++k) {
            double dist = 0.0;
            for (std::size_t p = 0; p < ds.num_views(); ++p)
                dist += d[p] * (ds.view(p).col(col) - u[p].col(k)).squaredNorm();
            if (dist < best) {
                best = dist;
                arg = k;
            }
        }
        next[i] = arg;
    }
    return IndicatorMatrix(c, std::move(next), q.labeled_prefix());
}

double objective(const MultiViewDataset& ds, const IndicatorMatrix& q, const CentroidSet& u,
                 const WeightVector& d) {
    check_shapes(ds, q);
    check_centroids(ds, u, q.num_classes());
    if (!q.all_set()) throw ValidationError("objective needs a fully assigned indicator");
    double total = 0.0;
    for (std::size_t p = 0; p < ds.num_views(); ++p) {
        double residual = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            residual += (ds.view(p).col(static_cast<Index>(i)) - u[p].col(q[i])).squaredNorm();
        total += d[p] * residual;
    }
    return total;
}

SolveResult solve(const MultiViewDataset& ds, const LabelInfo& labels, const SolverConfig& cfg) {
    if (cfg.max_iter < 1) throw ValidationError("max_iter must be at least 1");
    if (!(cfg.weight_scale > 0.0)) throw ValidationError("weight_scale must be positive");
    if (cfg.strategy == WeightStrategy::DataDrivenGamma)
        throw ValidationError("the gamma-weighted variant is not a solver strategy");
    if (static_cast<Index>(labels.num_samples()) != ds.num_samples())
        throw ValidationError("label count " + std::to_string(labels.num_samples()) +
                              " does not match sample count " + std::to_string(ds.num_samples()));

    auto [q, order] = build_label_constraint(labels);
    const MultiViewDataset data = permute_samples(ds, order);
    const std::size_t num_views = data.num_views();
    const std::size_t l = q.labeled_prefix();
    const std::vector<ClassId> truth(q.assignments().begin(), q.assignments().begin() + l);

    WeightVector d = scaled(WeightVector::uniform(num_views, cfg.strategy), cfg.weight_scale);
    // Labeled-only means; iteration 1 recomputes them from the same Q.
    CentroidSet u = init_centroids(data, q);

    SolveResult result;
    result.trace.initial_weights = d.normalized();

    for (int t = 1; t <= cfg.max_iter; ++t) {
        const auto start = std::chrono::steady_clock::now();
        IterationRecord rec;
        rec.iteration = t;

        const bool q_full = q.all_set();
        if (cfg.audit_half_steps && q_full) rec.objective_before_centroids = objective(data, q, u, d);
        const WeightVector d_prev = d;

        for (std::size_t p = 0; p < num_views; ++p) {
            u[p] = class_means(data.view(p), q, &u[p]);

            if (cfg.strategy == WeightStrategy::LabelDriven) {
                const std::vector<ClassId> pred =
                    cfg.labeled_argmin == LabeledArgminMode::PerView
                        ? predict_labeled_per_view(data.view(p).leftCols(static_cast<Index>(l)), u[p])
                        : predict_labeled_weighted(data, u, d, l);
                d.d[p] = cfg.weight_scale * label_driven_weight(pred, truth, cfg.epsilon);
            } else if (cfg.strategy == WeightStrategy::DataDriven && q_full) {
                d.d[p] = cfg.weight_scale * data_driven_weight(data.view(p), u[p], q, cfg.epsilon);
            }
        }
        if (cfg.audit_half_steps && q_full) {
            rec.objective_after_centroids = objective(data, q, u, d_prev);
            rec.objective_before_assign = objective(data, q, u, d);
        }

        IndicatorMatrix next = assign_unlabeled(data, u, d, q);
        for (std::size_t i = l; i < q.size(); ++i) rec.changed += next[i] != q[i] ? 1 : 0;
        q = std::move(next);

        rec.weights = d.normalized();
        rec.objective = objective(data, q, u, d);
        if (cfg.keep_history) rec.assignments = restore_order(q.assignments(), order);
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.trace.records.push_back(std::move(rec));
        result.iterations_run = t;

        if (result.trace.records.back().changed == 0) {
            result.converged = true;
            if (cfg.stop_on_q_fixed) break;
        }
    }

    result.assignments = restore_order(q.assignments(), order);
    result.weights_final = d;
    return result;
}

SolveResult solve_concatenated(const MultiViewDataset& ds, const LabelInfo& labels,
                               const SolverConfig& cfg) {
    SolverConfig single = cfg;
    single.strategy = WeightStrategy::Equal;
    return solve(concatenate_views(ds), labels, single);
}

}  // namespace lack
