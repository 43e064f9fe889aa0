#pragma once

#include "lack/mvdata.hpp"

#include <span>
#include <vector>

namespace lack {

enum class WeightStrategy { Equal, DataDriven, DataDrivenGamma, LabelDriven };

const char* to_string(WeightStrategy s);

/// Floor applied to label-driven counts and data-driven residuals.
inline constexpr double kDefaultWeightEpsilon = 1e-9;

struct WeightVector {
    std::vector<double> d;
    WeightStrategy strategy = WeightStrategy::Equal;

    static WeightVector uniform(std::size_t num_views, WeightStrategy strategy);

    std::size_t size() const { return d.size(); }
    double operator[](std::size_t p) const { return d[p]; }

    /// d / sum(d); the scale-free form reported in traces.
    std::vector<double> normalized() const;
};

struct GammaConfig {
    double gamma = 2.0;
};

/// Nearest-centroid class for each column of `samples` using one view's
/// centroids only. Ties go to the lowest class index.
std::vector<ClassId> predict_labeled_per_view(const Matrix& samples, const Matrix& centroids);

/// Same prediction but with the weighted multi-view distance
/// sum_p d_p ||x^p - u^p_k||^2 over the first `num_labeled` samples. Every
/// view then receives the same prediction; kept for auditing the
/// alternative reading of the labeled-sample update.
std::vector<ClassId> predict_labeled_weighted(const MultiViewDataset& ds, const CentroidSet& u,
                                              const WeightVector& d, std::size_t num_labeled);

/// Number of positions where pred == truth, i.e. the Frobenius inner product
/// of the two one-hot label matrices, floored at epsilon.
double label_driven_weight(std::span<const ClassId> pred, std::span<const ClassId> truth,
                           double epsilon = kDefaultWeightEpsilon);

/// 1 / (2 max(||X - U onehot(Q)||_F, epsilon)). Q must be fully set.
double data_driven_weight(const Matrix& x, const Matrix& centroids, const IndicatorMatrix& q,
                          double epsilon = kDefaultWeightEpsilon);

/// Simplex weights from per-view fitting errors:
///   d_p = (gamma e_p)^(1/(1-gamma)) / sum_q (gamma e_q)^(1/(1-gamma)).
WeightVector data_driven_weight_gamma(std::span<const double> errors, const GammaConfig& cfg);

}  // namespace lack
