#include "lack/weighting.hpp"

#include "lack/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lack {

const char* to_string(WeightStrategy s) {
    switch (s) {
        case WeightStrategy::Equal: return "EQUAL";
        case WeightStrategy::DataDriven: return "DATA_DRIVEN";
        case WeightStrategy::DataDrivenGamma: return "DATA_DRIVEN_GAMMA";
        case WeightStrategy::LabelDriven: return "LABEL_DRIVEN";
    }
    return "?";
}

WeightVector WeightVector::uniform(std::size_t num_views, WeightStrategy strategy) {
    return {std::vector<double>(num_views, 1.0 / static_cast<double>(num_views)), strategy};
}

std::vector<double> WeightVector::normalized() const {
    const double total = std::accumulate(d.begin(), d.end(), 0.0);
    std::vector<double> out(d.size());
    std::transform(d.begin(), d.end(), out.begin(), [total](double w) { return w / total; });
    return out;
}

std::vector<ClassId> predict_labeled_per_view(const Matrix& samples, const Matrix& centroids) {
    if (samples.rows() != centroids.rows())
        throw ValidationError("sample and centroid dimensions differ");
    std::vector<ClassId> pred(static_cast<std::size_t>(samples.cols()));
    for (Index i = 0; i < samples.cols(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        ClassId arg = 0;
        for (Index k = 0; k < centroids.cols(); ++k) {
            const double dist = (samples.col(i) - centroids.col(k)).squaredNorm();
            if (dist < best) {
                best = dist;
                arg = static_cast<ClassId>(k);
            }
        }
        pred[static_cast<std::size_t>(i)] = arg;
    }
    return pred;
}

std::vector<ClassId> predict_labeled_weighted(const MultiViewDataset& ds, const CentroidSet& u,
                                              const WeightVector& d, std::size_t num_labeled) {
    const Index c = u[0].cols();
    std::vector<ClassId> pred(num_labeled);
    for (std::size_t i = 0; i < num_labeled; ++i) {
        const auto col = static_cast<Index>(i);
        double best = std::numeric_limits<double>::infinity();
        ClassId arg = 0;
        for (Index k = 0; k < c; ++k) {
            double dist = 0.0;
            for (std::size_t p = 0; p < ds.num_views(); ++p)
                dist += d[p] * (ds.view(p).col(col) - u[p].col(k)).squaredNorm();
            if (dist < best) {
                best = dist;
                arg = static_cast<ClassId>(k);
            }
        }
        pred[i] = arg;
    }
    return pred;
}

double label_driven_weight(std::span<const ClassId> pred, std::span<const ClassId> truth,
                           double epsilon) {
    if (pred.size() != truth.size())
        throw ValidationError("prediction and truth lengths differ");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1 : 0;
    return std::max(static_cast<double>(hits), epsilon);
}

double data_driven_weight(const Matrix& x, const Matrix& centroids, const IndicatorMatrix& q,
                          double epsilon) {
    if (!q.all_set()) throw ValidationError("data-driven weight needs a fully assigned indicator");
    if (static_cast<Index>(q.size()) != x.cols() || x.rows() != centroids.rows())
        throw ValidationError("shape mismatch in data-driven weight");
    double sq = 0.0;
    for (Index i = 0; i < x.cols(); ++i)
        sq += (x.col(i) - centroids.col(q[static_cast<std::size_t>(i)])).squaredNorm();
    return 1.0 / (2.0 * std::max(std::sqrt(sq), epsilon));
}

WeightVector data_driven_weight_gamma(std::span<const double> errors, const GammaConfig& cfg) {
    if (!(cfg.gamma > 1.0)) throw ValidationError("gamma must be greater than 1");
    if (errors.empty()) throw ValidationError("no view errors given");
    // log-domain evaluation: the exponent 1/(1-gamma) is negative and large
    // errors underflow otherwise
    const double expo = 1.0 / (1.0 - cfg.gamma);
    std::vector<double> logw(errors.size());
    for (std::size_t p = 0; p < errors.size(); ++p) {
        if (!(errors[p] > 0.0)) throw ValidationError("view fitting errors must be positive");
        logw[p] = expo * (std::log(cfg.gamma) + std::log(errors[p]));
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    WeightVector w{std::vector<double>(errors.size()), WeightStrategy::DataDrivenGamma};
    double total = 0.0;
    for (std::size_t p = 0; p < errors.size(); ++p) total += w.d[p] = std::exp(logw[p] - top);
    for (double& v : w.d) v /= total;
    return w;
}

}  // namespace lack
