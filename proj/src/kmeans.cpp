#include "lack/error.hpp"
#include "lack/rng.hpp"
#include "lack/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lack {
namespace {

// Index whose cumulative D^2 mass first exceeds `target`, never a zero-mass sample.
Index sample_d2(const std::vector<double>& d2, double target) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d2.size(); ++i) {
        acc += d2[i];
        if (target < acc && d2[i] > 0.0) return static_cast<Index>(i);
    }
    std::size_t i = d2.size() - 1;
    while (i > 0 && d2[i] == 0.0) --i;
    return static_cast<Index>(i);
}

}  // namespace

std::vector<ClassId> solve_kmeans_single_view(const Matrix& x, int num_classes,
                                              std::uint64_t seed, int max_iter) {
    const Index n = x.cols();
    if (num_classes < 1 || num_classes > n)
        throw ValidationError("K-means needs 1 <= c <= n");
    if (max_iter < 1) throw ValidationError("max_iter must be at least 1");

    // greedy k-means++ seeding
    Philox rng(seed);
    Matrix centroids(x.rows(), num_classes);
    centroids.col(0) = x.col(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        d2[static_cast<std::size_t>(i)] = (x.col(i) - centroids.col(0)).squaredNorm();
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(num_classes)));
    std::vector<double> cand(d2.size()), best_d2(d2.size());
    for (int k = 1; k < num_classes; ++k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        double best_pot = std::numeric_limits<double>::infinity();
        Index best = 0;
        for (int t = 0; t < trials; ++t) {
            const Index pick = total > 0.0 ? sample_d2(d2, rng.uniform() * total)
                                           : static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            double pot = 0.0;
            for (Index i = 0; i < n; ++i) {
                const auto ii = static_cast<std::size_t>(i);
                cand[ii] = std::min(d2[ii], (x.col(i) - x.col(pick)).squaredNorm());
                pot += cand[ii];
            }
            if (pot < best_pot) {
                best_pot = pot;
                best = pick;
                best_d2.swap(cand);
            }
        }
        centroids.col(k) = x.col(best);
        d2 = best_d2;
    }

    std::vector<ClassId> assign(static_cast<std::size_t>(n), IndicatorMatrix::kUnset);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            ClassId arg = 0;
            for (int k = 0; k < num_classes; ++k) {
                const double dist = (x.col(i) - centroids.col(k)).squaredNorm();
                if (dist < best) {
                    best = dist;
                    arg = k;
                }
            }
            if (assign[static_cast<std::size_t>(i)] != arg) {
                assign[static_cast<std::size_t>(i)] = arg;
                changed = true;
            }
        }
        if (!changed) break;
        const IndicatorMatrix q(num_classes, assign, 0);
        centroids = class_means(x, q, &centroids);
    }
    return assign;
}

}  // namespace lack
