#pragma once

#include "lack/mvdata.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lack {

struct PrfScore {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// All values in [0, 1]. `pairwise` is the pair-counting variant reported by
/// default; `macro` averages one-vs-rest precision/recall over the truth
/// classes.
struct EvalReport {
    double acc = 0.0;
    PrfScore pairwise;
    PrfScore macro;
    std::size_t n_eval = 0;
};

/// Fraction of positions with pred == truth.
double accuracy(std::span<const ClassId> pred, std::span<const ClassId> truth);

/// Pair-counting scores over all unordered sample pairs:
///   TP: same class in both, FP: together in pred only, FN: together in truth only.
/// precision = TP/(TP+FP), recall = TP/(TP+FN), each 1 when its denominator is 0.
PrfScore pairwise_prf(std::span<const ClassId> pred, std::span<const ClassId> truth);

/// Per-class precision/recall (class k as the positive label), averaged over
/// the classes present in truth; F is the harmonic mean of the two averages.
PrfScore macro_prf(std::span<const ClassId> pred, std::span<const ClassId> truth);

/// Harmonic mean, 0 when both are 0.
double f_measure(double precision, double recall);

/// Relabels `pred` through the one-to-one cluster-to-class map maximising
/// agreement with `truth` (Hungarian method on the contingency table, padded
/// square over max(pred ids, truth ids)).
std::vector<ClassId> align_to_truth(std::span<const ClassId> pred, std::span<const ClassId> truth);

/// Minimum-cost assignment for a square cost matrix; returns row -> column.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost);

/// Scores restricted to the samples with mask[i] true (all when mask empty).
EvalReport evaluate(std::span<const ClassId> pred, std::span<const ClassId> truth,
                    const std::vector<bool>& mask = {});

/// Mask of the samples not listed in `labeled_ids`.
std::vector<bool> unlabeled_mask(std::size_t n, std::span<const std::size_t> labeled_ids);

}  // namespace lack
