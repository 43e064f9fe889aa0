#include "lack/metrics.hpp"

#include "lack/error.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace lack {
namespace {

void check_lengths(std::span<const ClassId> pred, std::span<const ClassId> truth) {
    if (pred.size() != truth.size())
        throw ValidationError("prediction length " + std::to_string(pred.size()) +
                              " differs from truth length " + std::to_string(truth.size()));
}

double pairs(double count) { return count * (count - 1.0) / 2.0; }

}  // namespace

double f_measure(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

double accuracy(std::span<const ClassId> pred, std::span<const ClassId> truth) {
    check_lengths(pred, truth);
    if (pred.empty()) throw ValidationError("accuracy of an empty set is undefined");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

PrfScore pairwise_prf(std::span<const ClassId> pred, std::span<const ClassId> truth) {
    check_lengths(pred, truth);
    if (pred.size() < 2) throw ValidationError("pairwise scores need at least two samples");
    // contingency counts; pair totals follow from sums of n*(n-1)/2
    std::map<std::pair<ClassId, ClassId>, double> joint;
    std::map<ClassId, double> pred_sizes, truth_sizes;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        joint[{pred[i], truth[i]}] += 1.0;
        pred_sizes[pred[i]] += 1.0;
        truth_sizes[truth[i]] += 1.0;
    }
    double tp = 0.0, together_pred = 0.0, together_truth = 0.0;
    for (const auto& [key, count] : joint) tp += pairs(count);
    for (const auto& [key, count] : pred_sizes) together_pred += pairs(count);
    for (const auto& [key, count] : truth_sizes) together_truth += pairs(count);

    PrfScore s;
    s.precision = together_pred > 0.0 ? tp / together_pred : 1.0;
    s.recall = together_truth > 0.0 ? tp / together_truth : 1.0;
    s.f_score = f_measure(s.precision, s.recall);
    return s;
}

PrfScore macro_prf(std::span<const ClassId> pred, std::span<const ClassId> truth) {
    check_lengths(pred, truth);
    if (pred.empty()) throw ValidationError("macro scores of an empty set are undefined");
    std::map<ClassId, double> tp, pred_count, truth_count;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        pred_count[pred[i]] += 1.0;
        truth_count[truth[i]] += 1.0;
        if (pred[i] == truth[i]) tp[truth[i]] += 1.0;
    }
    double p_sum = 0.0, r_sum = 0.0;
    for (const auto& [k, support] : truth_count) {
        const auto it = pred_count.find(k);
        const double predicted = it == pred_count.end() ? 0.0 : it->second;
        const double hits = tp.contains(k) ? tp[k] : 0.0;
        p_sum += predicted > 0.0 ? hits / predicted : 0.0;
        r_sum += hits / support;
    }
    const double classes = static_cast<double>(truth_count.size());
    PrfScore s;
    s.precision = p_sum / classes;
    s.recall = r_sum / classes;
    s.f_score = f_measure(s.precision, s.recall);
    return s;
}

std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
    // Kuhn-Munkres with potentials, O(k^3); 1-based internal indexing.
    const int k = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
    std::vector<int> match(k + 1, 0), way(k + 1, 0);
    std::vector<char> used(k + 1);
    for (int row = 1; row <= k; ++row) {
        match[0] = row;
        int col0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col0] = 1;
            const int r0 = match[col0];
            double delta = inf;
            int col1 = 0;
            for (int j = 1; j <= k; ++j) {
                if (used[j]) continue;
                const double cur = cost[r0 - 1][j - 1] - u[r0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = col0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for (int j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const int col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<int> assignment(k, -1);
    for (int j = 1; j <= k; ++j)
        if (match[j] != 0) assignment[match[j] - 1] = j - 1;
    return assignment;
}

std::vector<ClassId> align_to_truth(std::span<const ClassId> pred, std::span<const ClassId> truth) {
    check_lengths(pred, truth);
    if (pred.empty()) return {};
    const ClassId max_pred = *std::max_element(pred.begin(), pred.end());
    const ClassId max_truth = *std::max_element(truth.begin(), truth.end());
    if (*std::min_element(pred.begin(), pred.end()) < 0 ||
        *std::min_element(truth.begin(), truth.end()) < 0)
        throw ValidationError("class ids must be non-negative");
    const int k = std::max(max_pred, max_truth) + 1;

    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < pred.size(); ++i) cost[pred[i]][truth[i]] -= 1.0;
    const std::vector<int> map = hungarian_min_cost(cost);

    std::vector<ClassId> out(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) out[i] = map[pred[i]];
    return out;
}

EvalReport evaluate(std::span<const ClassId> pred, std::span<const ClassId> truth,
                    const std::vector<bool>& mask) {
    check_lengths(pred, truth);
    std::vector<ClassId> p, t;
    if (mask.empty()) {
        p.assign(pred.begin(), pred.end());
        t.assign(truth.begin(), truth.end());
    } else {
        if (mask.size() != pred.size()) throw ValidationError("mask length mismatch");
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (mask[i]) {
                p.push_back(pred[i]);
                t.push_back(truth[i]);
            }
    }
    EvalReport r;
    r.n_eval = p.size();
    r.acc = accuracy(p, t);
    r.pairwise = p.size() >= 2 ? pairwise_prf(p, t) : PrfScore{1.0, 1.0, 1.0};
    r.macro = macro_prf(p, t);
    return r;
}

std::vector<bool> unlabeled_mask(std::size_t n, std::span<const std::size_t> labeled_ids) {
    std::vector<bool> mask(n, true);
    for (std::size_t id : labeled_ids) mask.at(id) = false;
    return mask;
}

}  // namespace lack
