#include "lack/mvdata.hpp"

#include "lack/error.hpp"
#include "lack/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace lack {

MultiViewDataset::MultiViewDataset(std::vector<Matrix> views, std::vector<std::string> names)
    : views_(std::move(views)), names_(std::move(names)) {
    if (views_.empty()) throw ValidationError("dataset needs at least one view");
    if (names_.size() > views_.size())
        throw ValidationError("more view names than views");
    for (std::size_t p = names_.size(); p < views_.size(); ++p)
        names_.push_back("view" + std::to_string(p + 1));

    const Index n = views_.front().cols();
    for (std::size_t p = 0; p < views_.size(); ++p) {
        const Matrix& v = views_[p];
        if (v.rows() < 1 || v.cols() < 1)
            throw ValidationError("view '" + names_[p] + "' is empty");
        if (v.cols() != n)
            throw ValidationError("view '" + names_[p] + "' has " + std::to_string(v.cols()) +
                                  " samples but view '" + names_[0] + "' has " + std::to_string(n));
        for (Index j = 0; j < v.cols(); ++j)
            for (Index i = 0; i < v.rows(); ++i)
                if (!std::isfinite(v(i, j)))
                    throw ValidationError("view '" + names_[p] + "': non-finite entry at row " +
                                          std::to_string(i + 1) + ", column " + std::to_string(j + 1));
    }
}

void LabelInfo::validate() const {
    const std::size_t n = ground_truth.size();
    if (num_classes < 1) throw ValidationError("label info needs at least one class");
    if (labeled_ids.size() > n) throw ValidationError("more labeled samples than samples");
    for (std::size_t i = 0; i < n; ++i)
        if (ground_truth[i] < 0 || ground_truth[i] >= num_classes)
            throw ValidationError("ground truth of sample " + std::to_string(i) + " is out of range");

    std::vector<bool> covered(num_classes, false);
    for (std::size_t k = 0; k < labeled_ids.size(); ++k) {
        const std::size_t id = labeled_ids[k];
        if (id >= n) throw ValidationError("labeled id " + std::to_string(id) + " out of range");
        if (k > 0 && labeled_ids[k - 1] >= id)
            throw ValidationError("labeled ids must be distinct and ascending");
        covered[ground_truth[id]] = true;
    }
    for (int k = 0; k < num_classes; ++k)
        if (!covered[k])
            throw ValidationError("class " + std::to_string(k) + " has no labeled sample");
}

LabelEncoding encode_labels(std::span<const std::string> tokens) {
    LabelEncoding enc;
    std::map<std::string, ClassId> index;
    enc.ids.reserve(tokens.size());
    for (const auto& t : tokens) {
        auto [it, inserted] = index.try_emplace(t, static_cast<ClassId>(enc.class_names.size()));
        if (inserted) enc.class_names.push_back(t);
        enc.ids.push_back(it->second);
    }
    return enc;
}

IndicatorMatrix::IndicatorMatrix(int num_classes, std::vector<ClassId> assignments,
                                 std::size_t labeled_prefix)
    : num_classes_(num_classes), assign_(std::move(assignments)), labeled_(labeled_prefix) {
    if (num_classes_ < 1) throw ValidationError("indicator needs at least one class");
    if (labeled_ > assign_.size()) throw ValidationError("labeled prefix longer than sample count");
    for (std::size_t i = 0; i < assign_.size(); ++i) {
        const ClassId k = assign_[i];
        if (k == kUnset && i < labeled_)
            throw ValidationError("labeled column " + std::to_string(i) + " is unset");
        if (k != kUnset && (k < 0 || k >= num_classes_))
            throw ValidationError("assignment of column " + std::to_string(i) + " out of range");
    }
}

bool IndicatorMatrix::all_set() const {
    return std::none_of(assign_.begin(), assign_.end(), [](ClassId k) { return k == kUnset; });
}

void IndicatorMatrix::set(std::size_t i, ClassId k) {
    if (i < labeled_) throw ValidationError("labeled column " + std::to_string(i) + " is fixed");
    if (k < 0 || k >= num_classes_) throw ValidationError("class id out of range");
    assign_.at(i) = k;
}

std::vector<std::size_t> IndicatorMatrix::class_counts() const {
    std::vector<std::size_t> counts(num_classes_, 0);
    for (ClassId k : assign_)
        if (k != kUnset) ++counts[k];
    return counts;
}

Matrix IndicatorMatrix::to_dense() const {
    Matrix q = Matrix::Zero(num_classes_, static_cast<Index>(assign_.size()));
    for (std::size_t i = 0; i < assign_.size(); ++i)
        if (assign_[i] != kUnset) q(assign_[i], static_cast<Index>(i)) = 1.0;
    return q;
}

LabelConstraint build_label_constraint(const LabelInfo& labels) {
    labels.validate();
    const std::size_t n = labels.num_samples();
    const std::size_t l = labels.num_labeled();

    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> is_labeled(n, false);
    for (std::size_t id : labels.labeled_ids) {
        order.push_back(id);
        is_labeled[id] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!is_labeled[i]) order.push_back(i);

    std::vector<ClassId> assign(n, IndicatorMatrix::kUnset);
    for (std::size_t j = 0; j < l; ++j) assign[j] = labels.ground_truth[order[j]];
    return {IndicatorMatrix(labels.num_classes, std::move(assign), l), std::move(order)};
}

LabelInfo stratified_label_sample(std::span<const ClassId> ground_truth, int num_classes,
                                  double tau, std::uint64_t seed) {
    if (!(tau > 0.0 && tau <= 1.0))
        throw ValidationError("label ratio tau must lie in (0, 1], got " + std::to_string(tau));
    if (num_classes < 1) throw ValidationError("need at least one class");

    std::vector<std::vector<std::size_t>> members(num_classes);
    for (std::size_t i = 0; i < ground_truth.size(); ++i) {
        const ClassId k = ground_truth[i];
        if (k < 0 || k >= num_classes)
            throw ValidationError("ground truth of sample " + std::to_string(i) + " is out of range");
        members[k].push_back(i);
    }

    Philox rng(seed);
    LabelInfo info;
    info.ground_truth.assign(ground_truth.begin(), ground_truth.end());
    info.num_classes = num_classes;
    for (int k = 0; k < num_classes; ++k) {
        auto& pool = members[k];
        if (pool.empty())
            throw ValidationError("class " + std::to_string(k) + " has no samples");
        // plain double product then ceil, the same arithmetic as MATLAB's ceil(tau*n_c)
        const auto take = std::min(
            pool.size(), static_cast<std::size_t>(std::ceil(tau * static_cast<double>(pool.size()))));
        // partial Fisher-Yates: the first `take` slots become the sample
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        info.labeled_ids.insert(info.labeled_ids.end(), pool.begin(), pool.begin() + take);
    }
    std::sort(info.labeled_ids.begin(), info.labeled_ids.end());
    info.validate();
    return info;
}

MultiViewDataset permute_samples(const MultiViewDataset& ds, std::span<const std::size_t> order) {
    const Index n = ds.num_samples();
    if (static_cast<Index>(order.size()) != n)
        throw ValidationError("permutation length does not match sample count");
    std::vector<Matrix> views;
    views.reserve(ds.num_views());
    for (const auto& v : ds.views()) {
        Matrix out(v.rows(), n);
        for (Index j = 0; j < n; ++j) out.col(j) = v.col(static_cast<Index>(order[j]));
        views.push_back(std::move(out));
    }
    return MultiViewDataset(std::move(views), ds.names());
}

std::vector<ClassId> restore_order(std::span<const ClassId> permuted,
                                   std::span<const std::size_t> order) {
    if (permuted.size() != order.size())
        throw ValidationError("permutation length does not match vector length");
    std::vector<ClassId> out(permuted.size());
    for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = permuted[j];
    return out;
}

MultiViewDataset concatenate_views(const MultiViewDataset& ds) {
    Index rows = 0;
    for (const auto& v : ds.views()) rows += v.rows();
    Matrix stacked(rows, ds.num_samples());
    Index offset = 0;
    for (const auto& v : ds.views()) {
        stacked.middleRows(offset, v.rows()) = v;
        offset += v.rows();
    }
    std::string name;
    for (std::size_t p = 0; p < ds.num_views(); ++p) name += (p ? "+" : "") + ds.name(p);
    return MultiViewDataset({std::move(stacked)}, {name});
}

MultiViewDataset zscore_views(const MultiViewDataset& ds) {
    std::vector<Matrix> views;
    for (const auto& v : ds.views()) {
        Matrix z = v;
        const double n = static_cast<double>(v.cols());
        for (Index r = 0; r < z.rows(); ++r) {
            const double mean = z.row(r).sum() / n;
            z.row(r).array() -= mean;
            const double sd = std::sqrt(z.row(r).squaredNorm() / n);
            if (sd > 0.0) z.row(r) /= sd;
        }
        views.push_back(std::move(z));
    }
    return MultiViewDataset(std::move(views), ds.names());
}

MultiViewDataset append_view(const MultiViewDataset& ds, Matrix view, std::string name) {
    auto views = ds.views();
    auto names = ds.names();
    views.push_back(std::move(view));
    names.push_back(std::move(name));
    return MultiViewDataset(std::move(views), std::move(names));
}

MultiViewDataset replace_view(const MultiViewDataset& ds, std::size_t p, Matrix view) {
    if (p >= ds.num_views())
        throw ValidationError("view id " + std::to_string(p) + " does not exist (dataset has " +
                              std::to_string(ds.num_views()) + " views)");
    auto views = ds.views();
    views[p] = std::move(view);
    return MultiViewDataset(std::move(views), ds.names());
}

}  // namespace lack
