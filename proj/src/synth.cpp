#include "lack/synth.hpp"

#include "lack/error.hpp"
#include "lack/rng.hpp"

#include <cmath>

namespace lack {

void BlobSpec::validate() const {
    if (num_classes < 1) throw ValidationError("blob spec needs at least one class");
    if (n_per_class.size() != 1 && n_per_class.size() != static_cast<std::size_t>(num_classes))
        throw ValidationError("n_per_class must have one entry or one per class");
    for (auto c : n_per_class)
        if (c < 1) throw ValidationError("every class needs at least one sample");
    if (dims.empty()) throw ValidationError("blob spec needs at least one view");
    for (auto m : dims)
        if (m < 1) throw ValidationError("view dimensions must be positive");
    if (!(separation > 0.0)) throw ValidationError("separation must be positive");
    if (!(spread >= 0.0)) throw ValidationError("spread must be non-negative");
    if (!view_separation.empty() && view_separation.size() != dims.size())
        throw ValidationError("view_separation needs one entry per view");
    for (double s : view_separation)
        if (!(s > 0.0)) throw ValidationError("separation must be positive");
}

double BlobSpec::separation_of(std::size_t p) const {
    return view_separation.empty() ? separation : view_separation[p];
}

std::size_t BlobSpec::class_size(int k) const {
    return n_per_class.size() == 1 ? n_per_class.front() : n_per_class[static_cast<std::size_t>(k)];
}

Matrix gen_blob_view(std::span<const ClassId> labels, int num_classes, Index dim,
                     double separation, double spread, std::uint64_t seed, std::uint64_t stream) {
    Philox rng(seed, stream);
    Matrix centres(dim, num_classes);
    for (Index k = 0; k < num_classes; ++k)
        for (Index r = 0; r < dim; ++r) centres(r, k) = separation * rng.normal();

    Matrix x(dim, static_cast<Index>(labels.size()));
    for (Index j = 0; j < x.cols(); ++j) {
        const ClassId k = labels[static_cast<std::size_t>(j)];
        if (k < 0 || k >= num_classes) throw ValidationError("label out of range in blob view");
        for (Index r = 0; r < dim; ++r) x(r, j) = centres(r, k) + spread * rng.normal();
    }
    return x;
}

BlobData gen_blobs(const BlobSpec& spec) {
    spec.validate();
    std::vector<ClassId> labels;
    for (int k = 0; k < spec.num_classes; ++k) labels.insert(labels.end(), spec.class_size(k), k);

    std::vector<Matrix> views;
    for (std::size_t p = 0; p < spec.dims.size(); ++p)
        views.push_back(gen_blob_view(labels, spec.num_classes, spec.dims[p], spec.separation_of(p),
                                      spec.spread, spec.seed, p));
    return {MultiViewDataset(std::move(views)), std::move(labels)};
}

Matrix make_fake_view(Index n, Index rank, Index dim, std::uint64_t seed,
                      std::optional<double> target_frobenius) {
    if (n < 1 || rank < 1 || dim < 1) throw ValidationError("fake view sizes must be positive");
    if (rank > std::min(dim, n)) throw ValidationError("fake view rank exceeds min(dim, n)");
    Philox rng(seed);
    Matrix a(dim, rank), b(rank, n);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform();
    for (Index i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform();
    Matrix x = a * b;
    if (target_frobenius) {
        if (!(*target_frobenius > 0.0)) throw ValidationError("target Frobenius norm must be positive");
        x *= *target_frobenius / x.norm();
    }
    return x;
}

Matrix add_gaussian_noise_snr(const Matrix& x, double snr, std::uint64_t seed) {
    if (!(snr > 0.0)) throw ValidationError("snr must be positive");
    const double power = x.squaredNorm() / static_cast<double>(x.size());
    if (!(power > 0.0)) throw ValidationError("signal power of an all-zero matrix is zero");
    const double sigma = std::sqrt(power / snr);
    Philox rng(seed);
    Matrix out = x;
    for (Index i = 0; i < out.size(); ++i) out.data()[i] += sigma * rng.normal();
    return out;
}

}  // namespace lack
