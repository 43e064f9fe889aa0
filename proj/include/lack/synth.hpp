#pragma once

#include "lack/mvdata.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lack {

/// Gaussian blobs over several views. View p draws its own class centres
/// from separation_p * N(0, I_{m_p}) and its samples from
/// centre + spread * N(0, I_{m_p}), using the generator stream Philox(seed, p).
struct BlobSpec {
    int num_classes = 2;
    std::vector<std::size_t> n_per_class;  // one entry per class, or one entry for all
    std::vector<Index> dims;               // one entry per view
    double separation = 10.0;
    double spread = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> view_separation;   // optional per-view override of `separation`

    void validate() const;
    double separation_of(std::size_t p) const;
    std::size_t class_size(int k) const;
};

struct BlobData {
    MultiViewDataset dataset;
    std::vector<ClassId> labels;  // samples are grouped by class, class 0 first
};

BlobData gen_blobs(const BlobSpec& spec);

/// One blob view for an existing label vector.
Matrix gen_blob_view(std::span<const ClassId> labels, int num_classes, Index dim,
                     double separation, double spread, std::uint64_t seed,
                     std::uint64_t stream = 0);

/// Low-rank "fake" view A * B with A (dim x rank) and B (rank x n) filled with
/// uniform [0, 1) draws from Philox(seed), A first, both column-major.
/// With target_frobenius set the result is rescaled to that Frobenius norm.
Matrix make_fake_view(Index n, Index rank, Index dim, std::uint64_t seed,
                      std::optional<double> target_frobenius = std::nullopt);

/// X + N with N_ij ~ N(0, sigma^2), sigma^2 = mean(X_ij^2) / snr; entries
/// drawn column-major from Philox(seed).
Matrix add_gaussian_noise_snr(const Matrix& x, double snr, std::uint64_t seed);

}  // namespace lack
