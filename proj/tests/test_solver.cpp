#include "lack/error.hpp"
#include "lack/metrics.hpp"
#include "lack/solver.hpp"
#include "lack/synth.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace lack;

namespace {

LabelInfo labels_with(std::vector<ClassId> truth, int c, std::vector<std::size_t> labeled) {
    LabelInfo info{std::move(truth), c, std::move(labeled)};
    info.validate();
    return info;
}

struct Blobs {
    MultiViewDataset ds;
    LabelInfo labels;
};

Blobs two_view_blobs(std::uint64_t seed, int c = 2, double sep = 10.0) {
    BlobSpec spec;
    spec.num_classes = c;
    spec.n_per_class = {50};
    spec.dims = {3, 5};
    spec.separation = sep;
    spec.seed = seed;
    const BlobData b = gen_blobs(spec);
    return {b.dataset, stratified_label_sample(b.labels, c, 0.1, seed)};
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("init_centroids averages the set columns only") {
    Matrix x(1, 3);
    x << 0, 3, 6;
    const MultiViewDataset ds({x});
    CHECK(init_centroids(ds, IndicatorMatrix(1, {0, 0, 0}, 3))[0](0, 0) == 3.0);

    Matrix y(1, 4);
    y << 2, 4, 100, -100;
    const auto u = init_centroids(MultiViewDataset({y}), IndicatorMatrix(1, {0, 0, -1, -1}, 2));
    CHECK(u[0](0, 0) == 3.0);

    CHECK_THROWS_AS(init_centroids(ds, IndicatorMatrix(2, {0, 0, -1}, 2)), DegenerateClassError);
}

TEST_CASE("init_centroids on a unit-basis labeled block") {
    // 6 labeled samples, classes (0,0,1,1,2,2), sample j is e_j in R^6
    const Matrix x = Matrix::Identity(6, 6);
    const auto u = init_centroids(MultiViewDataset({x}), IndicatorMatrix(3, {0, 0, 1, 1, 2, 2}, 6));
    Matrix expect = Matrix::Zero(6, 3);
    expect(0, 0) = expect(1, 0) = 0.5;
    expect(2, 1) = expect(3, 1) = 0.5;
    expect(4, 2) = expect(5, 2) = 0.5;
    CHECK(u[0] == expect);
}

TEST_CASE("update_centroids gives per-class means and keeps empty classes") {
    Matrix x(1, 4);
    x << 0, 0, 2, 2;
    const MultiViewDataset ds({x});
    CentroidSet prev{{Matrix::Constant(1, 2, 7.0)}};
    const auto u = update_centroids(ds, IndicatorMatrix(2, {0, 0, 1, 1}, 1), prev);
    CHECK(u[0](0, 0) == 0.0);
    CHECK(u[0](0, 1) == 2.0);

    const auto kept = update_centroids(ds, IndicatorMatrix(2, {0, 0, 0, 0}, 1), prev);
    CHECK(kept[0](0, 0) == 1.0);
    CHECK(kept[0](0, 1) == 7.0);
}

TEST_CASE("update_centroids matches the normal-equations least-squares solution") {
    Philox rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = test::random_matrix(4, 10, rng);
        std::vector<ClassId> a(10);
        for (int i = 0; i < 10; ++i) a[i] = i % 3;  // every class nonempty
        for (std::size_t i = 9; i > 0; --i) std::swap(a[i], a[rng.below(i + 1)]);
        const IndicatorMatrix q(3, a, 0);
        const Matrix phi = q.to_dense();
        // U^T = (Phi Phi^T)^{-1} Phi X^T
        const Matrix oracle = (phi * phi.transpose()).ldlt().solve(phi * x.transpose()).transpose();
        const auto u = update_centroids(MultiViewDataset({x}), q, CentroidSet{{Matrix::Zero(4, 3)}});
        CHECK((u[0] - oracle).norm() <= 1e-12 * oracle.norm());
    }
}

TEST_CASE("assign_unlabeled: nearest centroid for one view") {
    Matrix x(1, 2), u(1, 2);
    x << 10, 1;
    u << 0, 10;
    const auto q = assign_unlabeled(MultiViewDataset({x}), CentroidSet{{u}}, {{1.0}},
                                    IndicatorMatrix(2, {1, -1}, 1));
    CHECK(q.assignments() == std::vector<ClassId>{1, 0});
}

TEST_CASE("assign_unlabeled: weighted sum over views") {
    // view distances (1, 4) and (4, 1): d=(0.8, 0.2) gives (1.6, 3.4)
    Matrix x1(1, 2), x2(1, 2), u1(1, 2), u2(1, 2);
    x1 << 0, 0;
    u1 << 1, 2;
    x2 << 0, 0;
    u2 << 2, 1;
    const MultiViewDataset ds({x1, x2});
    const IndicatorMatrix q0(2, {0, -1}, 1);
    CHECK(assign_unlabeled(ds, {{u1, u2}}, {{0.8, 0.2}}, q0)[1] == 0);
    CHECK(assign_unlabeled(ds, {{u1, u2}}, {{0.2, 0.8}}, q0)[1] == 1);
    CHECK(assign_unlabeled(ds, {{u1, u2}}, {{0.5, 0.5}}, q0)[1] == 0);  // tie
}

TEST_CASE("assign_unlabeled is invariant to scaling d") {
    Philox rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const MultiViewDataset ds({test::random_matrix(2, 12, rng), test::random_matrix(3, 12, rng)});
        const CentroidSet u{{test::random_matrix(2, 3, rng), test::random_matrix(3, 3, rng)}};
        const WeightVector d{{0.1 + rng.uniform(), 0.1 + rng.uniform()}};
        const WeightVector d100{{100 * d[0], 100 * d[1]}};
        const IndicatorMatrix q(3, {0, 1, 2, -1, -1, -1, -1, -1, -1, -1, -1, -1}, 3);
        CHECK(assign_unlabeled(ds, u, d, q) == assign_unlabeled(ds, u, d100, q));
    }
}

TEST_CASE("objective values") {
    Matrix x(1, 2), u(1, 1);
    x << 0, 2;
    u << 1;
    CHECK(objective(MultiViewDataset({x}), IndicatorMatrix(1, {0, 0}, 1), {{u}}, {{1.0}}) == 2.0);

    Matrix exact(2, 3);
    exact << 1, 1, 5, 2, 2, 6;
    Matrix centres(2, 2);
    centres << 1, 5, 2, 6;
    CHECK(objective(MultiViewDataset({exact}), IndicatorMatrix(2, {0, 0, 1}, 2), {{centres}}, {{3.0}}) ==
          0.0);
    CHECK_THROWS_AS(objective(MultiViewDataset({x}), IndicatorMatrix(1, {0, -1}, 1), {{u}}, {{1.0}}),
                    ValidationError);
}

TEST_CASE("objective matches an elementwise sum") {
    Philox rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const MultiViewDataset ds({test::random_matrix(3, 7, rng), test::random_matrix(2, 7, rng)});
        const CentroidSet u{{test::random_matrix(3, 2, rng), test::random_matrix(2, 2, rng)}};
        std::vector<ClassId> a(7);
        for (auto& v : a) v = static_cast<ClassId>(rng.below(2));
        const IndicatorMatrix q(2, a, 0);
        const WeightVector d{{rng.uniform() + 0.1, rng.uniform() + 0.1}};
        double oracle = 0;
        for (std::size_t p = 0; p < 2; ++p)
            for (Index i = 0; i < 7; ++i)
                for (Index r = 0; r < ds.dim(p); ++r) {
                    const double e = ds.view(p)(r, i) - u[p](r, a[i]);
                    oracle += d[p] * e * e;
                }
        CHECK(std::abs(objective(ds, q, u, d) - oracle) <= 1e-10 * oracle);
    }
}

TEST_CASE("separated blobs replicated over two views: exact recovery") {
    BlobSpec spec;
    spec.num_classes = 2;
    spec.n_per_class = {50};
    spec.dims = {4};
    spec.separation = 10.0;
    spec.seed = 3;
    const BlobData b = gen_blobs(spec);
    const MultiViewDataset ds({b.dataset.view(0), b.dataset.view(0)});
    const LabelInfo labels = stratified_label_sample(b.labels, 2, 0.1, 3);

    for (auto strategy : {WeightStrategy::LabelDriven, WeightStrategy::DataDriven, WeightStrategy::Equal}) {
        SolverConfig cfg;
        cfg.strategy = strategy;
        const SolveResult r = solve(ds, labels, cfg);
        CHECK(r.converged);
        CHECK(r.iterations_run <= 3);
        const auto mask = unlabeled_mask(100, labels.labeled_ids);
        CHECK(evaluate(r.assignments, b.labels, mask).acc == 1.0);
    }
}

TEST_CASE("one view: equal and label-driven weights give identical output") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Blobs b = two_view_blobs(seed, 3, 2.0);
        const MultiViewDataset one({b.ds.view(1)});
        SolverConfig eq;
        eq.strategy = WeightStrategy::Equal;
        SolverConfig lab;
        lab.strategy = WeightStrategy::LabelDriven;
        const auto a = solve(one, b.labels, eq);
        const auto c = solve(one, b.labels, lab);
        CHECK(a.assignments == c.assignments);
        CHECK(a.iterations_run == c.iterations_run);
        CHECK(solve_concatenated(one, b.labels, eq).assignments == a.assignments);
    }
}

TEST_CASE("solve is deterministic and preserves labels") {
    const Blobs b = two_view_blobs(11, 3, 2.0);
    for (auto strategy : {WeightStrategy::LabelDriven, WeightStrategy::DataDriven, WeightStrategy::Equal}) {
        SolverConfig cfg;
        cfg.strategy = strategy;
        cfg.keep_history = true;
        const auto r1 = solve(b.ds, b.labels, cfg);
        const auto r2 = solve(b.ds, b.labels, cfg);
        CHECK(r1.assignments == r2.assignments);
        CHECK(r1.weights_final.d == r2.weights_final.d);
        REQUIRE(r1.trace.records.size() == r2.trace.records.size());
        for (std::size_t t = 0; t < r1.trace.records.size(); ++t) {
            CHECK(r1.trace.records[t].objective == r2.trace.records[t].objective);
            for (std::size_t i : b.labels.labeled_ids)
                CHECK(r1.trace.records[t].assignments[i] == b.labels.ground_truth[i]);
        }
    }
}

TEST_CASE("permuting the views permutes the weights and keeps assignments") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Blobs b = two_view_blobs(seed, 3, 1.5);
        const MultiViewDataset swapped({b.ds.view(1), b.ds.view(0)});
        for (auto strategy : {WeightStrategy::LabelDriven, WeightStrategy::DataDriven}) {
            SolverConfig cfg;
            cfg.strategy = strategy;
            const auto r = solve(b.ds, b.labels, cfg);
            const auto s = solve(swapped, b.labels, cfg);
            CHECK(r.assignments == s.assignments);
            CHECK(r.weights_final[0] == s.weights_final[1]);
            CHECK(r.weights_final[1] == s.weights_final[0]);
        }
    }
}

TEST_CASE("after convergence one more iteration changes nothing") {
    const Blobs b = two_view_blobs(21, 3, 1.5);
    for (auto strategy : {WeightStrategy::LabelDriven, WeightStrategy::DataDriven, WeightStrategy::Equal}) {
        SolverConfig cfg;
        cfg.strategy = strategy;
        const auto r = solve(b.ds, b.labels, cfg);
        REQUIRE(r.converged);
        cfg.max_iter = r.iterations_run + 1;
        cfg.stop_on_q_fixed = false;
        const auto more = solve(b.ds, b.labels, cfg);
        CHECK(more.assignments == r.assignments);
        CHECK(more.trace.records.back().changed == 0);
    }
}

TEST_CASE("solve respects max_iter and rejects bad configs") {
    const Blobs b = two_view_blobs(2, 3, 1.0);
    SolverConfig cfg;
    cfg.max_iter = 1;
    const auto r = solve(b.ds, b.labels, cfg);
    CHECK(r.iterations_run == 1);
    CHECK(r.trace.records.size() == 1);
    CHECK(r.trace.records[0].changed == 100 + 50 - b.labels.num_labeled());

    cfg.max_iter = 0;
    CHECK_THROWS_AS(solve(b.ds, b.labels, cfg), ValidationError);
    cfg.max_iter = 5;
    cfg.strategy = WeightStrategy::DataDrivenGamma;
    CHECK_THROWS_AS(solve(b.ds, b.labels, cfg), ValidationError);
}

TEST_CASE("trace starts from uniform weights") {
    const Blobs b = two_view_blobs(4, 2);
    for (auto strategy : {WeightStrategy::LabelDriven, WeightStrategy::DataDriven, WeightStrategy::Equal}) {
        SolverConfig cfg;
        cfg.strategy = strategy;
        const auto r = solve(b.ds, b.labels, cfg);
        CHECK(r.trace.initial_weights == std::vector<double>{0.5, 0.5});
    }
    SolverConfig dack;
    dack.strategy = WeightStrategy::DataDriven;
    CHECK(solve(b.ds, b.labels, dack).trace.records.front().weights == std::vector<double>{0.5, 0.5});
}

}
