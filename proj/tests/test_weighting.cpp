#include "lack/error.hpp"
#include "lack/weighting.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace lack;

namespace {

Matrix one_hot(const std::vector<ClassId>& ids, int c) {
    Matrix m = Matrix::Zero(c, static_cast<Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) m(ids[i], static_cast<Index>(i)) = 1.0;
    return m;
}

}  // namespace

TEST_SUITE("weighting") {

TEST_CASE("per-view prediction is the nearest centroid with low-index ties") {
    Matrix u(1, 2);
    u << 0, 10;
    Matrix x(1, 3);
    x << 1, 5, 9;
    CHECK(predict_labeled_per_view(x, u) == std::vector<ClassId>{0, 0, 1});  // 5 is a tie
}

TEST_CASE("per-view prediction matches an exhaustive distance table") {
    Philox rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = test::random_matrix(4, 5, rng);
        const Matrix u = test::random_matrix(4, 3, rng);
        // oracle: explicit 5x3 table, scan for the minimum
        std::vector<ClassId> expect;
        for (Index i = 0; i < 5; ++i) {
            double table[3];
            for (Index k = 0; k < 3; ++k) {
                double s = 0;
                for (Index r = 0; r < 4; ++r) s += (x(r, i) - u(r, k)) * (x(r, i) - u(r, k));
                table[k] = s;
            }
            expect.push_back(static_cast<ClassId>(std::min_element(table, table + 3) - table));
        }
        CHECK(predict_labeled_per_view(x, u) == expect);
    }
}

TEST_CASE("weighted prediction uses the d-weighted sum over views") {
    // view distances for the single sample: view1 (1, 4), view2 (4, 1)
    Matrix x1(1, 1), x2(1, 1), u1(1, 2), u2(1, 2);
    x1 << 0;
    u1 << 1, 2;
    x2 << 0;
    u2 << 2, 1;
    const MultiViewDataset ds({x1, x2});
    const CentroidSet u{{u1, u2}};
    CHECK(predict_labeled_weighted(ds, u, {{0.8, 0.2}}, 1) == std::vector<ClassId>{0});
    CHECK(predict_labeled_weighted(ds, u, {{0.2, 0.8}}, 1) == std::vector<ClassId>{1});
}

TEST_CASE("label-driven weight counts agreements") {
    std::vector<ClassId> truth(10);
    std::iota(truth.begin(), truth.end(), 0);
    for (auto& t : truth) t %= 3;
    CHECK(label_driven_weight(truth, truth) == 10.0);

    std::vector<ClassId> wrong = truth;
    for (auto& w : wrong) w = (w + 1) % 3;
    CHECK(label_driven_weight(wrong, truth, 1e-9) == 1e-9);

    std::vector<ClassId> seven = truth;
    seven[0] = (seven[0] + 1) % 3;
    seven[4] = (seven[4] + 2) % 3;
    seven[9] = (seven[9] + 1) % 3;
    const double w = label_driven_weight(seven, truth);
    CHECK(w == 7.0);
    // oracle: Frobenius inner product of the one-hot matrices
    CHECK(one_hot(seven, 3).cwiseProduct(one_hot(truth, 3)).sum() == w);

    CHECK_THROWS_AS(label_driven_weight(std::vector<ClassId>{0}, truth), ValidationError);
}

TEST_CASE("label-driven weight is invariant to joint permutation") {
    Philox rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<ClassId> pred(25), truth(25);
        for (auto& p : pred) p = static_cast<ClassId>(rng.below(4));
        for (auto& t : truth) t = static_cast<ClassId>(rng.below(4));
        const double before = label_driven_weight(pred, truth);
        for (std::size_t i = pred.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(pred[i], pred[j]);
            std::swap(truth[i], truth[j]);
        }
        CHECK(label_driven_weight(pred, truth) == before);
    }
}

TEST_CASE("data-driven weight is 1/(2 residual norm) with an epsilon floor") {
    // one view, residual (0.3, 0.4) -> norm 0.5 -> weight 1
    Matrix x(1, 2), u(1, 1);
    x << 1.3, 0.6;
    u << 1.0;
    const IndicatorMatrix q(1, {0, 0}, 0);
    x(0, 1) = 1.4;
    CHECK(data_driven_weight(x, u, q) == doctest::Approx(1.0));

    Matrix exact(1, 2);
    exact << 1.0, 1.0;
    CHECK(data_driven_weight(exact, u, q, 1e-9) == doctest::Approx(1.0 / 2e-9));

    const IndicatorMatrix partial(1, {0, IndicatorMatrix::kUnset}, 1);
    CHECK_THROWS_AS(data_driven_weight(x, u, partial), ValidationError);
}

TEST_CASE("data-driven weight matches a dense Frobenius recomputation") {
    Philox rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = test::random_matrix(3, 4, rng);
        const Matrix u = test::random_matrix(3, 2, rng);
        std::vector<ClassId> a(4);
        for (auto& v : a) v = static_cast<ClassId>(rng.below(2));
        const IndicatorMatrix q(2, a, 0);
        const Matrix r = x - u * q.to_dense();
        double sum = 0;
        for (Index i = 0; i < r.size(); ++i) sum += r.data()[i] * r.data()[i];
        CHECK(data_driven_weight(x, u, q) == doctest::Approx(1.0 / (2.0 * std::sqrt(sum))).epsilon(1e-12));
    }
}

TEST_CASE("data-driven weight strictly decreases with the residual") {
    Matrix u(1, 1);
    u << 0.0;
    const IndicatorMatrix q(1, {0}, 0);
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {1e-6, 1e-3, 0.5, 1.0, 2.0, 100.0}) {
        Matrix x(1, 1);
        x << r;
        const double w = data_driven_weight(x, u, q);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("gamma weights follow the closed form") {
    const std::vector<double> equal{0.7, 0.7, 0.7};
    for (double w : data_driven_weight_gamma(equal, {3.0}).d) CHECK(w == doctest::Approx(1.0 / 3.0));

    const std::vector<double> e{1.0, 2.0};
    const auto w2 = data_driven_weight_gamma(e, {2.0});
    CHECK(w2[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(w2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(data_driven_weight_gamma(e, {1.0}), ValidationError);
    const std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(data_driven_weight_gamma(bad, {2.0}), ValidationError);
}

TEST_CASE("gamma sweep: min-error view dominates most as gamma approaches 1") {
    // Direct evaluation of (gamma e)^(1/(1-gamma)) normalised, for e = (1, 2):
    // the weight on view 0 is 1 / (1 + 2^(1/(1-gamma))).
    const std::vector<double> e{1.0, 2.0};
    double prev = 1.0;
    for (double gamma : {2.0, 5.0, 20.0}) {
        const double a = std::pow(gamma * 1.0, 1.0 / (1.0 - gamma));
        const double b = std::pow(gamma * 2.0, 1.0 / (1.0 - gamma));
        const double oracle = a / (a + b);
        const auto w = data_driven_weight_gamma(e, {gamma});
        CHECK(w[0] == doctest::Approx(oracle).epsilon(1e-13));
        CHECK(w[0] > w[1]);
        CHECK(w[0] < prev);  // larger gamma flattens towards 1/P
        prev = w[0];
    }
    CHECK(prev == doctest::Approx(0.50912).epsilon(1e-4));
    CHECK(data_driven_weight_gamma(e, {1.01})[0] > 0.999);
}

TEST_CASE("gamma weights sum to one and stay positive") {
    Philox rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> e(1 + rng.below(6));
        for (auto& v : e) v = std::exp(8.0 * rng.normal());
        const auto w = data_driven_weight_gamma(e, {1.0 + 10.0 * rng.uniform() + 1e-3});
        const double total = std::accumulate(w.d.begin(), w.d.end(), 0.0);
        CHECK(std::abs(total - 1.0) < 1e-12);
        for (double v : w.d) CHECK(v > 0.0);
    }
}

TEST_CASE("normalized weights sum to one") {
    const WeightVector w{{10, 30, 60}, WeightStrategy::LabelDriven};
    const auto n = w.normalized();
    CHECK(n[0] == doctest::Approx(0.1));
    CHECK(n[2] == doctest::Approx(0.6));
    const auto u = WeightVector::uniform(4, WeightStrategy::Equal);
    for (double v : u.d) CHECK(v == 0.25);
}

}
