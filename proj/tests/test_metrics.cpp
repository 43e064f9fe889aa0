#include "lack/error.hpp"
#include "lack/metrics.hpp"
#include "lack/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace lack;

namespace {

std::vector<ClassId> random_labels(Philox& rng, std::size_t n, int c) {
    std::vector<ClassId> v(n);
    for (auto& x : v) x = static_cast<ClassId>(rng.below(static_cast<std::uint64_t>(c)));
    return v;
}

PrfScore pair_loop(const std::vector<ClassId>& pred, const std::vector<ClassId>& truth) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        for (std::size_t j = i + 1; j < pred.size(); ++j) {
            const bool p = pred[i] == pred[j], t = truth[i] == truth[j];
            tp += p && t;
            fp += p && !t;
            fn += !p && t;
        }
    PrfScore s;
    s.precision = tp + fp > 0 ? tp / (tp + fp) : 1.0;
    s.recall = tp + fn > 0 ? tp / (tp + fn) : 1.0;
    s.f_score = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("accuracy") {
    const std::vector<ClassId> a{0, 0, 1, 1}, b{0, 1, 1, 0};
    CHECK(accuracy(a, a) == 1.0);
    CHECK(accuracy(a, b) == 0.5);
    CHECK_THROWS_AS(accuracy(a, std::vector<ClassId>{0}), ValidationError);

    Philox rng(3);
    const auto p = random_labels(rng, 200, 4), t = random_labels(rng, 200, 4);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < 200; ++i) hits += p[i] == t[i];
    CHECK(accuracy(p, t) == static_cast<double>(hits) / 200.0);
}

TEST_CASE("pairwise scores") {
    const std::vector<ClassId> t{0, 0, 1, 1};
    const auto same = pairwise_prf(t, t);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.f_score == 1.0);

    const auto lumped = pairwise_prf(std::vector<ClassId>{0, 0, 0, 0}, t);
    CHECK(lumped.precision == doctest::Approx(1.0 / 3.0));
    CHECK(lumped.recall == 1.0);
    CHECK(lumped.f_score == doctest::Approx(0.5));
}

TEST_CASE("pairwise scores equal the pair loop") {
    Philox rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        const int c = 1 + static_cast<int>(rng.below(4));
        const auto p = random_labels(rng, n, c), t = random_labels(rng, n, c);
        const auto got = pairwise_prf(p, t), want = pair_loop(p, t);
        CHECK(got.precision == want.precision);
        CHECK(got.recall == want.recall);
        CHECK(got.f_score == doctest::Approx(want.f_score).epsilon(1e-15));
    }
}

TEST_CASE("pairwise scores ignore cluster names") {
    Philox rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_labels(rng, 30, 3), t = random_labels(rng, 30, 3);
        std::vector<ClassId> renamed(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) renamed[i] = (p[i] + 1) % 3 + 10;
        const auto a = pairwise_prf(p, t), b = pairwise_prf(renamed, t);
        CHECK(a.precision == b.precision);
        CHECK(a.recall == b.recall);
    }
}

TEST_CASE("macro scores") {
    const std::vector<ClassId> t{0, 0, 1, 1};
    const auto s = macro_prf(std::vector<ClassId>{0, 0, 0, 1}, t);
    // class 0: P 2/3 R 1; class 1: P 1 R 1/2
    CHECK(s.precision == doctest::Approx((2.0 / 3.0 + 1.0) / 2));
    CHECK(s.recall == doctest::Approx(0.75));
    CHECK(f_measure(0, 0) == 0.0);
}

TEST_CASE("hungarian assignment is optimal on small matrices") {
    Philox rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        std::vector<std::vector<double>> cost(n, std::vector<double>(n));
        for (auto& row : cost)
            for (auto& v : row) v = std::floor(10 * rng.uniform());
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = 1e300;
        do {
            double s = 0;
            for (int i = 0; i < n; ++i) s += cost[i][perm[i]];
            best = std::min(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
        const auto a = hungarian_min_cost(cost);
        double got = 0;
        for (int i = 0; i < n; ++i) got += cost[i][a[i]];
        CHECK(got == best);
    }
}

TEST_CASE("alignment undoes a relabeling") {
    const std::vector<ClassId> t{0, 0, 1, 1, 2, 2, 2};
    const std::vector<ClassId> p{2, 2, 0, 0, 1, 1, 0};
    CHECK(accuracy(align_to_truth(p, t), t) == doctest::Approx(6.0 / 7.0));
}

TEST_CASE("evaluate honours the mask") {
    const std::vector<ClassId> t{0, 1, 0, 1}, p{1, 1, 0, 1};
    const auto mask = unlabeled_mask(4, std::vector<std::size_t>{0});
    const auto r = evaluate(p, t, mask);
    CHECK(r.n_eval == 3);
    CHECK(r.acc == 1.0);
    CHECK(evaluate(p, t).acc == 0.75);
}

}
