#include <doctest.h>

#include "smoothlab/errors.hpp"
#include "smoothlab/witness_geometry.hpp"

#include <cmath>
#include <vector>

using namespace smoothlab;

namespace {

double norm(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

WitnessVector witness(std::vector<std::int64_t> w, int b) {
    WitnessVector out;
    double s = 0;
    for (auto x : w) s += static_cast<double>(x) * static_cast<double>(x);
    out.w = std::move(w);
    out.norm = std::sqrt(s);
    out.b_exponent = b;
    return out;
}

}  // namespace

TEST_CASE("round_witness examples") {
    const std::vector<double> e1{1.0, 0.0};
    auto w = round_witness(e1, 1);
    CHECK(w.w == std::vector<std::int64_t>{8, 0});
    CHECK(w.norm == doctest::Approx(8.0));
    const double h = 1 / std::sqrt(2.0);
    w = round_witness(std::vector<double>{h, h}, 1);
    CHECK(w.w == std::vector<std::int64_t>{6, 6});
    CHECK(w.norm == doctest::Approx(8.485).epsilon(1e-3));
    CHECK(w.norm >= 7.2);
    CHECK(w.norm <= 8.8);
}

TEST_CASE("round_witness preconditions") {
    CHECK_THROWS_AS(round_witness(std::vector<double>{0.5, 0.0}, 1), ValidationError);
    CHECK_THROWS_AS(round_witness(std::vector<double>{1.0, 0.0}, 0), ValidationError);
    std::vector<double> big(100, 0.0);
    big[0] = 1.0;
    CHECK_THROWS_AS(round_witness(big, 8), OverflowError);
}

TEST_CASE("rounded witnesses land in the norm window and obey the image bound") {
    Rng rng(99);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng.below(9);
        const int B = 1 + static_cast<int>(rng.below(3));
        auto v = random_unit_vector(n, rng);
        const double s = 0.99 + 0.02 * rng.uniform01();
        for (auto& x : v) x *= s;
        const auto w = round_witness(v, B);
        const double scale = std::pow(static_cast<double>(n), B + 2);
        CHECK(w.norm >= 0.9 * scale);
        CHECK(w.norm <= 1.1 * scale);
        std::vector<double> diff(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = static_cast<double>(w.w[i]) - scale * v[i];
        CHECK(norm(diff) <= std::sqrt(static_cast<double>(n)) / 2 + 1e-9);

        std::vector<std::int64_t> me(n * n);
        for (auto& x : me) x = static_cast<std::int64_t>(rng.below(11)) - 5;
        const RealMatrix m(IntegerMatrix(n, me));
        std::vector<double> wd(w.w.begin(), w.w.end());
        const double lhs = norm(m.apply(wd));
        const double rhs = scale * norm(m.apply(v)) + operator_norm(m) * std::sqrt(static_cast<double>(n)) / 2;
        CHECK(lhs <= rhs * (1 + 1e-12) + 1e-9);
    }
}

TEST_CASE("default B exponent and ceiling powers") {
    CHECK(default_b_exponent(1, 0) == 19);
    CHECK(default_b_exponent(1.5, 0.5) == 25);
    CHECK(default_b_exponent(0.1, 0) == 13);
    CHECK(ceil_power(10, 1, 5) == 2);
    CHECK(ceil_power(32, 1, 5) == 2);
    CHECK(ceil_power(33, 1, 5) == 3);
    CHECK(ceil_power(10, 4, 2) == 100);
    CHECK(ceil_power(10, 5, 2) == 317);
}

TEST_CASE("classify_witness examples") {
    const std::size_t n = 10;
    std::vector<ConcentrationQuery> rows(n, ConcentrationQuery::iid(bernoulli(), n));
    std::vector<std::int64_t> w(n, 0);
    w[0] = 950000;
    auto c = classify_witness(witness(w, 4), rows, 1.0);
    CHECK(c.cls == WitnessClass::rich_singular);
    CHECK(c.large_count == 1);
    CHECK(c.large_threshold == 100);
    CHECK(c.count_threshold == 2);

    std::vector<std::int64_t> w2(n, 0);
    for (int i = 0; i < 3; ++i) w2[i] = 100;
    c = classify_witness(witness(w2, 4), rows, 1.0);
    CHECK(c.cls == WitnessClass::rich_nonsingular);
    CHECK(c.large_count == 3);

    std::vector<std::int64_t> pow20(20);
    for (int i = 0; i < 20; ++i) pow20[i] = std::int64_t{1} << i;
    std::vector<ConcentrationQuery> rows20(20, ConcentrationQuery::iid(bernoulli(), 20));
    c = classify_witness(witness(pow20, 4), rows20, 0.5);
    CHECK(c.cls == WitnessClass::poor);
    CHECK(c.richness.sup == doctest::Approx(std::ldexp(1.0, -20)));
}

TEST_CASE("classify_witness partition is exhaustive and exclusive") {
    Rng rng(6);
    const std::size_t n = 8;
    std::vector<ConcentrationQuery> rows(n, ConcentrationQuery::iid(lazy_coin(Rational(1, 2)), n));
    for (int t = 0; t < 100; ++t) {
        std::vector<std::int64_t> w(n);
        for (auto& x : w) x = static_cast<std::int64_t>(rng.below(41)) - 20;
        const auto c = classify_witness(witness(w, 2), rows, 1.0);
        const int hits = (c.cls == WitnessClass::poor) + (c.cls == WitnessClass::rich_singular) +
                         (c.cls == WitnessClass::rich_nonsingular);
        CHECK(hits == 1);
        if (c.richness.richness == Richness::poor) {
            CHECK(c.cls == WitnessClass::poor);
        } else {
            CHECK((c.cls == WitnessClass::rich_singular) == (c.large_count < c.count_threshold));
        }
    }
}

TEST_CASE("greedy_net examples") {
    const auto one = greedy_net(1, 0.5, 1);
    CHECK(one.points.size() == 2);
    const auto two = greedy_net(2, 2.0, 1);
    CHECK(two.points.size() == 1);
    CHECK_THROWS_AS(greedy_net(0, 0.5, 1), ValidationError);
    CHECK_THROWS_AS(greedy_net(3, 0.0, 1), ValidationError);
    CHECK_THROWS_AS(greedy_net(3, 2.5, 1), ValidationError);
}

TEST_CASE("net points are unit, separated and within the packing bound") {
    for (auto [l, eps] : {std::pair<std::size_t, double>{2, 0.3}, {3, 0.7}, {4, 1.0}}) {
        const auto net = greedy_net(l, eps, 17, 20000, 2000);
        CHECK(static_cast<double>(net.points.size()) <= net.size_bound());
        for (std::size_t i = 0; i < net.points.size(); ++i) {
            CHECK(norm(net.points[i]) == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t j = i + 1; j < net.points.size(); ++j) {
                double d2 = 0;
                for (std::size_t k = 0; k < l; ++k) d2 += (net.points[i][k] - net.points[j][k]) * (net.points[i][k] - net.points[j][k]);
                CHECK(d2 > eps * eps);
            }
        }
        CHECK(net.coverage.trials == 2000);
    }
}

TEST_CASE("greedy_net is deterministic in its seed") {
    const auto a = greedy_net(3, 0.8, 5, 5000, 100), b = greedy_net(3, 0.8, 5, 5000, 100);
    CHECK(a.points == b.points);
}

TEST_CASE("embed_zero_padded") {
    const auto net = greedy_net(3, 0.9, 2, 5000, 100);
    const auto same = embed_zero_padded(net, 3);
    CHECK(same == net.points);
    const auto wide = embed_zero_padded(net, 7);
    for (std::size_t i = 0; i < wide.size(); ++i) {
        CHECK(wide[i].size() == 7);
        CHECK(norm(wide[i]) == doctest::Approx(norm(net.points[i])));
        for (std::size_t k = 3; k < 7; ++k) CHECK(wide[i][k] == 0.0);
    }
    const auto line = greedy_net(1, 0.5, 1);
    for (const auto& p : embed_zero_padded(line, 3)) CHECK(std::fabs(p[0]) == 1.0);
    CHECK_THROWS_AS(embed_zero_padded(net, 2), ValidationError);
}

TEST_CASE("small_image_event examples") {
    const std::size_t n = 10;
    PerturbedMatrixSampler s(IntegerMatrix::zero(n), bernoulli());
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    auto r = small_image_event(s, e1, 100000, 1, 0.25, 4);
    CHECK(r.probability.hits == 0);
    CHECK(r.bound == doctest::Approx(std::pow(7.0 / 8, 10)));
    CHECK_FALSE(r.exceeds_bound);

    const std::size_t m = 12;
    PerturbedMatrixSampler s12(IntegerMatrix::zero(m), bernoulli());
    std::vector<double> flat(m, 1 / std::sqrt(static_cast<double>(m)));
    r = small_image_event(s12, flat, 20000, 2, 0.25, 4);
    CHECK(r.probability.estimate <= r.bound + 3 * r.standard_error);
    CHECK_FALSE(r.exceeds_bound);

    CHECK_THROWS_AS(small_image_event(s, e1, 0, 1, 0.25), ValidationError);
    std::vector<double> bad(n, 0.0);
    bad[0] = 0.5;
    CHECK_THROWS_AS(small_image_event(s, bad, 10, 1, 0.25), ValidationError);
}

TEST_CASE("small_image_event does not depend on the thread count") {
    const std::size_t n = 6;
    PerturbedMatrixSampler s(IntegerMatrix::zero(n), lazy_coin(Rational(1, 10)));
    std::vector<double> e1(n, 0.0);
    e1[2] = 1.0;
    const auto a = small_image_event(s, e1, 5000, 9, 0.025, 1);
    const auto b = small_image_event(s, e1, 5000, 9, 0.025, 8);
    CHECK(a.probability.hits == b.probability.hits);
    CHECK(a.probability.hits > 0);
}
