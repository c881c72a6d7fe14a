#include <doctest.h>

#include "oracles.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/noise_models.hpp"

#include <cmath>
#include <map>
#include <vector>

using namespace smoothlab;

TEST_CASE("char_magnitude examples") {
    const auto b = bernoulli();
    CHECK(char_magnitude(b, 0.0L) == doctest::Approx(1.0));
    CHECK(std::fabs(static_cast<double>(char_magnitude(b, 0.25L))) < 1e-15);
    const auto z = point_mass(0);
    for (long double t : {0.0L, 0.1L, 0.5L, 0.9L}) CHECK(char_magnitude(z, t) == doctest::Approx(1.0));
}

TEST_CASE("char_magnitude is even for symmetric laws") {
    for (const auto& d : {bernoulli(), lazy_coin(Rational(1, 3)), uniform_symmetric(3), discretized_gaussian()}) {
        for (int j = 1; j < 50; ++j) {
            const long double t = j / 50.0L;
            CHECK(std::fabs(static_cast<double>(char_magnitude(d, t) - char_magnitude(d, 1 - t))) < 1e-15);
        }
    }
}

TEST_CASE("verify_certificate examples") {
    const auto b = bernoulli();
    const BoundednessCertificate bc{0.25, 2, 2, 0};
    const auto r = verify_certificate(b, bc, 4096);
    CHECK(r.holds);
    CHECK(r.worst_slack >= -1e-15L);
    CHECK(r.grid_points == 4096);

    const auto z = point_mass(0);
    const auto rz = verify_certificate(z, BoundednessCertificate{0.1, 1, 1, 0}, 4096);
    CHECK_FALSE(rz.holds);
    CHECK(rz.worst_t == doctest::Approx(0.5));

    const auto lazy = lazy_coin(Rational(1, 2));
    CHECK(verify_certificate(lazy, BoundednessCertificate{0.125, 2, 2, 0}, 4096).holds);
}

TEST_CASE("verify_certificate rejects bad certificates and coarse grids") {
    const auto b = bernoulli();
    CHECK_THROWS_AS(verify_certificate(b, BoundednessCertificate{0.6, 2, 2, 0}, 4096), ValidationError);
    CHECK_THROWS_AS(verify_certificate(b, BoundednessCertificate{0.0, 2, 2, 0}, 4096), ValidationError);
    CHECK_THROWS_AS(verify_certificate(b, BoundednessCertificate{0.25, 3, 2, 0}, 4096), ValidationError);
    CHECK_THROWS_AS(verify_certificate(b, BoundednessCertificate{0.25, 2, 2, 0}, 4), ValidationError);
    CHECK(min_certificate_grid(b, BoundednessCertificate{0.25, 2, 2, 0}) == 12);
}

TEST_CASE("certificate_from_symmetric examples") {
    const auto cb = certificate_from_symmetric(bernoulli());
    CHECK(cb.mu == doctest::Approx(0.25));
    CHECK(cb.k == 2);
    CHECK(cb.verified_grid_points >= 4096);
    for (auto [num, den] : {std::pair{1, 10}, std::pair{1, 2}, std::pair{1, 1}}) {
        const auto c = certificate_from_symmetric(lazy_coin(Rational(num, den)));
        CHECK(c.mu == doctest::Approx(static_cast<double>(num) / den / 4));
        CHECK(c.k == 2);
    }
    const auto cg = certificate_from_symmetric(discretized_gaussian());
    const double eps = static_cast<double>(oracle::normal_cell(1));
    CHECK(cg.k == 2);
    CHECK(cg.mu == doctest::Approx(eps / 2).epsilon(1e-12));
    CHECK(cg.mu == doctest::Approx(0.1209).epsilon(1e-3));
}

TEST_CASE("certificate_from_symmetric ties pick the smallest atom") {
    const auto u = uniform_symmetric(3);
    const auto c = certificate_from_symmetric(u);
    CHECK(c.k == 2);
    CHECK(c.mu == doctest::Approx(1.0 / 14));
}

TEST_CASE("certificate_from_symmetric preconditions") {
    const auto asym = DiscreteDistribution::exact("asym", {{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    CHECK_THROWS_AS(certificate_from_symmetric(asym), ValidationError);
    CHECK_THROWS(certificate_from_symmetric(point_mass(0)));
}

TEST_CASE("every built-in law verifies its certificate on 4096 points") {
    for (const auto& d : {bernoulli(), lazy_coin(Rational(1, 10)), lazy_coin(Rational(1, 2)), lazy_coin(Rational(1)),
                          uniform_symmetric(1), uniform_symmetric(4), discretized_gaussian(),
                          discretized_gaussian(10.0)}) {
        const auto c = certificate_from_symmetric(d);
        const auto r = verify_certificate(d, c, 4096);
        CHECK(r.holds);
        CHECK(r.worst_slack >= -1e-15L);
    }
}

TEST_CASE("two-step chain holds pointwise") {
    for (const auto& d : {bernoulli(), lazy_coin(Rational(1, 10)), lazy_coin(Rational(1, 2)), lazy_coin(Rational(1)),
                          discretized_gaussian(), uniform_symmetric(2)}) {
        const auto c = check_symmetric_chain(d, 4096);
        CHECK(c.holds);
        CHECK(c.first_slack >= -1e-15L);
        CHECK(c.second_slack >= -1e-15L);
        CHECK(c.s == 1);
    }
}

TEST_CASE("make_standard examples") {
    const auto b = make_standard("bernoulli");
    REQUIRE(b.size() == 2);
    CHECK(b.values()[0] == -1);
    CHECK(b.values()[1] == 1);
    CHECK(b.exact_probabilities()[0] == Rational(1, 2));
    CHECK(make_standard("lazy:1") == bernoulli());
    const auto l = make_standard("lazy:0.25");
    CHECK(l.probability_of(0) == doctest::Approx(0.75));
    CHECK_THROWS_AS(make_standard("lazy:0"), ValidationError);
    CHECK_THROWS_AS(make_standard("lazy:1.5"), ValidationError);
    CHECK_THROWS_AS(make_standard("dgauss:3"), ValidationError);
    CHECK_THROWS_AS(make_standard("nonsense"), ValidationError);
}

TEST_CASE("discretized Gaussian matches normal-cell quadrature") {
    const auto g = discretized_gaussian(8.0);
    CHECK_FALSE(g.is_exact());
    CHECK(g.is_symmetric());
    CHECK(static_cast<double>(g.probability_of(0)) == doctest::Approx(0.3829).epsilon(1e-3));
    for (std::int64_t m = 0; m <= 5; ++m) {
        CHECK(std::fabs(static_cast<double>(g.probability_of(m) - oracle::normal_cell(m))) < 1e-15);
    }
    long double total = 0;
    for (auto p : g.probabilities()) total += p;
    CHECK(std::fabs(static_cast<double>(total - 1)) < 1e-15);
    CHECK(g.max_abs_value() == 8);
}

TEST_CASE("distribution constructors validate") {
    CHECK_THROWS_AS(DiscreteDistribution::exact("x", {{0, Rational(1, 2)}}), ValidationError);
    CHECK_THROWS_AS(DiscreteDistribution::exact("x", {{0, Rational(3, 2)}, {1, Rational(-1, 2)}}), ValidationError);
    CHECK_THROWS_AS(DiscreteDistribution::approximate("x", {{0, 0.5L}, {1, 0.4L}}), ValidationError);
    CHECK_NOTHROW(DiscreteDistribution::approximate("x", {{0, 0.5L}, {1, 0.5L + 1e-14L}}));
}

TEST_CASE("distribution text format") {
    const auto d = parse_distribution("# fair die shifted\n-1 1/4\n0 0.5 # middle\n1 1/4\n");
    CHECK(d.is_exact());
    CHECK(d.is_symmetric());
    CHECK(d.exact_probabilities()[1] == Rational(1, 2));
    CHECK_THROWS_AS(parse_distribution("0 1/2\n"), ValidationError);
    CHECK_THROWS_AS(parse_distribution("0 1/2 extra\n1 1/2\n"), ValidationError);
    CHECK_THROWS_AS(parse_distribution("0.5 1\n"), ValidationError);
}

TEST_CASE("sample_vector is deterministic") {
    std::vector<DiscreteDistribution> zeros(5, point_mass(0));
    CHECK(sample_vector(zeros, 99) == std::vector<std::int64_t>(5, 0));
    std::vector<DiscreteDistribution> b(50, bernoulli());
    CHECK(sample_vector(b, 7) == sample_vector(b, 7));
    CHECK(sample_vector(b, 7) != sample_vector(b, 8));
}

TEST_CASE("Bernoulli coordinate means stay within 4/sqrt(trials)") {
    const std::size_t n = 10000;
    const int trials = 200;
    std::vector<DiscreteDistribution> b(n, bernoulli());
    std::vector<double> sum(n, 0.0);
    for (int s = 0; s < trials; ++s) {
        const auto x = sample_vector(b, static_cast<std::uint64_t>(s) + 1000);
        for (std::size_t i = 0; i < n; ++i) sum[i] += static_cast<double>(x[i]);
    }
    // The sd of each mean is 1/sqrt(trials); 4 sd bounds a coordinate with probability 1 - 6e-5.
    int outside = 0;
    for (double s : sum) outside += std::fabs(s / trials) > 4 / std::sqrt(trials) ? 1 : 0;
    CHECK(outside <= 5);
}

TEST_CASE("sampler histogram matches the pmf within 5 standard errors") {
    for (const auto& d : {uniform_symmetric(3), lazy_coin(Rational(1, 5)), discretized_gaussian()}) {
        const Sampler s(d);
        Rng rng(2024);
        const int draws = 200000;
        std::map<std::int64_t, int> hist;
        for (int i = 0; i < draws; ++i) ++hist[s.draw(rng)];
        for (std::size_t a = 0; a < d.size(); ++a) {
            const double p = static_cast<double>(d.probabilities()[a]);
            const double se = std::sqrt(p * (1 - p) / draws);
            const double freq = static_cast<double>(hist[d.values()[a]]) / draws;
            CHECK(std::fabs(freq - p) <= 5 * se + 1e-12);
        }
    }
}
