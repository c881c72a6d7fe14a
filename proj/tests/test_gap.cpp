#include <doctest.h>

#include "oracles.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/gap.hpp"
#include "smoothlab/lo_concentration.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace smoothlab;

namespace {

std::vector<Rational> as_vector(const std::set<Rational>& s) { return {s.begin(), s.end()}; }

std::set<Rational> oracle_elements(const Gap& p) {
    return oracle::progression_elements({p.generators().begin(), p.generators().end()},
                                        {p.dims().begin(), p.dims().end()});
}

std::vector<Rational> ints(std::initializer_list<long> xs) {
    std::vector<Rational> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("enumerate examples") {
    CHECK(enumerate(Gap({3}, {2})) == ints({-6, -3, 0, 3, 6}));
    CHECK(enumerate(Gap({1, 10}, {1, 1})) == ints({-11, -10, -9, -1, 0, 1, 9, 10, 11}));
    CHECK(enumerate(Gap({1}, {0})) == ints({0}));
    CHECK(enumerate(Gap::zero()) == ints({0}));
    CHECK(Gap({1, 10}, {1, 1}).volume() == 9);
    CHECK_THROWS_AS(enumerate(Gap({1, 1000}, {5000, 5000})), ResourceError);
}

TEST_CASE("enumerate handles dependent and rational generators") {
    const Gap p({Rational(1, 2), Rational(3, 4), Rational(1)}, {2, 1, 3});
    const auto e = enumerate(p);
    CHECK(e == as_vector(oracle_elements(p)));
    CHECK(BigInt(static_cast<unsigned long>(e.size())) <= p.volume());
    CHECK(p.max_element() == Rational(1) + Rational(3, 4) + Rational(3));
}

TEST_CASE("dilate and sumset") {
    const Gap one({1}, {1});
    CHECK(enumerate(dilate(one, 2)) == ints({-2, 0, 2}));
    CHECK(enumerate(sumset(one, one)) == ints({-2, -1, 0, 1, 2}));
    const Gap p({2, 5}, {3, 1});
    CHECK(enumerate(dilate(p, 1)) == enumerate(p));
    CHECK(enumerate(sumset(p, Gap::zero())) == enumerate(p));
    CHECK(enumerate(iterated_sumset(p, 3)) == enumerate(sumset(sumset(p, p), p)));
}

TEST_CASE("dilate and sumset element identities") {
    Rng rng(12);
    for (int t = 0; t < 30; ++t) {
        const Gap p({Rational(static_cast<long>(rng.below(9)) - 4, static_cast<long>(1 + rng.below(3)))},
                    {static_cast<std::int64_t>(rng.below(5))});
        const Gap q({Rational(static_cast<long>(rng.below(11)) - 5), Rational(static_cast<long>(rng.below(7)))},
                    {static_cast<std::int64_t>(rng.below(3)), static_cast<std::int64_t>(rng.below(3))});
        Rational k(static_cast<long>(rng.below(7)) - 3, static_cast<long>(1 + rng.below(4)));
        k.canonicalize();
        std::set<Rational> scaled;
        for (const auto& x : oracle_elements(p)) scaled.insert(k * x);
        CHECK(enumerate(dilate(p, k)) == as_vector(scaled));
        std::set<Rational> sums;
        for (const auto& x : oracle_elements(p)) {
            for (const auto& y : oracle_elements(q)) sums.insert(x + y);
        }
        const auto s = sumset(p, q);
        CHECK(enumerate(s) == as_vector(sums));
        CHECK(s.volume() == p.volume() * q.volume());
    }
}

TEST_CASE("member examples") {
    const Gap p({3}, {2});
    CHECK(member(p, 6));
    CHECK_FALSE(member(p, 5));
    CHECK_FALSE(member(p, 9));
    CHECK(member_dilated_quotient(p, Rational(3, 2), 2));
    CHECK_FALSE(member_dilated_quotient(p, Rational(3, 4), 2));
    CHECK(member(Gap({Rational(7, 3), 11}, {4, 9}), 0));
    CHECK(member(Gap::zero(), 0));
    CHECK_FALSE(member(Gap::zero(), 1));
}

TEST_CASE("member agrees with enumeration") {
    Rng rng(19);
    for (int t = 0; t < 40; ++t) {
        const std::size_t rank = 1 + rng.below(3);
        std::vector<Rational> g;
        std::vector<std::int64_t> n;
        for (std::size_t i = 0; i < rank; ++i) {
            g.emplace_back(static_cast<long>(rng.below(13)) - 6, static_cast<long>(1 + rng.below(3)));
            n.push_back(static_cast<std::int64_t>(rng.below(4)));
        }
        const Gap p(g, n);
        const auto elems = oracle_elements(p);
        for (long num = -30; num <= 30; ++num) {
            for (long den : {1L, 2L, 3L}) {
                const Rational x(num, den);
                CHECK(member(p, x) == (elems.count(x) > 0));
            }
        }
    }
}

TEST_CASE("gap text format") {
    const Gap p({Rational(3, 2), -4}, {2, 7});
    CHECK(parse_gap(format_gap(p)) == Gap({Rational(3, 2), -4}, {2, 7}));
    const auto q = parse_gap("# comment\nrank 1\n5 20\n");
    CHECK(q == Gap({5}, {20}));
    CHECK_THROWS_AS(parse_gap("rank 2\n1 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_gap("rank 1\n1 -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_gap("1 1\n"), ValidationError);
}

TEST_CASE("discretize_rank1 examples") {
    const Gap p({1}, {100});
    const auto r = discretize_rank1(p, 10, 2);
    CHECK(verify_discretization(p, r).all());

    const Gap small({3}, {3});
    const auto t = discretize_rank1(small, 40, 2);
    CHECK(t.small == small);
    CHECK(t.sparse.rank() == 0);
    CHECK(t.R == 40);

    const Gap g5({5}, {20});
    const auto u = discretize_rank1(g5, 25, 5);
    const auto check = verify_discretization(g5, u);
    CHECK(check.all());
    std::set<Rational> cover;
    for (const auto& a : enumerate(u.small)) {
        for (const auto& b : enumerate(u.sparse)) cover.insert(a + b);
    }
    for (const auto& x : oracle_elements(g5)) CHECK(cover.count(x) == 1);
}

TEST_CASE("discretize_rank1 preconditions") {
    CHECK_THROWS_AS(discretize_rank1(Gap({Rational(1, 2)}, {3}), 10, 2), ValidationError);
    CHECK_THROWS_AS(discretize_rank1(Gap({1, 2}, {3, 3}), 10, 2), ValidationError);
    CHECK_THROWS_AS(discretize_rank1(Gap({1}, {3}), 0, 2), ValidationError);
    CHECK_THROWS_AS(discretize_rank1(Gap({1}, {3}), 10, 0), ValidationError);
}

TEST_CASE("every constructed discretization verifies") {
    Rng rng(2718);
    for (int t = 0; t < 300; ++t) {
        const Gap p({static_cast<long>(1 + rng.below(50))}, {static_cast<std::int64_t>(rng.below(501))});
        const auto R0 = static_cast<std::int64_t>(1 + rng.below(100));
        const auto S = static_cast<std::int64_t>(1 + rng.below(10));
        const auto r = discretize_rank1(p, R0, S);
        const auto c = verify_discretization(p, r);
        CHECK_MESSAGE(c.all(), "failing: " << c.failing());
    }
}

TEST_CASE("verify_discretization detects broken results") {
    const Gap p({1}, {100});
    DiscretizationResult zero{Gap::zero(), Gap::zero(), 10, 2, 10, 0, 0};
    const auto c = verify_discretization(p, zero);
    CHECK_FALSE(c.covering);
    CHECK(c.failing().find("covering") != std::string::npos);

    // Trivial split: R/100 no longer bounds P_small.
    const auto trivial = discretize_rank1(p, 200, 2);
    REQUIRE(trivial.q == 0);
    auto shrunk = trivial;
    shrunk.R /= 100;
    const auto cs = verify_discretization(p, shrunk);
    CHECK((!cs.smallness || !cs.sparseness));

    // A split with P_small = {0}: 100 R exceeds the spacing of S P_sparse.
    const Gap g({7}, {40});
    const auto split = discretize_rank1(g, 100, 3);
    REQUIRE(split.q == 1);
    auto grown = split;
    grown.R *= 100;
    const auto cg = verify_discretization(g, grown);
    CHECK((!cg.smallness || !cg.sparseness || !cg.scale));
}

TEST_CASE("covering is monotone in the dims of P_small") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        const Gap p({static_cast<long>(1 + rng.below(20))}, {static_cast<std::int64_t>(rng.below(60))});
        auto r = discretize_rank1(p, static_cast<std::int64_t>(1 + rng.below(50)), static_cast<std::int64_t>(1 + rng.below(5)));
        if (r.small.rank() == 0) continue;
        const auto before = verify_discretization(p, r).covering;
        r.small = Gap({r.small.generators()[0]}, {r.small.dims()[0] + 3});
        if (before) CHECK(verify_discretization(p, r).covering);
    }
}

TEST_CASE("discretization text format") {
    const Gap p({5}, {20});
    const auto r = discretize_rank1(p, 25, 5);
    const auto back = parse_discretization(format_discretization(r));
    CHECK(back.small == r.small);
    CHECK(back.sparse == r.sparse);
    CHECK(back.R == r.R);
    CHECK(back.S == r.S);
    CHECK(back.R0 == r.R0);
    CHECK(back.dprime == r.dprime);
    CHECK(back.q == r.q);
    CHECK_THROWS_AS(parse_discretization("R = 1\n"), ValidationError);
}

TEST_CASE("inverse_lo_search examples") {
    InverseSearchParams params;
    for (std::int64_t c : {1, 4, 9}) {
        const std::vector<std::int64_t> v(10, c);
        const auto r = inverse_lo_search(v, params);
        REQUIRE(r.status == InverseStatus::found);
        CHECK(r.gap == Gap({c}, {1}));
        CHECK(r.excluded.empty());
    }
    std::vector<std::int64_t> ap(16);
    for (int i = 0; i < 16; ++i) ap[i] = i + 1;
    auto r = inverse_lo_search(ap, params);
    REQUIRE(r.status == InverseStatus::found);
    CHECK(r.gap == Gap({1}, {16}));
    CHECK(r.excluded.empty());
    CHECK(r.counterexample_log.empty());

    std::vector<std::int64_t> spread(12);
    for (int i = 0; i < 12; ++i) spread[i] = std::int64_t{1} << (2 * i);
    r = inverse_lo_search(spread, params);
    CHECK(r.status == InverseStatus::not_triggered);
    CHECK(r.concentration < r.threshold);
}

TEST_CASE("inverse_lo_search results contain v") {
    Rng rng(8);
    InverseSearchParams params;
    params.except_cap = 1;
    int found = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 6 + rng.below(7);
        const long g1 = static_cast<long>(1 + rng.below(5)), g2 = static_cast<long>(7 + rng.below(20));
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = g1 * (static_cast<long>(rng.below(5)) - 2) + g2 * (static_cast<long>(rng.below(3)) - 1);
        v[0] = 1000003;  // an outlier the search may exclude
        const auto r = inverse_lo_search(v, params);
        if (r.status != InverseStatus::found) continue;
        ++found;
        CHECK(r.excluded.size() <= 1);
        CHECK(r.gap.rank() <= 2);
        CHECK(r.gap.volume() <= 1000);
        for (std::size_t i = 0; i < n; ++i) {
            const bool excluded = std::find(r.excluded.begin(), r.excluded.end(), i) != r.excluded.end();
            if (!excluded) CHECK(member(r.gap, v[i]));
        }
    }
    CHECK(found >= 5);
}

TEST_CASE("inverse_lo_search logs high-concentration failures") {
    InverseSearchParams params;
    params.volume_cap = 3;
    params.rank_cap = 1;
    params.A = 3;
    const std::vector<std::int64_t> v{1, 2, 3, 4, 5, 6, 7, 8};
    const auto r = inverse_lo_search(v, params);
    CHECK(r.status == InverseStatus::none_found);
    CHECK(r.counterexample_log.size() == 1);
}

TEST_CASE("inverse_lo_search preconditions") {
    InverseSearchParams params;
    CHECK_THROWS_AS(inverse_lo_search(std::vector<std::int64_t>(17, 1), params), ValidationError);
    params.rank_cap = 3;
    CHECK_THROWS_AS(inverse_lo_search(std::vector<std::int64_t>(4, 1), params), ValidationError);
}
