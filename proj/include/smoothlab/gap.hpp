#pragma once

#include "smoothlab/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smoothlab {

/// Symmetric generalized arithmetic progression {sum x_i g_i : |x_i| <= N_i}.
///
/// Volume is prod (2 N_i + 1), the number of coefficient tuples; the element
/// set can be smaller when the generators are dependent. The rank-0 progression
/// is {0}.
class Gap {
public:
    Gap() = default;
    Gap(std::vector<Rational> generators, std::vector<std::int64_t> dims);

    static Gap zero() { return Gap(); }

    std::size_t rank() const { return generators_.size(); }
    std::span<const Rational> generators() const { return generators_; }
    std::span<const std::int64_t> dims() const { return dims_; }
    BigInt volume() const;
    // sum |g_i| N_i, the largest element.
    Rational max_element() const;

    bool operator==(const Gap& other) const { return generators_ == other.generators_ && dims_ == other.dims_; }

private:
    std::vector<Rational> generators_;
    std::vector<std::int64_t> dims_;
};

inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

/// Sorted element set with duplicates collapsed. Throws ResourceError when the
/// volume exceeds cap.
std::vector<Rational> enumerate(const Gap& p, std::uint64_t cap = default_enumeration_cap);

/// k . P: generators scaled by k.
Gap dilate(const Gap& p, const Rational& k);

/// P + Q: generator lists concatenated.
Gap sumset(const Gap& p, const Gap& q);

/// k-fold sumset P + ... + P, which for a symmetric progression is the
/// progression with dims multiplied by k.
Gap iterated_sumset(const Gap& p, std::int64_t k);

/// Exact membership. Rank <= 2 solves the linear Diophantine equation for the
/// coefficients; higher rank enumerates (volume capped).
bool member(const Gap& p, const Rational& x, std::uint64_t cap = default_enumeration_cap);

/// x in {y / a : y in P, 1 <= |a| <= a_bound}.
bool member_dilated_quotient(const Gap& p, const Rational& x, std::int64_t a_bound,
                             std::uint64_t cap = default_enumeration_cap);

/// Text form: "rank d" then d lines "generator dim"; '#' starts a comment.
Gap parse_gap(std::string_view text);
std::string format_gap(const Gap& p);

struct DiscretizationResult {
    Gap small;
    Gap sparse;
    Rational R;
    std::int64_t S = 1;
    std::int64_t R0 = 1;
    // Smallest exponent with R <= (S V)^dprime R0, V the volume of P.
    int dprime = 0;
    // Coefficient modulus used by the splitter; 0 for the trivial split.
    std::int64_t q = 0;
};

struct DiscretizationCheck {
    bool scale = false;       // 1 <= R <= (S V)^dprime R0
    bool smallness = false;   // rank <= d, volume <= V, P_small in [-R/S, R/S]
    bool sparseness = false;  // rank <= d, volume <= V, distinct elements of S P_sparse at least R S apart
    bool covering = false;    // P subset of P_small + P_sparse

    bool all() const { return scale && smallness && sparseness && covering; }
    // Names of the clauses that fail, comma separated.
    std::string failing() const;
};

/// Splits the coefficients of P = {x g : |x| <= N} as x = q m + r with |r| <= q/2:
/// P_small = {r g : |r| <= min(q/2, N)}, P_sparse = {m q g : |m| <= J}.
///
/// S P_sparse is read as the S-fold sumset, whose elements are spaced q g apart,
/// so R must satisfy S g h <= R <= q g / S. R is taken as the point of that
/// window closest to R0, and q is the smallest modulus with a nonempty window.
/// When N g S <= R0 the split P_small = P, P_sparse = {0}, R = R0 is returned.
/// Every result passes verify_discretization; throws ConstructionError otherwise.
DiscretizationResult discretize_rank1(const Gap& p, std::int64_t R0, std::int64_t S,
                                      std::uint64_t cap = default_enumeration_cap);

/// Checks the four clauses exactly, enumerating P, P_small + P_sparse and S P_sparse.
DiscretizationCheck verify_discretization(const Gap& p, const DiscretizationResult& r,
                                          std::uint64_t cap = default_enumeration_cap);

/// Text form: "R = ...", "S = ...", "R0 = ...", "dprime = ...", optional "q = ...",
/// then a "[small]" and a "[sparse]" section each holding a progression.
DiscretizationResult parse_discretization(std::string_view text);
std::string format_discretization(const DiscretizationResult& r);

struct InverseSearchParams {
    double mu = 0.5;
    double A = 2.0;
    int rank_cap = 2;
    std::int64_t volume_cap = 1000;
    std::int64_t except_cap = 0;
    // Largest s tried for generators v_i / s; 0 means volume_cap.
    std::int64_t multiplier_cap = 0;
    // Largest s tried by the rank-2 search, which costs about volume_cap steps per entry.
    std::int64_t rank2_multiplier_cap = 16;
    // Upper limit on the estimated number of elementary steps.
    std::uint64_t search_budget = 200'000'000;
};

enum class InverseStatus { not_triggered, found, none_found };

struct InverseSearchResult {
    InverseStatus status = InverseStatus::not_triggered;
    long double concentration = 0;  // fourier_bound(v, mu)
    long double threshold = 0;      // n^-A
    Gap gap;
    std::vector<std::size_t> excluded;
    std::int64_t s = 0;  // s u is an entry of v for every generator u
    // One line per high-concentration instance with no covering progression.
    std::vector<std::string> counterexample_log;
};

/// Small-n search for a progression of rank <= rank_cap and volume <= volume_cap
/// containing all but except_cap entries of v, with generators of the form
/// v_i / s. Runs only when fourier_bound(v, mu) >= n^-A. Requires n <= 16.
/// Rank 1 is tried first; among candidates of one rank the fewest exclusions
/// win, then the smallest volume, then the smallest s, then the first
/// generator in index order.
InverseSearchResult inverse_lo_search(std::span<const std::int64_t> v, const InverseSearchParams& params);

}  // namespace smoothlab
