#pragma once

#include "smoothlab/noise_models.hpp"
#include "smoothlab/stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace smoothlab {

/// Integer weights v with their sup-norm.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<std::int64_t> v);

    std::size_t size() const { return v_.size(); }
    std::span<const std::int64_t> values() const { return v_; }
    std::int64_t operator[](std::size_t i) const { return v_[i]; }
    std::int64_t bound() const { return bound_; }

private:
    std::vector<std::int64_t> v_;
    std::int64_t bound_ = 0;
};

/// A random row Z + X with independent coordinates, plus the Fourier-side data:
/// multipliers a_i (lcm over coordinates outside E bounded by n^K) and the
/// exclusion set E whose factors are dropped from the product.
struct ConcentrationQuery {
    std::vector<DiscreteDistribution> dists;
    std::vector<std::int64_t> shift;        // empty means Z = 0
    std::vector<std::int64_t> multipliers;  // empty means a_i = 1
    std::optional<double> lcm_exponent;     // K, when the lcm bound is declared
    std::vector<std::size_t> excluded;      // E

    std::size_t n() const { return dists.size(); }
    std::int64_t shift_at(std::size_t i) const { return shift.empty() ? 0 : shift[i]; }
    std::int64_t multiplier_at(std::size_t i) const { return multipliers.empty() ? 1 : multipliers[i]; }
    bool is_excluded(std::size_t i) const;

    // Throws ValidationError on shape mismatches, nonpositive multipliers,
    // lcm(a_i, i not in E) > n^K, or |E| > n^0.99.
    void validate() const;

    static ConcentrationQuery iid(const DiscreteDistribution& law, std::size_t n);
};

struct ConcentrationResult {
    long double sup = 0;
    std::int64_t argmax = 0;  // smallest a attaining the sup
    std::optional<Rational> exact_sup;  // set when every law is exact
};

inline constexpr std::uint64_t default_state_budget = 100'000'000;

/// sup over a of P((Z + X) . v = a) by convolving the laws of xi_i v_i.
///
/// The support of X . v lies in [-W, W], W = sum |v_i| max|supp xi_i|. Tables are
/// dense arrays while 2W + 1 <= 10^6 and sorted sparse lists beyond that.
/// Exact laws are convolved as integer counts over the product of their
/// common denominators, so the supremum comes back as an exact rational.
/// Throws ResourceError when 2W + 1 exceeds state_budget.
ConcentrationResult exact_concentration(const ConcentrationQuery& q, const WeightVector& v,
                                        std::uint64_t state_budget = default_state_budget);

inline constexpr std::uint64_t default_fourier_budget = 1'000'000'000;

/// int_0^1 prod_{i not in E} ((1 - mu) + mu cos(2 pi a_i v_i t)) dt.
///
/// The integrand is a trigonometric polynomial of degree D = sum |a_i v_i|, so
/// its mean over N = D + 1 equispaced points equals the constant Fourier
/// coefficient exactly (no frequency 1..D aliases onto 0 modulo N).
/// Throws ValidationError unless 0 < mu <= 1/2.
long double fourier_bound(std::span<const std::int64_t> multipliers, std::span<const std::int64_t> v, double mu,
                          std::span<const std::size_t> excluded = {},
                          std::uint64_t point_budget = default_fourier_budget);
long double fourier_bound(const ConcentrationQuery& q, const WeightVector& v, double mu);

struct FourierDominanceCheck {
    bool holds = false;
    long double exact = 0;
    long double bound = 0;
    long double gap = 0;  // bound - exact
    double mu = 0;
};

/// exact_concentration <= fourier_bound + 1e-12 with a_i = k_i and mu = min mu_i
/// taken from the certificates. certs[i] must be set for every i outside E and
/// must verify against dists[i].
FourierDominanceCheck check_fourier_dominance(const ConcentrationQuery& q, const WeightVector& v,
                           std::span<const std::optional<BoundednessCertificate>> certs);

struct NondegeneracyEstimate {
    Proportion probability;  // 99% Wilson interval
    double threshold = 0;    // 1 - mu/2
    bool violation = false;  // lower confidence bound above the threshold
};

/// Monte Carlo estimate of P(|(Z + X) . y| <= n^-2) for a unit vector y.
NondegeneracyEstimate check_nondegeneracy(std::span<const DiscreteDistribution> dists,
                                          std::span<const std::int64_t> shift, std::span<const double> y,
                                          double mu, std::int64_t trials, std::uint64_t seed);

enum class Richness { rich, poor };

struct RichnessResult {
    Richness richness = Richness::poor;
    long double sup = 0;  // sup over rows and a of P(X_i . w = a)
    std::size_t row = 0;
    std::int64_t argmax = 0;
    double threshold = 0;  // n^(-A - offset)
};

/// rich iff sup over rows of exact_concentration >= n^(-A - offset); rows with
/// identical queries are evaluated once.
RichnessResult classify_rich(std::span<const ConcentrationQuery> rows, const WeightVector& w, double a_exponent,
                             double offset = 4.0, std::uint64_t state_budget = default_state_budget);

}  // namespace smoothlab
