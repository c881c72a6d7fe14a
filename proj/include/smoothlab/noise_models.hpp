#pragma once

#include "smoothlab/random.hpp"
#include "smoothlab/rational.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smoothlab {

/// Finite law on the integers.
///
/// Atoms are stored sorted by value with zero-probability atoms dropped.
/// Laws built from finite data keep exact rational weights alongside the
/// long double ones; laws obtained by discretizing a continuous density only
/// carry the long double weights. Immutable once built.
class DiscreteDistribution {
public:
    // Probabilities must be nonnegative and sum to exactly 1.
    static DiscreteDistribution exact(std::string name, std::vector<std::pair<std::int64_t, Rational>> atoms);
    // Probabilities must be nonnegative and sum to 1 within 1e-12; they are renormalized.
    static DiscreteDistribution approximate(std::string name,
                                            std::vector<std::pair<std::int64_t, long double>> atoms);

    const std::string& name() const { return name_; }
    std::size_t size() const { return values_.size(); }
    std::span<const std::int64_t> values() const { return values_; }
    std::span<const long double> probabilities() const { return probs_; }
    // Empty for approximate laws.
    std::span<const Rational> exact_probabilities() const { return exact_; }
    bool is_exact() const { return !exact_.empty(); }

    std::int64_t max_abs_value() const;
    long double probability_of(std::int64_t value) const;
    // P(xi = m) = P(xi = -m) for all m; exact comparison for exact laws, 1e-18 otherwise.
    bool is_symmetric() const;

    bool operator==(const DiscreteDistribution& other) const;

private:
    DiscreteDistribution() = default;

    std::string name_;
    std::vector<std::int64_t> values_;
    std::vector<long double> probs_;
    std::vector<Rational> exact_;
};

/// Witness that |E e(xi t)| <= (1 - mu) + mu cos(2 pi k t) for all t, with 1 <= k <= d_bound.
struct BoundednessCertificate {
    double mu = 0.0;
    std::int64_t k = 1;
    std::int64_t d_bound = 1;
    std::int64_t verified_grid_points = 0;

    // Throws ValidationError unless 0 < mu <= 1/2 and 1 <= k <= d_bound.
    void validate() const;
};

struct CertificateCheck {
    bool holds = false;
    long double worst_slack = 0;  // min over the grid of bound(t) - |phi(t)|
    long double worst_t = 0;
    std::int64_t grid_points = 0;
    // Largest possible drop of the slack between grid points (see verify_certificate).
    long double lipschitz_margin = 0;
    // worst_slack >= lipschitz_margin: the bound then holds for every real t.
    bool rigorous = false;
};

/// |sum_m P(xi = m) e(m t)| with e(x) = exp(2 pi i x), for t in [0, 1).
long double char_magnitude(const DiscreteDistribution& dist, long double t);

/// Smallest grid accepted by verify_certificate: 4 * (k + max|support value|).
std::int64_t min_certificate_grid(const DiscreteDistribution& dist, const BoundednessCertificate& cert);

/// Checks the certificate at t = j / grid_size, j = 0..grid_size-1.
///
/// Both sides are trigonometric polynomials: |phi| has frequencies up to
/// max|m| and the bound has frequency k, so a grid of 4 * (k + max|m|) points
/// samples every oscillation at least four times. The check accepts a grid
/// point when bound - |phi| >= -1e-12. Between grid points the slack can drop
/// by at most pi * (E|xi| + mu k) / grid_size (half the spacing times the sum of
/// the two Lipschitz constants 2 pi E|xi| and 2 pi mu k); that quantity is
/// reported as lipschitz_margin.
CertificateCheck verify_certificate(const DiscreteDistribution& dist, const BoundednessCertificate& cert,
                                    std::int64_t grid_size);

/// Certificate (mu = eps/2, k = 2s) for a symmetric law with atom eps at s > 0.
/// Picks the positive atom of largest mass, the smallest such s on ties, and
/// verifies the result on a grid of at least 4096 points before returning it.
BoundednessCertificate certificate_from_symmetric(const DiscreteDistribution& dist);

struct ChainCheck {
    // |phi(t)| <= (1 - 2 eps) + |2 eps cos(2 pi s t)|
    long double first_slack = 0;
    // (1 - 2 eps) + |2 eps cos(2 pi s t)| <= (1 - eps/2) + (eps/2) cos(4 pi s t)
    long double second_slack = 0;
    std::int64_t s = 0;
    long double eps = 0;
    bool holds = false;
};

/// Pointwise check of the two inequalities behind certificate_from_symmetric.
ChainCheck check_symmetric_chain(const DiscreteDistribution& dist, std::int64_t grid_size);

DiscreteDistribution bernoulli();
// 0 with probability 1 - alpha, +-1 with probability alpha/2 each; alpha in (0, 1].
DiscreteDistribution lazy_coin(Rational alpha);
DiscreteDistribution point_mass(std::int64_t value);
// Uniform on {-r, ..., r}.
DiscreteDistribution uniform_symmetric(std::int64_t r);

/// P(xi = m) = P(m - 1/2 <= Xi <= m + 1/2) for a symmetric continuous Xi given by
/// its upper tail P(Xi > x). Atoms beyond ceil(radius) are folded into +-ceil(radius).
DiscreteDistribution symmetric_discretization(std::string name,
                                              const std::function<long double(long double)>& upper_tail,
                                              double radius);

/// Discretized standard Gaussian, truncated at truncation_radius >= 6 standard deviations.
DiscreteDistribution discretized_gaussian(double truncation_radius = 8.0);

/// Built-in law from a short spec: "bernoulli", "lazy:<alpha>", "dgauss[:<radius>]",
/// "point:<v>", "uniform:<r>", or "file:<path>".
DiscreteDistribution make_standard(std::string_view spec);

/// Plain-text law: one "value probability" pair per line, '#' starts a comment,
/// probabilities as decimals or p/q.
DiscreteDistribution parse_distribution(std::string_view text, std::string name = "file");
DiscreteDistribution load_distribution(const std::string& path);

/// Inverse-CDF sampler.
class Sampler {
public:
    explicit Sampler(const DiscreteDistribution& dist);
    std::int64_t draw(Rng& rng) const;

private:
    std::vector<std::int64_t> values_;
    std::vector<double> cdf_;
};

/// One independent draw per coordinate, deterministic in (laws, seed).
std::vector<std::int64_t> sample_vector(std::span<const DiscreteDistribution> dist_per_coord, std::uint64_t seed);

}  // namespace smoothlab
