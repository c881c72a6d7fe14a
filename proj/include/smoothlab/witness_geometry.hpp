#pragma once

#include "smoothlab/linalg.hpp"
#include "smoothlab/lo_concentration.hpp"
#include "smoothlab/stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace smoothlab {

enum class WitnessClass { poor, rich_singular, rich_nonsingular, unclassified };

const char* to_string(WitnessClass c);

struct WitnessVector {
    std::vector<std::int64_t> w;
    double norm = 0.0;
    int b_exponent = 0;
    WitnessClass cls = WitnessClass::unclassified;
};

/// w = round(n^(B+2) v) entrywise, n = v.size().
///
/// Each coordinate moves by at most 1/2, so |w - n^(B+2) v| <= sqrt(n)/2 and
/// |M w| <= n^(B+2) |M v| + |M|_op sqrt(n)/2. For 0.99 <= |v| <= 1.01 and B >= 1
/// the norm lands in [0.9, 1.1] n^(B+2).
/// Throws ValidationError for |v| outside [0.99, 1.01] or B < 1, and
/// OverflowError when n^(B+2) does not fit in 62 bits.
WitnessVector round_witness(std::span<const double> v, int B);

/// 6 (C + K + 2) + 1, the smallest integer exceeding 6 (C + K + 2).
int default_b_exponent(double C, double K);

/// Smallest integer c >= 0 with c^den >= n^num, i.e. ceil(n^(num/den)).
std::int64_t ceil_power(std::int64_t n, std::int64_t num, std::int64_t den);

struct WitnessThresholds {
    double offset = 4.0;          // rich iff concentration >= n^(-A - offset)
    std::int64_t large_num = -1;  // |w_i| >= ceil(n^(large_num/large_den)); -1 means B/2
    std::int64_t large_den = 2;
    std::int64_t count_num = 1;   // singular iff #large < ceil(n^(count_num/count_den))
    std::int64_t count_den = 5;
};

struct WitnessClassification {
    WitnessClass cls = WitnessClass::unclassified;
    RichnessResult richness;
    std::int64_t large_count = 0;
    std::int64_t large_threshold = 0;
    std::int64_t count_threshold = 0;
};

/// poor if classify_rich reports poor; otherwise rich_singular when fewer than
/// ceil(n^0.2) coordinates satisfy |w_i| >= ceil(n^(B/2)), rich_nonsingular if not.
/// For integer w_i and counts the ceilings give the same answer as the real
/// thresholds.
WitnessClassification classify_witness(const WitnessVector& w, std::span<const ConcentrationQuery> rows, double A,
                                       const WitnessThresholds& t = {},
                                       std::uint64_t state_budget = default_state_budget);

struct EpsilonNet {
    std::size_t dimension = 0;
    double epsilon = 0.0;
    std::vector<std::vector<double>> points;
    std::uint64_t proposals = 0;
    std::uint64_t patience = 0;
    // Fraction of fresh random unit vectors within epsilon of the net.
    Proportion coverage;

    // (1 + 2/epsilon)^dimension, the packing bound on the size.
    double size_bound() const;
};

/// Greedy packing on the unit sphere in R^l: uniform random proposals (normalized
/// Gaussian vectors) are accepted when farther than epsilon from every accepted
/// point, until `patience` consecutive proposals are rejected. A maximal packing
/// covers the sphere at radius epsilon; since maximality is only tested by
/// sampling, coverage is estimated on coverage_samples fresh vectors.
/// Requires l >= 1 and 0 < epsilon <= 2 (the diameter of the sphere).
EpsilonNet greedy_net(std::size_t l, double epsilon, std::uint64_t seed, std::uint64_t patience = 200'000,
                      std::uint64_t coverage_samples = 10'000);

/// Uniform random unit vector in R^l.
std::vector<double> random_unit_vector(std::size_t l, Rng& rng);

/// Distance from x to the nearest net point.
double distance_to_net(const EpsilonNet& net, std::span<const double> x);

/// Net points followed by n - l zeros.
std::vector<std::vector<double>> embed_zero_padded(const EpsilonNet& net, std::size_t n);

struct SmallImageEstimate {
    Proportion probability;  // P(|M y| <= n^-2), 95% Wilson interval
    double standard_error = 0.0;
    double bound = 0.0;  // (1 - mu/2)^n
    // estimate > bound + 3 standard errors
    bool exceeds_bound = false;
};

/// Monte Carlo estimate of P(|M y| <= n^-2) over samples of M, trial t drawn
/// with derive_seed(seed, stream_id("small-image"), t).
SmallImageEstimate small_image_event(const PerturbedMatrixSampler& sampler, std::span<const double> y,
                                     std::int64_t trials, std::uint64_t seed, double mu, unsigned threads = 1);

}  // namespace smoothlab
