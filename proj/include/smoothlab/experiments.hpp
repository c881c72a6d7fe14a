#pragma once

#include "smoothlab/config.hpp"
#include "smoothlab/linalg.hpp"
#include "smoothlab/noise_models.hpp"
#include "smoothlab/rational.hpp"
#include "smoothlab/stats.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace smoothlab {

struct ExperimentRecord {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    std::int64_t n = 0;
    double sigma_max = 0.0;
    double sigma_min = 0.0;  // 0 for singular draws
    double kappa = 0.0;      // +inf for singular draws
    bool singular = false;
    // tail: 1/sigma_min >= n^B[0]; cond-tail and frozen: kappa >= n^B[0].
    bool tail_hit = false;
    double wall_seconds = 0.0;  // not written to CSV
};

/// One point of an exceedance curve: P(statistic >= threshold).
struct ExceedancePoint {
    double parameter = 0.0;  // x for tail curves, B for condition tails
    double threshold = 0.0;  // x, or n^B
    Proportion probability;
};

struct CurveRun {
    std::int64_t n = 0;
    std::vector<ExperimentRecord> records;
    std::vector<ExceedancePoint> points;
    // Least-squares slope of log P against log x over points with at least 10
    // hits and P <= 1/4 (tail curves only).
    std::optional<LineFit> fit;
    // Gaussian-noise run (cond-tail with baseline) or unmasked run (frozen),
    // drawn with the same per-trial seeds.
    std::vector<ExceedancePoint> baseline;
    // The 95% intervals of the run and its baseline overlap at every point.
    std::optional<bool> comparable;
};

struct CurveResult {
    std::string kind;
    ExperimentConfig config;
    std::vector<CurveRun> runs;
    double wall_seconds = 0.0;
};

/// Empirical P(|(M + N)^-1| >= x) on a log grid of x, for each n in the config.
/// Refuses fewer than 100 trials.
CurveResult tail_curve(const ExperimentConfig& cfg);

/// Empirical P(kappa(M + N) >= n^B) for each B in the config. Refuses fewer
/// than 100 trials. Throws ValidationError when max|M| > n^C.
CurveResult condition_tail(const ExperimentConfig& cfg);

/// condition_tail with the entries selected by cfg.mask left noise-free,
/// alongside the unmasked run at the same seeds. Throws ValidationError when
/// the mask freezes more than ceil(n^0.99) entries in some row.
CurveResult frozen_entries_experiment(const ExperimentConfig& cfg);

struct SingularityResult {
    Rational probability;
    // probability = singular_weight / total_weight, where each matrix carries
    // the product of its entries' integer counts over the law's common
    // denominator d, and total_weight = d^(n^2).
    BigInt singular_weight;
    BigInt total_weight;
    std::uint64_t matrices = 0;
};

inline constexpr std::uint64_t default_singularity_budget = std::uint64_t{1} << 34;

/// Exact P(det(N) = 0) for an n x n matrix of independent entries with an exact
/// law, by enumerating all |support|^(n^2) matrices. Requires n <= 5; throws
/// ResourceError when the count exceeds budget.
SingularityResult singularity_probability(std::size_t n, const DiscreteDistribution& dist, unsigned threads = 1,
                                          std::uint64_t budget = default_singularity_budget);

enum class Precision { single, double_precision };

Precision parse_precision(std::string_view s);

/// Half the gap between 1 and the next representable number: 2^-24 or 2^-53.
double machine_epsilon(Precision p);

/// Gaussian elimination with partial pivoting and back substitution, every
/// operation carried out in float (single) or double. nullopt on a zero pivot.
std::optional<std::vector<double>> solve_partial_pivoting(const RealMatrix& a, std::span<const double> b,
                                                          Precision p);

struct GeRecord {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    std::int64_t n = 0;
    double kappa = 0.0;
    bool singular = false;
    double relative_error = 0.0;  // |x~ - x| / |x|
    double ratio = 0.0;           // relative_error / (eps_machine kappa)
};

struct GeResult {
    ExperimentConfig config;
    Precision precision = Precision::single;
    double epsilon = 0.0;
    std::vector<GeRecord> records;
    std::int64_t singular_draws = 0;
    std::int64_t well_conditioned = 0;  // nonsingular draws with kappa <= cfg.well_conditioned
    std::int64_t within_100 = 0;        // of those, ratio <= 100
    Proportion fraction_within;
    // The rational reference satisfied (M + N) x = b exactly on every draw.
    bool reference_exact = true;
    double wall_seconds = 0.0;
};

/// Solves (M + N) x = b with b uniform on {-10..10}^n at the configured
/// precision and compares with the exact rational solution.
GeResult ge_error_experiment(const ExperimentConfig& cfg);

struct MinorRecord {
    std::int64_t trial = 0;
    std::int64_t k = 0;  // leading k x k block
    double kappa = 0.0;
    bool singular = false;
};

struct MinorsTrial {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    double max_kappa = 0.0;
    std::int64_t worst_minor = 0;
    bool all_good = false;  // max_kappa <= n^B[0]
};

struct MinorsResult {
    ExperimentConfig config;
    std::int64_t n = 0;
    double B = 0.0;
    std::vector<MinorRecord> minors;
    std::vector<MinorsTrial> trials;
    Proportion all_good;
    double wall_seconds = 0.0;
};

/// kappa of every leading principal minor of M + N, per trial, for the first n
/// in the config (n <= 300).
MinorsResult minors_experiment(const ExperimentConfig& cfg);

/// CSV output starts with a "# smoothlab <kind> v1" line and a column header.
/// Numbers use the shortest round-trip decimal form, so equal results give
/// identical bytes.
void write_records_csv(std::ostream& out, const CurveResult& r);
void write_curve_csv(std::ostream& out, const CurveResult& r);
void write_ge_csv(std::ostream& out, const GeResult& r);
void write_minors_csv(std::ostream& out, const MinorsResult& r);
void write_singularity_csv(std::ostream& out, std::size_t n, const DiscreteDistribution& dist,
                           const SingularityResult& r);

/// JSON summaries with the same fields, confidence intervals and pass flags.
std::string summary_json(const CurveResult& r);
std::string summary_json(const GeResult& r);
std::string summary_json(const MinorsResult& r);
std::string summary_json(std::size_t n, const DiscreteDistribution& dist, const SingularityResult& r);

}  // namespace smoothlab
