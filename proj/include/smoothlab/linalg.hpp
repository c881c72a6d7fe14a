#pragma once

#include "smoothlab/noise_models.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smoothlab {

/// Square matrix of 64-bit integers with a recorded bound on |entry|.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    // Row-major entries; throws ValidationError if some |entry| > entry_bound.
    IntegerMatrix(std::size_t n, std::vector<std::int64_t> entries, std::int64_t entry_bound);
    // Bound taken as the largest |entry|.
    IntegerMatrix(std::size_t n, std::vector<std::int64_t> entries);

    static IntegerMatrix zero(std::size_t n);

    std::size_t n() const { return n_; }
    std::int64_t entry_bound() const { return bound_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const std::int64_t> entries() const { return entries_; }
    std::span<const std::int64_t> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
    std::int64_t max_abs() const;

    // Leading k x k block.
    IntegerMatrix leading_minor(std::size_t k) const;

    bool operator==(const IntegerMatrix& other) const { return n_ == other.n_ && entries_ == other.entries_; }

private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> entries_;
    std::int64_t bound_ = 0;
};

/// Square matrix of finite doubles, row-major.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t n, std::vector<double> entries);
    explicit RealMatrix(const IntegerMatrix& m);

    std::size_t n() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> entries() const { return entries_; }

    double frobenius_norm() const;
    RealMatrix scaled(double c) const;
    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

struct SingularSpectrum {
    std::vector<double> sigma;  // nonincreasing
    // max over column pairs of |a_p . a_q| / (|a_p| |a_q|) after the last sweep
    double convergence_residual = 0.0;
    int sweeps = 0;

    double largest() const { return sigma.empty() ? 0.0 : sigma.front(); }
    double smallest() const { return sigma.empty() ? 0.0 : sigma.back(); }
};

/// Full singular spectrum by one-sided (Hestenes) Jacobi rotations.
///
/// Columns p < q are rotated in cyclic row order whenever
/// |a_p . a_q| > sqrt(n) * eps * |a_p| |a_q|; iteration stops after a sweep with
/// no rotation. The relative orthogonality test is what keeps small singular
/// values accurate to high relative precision, and it implies the absolute
/// test |a_p . a_q| < 1e-13 * |A|_F^2. Throws ConvergenceError after max_sweeps.
SingularSpectrum svd(const RealMatrix& m, int max_sweeps = 100);

/// sigma_1 by power iteration on A^T A from a fixed start vector.
double operator_norm(const RealMatrix& m);

struct ConditionNumber {
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    double kappa = 0.0;  // +inf when singular
    bool singular = false;

    bool finite() const { return !singular; }
};

/// kappa = sigma_1 / sigma_n; singular (kappa = +inf) when sigma_n < 1e-300 sigma_1.
/// Throws UndefinedConditionError for the zero matrix.
ConditionNumber condition_number(const RealMatrix& m);
ConditionNumber condition_number(const SingularSpectrum& s);

/// n x n boolean mask; true marks a frozen entry that receives no noise.
class FrozenMask {
public:
    FrozenMask() = default;
    explicit FrozenMask(std::size_t n) : n_(n), frozen_(n * n, 0) {}

    static FrozenMask none(std::size_t n) { return FrozenMask(n); }
    static FrozenMask all(std::size_t n);
    // Freezes every zero entry of m.
    static FrozenMask zeros_of(const IntegerMatrix& m);
    static FrozenMask row(std::size_t n, std::size_t i);

    std::size_t n() const { return n_; }
    bool frozen(std::size_t i, std::size_t j) const { return frozen_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool value = true) { frozen_[i * n_ + j] = value ? 1 : 0; }
    std::size_t frozen_in_row(std::size_t i) const;
    std::size_t max_frozen_per_row() const;

private:
    std::size_t n_ = 0;
    std::vector<unsigned char> frozen_;
};

/// ceil(n^0.99): largest number of frozen entries a row may carry.
std::size_t frozen_row_cap(std::size_t n);

/// Throws ValidationError if some row freezes more than frozen_row_cap(n) entries.
void validate_frozen_mask(const FrozenMask& mask);

/// Mask from a short spec: "none", "all", "zeros" (zero entries of base), "row:<i>", "diag".
FrozenMask make_mask(std::string_view spec, const IntegerMatrix& base);

/// M + N entrywise except at frozen positions. The new entry bound is
/// bound(M) + bound(N). Throws OverflowError when a sum leaves the 64-bit range.
IntegerMatrix perturb(const IntegerMatrix& m, const IntegerMatrix& noise, const FrozenMask* mask = nullptr);

/// Deterministic ill-conditioned or singular test matrices.
///
/// Spec strings: "zero", "identity[:c]" (c I), "graded:<C>" (diag(2^i) capped at
/// floor(n^C)), "ones" (rank one), "dupcol" (last column repeats the first),
/// "band:<w>:<d>:<o>" (circulant band of half-width w, diagonal d, off-diagonal o),
/// "file:<path>".
IntegerMatrix worst_case_generator(std::string_view spec, std::size_t n);
IntegerMatrix graded_diagonal(std::size_t n, double c);

/// Matrix file: first line n, then n rows of n integers. Throws ValidationError
/// if an entry exceeds entry_bound.
IntegerMatrix parse_matrix(std::string_view text,
                           std::int64_t entry_bound = std::numeric_limits<std::int64_t>::max());
IntegerMatrix load_matrix(const std::string& path,
                          std::int64_t entry_bound = std::numeric_limits<std::int64_t>::max());
std::string format_matrix(const IntegerMatrix& m);

/// Seeded sampler of M + N_n with per-entry laws.
class PerturbedMatrixSampler {
public:
    // One law for every entry.
    PerturbedMatrixSampler(IntegerMatrix base, const DiscreteDistribution& law,
                           std::optional<FrozenMask> mask = std::nullopt);
    // Row-major per-entry laws, n*n of them.
    PerturbedMatrixSampler(IntegerMatrix base, std::vector<DiscreteDistribution> laws,
                           std::optional<FrozenMask> mask = std::nullopt);

    std::size_t n() const { return base_.n(); }
    const IntegerMatrix& base() const { return base_; }
    const DiscreteDistribution& law(std::size_t i, std::size_t j) const;

    // Noise is drawn for every entry, frozen or not, so masked and unmasked
    // samplers with the same seed see the same noise on free entries.
    IntegerMatrix sample(std::uint64_t seed) const;

private:
    IntegerMatrix base_;
    std::vector<DiscreteDistribution> laws_;
    std::vector<Sampler> samplers_;
    std::int64_t noise_bound_ = 0;
    std::optional<FrozenMask> mask_;
};

}  // namespace smoothlab
