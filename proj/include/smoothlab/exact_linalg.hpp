#pragma once

#include "smoothlab/linalg.hpp"
#include "smoothlab/rational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace smoothlab {

// Fraction-free (Bareiss) elimination over arbitrary-precision integers.
BigInt exact_determinant(const IntegerMatrix& m);

// Determinant of a small row-major integer matrix in 128-bit arithmetic;
// nullopt if an intermediate product would overflow.
std::optional<__int128> determinant_i128(std::span<const std::int64_t> entries, std::size_t n);

// Gauss-Jordan over the rationals. Row-major inverse, or nullopt when singular.
std::optional<std::vector<Rational>> exact_inverse(const IntegerMatrix& m);

// Solution of m x = b over the rationals, or nullopt when m is singular.
std::optional<std::vector<Rational>> exact_solve(const IntegerMatrix& m, std::span<const Rational> b);

// Exact singularity test. Rank modulo the prime 2^61 - 1 first: full rank mod p
// proves det != 0. Otherwise the Bareiss determinant decides.
bool is_singular(const IntegerMatrix& m);

RealMatrix to_real(std::span<const Rational> entries, std::size_t n);

}  // namespace smoothlab
