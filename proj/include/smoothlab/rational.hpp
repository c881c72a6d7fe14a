#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace smoothlab {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts integers, decimals ("0.125", "-3.5e-2") and fractions ("3/8").
// Decimals are converted exactly, so "0.1" becomes 1/10.
Rational parse_rational(std::string_view text);

long double to_long_double(const BigInt& z);
long double to_long_double(const Rational& q);

// Exact value when it fits; throws OverflowError otherwise.
std::int64_t to_int64(const BigInt& z);

std::string to_string(const Rational& q);

BigInt from_int128(__int128 x);
// Exact value when it fits; throws OverflowError otherwise.
__int128 to_int128(const BigInt& z);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// base^exp as an exact 64-bit integer; throws OverflowError when it does not fit.
std::int64_t checked_pow(std::int64_t base, unsigned exp);

// floor(n^c) for real c >= 0; throws OverflowError beyond the int64 range.
std::int64_t floor_power(std::int64_t n, double c);

}  // namespace smoothlab
