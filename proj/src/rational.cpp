#include "smoothlab/rational.hpp"

#include "smoothlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace smoothlab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw ValidationError("malformed number: '" + std::string(whole) + "'");
    std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (start == s.size()) throw ValidationError("malformed number: '" + std::string(whole) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw ValidationError("malformed number: '" + std::string(whole) + "'");
        }
    }
    std::string digits(s.front() == '+' ? s.substr(1) : s);
    return BigInt(digits, 10);
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        exponent = to_int64(parse_integer(s.substr(e + 1), whole));
        s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    bool seen_dot = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_dot) throw ValidationError("malformed number: '" + std::string(whole) + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_dot) --exponent;
        } else {
            throw ValidationError("malformed number: '" + std::string(whole) + "'");
        }
    }
    if (digits.empty()) throw ValidationError("malformed number: '" + std::string(whole) + "'");
    if (exponent > 4000 || exponent < -4000) throw ValidationError("exponent out of range: '" + std::string(whole) + "'");
    BigInt num(digits, 10);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational q = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto s = trim(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt p = parse_integer(trim(s.substr(0, slash)), text);
        BigInt q = parse_integer(trim(s.substr(slash + 1)), text);
        if (q == 0) throw ValidationError("zero denominator: '" + std::string(text) + "'");
        Rational r(p, q);
        r.canonicalize();
        return r;
    }
    return parse_decimal(s, text);
}

long double to_long_double(const BigInt& z) {
    std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    BigInt a = abs(z);
    long double v;
    if (bits <= 64) {
        // mpz_get_ui is limited to unsigned long, which is 64 bits on the supported platforms
        v = static_cast<long double>(mpz_get_ui(a.get_mpz_t()));
    } else {
        BigInt top = a >> static_cast<mp_bitcnt_t>(bits - 64);
        v = std::ldexp(static_cast<long double>(mpz_get_ui(top.get_mpz_t())), static_cast<int>(bits - 64));
    }
    return sgn(z) < 0 ? -v : v;
}

long double to_long_double(const Rational& q) {
    return to_long_double(q.get_num()) / to_long_double(q.get_den());
}

std::int64_t to_int64(const BigInt& z) {
    if (!mpz_fits_slong_p(z.get_mpz_t())) throw OverflowError("integer exceeds 64-bit range: " + z.get_str());
    return static_cast<std::int64_t>(mpz_get_si(z.get_mpz_t()));
}

std::string to_string(const Rational& q) { return q.get_str(); }

BigInt from_int128(__int128 x) {
    const bool neg = x < 0;
    const auto u = neg ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(x)
                       : static_cast<unsigned __int128>(x);
    BigInt r = BigInt(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64))) << 64;
    r += static_cast<unsigned long>(static_cast<std::uint64_t>(u));
    return neg ? BigInt(-r) : r;
}

__int128 to_int128(const BigInt& z) {
    if (mpz_sizeinbase(z.get_mpz_t(), 2) > 126) throw OverflowError("integer " + z.get_str() + " exceeds 126 bits");
    BigInt a = abs(z);
    const BigInt hi = a >> 64;
    const BigInt lo = a - (hi << 64);
    const auto u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
    const auto r = static_cast<__int128>(u);
    return sgn(z) < 0 ? -r : r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("64-bit addition overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit multiplication overflow");
    return r;
}

std::int64_t checked_pow(std::int64_t base, unsigned exp) {
    std::int64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

std::int64_t floor_power(std::int64_t n, double c) {
    if (n < 1) throw ValidationError("floor_power: base must be positive");
    if (c < 0) throw ValidationError("floor_power: exponent must be nonnegative");
    if (c == std::floor(c) && c < 128) return checked_pow(n, static_cast<unsigned>(c));
    long double v = std::pow(static_cast<long double>(n), static_cast<long double>(c));
    if (!(v < 9.2e18L)) throw OverflowError("n^C exceeds the 64-bit range");
    // snap values within rounding of an integer, e.g. 8^(1/3)
    const long double r = std::nearbyint(v);
    if (std::fabs(v - r) <= 1e-12L * std::max(1.0L, r)) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(v));
}

}  // namespace smoothlab
