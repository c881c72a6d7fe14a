#include "smoothlab/exact_linalg.hpp"

#include "smoothlab/errors.hpp"

#include <utility>

namespace smoothlab {

BigInt exact_determinant(const IntegerMatrix& m) {
    const std::size_t n = m.n();
    if (n == 0) return 1;
    std::vector<BigInt> a(n * n);
    for (std::size_t k = 0; k < n * n; ++k) a[k] = static_cast<long>(m.entries()[k]);
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r * n + k] == 0) ++r;
            if (r == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i * n + j] = (a[k * n + k] * a[i * n + j] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    BigInt det = a[n * n - 1];
    return sign < 0 ? BigInt(-det) : det;
}

std::optional<__int128> determinant_i128(std::span<const std::int64_t> entries, std::size_t n) {
    if (entries.size() != n * n) throw ValidationError("determinant_i128: expected n*n entries");
    if (n == 0) return 1;
    __int128 a[8][8];
    if (n > 8) throw ValidationError("determinant_i128 is limited to n <= 8");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = entries[i * n + j];
    }
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return __int128{0};
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k][j], a[r][j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 x, y, d;
                if (__builtin_mul_overflow(a[k][k], a[i][j], &x)) return std::nullopt;
                if (__builtin_mul_overflow(a[i][k], a[k][j], &y)) return std::nullopt;
                if (__builtin_sub_overflow(x, y, &d)) return std::nullopt;
                a[i][j] = d / prev;
            }
        }
        prev = a[k][k];
    }
    return sign < 0 ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

namespace {

// Row reduction of [m | rhs] with rhs_cols extra columns. Returns false when singular.
bool gauss_jordan(std::vector<Rational>& a, std::size_t n, std::size_t cols) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && sgn(a[piv * cols + k]) == 0) ++piv;
        if (piv == n) return false;
        if (piv != k) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[k * cols + j], a[piv * cols + j]);
        }
        const Rational inv = 1 / a[k * cols + k];
        for (std::size_t j = k; j < cols; ++j) a[k * cols + j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || sgn(a[i * cols + k]) == 0) continue;
            const Rational f = a[i * cols + k];
            for (std::size_t j = k; j < cols; ++j) a[i * cols + j] -= f * a[k * cols + j];
        }
    }
    return true;
}

constexpr std::uint64_t mersenne61 = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mersenne61);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

bool full_rank_mod_p(const IntegerMatrix& m) {
    const std::size_t n = m.n();
    std::vector<std::uint64_t> a(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
        const std::int64_t v = m.entries()[k] % static_cast<std::int64_t>(mersenne61);
        a[k] = static_cast<std::uint64_t>(v < 0 ? v + static_cast<std::int64_t>(mersenne61) : v);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv * n + k] == 0) ++piv;
        if (piv == n) return false;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
        }
        const std::uint64_t inv = powmod(a[k * n + k], mersenne61 - 2);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i * n + k] == 0) continue;
            const std::uint64_t f = mulmod(a[i * n + k], inv);
            for (std::size_t j = k; j < n; ++j) {
                const std::uint64_t sub = mulmod(f, a[k * n + j]);
                a[i * n + j] = a[i * n + j] >= sub ? a[i * n + j] - sub : a[i * n + j] + mersenne61 - sub;
            }
        }
    }
    return true;
}

}  // namespace

std::optional<std::vector<Rational>> exact_inverse(const IntegerMatrix& m) {
    const std::size_t n = m.n();
    const std::size_t cols = 2 * n;
    std::vector<Rational> a(n * cols);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * cols + j] = static_cast<long>(m(i, j));
        a[i * cols + n + i] = 1;
    }
    if (!gauss_jordan(a, n, cols)) return std::nullopt;
    std::vector<Rational> inv(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv[i * n + j] = a[i * cols + n + j];
    }
    return inv;
}

std::optional<std::vector<Rational>> exact_solve(const IntegerMatrix& m, std::span<const Rational> b) {
    const std::size_t n = m.n();
    if (b.size() != n) throw ValidationError("exact_solve: right-hand side has wrong length");
    const std::size_t cols = n + 1;
    std::vector<Rational> a(n * cols);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * cols + j] = static_cast<long>(m(i, j));
        a[i * cols + n] = b[i];
    }
    if (!gauss_jordan(a, n, cols)) return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i * cols + n];
    return x;
}

bool is_singular(const IntegerMatrix& m) {
    if (full_rank_mod_p(m)) return false;
    return exact_determinant(m) == 0;
}

RealMatrix to_real(std::span<const Rational> entries, std::size_t n) {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& q : entries) out.push_back(static_cast<double>(to_long_double(q)));
    return RealMatrix(n, std::move(out));
}

}  // namespace smoothlab
