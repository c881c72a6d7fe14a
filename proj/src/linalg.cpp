#include "smoothlab/linalg.hpp"

#include "smoothlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace smoothlab {

IntegerMatrix::IntegerMatrix(std::size_t n, std::vector<std::int64_t> entries, std::int64_t entry_bound)
    : n_(n), entries_(std::move(entries)), bound_(entry_bound) {
    if (entries_.size() != n * n) throw ValidationError("IntegerMatrix: expected n*n entries");
    if (bound_ < 0) throw ValidationError("IntegerMatrix: negative entry bound");
    for (auto e : entries_) {
        if (e == INT64_MIN || (e < 0 ? -e : e) > bound_) {
            throw ValidationError("IntegerMatrix: entry " + std::to_string(e) + " exceeds bound " + std::to_string(bound_));
        }
    }
}

IntegerMatrix::IntegerMatrix(std::size_t n, std::vector<std::int64_t> entries) {
    std::int64_t bound = 0;
    for (auto e : entries) {
        if (e == INT64_MIN) throw OverflowError("IntegerMatrix: entry -2^63 is not representable with a bound");
        bound = std::max(bound, e < 0 ? -e : e);
    }
    *this = IntegerMatrix(n, std::move(entries), bound);
}

IntegerMatrix IntegerMatrix::zero(std::size_t n) { return IntegerMatrix(n, std::vector<std::int64_t>(n * n, 0), 0); }

std::int64_t IntegerMatrix::max_abs() const {
    std::int64_t m = 0;
    for (auto e : entries_) m = std::max(m, e < 0 ? -e : e);
    return m;
}

IntegerMatrix IntegerMatrix::leading_minor(std::size_t k) const {
    if (k > n_) throw ValidationError("leading_minor: k exceeds n");
    std::vector<std::int64_t> out;
    out.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) out.push_back((*this)(i, j));
    }
    return IntegerMatrix(k, std::move(out), bound_);
}

RealMatrix::RealMatrix(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != n * n) throw ValidationError("RealMatrix: expected n*n entries");
    for (double e : entries_) {
        if (!std::isfinite(e)) throw ValidationError("RealMatrix: non-finite entry");
    }
}

RealMatrix::RealMatrix(const IntegerMatrix& m) : n_(m.n()), entries_(m.entries().begin(), m.entries().end()) {}

double RealMatrix::frobenius_norm() const {
    double scale = 0, ssq = 1;
    for (double e : entries_) {
        if (e == 0) continue;
        const double a = std::fabs(e);
        if (scale < a) {
            ssq = 1 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

RealMatrix RealMatrix::scaled(double c) const {
    std::vector<double> out(entries_);
    for (double& e : out) e *= c;
    return RealMatrix(n_, std::move(out));
}

std::vector<double> RealMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n_; ++j) s += entries_[i * n_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> RealMatrix::apply_transpose(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double xi = x[i];
        for (std::size_t j = 0; j < n_; ++j) y[j] += entries_[i * n_ + j] * xi;
    }
    return y;
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

SingularSpectrum svd(const RealMatrix& m, int max_sweeps) {
    const std::size_t n = m.n();
    // column-major working copy
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[j * n + i] = m(i, j);
    }
    const double tol = std::sqrt(static_cast<double>(n)) * std::numeric_limits<double>::epsilon();
    // columns below the rounding floor of the whole matrix count as zero
    const double floor_norm = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    const double zero2 = floor_norm * floor_norm * dot(a.data(), a.data(), n * n);
    SingularSpectrum out;
    double residual = 0;
    bool converged = n <= 1;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        residual = 0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            double* ap = &a[p * n];
            for (std::size_t q = p + 1; q < n; ++q) {
                double* aq = &a[q * n];
                const double alpha = dot(ap, ap, n);
                const double beta = dot(aq, aq, n);
                if (alpha <= zero2 || beta <= zero2) continue;
                const double gamma = dot(ap, aq, n);
                const double scale = std::sqrt(alpha) * std::sqrt(beta);
                const double off = std::fabs(gamma) / scale;
                residual = std::max(residual, off);
                if (off <= tol) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = ap[i];
                    const double y = aq[i];
                    ap[i] = c * x - s * y;
                    aq[i] = s * x + c * y;
                }
            }
        }
        out.sweeps = sweep + 1;
        converged = !rotated;
    }
    if (!converged) {
        throw ConvergenceError("Jacobi SVD did not converge in " + std::to_string(max_sweeps) +
                                   " sweeps (residual " + std::to_string(residual) + ")",
                               residual);
    }
    out.convergence_residual = residual;
    out.sigma.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.sigma[j] = std::sqrt(dot(&a[j * n], &a[j * n], n));
    std::sort(out.sigma.begin(), out.sigma.end(), std::greater<>());
    return out;
}

double operator_norm(const RealMatrix& m) {
    const std::size_t n = m.n();
    if (n == 0 || m.frobenius_norm() == 0) return 0.0;
    auto normalize = [](std::vector<double>& v) {
        double s = 0;
        for (double e : v) s += e * e;
        s = std::sqrt(s);
        for (double& e : v) e /= s;
        return s;
    };
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
    normalize(x);
    double sigma = 0;
    int stable = 0;
    const int max_iter = 200000;
    for (int it = 0; it < max_iter; ++it) {
        auto y = m.apply(x);
        double ny = 0;
        for (double e : y) ny += e * e;
        ny = std::sqrt(ny);
        auto z = m.apply_transpose(y);
        if (normalize(z) == 0) {
            // start vector in the null space: restart from the heaviest column direction
            std::size_t best = 0;
            double best_norm = -1;
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0;
                for (std::size_t i = 0; i < n; ++i) s += m(i, j) * m(i, j);
                if (s > best_norm) {
                    best_norm = s;
                    best = j;
                }
            }
            std::fill(x.begin(), x.end(), 0.0);
            x[best] = 1.0;
            continue;
        }
        if (std::fabs(ny - sigma) <= 1e-16 * ny) {
            if (++stable >= 3) return ny;
        } else {
            stable = 0;
        }
        sigma = ny;
        x = std::move(z);
    }
    return sigma;
}

ConditionNumber condition_number(const SingularSpectrum& s) {
    ConditionNumber c;
    c.sigma_max = s.largest();
    c.sigma_min = s.smallest();
    if (c.sigma_max == 0) throw UndefinedConditionError("condition number of the zero matrix is undefined");
    c.singular = c.sigma_min < 1e-300 * c.sigma_max;
    c.kappa = c.singular ? std::numeric_limits<double>::infinity() : c.sigma_max / c.sigma_min;
    return c;
}

ConditionNumber condition_number(const RealMatrix& m) { return condition_number(svd(m)); }

FrozenMask FrozenMask::all(std::size_t n) {
    FrozenMask mk(n);
    std::fill(mk.frozen_.begin(), mk.frozen_.end(), 1);
    return mk;
}

FrozenMask FrozenMask::zeros_of(const IntegerMatrix& m) {
    FrozenMask mk(m.n());
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) mk.set(i, j, m(i, j) == 0);
    }
    return mk;
}

FrozenMask FrozenMask::row(std::size_t n, std::size_t i) {
    if (i >= n) throw ValidationError("mask row index out of range");
    FrozenMask mk(n);
    for (std::size_t j = 0; j < n; ++j) mk.set(i, j);
    return mk;
}

std::size_t FrozenMask::frozen_in_row(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_; ++j) c += frozen_[i * n_ + j];
    return c;
}

std::size_t FrozenMask::max_frozen_per_row() const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n_; ++i) m = std::max(m, frozen_in_row(i));
    return m;
}

std::size_t frozen_row_cap(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.99)));
}

void validate_frozen_mask(const FrozenMask& mask) {
    const auto cap = frozen_row_cap(mask.n());
    for (std::size_t i = 0; i < mask.n(); ++i) {
        if (mask.frozen_in_row(i) > cap) {
            throw ValidationError("mask freezes " + std::to_string(mask.frozen_in_row(i)) + " entries in row " +
                                  std::to_string(i) + "; the cap is ceil(n^0.99) = " + std::to_string(cap));
        }
    }
}

FrozenMask make_mask(std::string_view spec, const IntegerMatrix& base) {
    const std::size_t n = base.n();
    if (spec.empty() || spec == "none") return FrozenMask::none(n);
    if (spec == "all") return FrozenMask::all(n);
    if (spec == "zeros") return FrozenMask::zeros_of(base);
    if (spec == "diag") {
        FrozenMask mk(n);
        for (std::size_t i = 0; i < n; ++i) mk.set(i, i);
        return mk;
    }
    if (spec.starts_with("row:")) return FrozenMask::row(n, static_cast<std::size_t>(std::stoul(std::string(spec.substr(4)))));
    throw ValidationError("unknown mask spec '" + std::string(spec) + "'");
}

IntegerMatrix perturb(const IntegerMatrix& m, const IntegerMatrix& noise, const FrozenMask* mask) {
    const std::size_t n = m.n();
    if (noise.n() != n) throw ValidationError("perturb: shape mismatch");
    if (mask && mask->n() != n) throw ValidationError("perturb: mask shape mismatch");
    std::vector<std::int64_t> out(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i * n + j] = (mask && mask->frozen(i, j)) ? m(i, j) : checked_add(m(i, j), noise(i, j));
        }
    }
    return IntegerMatrix(n, std::move(out), checked_add(m.entry_bound(), noise.entry_bound()));
}

IntegerMatrix graded_diagonal(std::size_t n, double c) {
    const std::int64_t cap = floor_power(static_cast<std::int64_t>(n), c);
    std::vector<std::int64_t> e(n * n, 0);
    std::int64_t d = 1;
    for (std::size_t i = 0; i < n; ++i) {
        e[i * n + i] = std::min(d, cap);
        if (d < cap) d = d > INT64_MAX / 2 ? INT64_MAX : 2 * d;
    }
    return IntegerMatrix(n, std::move(e), std::max<std::int64_t>(cap, 1));
}

IntegerMatrix worst_case_generator(std::string_view spec, std::size_t n) {
    if (n < 2) throw ValidationError("worst_case_generator needs n >= 2");
    auto colon = spec.find(':');
    std::string_view head = spec.substr(0, colon);
    std::vector<std::string> args;
    if (colon != std::string_view::npos) {
        std::string rest(spec.substr(colon + 1));
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ':')) args.push_back(tok);
    }
    if (head == "file") {
        if (args.empty()) throw ValidationError("file matrix spec needs a path");
        auto m = load_matrix(std::string(spec.substr(colon + 1)));
        if (m.n() != n) throw ValidationError("matrix file has dimension " + std::to_string(m.n()) + ", expected " + std::to_string(n));
        return m;
    }
    std::vector<std::int64_t> e(n * n, 0);
    if (head == "zero") return IntegerMatrix::zero(n);
    if (head == "identity") {
        const std::int64_t c = args.empty() ? 1 : std::stoll(args[0]);
        for (std::size_t i = 0; i < n; ++i) e[i * n + i] = c;
        return IntegerMatrix(n, std::move(e));
    }
    if (head == "graded") {
        if (args.empty()) throw ValidationError("graded matrix spec needs the exponent C");
        return graded_diagonal(n, std::stod(args[0]));
    }
    if (head == "ones") {
        std::fill(e.begin(), e.end(), 1);
        return IntegerMatrix(n, std::move(e));
    }
    if (head == "dupcol") {
        for (std::size_t i = 0; i < n; ++i) {
            e[i * n + i] = 2;
            if (i + 1 < n) e[i * n + i + 1] = 1;
        }
        for (std::size_t i = 0; i < n; ++i) e[i * n + n - 1] = e[i * n];
        return IntegerMatrix(n, std::move(e));
    }
    if (head == "band") {
        if (args.size() != 3) throw ValidationError("band spec is band:<halfwidth>:<diag>:<off>");
        const auto w = static_cast<std::size_t>(std::stoul(args[0]));
        const std::int64_t d = std::stoll(args[1]);
        const std::int64_t o = std::stoll(args[2]);
        if (2 * w + 1 > n) throw ValidationError("band half-width too large for n");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k <= 2 * w; ++k) {
                const std::size_t j = (i + n + k - w) % n;
                e[i * n + j] = (k == w) ? d : o;
            }
        }
        return IntegerMatrix(n, std::move(e));
    }
    throw ValidationError("unknown matrix spec '" + std::string(spec) + "'");
}

IntegerMatrix parse_matrix(std::string_view text, std::int64_t entry_bound) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.empty()) throw ValidationError("matrix file is empty");
    auto to_i64 = [](const std::string& s) {
        Rational q = parse_rational(s);
        if (q.get_den() != 1) throw ValidationError("matrix entries must be integers: '" + s + "'");
        return to_int64(q.get_num());
    };
    const auto n = to_i64(tokens[0]);
    if (n < 1) throw ValidationError("matrix dimension must be positive");
    const auto un = static_cast<std::size_t>(n);
    if (tokens.size() != 1 + un * un) {
        throw ValidationError("matrix file declares n = " + std::to_string(n) + " but holds " +
                              std::to_string(tokens.size() - 1) + " entries");
    }
    std::vector<std::int64_t> e;
    e.reserve(un * un);
    for (std::size_t i = 1; i < tokens.size(); ++i) e.push_back(to_i64(tokens[i]));
    return IntegerMatrix(un, std::move(e), entry_bound);
}

IntegerMatrix load_matrix(const std::string& path, std::int64_t entry_bound) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open matrix file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str(), entry_bound);
}

std::string format_matrix(const IntegerMatrix& m) {
    std::ostringstream out;
    out << m.n() << '\n';
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) out << (j ? " " : "") << m(i, j);
        out << '\n';
    }
    return out.str();
}

PerturbedMatrixSampler::PerturbedMatrixSampler(IntegerMatrix base, const DiscreteDistribution& law,
                                               std::optional<FrozenMask> mask)
    : PerturbedMatrixSampler(std::move(base), std::vector<DiscreteDistribution>{law}, std::move(mask)) {}

PerturbedMatrixSampler::PerturbedMatrixSampler(IntegerMatrix base, std::vector<DiscreteDistribution> laws,
                                               std::optional<FrozenMask> mask)
    : base_(std::move(base)), laws_(std::move(laws)), mask_(std::move(mask)) {
    const std::size_t n = base_.n();
    if (laws_.size() != 1 && laws_.size() != n * n) {
        throw ValidationError("PerturbedMatrixSampler: need one law or n*n laws");
    }
    if (mask_ && mask_->n() != n) throw ValidationError("PerturbedMatrixSampler: mask shape mismatch");
    for (const auto& l : laws_) {
        samplers_.emplace_back(l);
        noise_bound_ = std::max(noise_bound_, l.max_abs_value());
    }
}

const DiscreteDistribution& PerturbedMatrixSampler::law(std::size_t i, std::size_t j) const {
    return laws_.size() == 1 ? laws_[0] : laws_[i * base_.n() + j];
}

IntegerMatrix PerturbedMatrixSampler::sample(std::uint64_t seed) const {
    const std::size_t n = base_.n();
    Rng rng(seed);
    std::vector<std::int64_t> noise(n * n);
    for (std::size_t k = 0; k < n * n; ++k) noise[k] = samplers_[samplers_.size() == 1 ? 0 : k].draw(rng);
    return perturb(base_, IntegerMatrix(n, std::move(noise), noise_bound_), mask_ ? &*mask_ : nullptr);
}

}  // namespace smoothlab
