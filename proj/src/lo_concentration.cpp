#include "smoothlab/lo_concentration.hpp"

#include "smoothlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace smoothlab {

WeightVector::WeightVector(std::vector<std::int64_t> v) : v_(std::move(v)) {
    for (auto x : v_) {
        if (x == INT64_MIN) throw OverflowError("weight -2^63 has no 64-bit absolute value");
        bound_ = std::max(bound_, x < 0 ? -x : x);
    }
}

bool ConcentrationQuery::is_excluded(std::size_t i) const {
    return std::find(excluded.begin(), excluded.end(), i) != excluded.end();
}

void ConcentrationQuery::validate() const {
    const std::size_t len = n();
    if (len == 0) throw ValidationError("concentration query has no coordinates");
    if (!shift.empty() && shift.size() != len) throw ValidationError("shift length differs from n");
    if (!multipliers.empty() && multipliers.size() != len) throw ValidationError("multiplier count differs from n");
    for (auto a : multipliers) {
        if (a < 1) throw ValidationError("multipliers must be positive integers");
    }
    std::vector<std::size_t> sorted(excluded);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("exclusion set has repeated indices");
    }
    if (!sorted.empty() && sorted.back() >= len) throw ValidationError("exclusion index out of range");
    if (!excluded.empty() && static_cast<double>(excluded.size()) > std::pow(static_cast<double>(len), 0.99)) {
        throw ValidationError("exclusion set larger than n^0.99");
    }
    if (lcm_exponent) {
        BigInt l = 1;
        for (std::size_t i = 0; i < len; ++i) {
            if (!is_excluded(i)) l = lcm(l, BigInt(static_cast<long>(multiplier_at(i))));
        }
        const long double cap = std::pow(static_cast<long double>(len), static_cast<long double>(*lcm_exponent));
        if (to_long_double(l) > cap) {
            throw ValidationError("lcm of multipliers " + l.get_str() + " exceeds n^K");
        }
    }
}

ConcentrationQuery ConcentrationQuery::iid(const DiscreteDistribution& law, std::size_t n) {
    ConcentrationQuery q;
    q.dists.assign(n, law);
    return q;
}

namespace {

template <class W>
struct Coordinate {
    std::int64_t step;
    std::vector<std::pair<std::int64_t, W>> atoms;  // (support value, weight)
};

template <class W>
bool is_zero(const W& w) {
    return w == 0;
}

// Returns (argmax offset, max weight) of the convolution of all coordinates.
template <class W>
std::pair<std::int64_t, W> dense_sup(const std::vector<Coordinate<W>>& coords, std::int64_t span) {
    const auto width = static_cast<std::size_t>(2 * span + 1);
    std::vector<W> cur(width, W(0)), next(width, W(0));
    cur[static_cast<std::size_t>(span)] = W(1);
    std::int64_t lo = 0, hi = 0;
    for (const auto& c : coords) {
        std::int64_t mn = INT64_MAX, mx = INT64_MIN;
        for (const auto& [m, w] : c.atoms) {
            mn = std::min(mn, m * c.step);
            mx = std::max(mx, m * c.step);
        }
        const std::int64_t nlo = lo + mn, nhi = hi + mx;
        for (std::int64_t s = nlo; s <= nhi; ++s) next[static_cast<std::size_t>(s + span)] = W(0);
        for (std::int64_t s = lo; s <= hi; ++s) {
            const W& w = cur[static_cast<std::size_t>(s + span)];
            if (is_zero(w)) continue;
            for (const auto& [m, cw] : c.atoms) next[static_cast<std::size_t>(s + m * c.step + span)] += w * cw;
        }
        std::swap(cur, next);
        lo = nlo;
        hi = nhi;
    }
    std::int64_t best = lo;
    for (std::int64_t s = lo; s <= hi; ++s) {
        if (cur[static_cast<std::size_t>(s + span)] > cur[static_cast<std::size_t>(best + span)]) best = s;
    }
    return {best, cur[static_cast<std::size_t>(best + span)]};
}

template <class W>
std::pair<std::int64_t, W> sparse_sup(const std::vector<Coordinate<W>>& coords) {
    std::vector<std::pair<std::int64_t, W>> cur{{0, W(1)}}, next;
    for (const auto& c : coords) {
        next.clear();
        next.reserve(cur.size() * c.atoms.size());
        for (const auto& [m, cw] : c.atoms) {
            for (const auto& [s, w] : cur) next.emplace_back(s + m * c.step, w * cw);
        }
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        cur.clear();
        for (auto& e : next) {
            if (!cur.empty() && cur.back().first == e.first) {
                cur.back().second += e.second;
            } else {
                cur.push_back(std::move(e));
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < cur.size(); ++i) {
        if (cur[i].second > cur[best].second) best = i;
    }
    return cur[best];
}

template <class W>
std::pair<std::int64_t, W> convolve_sup(const std::vector<Coordinate<W>>& coords, std::int64_t span) {
    constexpr std::int64_t dense_limit = 1'000'000;
    if (2 * span + 1 <= dense_limit) return dense_sup(coords, span);
    return sparse_sup(coords);
}


}  // namespace

ConcentrationResult exact_concentration(const ConcentrationQuery& q, const WeightVector& v,
                                        std::uint64_t state_budget) {
    q.validate();
    const std::size_t n = q.n();
    if (v.size() != n) throw ValidationError("weight vector length differs from n");
    std::int64_t span = 0;
    std::int64_t base = 0;  // Z . v
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        base = checked_add(base, checked_mul(q.shift_at(i), v[i]));
        if (v[i] == 0) continue;
        span = checked_add(span, checked_mul(v[i] < 0 ? -v[i] : v[i], q.dists[i].max_abs_value()));
        active.push_back(i);
    }
    if (span > INT64_MAX / 4) throw ResourceError("concentration range exceeds the 64-bit range");
    const auto width = static_cast<std::uint64_t>(2 * span + 1);
    if (width > state_budget) {
        throw ResourceError("concentration table of " + std::to_string(width) + " states exceeds the budget of " +
                            std::to_string(state_budget) + "; use a Monte Carlo estimate instead");
    }

    ConcentrationResult out;
    const bool exact = std::all_of(active.begin(), active.end(), [&](std::size_t i) { return q.dists[i].is_exact(); });
    if (exact) {
        BigInt total_den = 1;
        std::vector<BigInt> dens;
        for (auto i : active) {
            BigInt d = 1;
            for (const auto& p : q.dists[i].exact_probabilities()) d = lcm(d, p.get_den());
            dens.push_back(d);
            total_den *= d;
        }
        auto counts_for = [&](std::size_t k) {
            std::vector<BigInt> c;
            const auto& law = q.dists[active[k]];
            for (const auto& p : law.exact_probabilities()) c.push_back(p.get_num() * (dens[k] / p.get_den()));
            return c;
        };
        bool small = mpz_sizeinbase(total_den.get_mpz_t(), 2) <= 125;
        BigInt count;
        if (small) {
            std::vector<Coordinate<__int128>> coords;
            for (std::size_t k = 0; k < active.size(); ++k) {
                Coordinate<__int128> c{v[active[k]], {}};
                auto cs = counts_for(k);
                for (std::size_t a = 0; a < cs.size(); ++a) {
                    c.atoms.emplace_back(q.dists[active[k]].values()[a], static_cast<__int128>(to_int64(cs[a])));
                }
                coords.push_back(std::move(c));
            }
            auto [arg, w] = convolve_sup(coords, span);
            out.argmax = arg;
            count = from_int128(w);
        } else {
            std::vector<Coordinate<BigInt>> coords;
            for (std::size_t k = 0; k < active.size(); ++k) {
                Coordinate<BigInt> c{v[active[k]], {}};
                auto cs = counts_for(k);
                for (std::size_t a = 0; a < cs.size(); ++a) c.atoms.emplace_back(q.dists[active[k]].values()[a], cs[a]);
                coords.push_back(std::move(c));
            }
            auto [arg, w] = convolve_sup(coords, span);
            out.argmax = arg;
            count = w;
        }
        Rational p(count, total_den);
        p.canonicalize();
        out.sup = to_long_double(p);
        out.exact_sup = p;
    } else {
        std::vector<Coordinate<long double>> coords;
        for (auto i : active) {
            Coordinate<long double> c{v[i], {}};
            for (std::size_t a = 0; a < q.dists[i].size(); ++a) {
                c.atoms.emplace_back(q.dists[i].values()[a], q.dists[i].probabilities()[a]);
            }
            coords.push_back(std::move(c));
        }
        auto [arg, w] = convolve_sup(coords, span);
        out.argmax = arg;
        out.sup = w;
    }
    out.argmax = checked_add(out.argmax, base);
    return out;
}

long double fourier_bound(std::span<const std::int64_t> multipliers, std::span<const std::int64_t> v, double mu,
                          std::span<const std::size_t> excluded, std::uint64_t point_budget) {
    if (!(mu > 0) || mu > 0.5) throw ValidationError("fourier_bound needs 0 < mu <= 1/2");
    if (!multipliers.empty() && multipliers.size() != v.size()) throw ValidationError("multiplier count differs from n");
    std::map<std::int64_t, int> freq;  // |a_i v_i| -> multiplicity
    std::int64_t degree = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::find(excluded.begin(), excluded.end(), i) != excluded.end()) continue;
        const std::int64_t a = multipliers.empty() ? 1 : multipliers[i];
        if (a < 1) throw ValidationError("multipliers must be positive integers");
        std::int64_t f = checked_mul(a, v[i]);
        if (f == 0) continue;
        f = f < 0 ? -f : f;
        ++freq[f];
        degree = checked_add(degree, f);
    }
    if (degree == 0) return 1.0L;
    const std::int64_t points = checked_add(degree, 1);
    if (static_cast<std::uint64_t>(points) > point_budget) {
        throw ResourceError("fourier_bound needs " + std::to_string(points) + " evaluation points, over budget");
    }
    const long double one_minus = 1.0L - static_cast<long double>(mu);
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    long double sum = 0;
    for (std::int64_t j = 0; j < points; ++j) {
        long double prod = 1;
        for (const auto& [f, mult] : freq) {
            const auto r = static_cast<std::int64_t>((static_cast<__int128>(f) * j) % points);
            const long double factor =
                one_minus + static_cast<long double>(mu) *
                                std::cos(two_pi * static_cast<long double>(r) / static_cast<long double>(points));
            prod *= mult == 1 ? factor : std::pow(factor, static_cast<long double>(mult));
            if (prod == 0) break;
        }
        sum += prod;
    }
    return sum / static_cast<long double>(points);
}

long double fourier_bound(const ConcentrationQuery& q, const WeightVector& v, double mu) {
    q.validate();
    if (v.size() != q.n()) throw ValidationError("weight vector length differs from n");
    return fourier_bound(q.multipliers, v.values(), mu, q.excluded);
}

FourierDominanceCheck check_fourier_dominance(const ConcentrationQuery& q, const WeightVector& v,
                           std::span<const std::optional<BoundednessCertificate>> certs) {
    if (certs.size() != q.n()) throw ValidationError("need one certificate slot per coordinate");
    ConcentrationQuery fq = q;
    fq.multipliers.assign(q.n(), 1);
    double mu = 0.5;
    for (std::size_t i = 0; i < q.n(); ++i) {
        if (q.is_excluded(i)) continue;
        if (!certs[i]) throw ValidationError("coordinate " + std::to_string(i) + " has no certificate");
        const auto& c = *certs[i];
        const auto grid = std::max<std::int64_t>(4096, min_certificate_grid(q.dists[i], c));
        if (!verify_certificate(q.dists[i], c, grid).holds) {
            throw ValidationError("certificate for coordinate " + std::to_string(i) + " does not verify");
        }
        fq.multipliers[i] = c.k;
        mu = std::min(mu, c.mu);
    }
    FourierDominanceCheck out;
    out.mu = mu;
    out.exact = exact_concentration(fq, v).sup;
    out.bound = fourier_bound(fq, v, mu);
    out.gap = out.bound - out.exact;
    out.holds = out.exact <= out.bound + 1e-12L;
    return out;
}

NondegeneracyEstimate check_nondegeneracy(std::span<const DiscreteDistribution> dists,
                                          std::span<const std::int64_t> shift, std::span<const double> y,
                                          double mu, std::int64_t trials, std::uint64_t seed) {
    const std::size_t n = dists.size();
    if (n == 0 || y.size() != n) throw ValidationError("check_nondegeneracy: y must have one entry per coordinate");
    if (!shift.empty() && shift.size() != n) throw ValidationError("check_nondegeneracy: shift length differs from n");
    if (trials < 1) throw ValidationError("check_nondegeneracy: need at least one trial");
    double norm = 0;
    for (double e : y) norm += e * e;
    if (std::fabs(std::sqrt(norm) - 1.0) > 1e-12) throw ValidationError("check_nondegeneracy: y is not a unit vector");
    std::vector<Sampler> samplers;
    for (const auto& d : dists) samplers.emplace_back(d);
    const double radius = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    Rng rng(seed);
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto z = shift.empty() ? 0 : shift[i];
            s += static_cast<double>(z + samplers[i].draw(rng)) * y[i];
        }
        if (std::fabs(s) <= radius) ++hits;
    }
    NondegeneracyEstimate out;
    out.probability = wilson(hits, trials, z99);
    out.threshold = 1.0 - mu / 2.0;
    out.violation = out.probability.lower > out.threshold;
    return out;
}

RichnessResult classify_rich(std::span<const ConcentrationQuery> rows, const WeightVector& w, double a_exponent,
                             double offset, std::uint64_t state_budget) {
    if (rows.empty()) throw ValidationError("classify_rich needs at least one row law");
    RichnessResult out;
    out.threshold = std::pow(static_cast<double>(w.size()), -a_exponent - offset);
    std::vector<std::size_t> evaluated;
    bool first = true;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& q = rows[r];
        bool seen = std::any_of(evaluated.begin(), evaluated.end(), [&](std::size_t e) {
            const auto& o = rows[e];
            return o.dists == q.dists && o.shift == q.shift;
        });
        if (seen) continue;
        evaluated.push_back(r);
        ConcentrationQuery plain;
        plain.dists = q.dists;
        plain.shift = q.shift;
        auto c = exact_concentration(plain, w, state_budget);
        if (first || c.sup > out.sup) {
            out.sup = c.sup;
            out.row = r;
            out.argmax = c.argmax;
            first = false;
        }
    }
    out.richness = out.sup >= static_cast<long double>(out.threshold) ? Richness::rich : Richness::poor;
    return out;
}

}  // namespace smoothlab
