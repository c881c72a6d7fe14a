#include "smoothlab/gap.hpp"

#include "smoothlab/errors.hpp"
#include "smoothlab/lo_concentration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace smoothlab {

Gap::Gap(std::vector<Rational> generators, std::vector<std::int64_t> dims)
    : generators_(std::move(generators)), dims_(std::move(dims)) {
    if (generators_.size() != dims_.size()) throw ValidationError("progression needs one dim per generator");
    for (auto& g : generators_) g.canonicalize();
    for (auto d : dims_) {
        if (d < 0) throw ValidationError("progression dims must be nonnegative");
    }
}

BigInt Gap::volume() const {
    BigInt v = 1;
    for (auto d : dims_) v *= 2 * BigInt(static_cast<long>(d)) + 1;
    return v;
}

Rational Gap::max_element() const {
    Rational m = 0;
    for (std::size_t i = 0; i < rank(); ++i) m += abs(generators_[i]) * Rational(static_cast<long>(dims_[i]));
    return m;
}

namespace {

BigInt common_denominator(std::span<const Rational> values) {
    BigInt l = 1;
    for (const auto& q : values) l = lcm(l, q.get_den());
    return l;
}

BigInt scaled_integer(const Rational& q, const BigInt& den) { return q.get_num() * (den / q.get_den()); }

void check_enumerable(const Gap& p, std::uint64_t cap) {
    const BigInt v = p.volume();
    if (v > BigInt(static_cast<unsigned long>(cap))) {
        throw ResourceError("progression volume " + v.get_str() + " exceeds the enumeration cap of " +
                            std::to_string(cap));
    }
}

// Elements as integers over the common denominator of the generators.
std::vector<__int128> enumerate_scaled(const Gap& p, const BigInt& den, std::uint64_t cap) {
    check_enumerable(p, cap);
    std::vector<__int128> gens;
    BigInt reach = 0;
    for (std::size_t i = 0; i < p.rank(); ++i) {
        const BigInt g = scaled_integer(p.generators()[i], den);
        reach += abs(g) * BigInt(static_cast<long>(p.dims()[i]));
        gens.push_back(to_int128(g));
    }
    if (mpz_sizeinbase(reach.get_mpz_t(), 2) > 120) throw OverflowError("progression elements exceed 120 bits");
    std::vector<__int128> cur{0}, next;
    for (std::size_t i = 0; i < p.rank(); ++i) {
        next.clear();
        const std::int64_t n = p.dims()[i];
        for (auto s : cur) {
            for (std::int64_t x = -n; x <= n; ++x) next.push_back(s + gens[i] * x);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        std::swap(cur, next);
    }
    return cur;
}

// Range of integers k with lo <= x0 + k * step <= hi, step != 0.
std::pair<BigInt, BigInt> step_range(const BigInt& x0, const BigInt& step, const BigInt& lo, const BigInt& hi) {
    BigInt a, b;
    if (step > 0) {
        BigInt t = lo - x0;
        mpz_cdiv_q(a.get_mpz_t(), t.get_mpz_t(), step.get_mpz_t());
        t = hi - x0;
        mpz_fdiv_q(b.get_mpz_t(), t.get_mpz_t(), step.get_mpz_t());
    } else {
        BigInt t = hi - x0;
        mpz_cdiv_q(a.get_mpz_t(), t.get_mpz_t(), step.get_mpz_t());
        t = lo - x0;
        mpz_fdiv_q(b.get_mpz_t(), t.get_mpz_t(), step.get_mpz_t());
    }
    return {a, b};
}

bool member_rank1(const BigInt& g, std::int64_t n, const BigInt& c) {
    if (g == 0) return c == 0;
    if (!mpz_divisible_p(c.get_mpz_t(), g.get_mpz_t())) return false;
    return abs(BigInt(c / g)) <= n;
}

// Is c = x1 a + x2 b for some |x1| <= n1, |x2| <= n2?
bool member_rank2(const BigInt& a, std::int64_t n1, const BigInt& b, std::int64_t n2, const BigInt& c) {
    if (a == 0) return member_rank1(b, n2, c);
    if (b == 0) return member_rank1(a, n1, c);
    BigInt d, s, t;
    mpz_gcdext(d.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return false;
    const BigInt f = c / d;
    const BigInt x1 = s * f, x2 = t * f;
    // x1 + k b/d, x2 - k a/d
    const BigInt N1 = static_cast<long>(n1), N2 = static_cast<long>(n2);
    auto [lo1, hi1] = step_range(x1, BigInt(b / d), BigInt(-N1), N1);
    auto [lo2, hi2] = step_range(x2, BigInt(-a / d), BigInt(-N2), N2);
    return std::max(lo1, lo2) <= std::min(hi1, hi2);
}

bool member_scaled(const Gap& p, const Rational& x, const BigInt& den, const std::vector<Rational>* elements) {
    if (elements) return std::binary_search(elements->begin(), elements->end(), x);
    const BigInt c = scaled_integer(x, den);
    if (p.rank() == 0) return c == 0;
    const BigInt a = scaled_integer(p.generators()[0], den);
    if (p.rank() == 1) return member_rank1(a, p.dims()[0], c);
    const BigInt b = scaled_integer(p.generators()[1], den);
    return member_rank2(a, p.dims()[0], b, p.dims()[1], c);
}

std::string trim(std::string_view s) {
    const auto hash = s.find('#');
    if (hash != std::string_view::npos) s = s.substr(0, hash);
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> content_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = trim(text.substr(pos, nl - pos));
        if (!line.empty()) out.push_back(std::move(line));
        pos = nl + 1;
    }
    return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw ValidationError(std::string("expected an integer for ") + what + ", got '" + s + "'");
    }
    if (used != s.size()) throw ValidationError(std::string("expected an integer for ") + what + ", got '" + s + "'");
    return v;
}

Gap gap_from_lines(const std::vector<std::string>& lines) {
    if (lines.empty()) throw ValidationError("progression text is empty");
    std::istringstream head(lines[0]);
    std::string word, extra;
    long long d = -1;
    if (!(head >> word >> d) || word != "rank" || d < 0 || (head >> extra)) {
        throw ValidationError("progression must start with 'rank <d>', got '" + lines[0] + "'");
    }
    if (lines.size() != static_cast<std::size_t>(d) + 1) {
        throw ValidationError("progression of rank " + std::to_string(d) + " needs " + std::to_string(d) +
                              " generator lines, got " + std::to_string(lines.size() - 1));
    }
    std::vector<Rational> gens;
    std::vector<std::int64_t> dims;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string g, n;
        if (!(row >> g >> n) || (row >> extra)) {
            throw ValidationError("expected '<generator> <dim>', got '" + lines[i] + "'");
        }
        gens.push_back(parse_rational(g));
        dims.push_back(parse_int(n, "a dim"));
    }
    return Gap(std::move(gens), std::move(dims));
}

int smallest_dprime(const Rational& R, const BigInt& sv, std::int64_t R0) {
    Rational bound = static_cast<long>(R0);
    for (int d = 0; d <= 256; ++d) {
        if (R <= bound) return d;
        if (sv <= 1) break;
        bound *= sv;
    }
    throw ConstructionError("no exponent d' <= 256 bounds R = " + R.get_str());
}

}  // namespace

std::vector<Rational> enumerate(const Gap& p, std::uint64_t cap) {
    const BigInt den = common_denominator(p.generators());
    auto scaled = enumerate_scaled(p, den, cap);
    std::vector<Rational> out;
    out.reserve(scaled.size());
    for (auto x : scaled) {
        Rational q(from_int128(x), den);
        q.canonicalize();
        out.push_back(std::move(q));
    }
    return out;
}

Gap dilate(const Gap& p, const Rational& k) {
    std::vector<Rational> gens(p.generators().begin(), p.generators().end());
    Rational f(k);
    f.canonicalize();
    for (auto& g : gens) g *= f;
    return Gap(std::move(gens), std::vector<std::int64_t>(p.dims().begin(), p.dims().end()));
}

Gap sumset(const Gap& p, const Gap& q) {
    std::vector<Rational> gens(p.generators().begin(), p.generators().end());
    std::vector<std::int64_t> dims(p.dims().begin(), p.dims().end());
    gens.insert(gens.end(), q.generators().begin(), q.generators().end());
    dims.insert(dims.end(), q.dims().begin(), q.dims().end());
    return Gap(std::move(gens), std::move(dims));
}

Gap iterated_sumset(const Gap& p, std::int64_t k) {
    if (k < 1) throw ValidationError("iterated sumset needs k >= 1");
    std::vector<std::int64_t> dims(p.dims().begin(), p.dims().end());
    for (auto& d : dims) d = checked_mul(d, k);
    return Gap(std::vector<Rational>(p.generators().begin(), p.generators().end()), std::move(dims));
}

bool member(const Gap& p, const Rational& x, std::uint64_t cap) {
    if (p.rank() <= 2) {
        std::vector<Rational> all(p.generators().begin(), p.generators().end());
        all.push_back(x);
        return member_scaled(p, x, common_denominator(all), nullptr);
    }
    const auto elements = enumerate(p, cap);
    return std::binary_search(elements.begin(), elements.end(), x);
}

bool member_dilated_quotient(const Gap& p, const Rational& x, std::int64_t a_bound, std::uint64_t cap) {
    if (a_bound < 1) throw ValidationError("member_dilated_quotient needs a_bound >= 1");
    if (static_cast<std::uint64_t>(a_bound) > cap) {
        throw ResourceError("a_bound " + std::to_string(a_bound) + " exceeds the search cap");
    }
    std::optional<std::vector<Rational>> elements;
    if (p.rank() > 2) elements = enumerate(p, cap);
    std::vector<Rational> all(p.generators().begin(), p.generators().end());
    all.push_back(x);
    const BigInt den = common_denominator(all);
    // P is symmetric, so a and -a give the same answer.
    for (std::int64_t a = 1; a <= a_bound; ++a) {
        if (member_scaled(p, x * static_cast<long>(a), den, elements ? &*elements : nullptr)) return true;
    }
    return false;
}

Gap parse_gap(std::string_view text) { return gap_from_lines(content_lines(text)); }

std::string format_gap(const Gap& p) {
    std::string out = "rank " + std::to_string(p.rank()) + "\n";
    for (std::size_t i = 0; i < p.rank(); ++i) {
        out += to_string(p.generators()[i]) + " " + std::to_string(p.dims()[i]) + "\n";
    }
    return out;
}

std::string DiscretizationCheck::failing() const {
    std::string out;
    auto add = [&](bool ok, const char* name) {
        if (ok) return;
        if (!out.empty()) out += ", ";
        out += name;
    };
    add(scale, "scale");
    add(smallness, "smallness");
    add(sparseness, "sparseness");
    add(covering, "covering");
    return out;
}

DiscretizationResult discretize_rank1(const Gap& p, std::int64_t R0, std::int64_t S, std::uint64_t cap) {
    if (p.rank() != 1) throw ValidationError("discretize_rank1 needs a rank-1 progression");
    const Rational& gq = p.generators()[0];
    if (gq.get_den() != 1 || gq < 1) throw ValidationError("discretize_rank1 needs an integer generator g >= 1");
    if (R0 < 1 || S < 1) throw ValidationError("R0 and S must be positive integers");
    const BigInt g = gq.get_num();
    const std::int64_t N = p.dims()[0];
    const BigInt sv = BigInt(static_cast<long>(S)) * p.volume();

    auto finish = [&](DiscretizationResult r) {
        r.S = S;
        r.R0 = R0;
        r.dprime = smallest_dprime(r.R, sv, R0);
        const auto check = verify_discretization(p, r, cap);
        if (!check.all()) {
            throw ConstructionError("discretize_rank1 produced a split failing: " + check.failing());
        }
        return r;
    };

    if (BigInt(static_cast<long>(N)) * g * S <= R0) {
        DiscretizationResult r;
        r.small = p;
        r.sparse = Gap::zero();
        r.R = static_cast<long>(R0);
        r.q = 0;
        return finish(std::move(r));
    }

    // x = q m + r with |r| <= q/2 covers |x| <= N once J = ceil((N - h) / q).
    const std::int64_t q_limit = checked_add(checked_mul(2, N), 1);
    const Rational r0(static_cast<long>(R0));
    for (std::int64_t q = 1; q <= q_limit; ++q) {
        const std::int64_t h = std::min(q / 2, N);
        const std::int64_t J = h >= N ? 0 : (N - h + q - 1) / q;
        Rational lower = g * BigInt(static_cast<long>(S)) * BigInt(static_cast<long>(h));
        if (lower < 1) lower = 1;
        Rational R = std::max(r0, lower);
        if (J > 0) {
            const Rational upper(g * BigInt(static_cast<long>(q)), BigInt(static_cast<long>(S)));
            if (lower > upper) continue;
            R = std::min(R, upper);
        }
        R.canonicalize();
        DiscretizationResult r;
        r.small = Gap({gq}, {h});
        r.sparse = J > 0 ? Gap({gq * static_cast<long>(q)}, {J}) : Gap::zero();
        r.R = R;
        r.q = q;
        return finish(std::move(r));
    }
    throw ConstructionError("no modulus q <= 2N + 1 gives a valid split");
}

DiscretizationCheck verify_discretization(const Gap& p, const DiscretizationResult& r, std::uint64_t cap) {
    if (r.S < 1 || r.R0 < 1) throw ValidationError("S and R0 must be positive integers");
    DiscretizationCheck c;
    const std::size_t d = p.rank();
    const BigInt V = p.volume();
    const Rational S(static_cast<long>(r.S));

    if (r.dprime >= 0 && r.R >= 1) {
        BigInt sv = BigInt(static_cast<long>(r.S)) * V;
        BigInt pw;
        mpz_pow_ui(pw.get_mpz_t(), sv.get_mpz_t(), static_cast<unsigned long>(r.dprime));
        c.scale = r.R <= Rational(pw * static_cast<long>(r.R0));
    }

    c.smallness = r.small.rank() <= d && r.small.volume() <= V && r.small.max_element() <= r.R / S;

    if (r.sparse.rank() <= d && r.sparse.volume() <= V) {
        const auto spread = enumerate(iterated_sumset(r.sparse, r.S), cap);
        const Rational sep = r.R * S;
        c.sparseness = true;
        for (std::size_t i = 1; i < spread.size(); ++i) {
            if (spread[i] - spread[i - 1] < sep) {
                c.sparseness = false;
                break;
            }
        }
    }

    const auto whole = enumerate(p, cap);
    const auto cover = enumerate(sumset(r.small, r.sparse), cap);
    c.covering = std::includes(cover.begin(), cover.end(), whole.begin(), whole.end());
    return c;
}

DiscretizationResult parse_discretization(std::string_view text) {
    const auto lines = content_lines(text);
    DiscretizationResult r;
    bool have_R = false, have_S = false, have_R0 = false, have_d = false;
    std::vector<std::string> small, sparse;
    std::vector<std::string>* section = nullptr;
    for (const auto& line : lines) {
        if (line == "[small]") {
            section = &small;
            continue;
        }
        if (line == "[sparse]") {
            section = &sparse;
            continue;
        }
        if (section) {
            section->push_back(line);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("expected 'key = value', got '" + line + "'");
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (key == "R") {
            r.R = parse_rational(value);
            have_R = true;
        } else if (key == "S") {
            r.S = parse_int(value, "S");
            have_S = true;
        } else if (key == "R0") {
            r.R0 = parse_int(value, "R0");
            have_R0 = true;
        } else if (key == "dprime") {
            r.dprime = static_cast<int>(parse_int(value, "dprime"));
            have_d = true;
        } else if (key == "q") {
            r.q = parse_int(value, "q");
        } else {
            throw ValidationError("unknown discretization key '" + key + "'");
        }
    }
    if (!have_R || !have_S || !have_R0 || !have_d) {
        throw ValidationError("discretization needs R, S, R0 and dprime");
    }
    if (small.empty() || sparse.empty()) throw ValidationError("discretization needs [small] and [sparse] sections");
    r.small = gap_from_lines(small);
    r.sparse = gap_from_lines(sparse);
    return r;
}

std::string format_discretization(const DiscretizationResult& r) {
    std::string out;
    out += "R = " + to_string(r.R) + "\n";
    out += "S = " + std::to_string(r.S) + "\n";
    out += "R0 = " + std::to_string(r.R0) + "\n";
    out += "dprime = " + std::to_string(r.dprime) + "\n";
    out += "q = " + std::to_string(r.q) + "\n";
    out += "[small]\n" + format_gap(r.small);
    out += "[sparse]\n" + format_gap(r.sparse);
    return out;
}

namespace {

struct Candidate {
    Gap gap;
    std::vector<std::size_t> excluded;
    std::int64_t s = 0;
    BigInt volume;
};

bool better(const Candidate& a, const std::optional<Candidate>& b) {
    if (!b) return true;
    if (a.excluded.size() != b->excluded.size()) return a.excluded.size() < b->excluded.size();
    return a.volume < b->volume;
}

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

// Generator b / s: entries that are multiples of it, the rest excluded.
std::optional<Candidate> rank1_candidate(std::span<const std::int64_t> v, std::int64_t b, std::int64_t s,
                                         const InverseSearchParams& prm) {
    std::vector<std::size_t> excluded;
    std::vector<std::pair<std::int64_t, std::size_t>> coeff;  // (|c|, index)
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto w = static_cast<__int128>(v[i]) * s;
        if (w % b != 0) {
            excluded.push_back(i);
            if (static_cast<std::int64_t>(excluded.size()) > prm.except_cap) return std::nullopt;
            continue;
        }
        const auto c = w / b;
        coeff.emplace_back(static_cast<std::int64_t>(c < 0 ? -c : c), i);
    }
    std::sort(coeff.begin(), coeff.end());
    // Drop the largest coefficients while exclusions remain and the volume is too big.
    while (!coeff.empty() && 2 * static_cast<__int128>(coeff.back().first) + 1 > prm.volume_cap &&
           static_cast<std::int64_t>(excluded.size()) < prm.except_cap) {
        excluded.push_back(coeff.back().second);
        coeff.pop_back();
    }
    const std::int64_t N = coeff.empty() ? 0 : coeff.back().first;
    if (2 * static_cast<__int128>(N) + 1 > prm.volume_cap) return std::nullopt;
    std::sort(excluded.begin(), excluded.end());
    Candidate c;
    c.gap = Gap({Rational(static_cast<long>(b), static_cast<long>(s))}, {N});
    c.excluded = std::move(excluded);
    c.s = s;
    c.volume = c.gap.volume();
    return c;
}

// Generators b1 / s and b2 / s. Each entry keeps every representation
// x1 b1 + x2 b2 = s v_k with |x1|, |x2| <= M; dims are then chosen to
// minimize the volume.
std::optional<Candidate> rank2_candidate(std::span<const std::int64_t> v, std::int64_t b1, std::int64_t b2,
                                         std::int64_t s, const InverseSearchParams& prm, std::uint64_t& work) {
    const std::int64_t M = (prm.volume_cap - 1) / 2;
    const BigInt a = static_cast<long>(b1), b = static_cast<long>(b2);
    BigInt d, sa, sb;
    mpz_gcdext(d.get_mpz_t(), sa.get_mpz_t(), sb.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const BigInt step1 = b / d, step2 = -a / d;
    const BigInt Mb = static_cast<long>(M);
    std::vector<std::size_t> excluded;
    // For each kept entry: min |x2| over representations with |x1| <= t, as (|x1|, |x2|) pairs.
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> reps;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const BigInt c = BigInt(static_cast<long>(v[i])) * static_cast<long>(s);
        std::vector<std::pair<std::int64_t, std::int64_t>> r;
        if (mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) {
            const BigInt f = c / d;
            const BigInt x1 = sa * f, x2 = sb * f;
            auto [lo1, hi1] = step_range(x1, step1, BigInt(-Mb), Mb);
            auto [lo2, hi2] = step_range(x2, step2, BigInt(-Mb), Mb);
            const BigInt lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
            for (BigInt k = lo; k <= hi; ++k) {
                r.emplace_back(abs64(to_int64(BigInt(x1 + k * step1))), abs64(to_int64(BigInt(x2 + k * step2))));
                ++work;
            }
        }
        if (r.empty()) {
            excluded.push_back(i);
            if (static_cast<std::int64_t>(excluded.size()) > prm.except_cap) return std::nullopt;
            continue;
        }
        std::sort(r.begin(), r.end());
        reps.push_back(std::move(r));
    }
    std::optional<std::pair<std::int64_t, std::int64_t>> best;
    std::int64_t best_volume = 0;
    std::vector<std::size_t> cursor(reps.size(), 0);
    std::vector<std::int64_t> min_x2(reps.size(), INT64_MAX);
    for (std::int64_t n1 = 0; n1 <= M; ++n1) {
        std::int64_t n2 = 0;
        for (std::size_t k = 0; k < reps.size(); ++k) {
            while (cursor[k] < reps[k].size() && reps[k][cursor[k]].first <= n1) {
                min_x2[k] = std::min(min_x2[k], reps[k][cursor[k]].second);
                ++cursor[k];
            }
            n2 = std::max(n2, min_x2[k]);
        }
        work += reps.size();
        if (n2 == INT64_MAX) continue;
        const std::int64_t vol = (2 * n1 + 1) * (2 * n2 + 1);
        if (vol <= prm.volume_cap && (!best || vol < best_volume)) {
            best = std::make_pair(n1, n2);
            best_volume = vol;
        }
    }
    if (!best) return std::nullopt;
    Candidate c;
    c.gap = Gap({Rational(static_cast<long>(b1), static_cast<long>(s)), Rational(static_cast<long>(b2), static_cast<long>(s))},
                {best->first, best->second});
    c.excluded = std::move(excluded);
    c.s = s;
    c.volume = c.gap.volume();
    return c;
}

}  // namespace

InverseSearchResult inverse_lo_search(std::span<const std::int64_t> v, const InverseSearchParams& prm) {
    const std::size_t n = v.size();
    if (n == 0) throw ValidationError("inverse_lo_search needs a nonempty weight vector");
    if (n > 16) throw ValidationError("inverse_lo_search is exhaustive and limited to n <= 16");
    if (prm.rank_cap < 1 || prm.rank_cap > 2) throw ValidationError("rank_cap must be 1 or 2");
    if (prm.volume_cap < 1) throw ValidationError("volume_cap must be at least 1");
    if (prm.except_cap < 0) throw ValidationError("except_cap must be nonnegative");
    if (prm.multiplier_cap < 0) throw ValidationError("multiplier_cap must be nonnegative");
    for (auto x : v) {
        if (x == INT64_MIN) throw OverflowError("weight -2^63 has no 64-bit absolute value");
    }

    InverseSearchResult res;
    res.concentration = fourier_bound({}, v, prm.mu);
    res.threshold = std::pow(static_cast<long double>(n), -static_cast<long double>(prm.A));
    if (res.concentration < res.threshold) {
        res.status = InverseStatus::not_triggered;
        return res;
    }
    if (std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; })) {
        res.status = InverseStatus::found;
        res.gap = Gap::zero();
        res.s = 1;
        return res;
    }

    std::vector<std::int64_t> bases;  // distinct nonzero |v_i| in index order
    for (auto x : v) {
        const auto b = abs64(x);
        if (b != 0 && std::find(bases.begin(), bases.end(), b) == bases.end()) bases.push_back(b);
    }
    const std::int64_t scap = prm.multiplier_cap > 0 ? prm.multiplier_cap : prm.volume_cap;

    const double rank1_work = static_cast<double>(scap) * static_cast<double>(bases.size()) * static_cast<double>(n);
    if (rank1_work > static_cast<double>(prm.search_budget)) {
        throw ResourceError("rank-1 inverse search needs about " + std::to_string(rank1_work) +
                            " steps, over the search budget");
    }
    std::optional<Candidate> best;
    for (std::int64_t s = 1; s <= scap; ++s) {
        for (auto b : bases) {
            auto c = rank1_candidate(v, b, s, prm);
            if (c && better(*c, best)) best = std::move(c);
        }
    }
    if (!best && prm.rank_cap >= 2) {
        const std::int64_t scap2 = std::min(scap, std::max<std::int64_t>(1, prm.rank2_multiplier_cap));
        const double pairs = static_cast<double>(bases.size()) * static_cast<double>(bases.size() - 1) / 2;
        const double per_pair = static_cast<double>(n) * static_cast<double>(prm.volume_cap);
        if (pairs * static_cast<double>(scap2) * per_pair > static_cast<double>(prm.search_budget)) {
            throw ResourceError("rank-2 inverse search space exceeds the search budget; lower multiplier_cap");
        }
        std::uint64_t work = 0;
        for (std::int64_t s = 1; s <= scap2; ++s) {
            for (std::size_t i = 0; i < bases.size(); ++i) {
                for (std::size_t j = i + 1; j < bases.size(); ++j) {
                    auto c = rank2_candidate(v, bases[i], bases[j], s, prm, work);
                    if (c && better(*c, best)) best = std::move(c);
                }
            }
        }
    }
    if (!best) {
        res.status = InverseStatus::none_found;
        std::ostringstream log;
        log << "no progression of rank <= " << prm.rank_cap << " and volume <= " << prm.volume_cap
            << " covers all but " << prm.except_cap << " entries; concentration " << static_cast<double>(res.concentration)
            << " >= threshold " << static_cast<double>(res.threshold) << "; v =";
        for (auto x : v) log << ' ' << x;
        res.counterexample_log.push_back(log.str());
        return res;
    }
    res.status = InverseStatus::found;
    res.gap = std::move(best->gap);
    res.excluded = std::move(best->excluded);
    res.s = best->s;
    return res;
}

}  // namespace smoothlab
