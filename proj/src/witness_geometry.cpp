#include "smoothlab/witness_geometry.hpp"

#include "smoothlab/errors.hpp"
#include "smoothlab/parallel.hpp"
#include "smoothlab/random.hpp"

#include <cmath>
#include <limits>

namespace smoothlab {

const char* to_string(WitnessClass c) {
    switch (c) {
        case WitnessClass::poor: return "poor";
        case WitnessClass::rich_singular: return "rich_singular";
        case WitnessClass::rich_nonsingular: return "rich_nonsingular";
        case WitnessClass::unclassified: return "unclassified";
    }
    return "unclassified";
}

WitnessVector round_witness(std::span<const double> v, int B) {
    const std::size_t n = v.size();
    if (n == 0) throw ValidationError("round_witness needs a nonempty vector");
    if (B < 1) throw ValidationError("round_witness needs B >= 1");
    long double sq = 0;
    for (double x : v) {
        if (!std::isfinite(x)) throw ValidationError("round_witness: non-finite coordinate");
        sq += static_cast<long double>(x) * x;
    }
    const long double norm = std::sqrt(sq);
    if (norm < 0.99L || norm > 1.01L) throw ValidationError("round_witness needs 0.99 <= |v| <= 1.01");
    const std::int64_t scale = checked_pow(static_cast<std::int64_t>(n), static_cast<unsigned>(B + 2));
    if (scale > (std::int64_t{1} << 62)) throw OverflowError("n^(B+2) exceeds 2^62");
    WitnessVector out;
    out.b_exponent = B;
    out.w.reserve(n);
    long double wsq = 0;
    for (double x : v) {
        const long double y = std::nearbyint(static_cast<long double>(scale) * x);
        out.w.push_back(static_cast<std::int64_t>(y));
        wsq += y * y;
    }
    out.norm = static_cast<double>(std::sqrt(wsq));
    return out;
}

int default_b_exponent(double C, double K) { return static_cast<int>(std::floor(6.0 * (C + K + 2.0))) + 1; }

std::int64_t ceil_power(std::int64_t n, std::int64_t num, std::int64_t den) {
    if (n < 0 || num < 0 || den < 1) throw ValidationError("ceil_power needs n >= 0, num >= 0, den >= 1");
    BigInt target;
    mpz_ui_pow_ui(target.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(num));
    BigInt root;
    const bool exact = mpz_root(root.get_mpz_t(), target.get_mpz_t(), static_cast<unsigned long>(den)) != 0;
    if (!exact) root += 1;
    return to_int64(root);
}

WitnessClassification classify_witness(const WitnessVector& w, std::span<const ConcentrationQuery> rows, double A,
                                       const WitnessThresholds& t, std::uint64_t state_budget) {
    const auto n = static_cast<std::int64_t>(w.w.size());
    if (n == 0) throw ValidationError("classify_witness needs a nonempty witness");
    for (const auto& q : rows) {
        if (q.n() != w.w.size()) throw ValidationError("row law length differs from the witness length");
    }
    WitnessClassification out;
    out.richness = classify_rich(rows, WeightVector(w.w), A, t.offset, state_budget);
    const std::int64_t lnum = t.large_num < 0 ? w.b_exponent : t.large_num;
    out.large_threshold = ceil_power(n, lnum, t.large_den);
    out.count_threshold = ceil_power(n, t.count_num, t.count_den);
    for (auto x : w.w) {
        if ((x < 0 ? -static_cast<__int128>(x) : x) >= out.large_threshold) ++out.large_count;
    }
    if (out.richness.richness == Richness::poor) {
        out.cls = WitnessClass::poor;
    } else {
        out.cls = out.large_count < out.count_threshold ? WitnessClass::rich_singular : WitnessClass::rich_nonsingular;
    }
    return out;
}

double EpsilonNet::size_bound() const { return std::pow(1.0 + 2.0 / epsilon, static_cast<double>(dimension)); }

std::vector<double> random_unit_vector(std::size_t l, Rng& rng) {
    std::vector<double> x(l);
    for (;;) {
        double sq = 0;
        for (auto& e : x) {
            e = rng.normal();
            sq += e * e;
        }
        if (sq > 1e-300) {
            const double inv = 1.0 / std::sqrt(sq);
            for (auto& e : x) e *= inv;
            return x;
        }
    }
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

double distance_to_net(const EpsilonNet& net, std::span<const double> x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : net.points) best = std::min(best, squared_distance(p, x));
    return std::sqrt(best);
}

EpsilonNet greedy_net(std::size_t l, double epsilon, std::uint64_t seed, std::uint64_t patience,
                      std::uint64_t coverage_samples) {
    if (l < 1) throw ValidationError("greedy_net needs l >= 1");
    if (!(epsilon > 0) || epsilon > 2) throw ValidationError("greedy_net needs 0 < epsilon <= 2");
    if (patience < 1) throw ValidationError("greedy_net needs patience >= 1");
    EpsilonNet net;
    net.dimension = l;
    net.epsilon = epsilon;
    net.patience = patience;
    const double eps2 = epsilon * epsilon;
    Rng rng(derive_seed(seed, stream_id("net-proposals"), 0));
    std::uint64_t streak = 0;
    while (streak < patience) {
        auto x = random_unit_vector(l, rng);
        ++net.proposals;
        bool separated = true;
        for (const auto& p : net.points) {
            if (squared_distance(p, x) <= eps2) {
                separated = false;
                break;
            }
        }
        if (separated) {
            net.points.push_back(std::move(x));
            streak = 0;
        } else {
            ++streak;
        }
    }
    Rng check(derive_seed(seed, stream_id("net-coverage"), 0));
    std::int64_t covered = 0;
    for (std::uint64_t i = 0; i < coverage_samples; ++i) {
        const auto x = random_unit_vector(l, check);
        if (distance_to_net(net, x) <= epsilon) ++covered;
    }
    if (coverage_samples > 0) net.coverage = wilson(covered, static_cast<std::int64_t>(coverage_samples));
    return net;
}

std::vector<std::vector<double>> embed_zero_padded(const EpsilonNet& net, std::size_t n) {
    if (net.dimension > n) throw ValidationError("cannot embed a net of dimension l into R^n with n < l");
    std::vector<std::vector<double>> out;
    out.reserve(net.points.size());
    for (const auto& p : net.points) {
        auto x = p;
        x.resize(n, 0.0);
        out.push_back(std::move(x));
    }
    return out;
}

SmallImageEstimate small_image_event(const PerturbedMatrixSampler& sampler, std::span<const double> y,
                                     std::int64_t trials, std::uint64_t seed, double mu, unsigned threads) {
    const std::size_t n = sampler.n();
    if (trials < 1) throw ValidationError("small_image_event: empty experiment (trials = 0)");
    if (y.size() != n) throw ValidationError("small_image_event: y has the wrong length");
    if (!(mu > 0) || mu > 1) throw ValidationError("small_image_event needs 0 < mu <= 1");
    double sq = 0;
    for (double e : y) sq += e * e;
    if (std::fabs(std::sqrt(sq) - 1.0) > 1e-12) throw ValidationError("small_image_event: y is not a unit vector");
    const double radius = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    const std::uint64_t stream = stream_id("small-image");
    std::vector<unsigned char> hit(static_cast<std::size_t>(trials), 0);
    parallel_for(hit.size(), threads, [&](std::size_t t) {
        const auto m = sampler.sample(derive_seed(seed, stream, t));
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0;
            for (std::size_t j = 0; j < n; ++j) r += static_cast<double>(m(i, j)) * y[j];
            s += r * r;
        }
        hit[t] = std::sqrt(s) <= radius ? 1 : 0;
    });
    std::int64_t hits = 0;
    for (auto h : hit) hits += h;
    SmallImageEstimate out;
    out.probability = wilson(hits, trials);
    out.standard_error = wilson_standard_error(hits, trials);
    out.bound = std::pow(1.0 - mu / 2.0, static_cast<double>(n));
    out.exceeds_bound = out.probability.estimate > out.bound + 3.0 * out.standard_error;
    return out;
}

}  // namespace smoothlab
