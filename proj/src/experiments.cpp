#include "smoothlab/experiments.hpp"

#include "smoothlab/errors.hpp"
#include "smoothlab/exact_linalg.hpp"
#include "smoothlab/parallel.hpp"
#include "smoothlab/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace smoothlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double inf = std::numeric_limits<double>::infinity();

struct Draw {
    RealMatrix real;
    std::optional<IntegerMatrix> integer;
};

// Draws M + N for one n: discrete noise through PerturbedMatrixSampler, or
// standard Gaussian noise added to the real base matrix.
class MatrixSource {
public:
    MatrixSource(const ExperimentConfig& cfg, std::size_t n, std::optional<FrozenMask> mask, bool gaussian)
        : base_(worst_case_generator(cfg.matrix, n)), gaussian_(gaussian), mask_(std::move(mask)) {
        const double cap = std::pow(static_cast<double>(n), cfg.C);
        if (static_cast<double>(base_.max_abs()) > cap) {
            throw ValidationError("matrix '" + cfg.matrix + "' has an entry above n^C = " + format_double(cap));
        }
        if (!gaussian_) sampler_.emplace(base_, make_standard(cfg.noise), mask_);
    }

    const IntegerMatrix& base() const { return base_; }

    Draw draw(std::uint64_t seed) const {
        if (!gaussian_) {
            auto m = sampler_->sample(seed);
            RealMatrix r(m);
            return {std::move(r), std::move(m)};
        }
        const std::size_t n = base_.n();
        Rng rng(seed);
        std::vector<double> e(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double g = rng.normal();
                const bool frozen = mask_ && mask_->frozen(i, j);
                e[i * n + j] = static_cast<double>(base_(i, j)) + (frozen ? 0.0 : g);
            }
        }
        return {RealMatrix(n, std::move(e)), std::nullopt};
    }

private:
    IntegerMatrix base_;
    bool gaussian_;
    std::optional<FrozenMask> mask_;
    std::optional<PerturbedMatrixSampler> sampler_;
};

bool is_gaussian(const ExperimentConfig& cfg) { return cfg.noise == "gaussian"; }

// sigma_max, sigma_min and kappa of one draw. Integer draws are tested for
// exact singularity first.
void measure(const RealMatrix& real, const IntegerMatrix* integer, ExperimentRecord& rec) {
    const bool exactly_singular = integer && is_singular(*integer);
    if (exactly_singular) {
        rec.singular = true;
        rec.sigma_min = 0.0;
        rec.kappa = inf;
        rec.sigma_max = real.frobenius_norm() == 0.0 ? 0.0 : svd(real).largest();
        return;
    }
    const auto spectrum = svd(real);
    const auto cond = condition_number(spectrum);
    rec.sigma_max = cond.sigma_max;
    rec.singular = cond.singular;
    rec.sigma_min = cond.singular ? 0.0 : cond.sigma_min;
    rec.kappa = cond.kappa;
}

std::vector<ExperimentRecord> run_records(const MatrixSource& src, const ExperimentConfig& cfg,
                                          const std::string& stream_name, std::int64_t n) {
    const std::uint64_t stream = stream_id(stream_name + ":" + std::to_string(n));
    std::vector<ExperimentRecord> recs(static_cast<std::size_t>(cfg.trials));
    parallel_for(recs.size(), cfg.threads, [&](std::size_t t) {
        const auto start = Clock::now();
        auto& r = recs[t];
        r.trial = static_cast<std::int64_t>(t);
        r.seed = derive_seed(cfg.seed, stream, t);
        r.n = n;
        const auto d = src.draw(r.seed);
        measure(d.real, d.integer ? &*d.integer : nullptr, r);
        r.wall_seconds = seconds_since(start);
    });
    return recs;
}

double inverse_norm(const ExperimentRecord& r) { return r.singular ? inf : 1.0 / r.sigma_min; }

std::vector<ExceedancePoint> condition_points(const std::vector<ExperimentRecord>& recs, std::int64_t n,
                                              const std::vector<double>& B) {
    std::vector<ExceedancePoint> pts;
    for (double b : B) {
        ExceedancePoint p;
        p.parameter = b;
        p.threshold = std::pow(static_cast<double>(n), b);
        std::int64_t hits = 0;
        for (const auto& r : recs) hits += r.kappa >= p.threshold ? 1 : 0;
        p.probability = wilson(hits, static_cast<std::int64_t>(recs.size()));
        pts.push_back(p);
    }
    return pts;
}

bool overlap(const Proportion& a, const Proportion& b) { return a.lower <= b.upper && b.lower <= a.upper; }

bool all_overlap(const std::vector<ExceedancePoint>& a, const std::vector<ExceedancePoint>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!overlap(a[i].probability, b[i].probability)) return false;
    }
    return true;
}

void require_trials(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.trials < 100) {
        throw ValidationError("tail experiments need at least 100 trials, got " + std::to_string(cfg.trials));
    }
}

void mark_condition_hits(std::vector<ExperimentRecord>& recs, std::int64_t n, double b) {
    const double thr = std::pow(static_cast<double>(n), b);
    for (auto& r : recs) r.tail_hit = r.kappa >= thr;
}

}  // namespace

CurveResult tail_curve(const ExperimentConfig& cfg) {
    require_trials(cfg);
    const auto start = Clock::now();
    CurveResult res;
    res.kind = "tail";
    res.config = cfg;
    for (auto n : cfg.n) {
        MatrixSource src(cfg, static_cast<std::size_t>(n), std::nullopt, is_gaussian(cfg));
        CurveRun run;
        run.n = n;
        run.records = run_records(src, cfg, "tail", n);
        const double hit = std::pow(static_cast<double>(n), cfg.B.front());
        for (auto& r : run.records) r.tail_hit = inverse_norm(r) >= hit;

        double lo = cfg.x_min, hi = cfg.x_max;
        if (lo == 0.0) {
            lo = inf;
            hi = 0.0;
            for (const auto& r : run.records) {
                if (r.singular) continue;
                lo = std::min(lo, inverse_norm(r));
                hi = std::max(hi, inverse_norm(r));
            }
            if (!(lo < inf)) lo = hi = 1.0;
            if (hi <= lo) hi = 2.0 * lo;
        }
        const auto m = static_cast<std::size_t>(cfg.x_points);
        std::vector<double> lx, ly;
        for (std::size_t j = 0; j < m; ++j) {
            ExceedancePoint p;
            p.parameter = j + 1 == m ? hi : lo * std::pow(hi / lo, static_cast<double>(j) / static_cast<double>(m - 1));
            p.threshold = p.parameter;
            std::int64_t hits = 0;
            for (const auto& r : run.records) hits += inverse_norm(r) >= p.threshold ? 1 : 0;
            p.probability = wilson(hits, cfg.trials);
            if (hits >= 10 && p.probability.estimate <= 0.25) {
                lx.push_back(std::log(p.threshold));
                ly.push_back(std::log(p.probability.estimate));
            }
            run.points.push_back(p);
        }
        if (lx.size() >= 2) run.fit = fit_line(lx, ly);
        res.runs.push_back(std::move(run));
    }
    res.wall_seconds = seconds_since(start);
    return res;
}

CurveResult condition_tail(const ExperimentConfig& cfg) {
    require_trials(cfg);
    const auto start = Clock::now();
    CurveResult res;
    res.kind = "cond-tail";
    res.config = cfg;
    for (auto n : cfg.n) {
        MatrixSource src(cfg, static_cast<std::size_t>(n), std::nullopt, is_gaussian(cfg));
        CurveRun run;
        run.n = n;
        run.records = run_records(src, cfg, "cond-tail", n);
        mark_condition_hits(run.records, n, cfg.B.front());
        run.points = condition_points(run.records, n, cfg.B);
        if (cfg.baseline && !is_gaussian(cfg)) {
            MatrixSource gauss(cfg, static_cast<std::size_t>(n), std::nullopt, true);
            const auto recs = run_records(gauss, cfg, "cond-tail", n);
            run.baseline = condition_points(recs, n, cfg.B);
            run.comparable = all_overlap(run.points, run.baseline);
        }
        res.runs.push_back(std::move(run));
    }
    res.wall_seconds = seconds_since(start);
    return res;
}

CurveResult frozen_entries_experiment(const ExperimentConfig& cfg) {
    require_trials(cfg);
    const auto start = Clock::now();
    CurveResult res;
    res.kind = "frozen";
    res.config = cfg;
    for (auto n : cfg.n) {
        const auto base = worst_case_generator(cfg.matrix, static_cast<std::size_t>(n));
        auto mask = make_mask(cfg.mask, base);
        validate_frozen_mask(mask);
        MatrixSource masked(cfg, static_cast<std::size_t>(n), std::move(mask), is_gaussian(cfg));
        MatrixSource plain(cfg, static_cast<std::size_t>(n), std::nullopt, is_gaussian(cfg));
        CurveRun run;
        run.n = n;
        run.records = run_records(masked, cfg, "cond-tail", n);
        mark_condition_hits(run.records, n, cfg.B.front());
        run.points = condition_points(run.records, n, cfg.B);
        const auto unmasked = run_records(plain, cfg, "cond-tail", n);
        run.baseline = condition_points(unmasked, n, cfg.B);
        run.comparable = all_overlap(run.points, run.baseline);
        res.runs.push_back(std::move(run));
    }
    res.wall_seconds = seconds_since(start);
    return res;
}

SingularityResult singularity_probability(std::size_t n, const DiscreteDistribution& dist, unsigned threads,
                                          std::uint64_t budget) {
    if (n < 1 || n > 5) throw ValidationError("singularity_probability enumerates only n <= 5");
    if (!dist.is_exact()) throw ValidationError("singularity_probability needs a law with exact probabilities");
    const std::size_t s = dist.size();
    const std::size_t cells = n * n;
    BigInt total_count;
    mpz_ui_pow_ui(total_count.get_mpz_t(), s, cells);
    if (total_count > BigInt(static_cast<unsigned long>(budget))) {
        throw ResourceError("enumerating " + total_count.get_str() + " matrices exceeds the budget of " +
                            std::to_string(budget) + "; estimate by Monte Carlo instead");
    }
    BigInt den = 1;
    for (const auto& p : dist.exact_probabilities()) den = lcm(den, p.get_den());
    std::vector<std::int64_t> counts;
    for (const auto& p : dist.exact_probabilities()) counts.push_back(to_int64(BigInt(p.get_num() * (den / p.get_den()))));
    const bool uniform = std::all_of(counts.begin(), counts.end(), [&](std::int64_t c) { return c == counts[0]; });
    const auto values = dist.values();

    // Chunks fix the first `lead` cells; each enumerates the remaining ones.
    std::size_t lead = 0;
    std::uint64_t chunks = 1;
    while (lead < cells && chunks < 256) {
        chunks *= s;
        ++lead;
    }
    std::vector<__int128> weight(chunks, 0);
    std::vector<std::uint64_t> singular_count(chunks, 0);
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        std::vector<std::int64_t> entries(cells);
        std::vector<std::size_t> digit(cells, 0);
        std::size_t c = chunk;
        for (std::size_t i = lead; i-- > 0;) {
            digit[i] = c % s;
            c /= s;
        }
        for (std::size_t i = 0; i < cells; ++i) entries[i] = values[digit[i]];
        __int128 acc = 0;
        std::uint64_t found = 0;
        while (true) {
            auto det = determinant_i128(entries, n);
            const bool zero = det ? *det == 0 : exact_determinant(IntegerMatrix(n, entries)) == 0;
            if (zero) {
                ++found;
                if (!uniform) {
                    __int128 w = 1;
                    for (std::size_t i = 0; i < cells; ++i) {
                        if (__builtin_mul_overflow(w, static_cast<__int128>(counts[digit[i]]), &w)) {
                            throw OverflowError("matrix weight exceeds 127 bits");
                        }
                    }
                    if (__builtin_add_overflow(acc, w, &acc)) throw OverflowError("singular weight exceeds 127 bits");
                }
            }
            std::size_t i = cells;
            while (i > lead) {
                --i;
                if (++digit[i] < s) {
                    entries[i] = values[digit[i]];
                    break;
                }
                digit[i] = 0;
                entries[i] = values[0];
                if (i == lead) {
                    i = cells + 1;  // odometer wrapped
                    break;
                }
            }
            if (i == cells + 1 || lead == cells) break;
        }
        weight[chunk] = acc;
        singular_count[chunk] = found;
    });

    SingularityResult out;
    mpz_pow_ui(out.total_weight.get_mpz_t(), den.get_mpz_t(), cells);
    out.singular_weight = 0;
    std::uint64_t found = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        out.singular_weight += from_int128(weight[c]);
        found += singular_count[c];
    }
    if (uniform) {
        BigInt per;
        const BigInt c0 = static_cast<long>(counts[0]);
        mpz_pow_ui(per.get_mpz_t(), c0.get_mpz_t(), cells);
        out.singular_weight = BigInt(static_cast<unsigned long>(found)) * per;
    }
    out.matrices = total_count.get_ui();
    out.probability = Rational(out.singular_weight, out.total_weight);
    out.probability.canonicalize();
    return out;
}

Precision parse_precision(std::string_view s) {
    if (s == "single") return Precision::single;
    if (s == "double") return Precision::double_precision;
    throw ValidationError("precision must be 'single' or 'double'");
}

double machine_epsilon(Precision p) { return p == Precision::single ? 0x1.0p-24 : 0x1.0p-53; }

namespace {

template <class T>
std::optional<std::vector<double>> eliminate(const RealMatrix& a, std::span<const double> b) {
    const std::size_t n = a.n();
    std::vector<T> m(n * n), r(n);
    for (std::size_t k = 0; k < n * n; ++k) m[k] = static_cast<T>(a.entries()[k]);
    for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<T>(b[i]);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(m[i * n + k]) > std::fabs(m[piv * n + k])) piv = i;
        }
        if (m[piv * n + k] == T(0)) return std::nullopt;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
            std::swap(r[k], r[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = m[i * n + k] / m[k * n + k];
            if (f == T(0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
            r[i] -= f * r[k];
        }
    }
    std::vector<double> x(n);
    std::vector<T> xt(n);
    for (std::size_t i = n; i-- > 0;) {
        T s = r[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i * n + j] * xt[j];
        xt[i] = s / m[i * n + i];
        x[i] = static_cast<double>(xt[i]);
    }
    return x;
}

}  // namespace

std::optional<std::vector<double>> solve_partial_pivoting(const RealMatrix& a, std::span<const double> b,
                                                          Precision p) {
    if (b.size() != a.n()) throw ValidationError("solve_partial_pivoting: right-hand side has wrong length");
    return p == Precision::single ? eliminate<float>(a, b) : eliminate<double>(a, b);
}

GeResult ge_error_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (is_gaussian(cfg)) throw ValidationError("ge-check solves integer systems and needs a discrete noise law");
    const auto start = Clock::now();
    GeResult res;
    res.config = cfg;
    res.precision = parse_precision(cfg.precision);
    res.epsilon = machine_epsilon(res.precision);
    std::vector<unsigned char> exact_ok;
    for (auto n : cfg.n) {
        MatrixSource src(cfg, static_cast<std::size_t>(n), std::nullopt, false);
        const std::uint64_t stream = stream_id("ge-check:" + std::to_string(n));
        const std::uint64_t rhs_stream = stream_id("ge-check-rhs:" + std::to_string(n));
        const std::size_t offset = res.records.size();
        res.records.resize(offset + static_cast<std::size_t>(cfg.trials));
        exact_ok.resize(res.records.size(), 1);
        parallel_for(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
            auto& rec = res.records[offset + t];
            rec.trial = static_cast<std::int64_t>(t);
            rec.n = n;
            rec.seed = derive_seed(cfg.seed, stream, t);
            const auto d = src.draw(rec.seed);
            const auto& a = *d.integer;
            Rng rng(derive_seed(cfg.seed, rhs_stream, t));
            std::vector<Rational> b(static_cast<std::size_t>(n));
            std::vector<double> bd(static_cast<std::size_t>(n));
            bool nonzero = false;
            for (std::size_t i = 0; i < b.size(); ++i) {
                const auto v = static_cast<long>(rng.below(21)) - 10;
                b[i] = v;
                bd[i] = static_cast<double>(v);
                nonzero = nonzero || v != 0;
            }
            if (!nonzero) {
                b[0] = 1;
                bd[0] = 1.0;
            }
            if (is_singular(a)) {
                rec.singular = true;
                rec.kappa = inf;
                return;
            }
            const auto x = *exact_solve(a, b);
            for (std::size_t i = 0; i < b.size(); ++i) {
                Rational s = 0;
                for (std::size_t j = 0; j < b.size(); ++j) s += Rational(static_cast<long>(a(i, j))) * x[j];
                if (s != b[i]) exact_ok[offset + t] = 0;
            }
            rec.kappa = condition_number(svd(d.real)).kappa;
            const auto approx = solve_partial_pivoting(d.real, bd, res.precision);
            if (!approx) {
                rec.relative_error = inf;
                rec.ratio = inf;
                return;
            }
            Rational err2 = 0, norm2 = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const Rational diff = Rational((*approx)[i]) - x[i];
                err2 += diff * diff;
                norm2 += x[i] * x[i];
            }
            rec.relative_error = static_cast<double>(std::sqrt(to_long_double(err2) / to_long_double(norm2)));
            rec.ratio = rec.relative_error / (res.epsilon * rec.kappa);
        });
    }
    for (std::size_t i = 0; i < res.records.size(); ++i) {
        const auto& r = res.records[i];
        if (!exact_ok[i]) res.reference_exact = false;
        if (r.singular) {
            ++res.singular_draws;
            continue;
        }
        if (r.kappa <= cfg.well_conditioned) {
            ++res.well_conditioned;
            if (r.ratio <= 100.0) ++res.within_100;
        }
    }
    res.fraction_within = wilson(res.within_100, std::max<std::int64_t>(res.well_conditioned, 1));
    if (res.well_conditioned == 0) res.fraction_within = Proportion{};
    res.wall_seconds = seconds_since(start);
    return res;
}

MinorsResult minors_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::int64_t n = cfg.n.front();
    if (n > 300) throw ValidationError("minors_experiment is limited to n <= 300");
    const auto start = Clock::now();
    MinorsResult res;
    res.config = cfg;
    res.n = n;
    res.B = cfg.B.front();
    const auto base = worst_case_generator(cfg.matrix, static_cast<std::size_t>(n));
    MatrixSource src(cfg, static_cast<std::size_t>(n), make_mask(cfg.mask, base), is_gaussian(cfg));
    const std::uint64_t stream = stream_id("minors:" + std::to_string(n));
    const double good = std::pow(static_cast<double>(n), res.B);
    const auto nn = static_cast<std::size_t>(n);
    res.trials.resize(static_cast<std::size_t>(cfg.trials));
    res.minors.resize(res.trials.size() * nn);
    parallel_for(res.trials.size(), cfg.threads, [&](std::size_t t) {
        auto& tr = res.trials[t];
        tr.trial = static_cast<std::int64_t>(t);
        tr.seed = derive_seed(cfg.seed, stream, t);
        const auto d = src.draw(tr.seed);
        for (std::size_t k = 1; k <= nn; ++k) {
            std::vector<double> block(k * k);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) block[i * k + j] = d.real(i, j);
            }
            ExperimentRecord rec;
            std::optional<IntegerMatrix> minor;
            if (d.integer) minor = d.integer->leading_minor(k);
            measure(RealMatrix(k, std::move(block)), minor ? &*minor : nullptr, rec);
            auto& mr = res.minors[t * nn + (k - 1)];
            mr.trial = tr.trial;
            mr.k = static_cast<std::int64_t>(k);
            mr.kappa = rec.kappa;
            mr.singular = rec.singular;
            if (k == 1 || rec.kappa > tr.max_kappa) {
                tr.max_kappa = rec.kappa;
                tr.worst_minor = static_cast<std::int64_t>(k);
            }
        }
        tr.all_good = tr.max_kappa <= good;
    });
    std::int64_t ok = 0;
    for (const auto& tr : res.trials) ok += tr.all_good ? 1 : 0;
    res.all_good = wilson(ok, cfg.trials);
    res.wall_seconds = seconds_since(start);
    return res;
}

namespace {

std::string num(double x) { return format_double(x); }

void write_point(std::ostream& o, const Proportion& p) {
    o << p.hits << ',' << p.trials << ',' << num(p.estimate) << ',' << num(p.lower) << ',' << num(p.upper);
}

nlohmann::json jnum(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

nlohmann::json jprop(const Proportion& p) {
    return {{"hits", p.hits}, {"trials", p.trials}, {"estimate", p.estimate}, {"lower", p.lower}, {"upper", p.upper}};
}

nlohmann::json jconfig(const ExperimentConfig& c) {
    return {{"kind", c.kind},   {"n", c.n},         {"trials", c.trials}, {"seed", c.seed},
            {"noise", c.noise}, {"matrix", c.matrix}, {"mask", c.mask},   {"A", c.A},
            {"B", c.B},         {"C", c.C},         {"K", c.K},           {"alpha", c.alpha},
            {"precision", c.precision}};
}

nlohmann::json jpoints(const std::vector<ExceedancePoint>& pts) {
    auto arr = nlohmann::json::array();
    for (const auto& p : pts) {
        arr.push_back({{"parameter", p.parameter}, {"threshold", jnum(p.threshold)}, {"probability", jprop(p.probability)}});
    }
    return arr;
}

}  // namespace

void write_records_csv(std::ostream& o, const CurveResult& r) {
    o << "# smoothlab " << r.kind << " records v1\n";
    o << "trial,seed,n,sigma_max,sigma_min,kappa,singular,tail_hit\n";
    for (const auto& run : r.runs) {
        for (const auto& x : run.records) {
            o << x.trial << ',' << x.seed << ',' << x.n << ',' << num(x.sigma_max) << ',' << num(x.sigma_min) << ','
              << num(x.kappa) << ',' << (x.singular ? 1 : 0) << ',' << (x.tail_hit ? 1 : 0) << '\n';
        }
    }
}

void write_curve_csv(std::ostream& o, const CurveResult& r) {
    o << "# smoothlab " << r.kind << " curve v1\n";
    o << "n,parameter,threshold,hits,trials,estimate,lower,upper,baseline_hits,baseline_estimate,baseline_lower,"
         "baseline_upper\n";
    for (const auto& run : r.runs) {
        for (std::size_t i = 0; i < run.points.size(); ++i) {
            const auto& p = run.points[i];
            o << run.n << ',' << num(p.parameter) << ',' << num(p.threshold) << ',';
            write_point(o, p.probability);
            if (i < run.baseline.size()) {
                const auto& b = run.baseline[i].probability;
                o << ',' << b.hits << ',' << num(b.estimate) << ',' << num(b.lower) << ',' << num(b.upper);
            } else {
                o << ",,,,";
            }
            o << '\n';
        }
    }
}

void write_ge_csv(std::ostream& o, const GeResult& r) {
    o << "# smoothlab ge-check records v1\n";
    o << "trial,seed,n,kappa,singular,relative_error,ratio\n";
    for (const auto& x : r.records) {
        o << x.trial << ',' << x.seed << ',' << x.n << ',' << num(x.kappa) << ',' << (x.singular ? 1 : 0) << ','
          << num(x.relative_error) << ',' << num(x.ratio) << '\n';
    }
}

void write_minors_csv(std::ostream& o, const MinorsResult& r) {
    o << "# smoothlab minors records v1\n";
    o << "trial,k,kappa,singular\n";
    for (const auto& m : r.minors) {
        o << m.trial << ',' << m.k << ',' << num(m.kappa) << ',' << (m.singular ? 1 : 0) << '\n';
    }
}

void write_singularity_csv(std::ostream& o, std::size_t n, const DiscreteDistribution& dist,
                           const SingularityResult& r) {
    o << "# smoothlab singularity v1\n";
    o << "n,law,matrices,singular_weight,total_weight,probability,probability_decimal\n";
    o << n << ',' << dist.name() << ',' << r.matrices << ',' << r.singular_weight.get_str() << ','
      << r.total_weight.get_str() << ',' << to_string(r.probability) << ','
      << num(static_cast<double>(to_long_double(r.probability))) << '\n';
}

std::string summary_json(const CurveResult& r) {
    nlohmann::json j;
    j["kind"] = r.kind;
    j["config"] = jconfig(r.config);
    j["wall_seconds"] = r.wall_seconds;
    auto runs = nlohmann::json::array();
    for (const auto& run : r.runs) {
        nlohmann::json x;
        x["n"] = run.n;
        std::int64_t singular = 0;
        for (const auto& rec : run.records) singular += rec.singular ? 1 : 0;
        x["singular_draws"] = singular;
        x["points"] = jpoints(run.points);
        if (run.fit) {
            x["slope"] = run.fit->slope;
            x["slope_points"] = run.fit->points;
            x["slope_in_range"] = run.fit->slope >= -1.3 && run.fit->slope <= -0.7;
        }
        if (!run.baseline.empty()) x["baseline"] = jpoints(run.baseline);
        if (run.comparable) x["comparable"] = *run.comparable;
        runs.push_back(std::move(x));
    }
    j["runs"] = std::move(runs);
    return j.dump(2) + "\n";
}

std::string summary_json(const GeResult& r) {
    nlohmann::json j;
    j["kind"] = "ge-check";
    j["config"] = jconfig(r.config);
    j["epsilon"] = r.epsilon;
    j["trials"] = r.records.size();
    j["singular_draws"] = r.singular_draws;
    j["well_conditioned"] = r.well_conditioned;
    j["within_100"] = r.within_100;
    j["fraction_within"] = jprop(r.fraction_within);
    j["pass"] = r.well_conditioned > 0 && r.fraction_within.estimate >= 0.95;
    j["reference_exact"] = r.reference_exact;
    j["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

std::string summary_json(const MinorsResult& r) {
    nlohmann::json j;
    j["kind"] = "minors";
    j["config"] = jconfig(r.config);
    j["n"] = r.n;
    j["B"] = r.B;
    j["all_good"] = jprop(r.all_good);
    double worst = 0;
    for (const auto& t : r.trials) worst = std::max(worst, t.max_kappa);
    j["max_kappa"] = jnum(worst);
    j["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

std::string summary_json(std::size_t n, const DiscreteDistribution& dist, const SingularityResult& r) {
    nlohmann::json j;
    j["kind"] = "singularity";
    j["n"] = n;
    j["law"] = dist.name();
    j["matrices"] = r.matrices;
    j["singular_weight"] = r.singular_weight.get_str();
    j["total_weight"] = r.total_weight.get_str();
    j["probability"] = to_string(r.probability);
    j["probability_decimal"] = static_cast<double>(to_long_double(r.probability));
    return j.dump(2) + "\n";
}

}  // namespace smoothlab
