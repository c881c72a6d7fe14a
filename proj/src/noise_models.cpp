#include "smoothlab/noise_models.hpp"

#include "smoothlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace smoothlab {

namespace {

constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;

// cos and sin of 2 pi r / grid with r reduced exactly modulo grid.
std::pair<long double, long double> unit_root(__int128 r, std::int64_t grid) {
    r %= grid;
    if (r < 0) r += grid;
    const long double angle = two_pi * static_cast<long double>(r) / static_cast<long double>(grid);
    return {std::cos(angle), std::sin(angle)};
}

long double char_magnitude_on_grid(const DiscreteDistribution& dist, std::int64_t j, std::int64_t grid) {
    long double re = 0, im = 0;
    auto values = dist.values();
    auto probs = dist.probabilities();
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto [c, s] = unit_root(static_cast<__int128>(values[i]) * j, grid);
        re += probs[i] * c;
        im += probs[i] * s;
    }
    return std::min(1.0L, std::hypot(re, im));
}

long double mean_abs(const DiscreteDistribution& dist) {
    long double m = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        m += dist.probabilities()[i] * std::fabs(static_cast<long double>(dist.values()[i]));
    }
    return m;
}

// Largest positive atom (smallest value on ties).
std::pair<std::int64_t, long double> best_positive_atom(const DiscreteDistribution& dist) {
    std::int64_t s = 0;
    long double eps = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const auto v = dist.values()[i];
        const auto p = dist.probabilities()[i];
        if (v > 0 && p > eps) {
            s = v;
            eps = p;
        }
    }
    return {s, eps};
}

}  // namespace

DiscreteDistribution DiscreteDistribution::exact(std::string name,
                                                 std::vector<std::pair<std::int64_t, Rational>> atoms) {
    std::map<std::int64_t, Rational> merged;
    Rational total = 0;
    for (auto& [v, p] : atoms) {
        p.canonicalize();
        if (sgn(p) < 0) throw ValidationError("negative probability in law '" + name + "'");
        merged[v] += p;
        total += p;
    }
    if (total != 1) throw ValidationError("probabilities of law '" + name + "' sum to " + total.get_str() + ", not 1");
    DiscreteDistribution d;
    d.name_ = std::move(name);
    for (auto& [v, p] : merged) {
        if (sgn(p) == 0) continue;
        d.values_.push_back(v);
        d.probs_.push_back(to_long_double(p));
        d.exact_.push_back(p);
    }
    return d;
}

DiscreteDistribution DiscreteDistribution::approximate(std::string name,
                                                       std::vector<std::pair<std::int64_t, long double>> atoms) {
    std::map<std::int64_t, long double> merged;
    long double total = 0;
    for (auto& [v, p] : atoms) {
        if (!(p >= 0) || !std::isfinite(p)) throw ValidationError("invalid probability in law '" + name + "'");
        merged[v] += p;
        total += p;
    }
    if (std::fabs(total - 1.0L) > 1e-12L) {
        throw ValidationError("probabilities of law '" + name + "' are not normalized");
    }
    DiscreteDistribution d;
    d.name_ = std::move(name);
    for (auto& [v, p] : merged) {
        if (p == 0) continue;
        d.values_.push_back(v);
        d.probs_.push_back(p / total);
    }
    if (d.values_.empty()) throw ValidationError("law '" + d.name_ + "' has no atoms");
    return d;
}

std::int64_t DiscreteDistribution::max_abs_value() const {
    std::int64_t m = 0;
    for (auto v : values_) {
        if (v == INT64_MIN) throw OverflowError("support value -2^63 has no 64-bit absolute value");
        m = std::max(m, v < 0 ? -v : v);
    }
    return m;
}

long double DiscreteDistribution::probability_of(std::int64_t value) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), value);
    if (it == values_.end() || *it != value) return 0;
    return probs_[static_cast<std::size_t>(it - values_.begin())];
}

bool DiscreteDistribution::is_symmetric() const {
    const std::size_t n = values_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        if (values_[i] != -values_[j]) return false;
        if (is_exact()) {
            if (exact_[i] != exact_[j]) return false;
        } else if (std::fabs(probs_[i] - probs_[j]) > 1e-18L) {
            return false;
        }
    }
    return true;
}

bool DiscreteDistribution::operator==(const DiscreteDistribution& other) const {
    return values_ == other.values_ && probs_ == other.probs_ && exact_ == other.exact_;
}

void BoundednessCertificate::validate() const {
    if (!(mu > 0.0)) throw ValidationError("certificate mu must be positive");
    if (mu > 0.5) throw ValidationError("certificate rejected: mu > 1/2 makes (1-mu) + mu cos(2 pi k t) negative");
    if (k < 1 || k > d_bound) throw ValidationError("certificate needs 1 <= k <= D");
}

long double char_magnitude(const DiscreteDistribution& dist, long double t) {
    if (!(t >= 0 && t < 1)) throw ValidationError("char_magnitude expects t in [0, 1)");
    long double re = 0, im = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const long double phase = std::fmod(static_cast<long double>(dist.values()[i]) * t, 1.0L);
        re += dist.probabilities()[i] * std::cos(two_pi * phase);
        im += dist.probabilities()[i] * std::sin(two_pi * phase);
    }
    return std::min(1.0L, std::hypot(re, im));
}

std::int64_t min_certificate_grid(const DiscreteDistribution& dist, const BoundednessCertificate& cert) {
    return checked_mul(4, checked_add(cert.k, dist.max_abs_value()));
}

CertificateCheck verify_certificate(const DiscreteDistribution& dist, const BoundednessCertificate& cert,
                                    std::int64_t grid_size) {
    cert.validate();
    if (grid_size < min_certificate_grid(dist, cert)) {
        throw ValidationError("grid too coarse: need at least 4 * (k + max|support|) = " +
                              std::to_string(min_certificate_grid(dist, cert)) + " points");
    }
    const long double mu = cert.mu;
    CertificateCheck out;
    out.grid_points = grid_size;
    out.worst_slack = INFINITY;
    for (std::int64_t j = 0; j < grid_size; ++j) {
        const long double phi = char_magnitude_on_grid(dist, j, grid_size);
        const long double bound = (1 - mu) + mu * unit_root(static_cast<__int128>(cert.k) * j, grid_size).first;
        const long double slack = bound - phi;
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            out.worst_t = static_cast<long double>(j) / static_cast<long double>(grid_size);
        }
    }
    out.holds = out.worst_slack >= -1e-12L;
    out.lipschitz_margin = std::numbers::pi_v<long double> * (mean_abs(dist) + mu * static_cast<long double>(cert.k)) /
                           static_cast<long double>(grid_size);
    out.rigorous = out.worst_slack >= out.lipschitz_margin;
    return out;
}

BoundednessCertificate certificate_from_symmetric(const DiscreteDistribution& dist) {
    if (!dist.is_symmetric()) throw ValidationError("certificate_from_symmetric: law '" + dist.name() + "' is not symmetric");
    auto [s, eps] = best_positive_atom(dist);
    if (s == 0) throw ConstructionError("certificate_from_symmetric: law '" + dist.name() + "' has no positive atom");
    BoundednessCertificate cert;
    cert.mu = static_cast<double>(eps / 2);
    cert.k = checked_mul(2, s);
    cert.d_bound = cert.k;
    const auto grid = std::max<std::int64_t>(4096, min_certificate_grid(dist, cert));
    auto check = verify_certificate(dist, cert, grid);
    if (!check.holds) {
        throw ConstructionError("certificate_from_symmetric: derived certificate failed verification for '" +
                                dist.name() + "'");
    }
    cert.verified_grid_points = grid;
    return cert;
}

ChainCheck check_symmetric_chain(const DiscreteDistribution& dist, std::int64_t grid_size) {
    if (!dist.is_symmetric()) throw ValidationError("check_symmetric_chain: law is not symmetric");
    if (grid_size < 1) throw ValidationError("check_symmetric_chain: empty grid");
    auto [s, eps] = best_positive_atom(dist);
    if (s == 0) throw ConstructionError("check_symmetric_chain: no positive atom");
    ChainCheck out;
    out.s = s;
    out.eps = eps;
    out.first_slack = INFINITY;
    out.second_slack = INFINITY;
    for (std::int64_t j = 0; j < grid_size; ++j) {
        const long double phi = char_magnitude_on_grid(dist, j, grid_size);
        const long double c1 = unit_root(static_cast<__int128>(s) * j, grid_size).first;
        const long double c2 = unit_root(static_cast<__int128>(2 * s) * j, grid_size).first;
        const long double middle = (1 - 2 * eps) + std::fabs(2 * eps * c1);
        const long double right = (1 - eps / 2) + (eps / 2) * c2;
        out.first_slack = std::min(out.first_slack, middle - phi);
        out.second_slack = std::min(out.second_slack, right - middle);
    }
    out.holds = out.first_slack >= -1e-12L && out.second_slack >= -1e-12L;
    return out;
}

DiscreteDistribution bernoulli() {
    return DiscreteDistribution::exact("bernoulli", {{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
}

DiscreteDistribution lazy_coin(Rational alpha) {
    alpha.canonicalize();
    if (sgn(alpha) <= 0 || alpha > 1) throw ValidationError("lazy coin needs alpha in (0, 1]");
    Rational half = alpha / 2;
    return DiscreteDistribution::exact("lazy:" + alpha.get_str(), {{-1, half}, {0, Rational(1) - alpha}, {1, half}});
}

DiscreteDistribution point_mass(std::int64_t value) {
    return DiscreteDistribution::exact("point:" + std::to_string(value), {{value, Rational(1)}});
}

DiscreteDistribution uniform_symmetric(std::int64_t r) {
    if (r < 0) throw ValidationError("uniform_symmetric needs r >= 0");
    if (r > 1'000'000) throw ResourceError("uniform_symmetric: support too large");
    std::vector<std::pair<std::int64_t, Rational>> atoms;
    for (std::int64_t v = -r; v <= r; ++v) atoms.emplace_back(v, Rational(1, 2 * r + 1));
    return DiscreteDistribution::exact("uniform:" + std::to_string(r), std::move(atoms));
}

DiscreteDistribution symmetric_discretization(std::string name,
                                              const std::function<long double(long double)>& upper_tail,
                                              double radius) {
    if (!(radius >= 1.0) || radius > 1e6) throw ValidationError("discretization radius must lie in [1, 1e6]");
    const auto r = static_cast<std::int64_t>(std::ceil(radius));
    std::vector<long double> half(static_cast<std::size_t>(r) + 1);
    half[0] = 1.0L - 2.0L * upper_tail(0.5L);
    for (std::int64_t m = 1; m < r; ++m) {
        half[static_cast<std::size_t>(m)] = upper_tail(m - 0.5L) - upper_tail(m + 0.5L);
    }
    // everything beyond r - 1/2 lands on the extreme atom
    half[static_cast<std::size_t>(r)] = upper_tail(r - 0.5L);
    std::vector<std::pair<std::int64_t, long double>> atoms;
    for (std::int64_t m = -r; m <= r; ++m) atoms.emplace_back(m, half[static_cast<std::size_t>(m < 0 ? -m : m)]);
    return DiscreteDistribution::approximate(std::move(name), std::move(atoms));
}

DiscreteDistribution discretized_gaussian(double truncation_radius) {
    if (!(truncation_radius >= 6.0)) throw ValidationError("discretized Gaussian needs truncation radius >= 6");
    auto tail = [](long double x) { return 0.5L * std::erfc(x / std::sqrt(2.0L)); };
    std::ostringstream name;
    name << "dgauss:" << truncation_radius;
    return symmetric_discretization(name.str(), tail, truncation_radius);
}

DiscreteDistribution make_standard(std::string_view spec) {
    auto colon = spec.find(':');
    std::string_view head = spec.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    auto need_arg = [&] {
        if (arg.empty()) throw ValidationError("noise spec '" + std::string(spec) + "' needs an argument");
    };
    if (head == "bernoulli") return bernoulli();
    if (head == "lazy") {
        need_arg();
        return lazy_coin(parse_rational(arg));
    }
    if (head == "dgauss") return discretized_gaussian(arg.empty() ? 8.0 : std::stod(std::string(arg)));
    if (head == "point") {
        need_arg();
        return point_mass(to_int64(BigInt(std::string(arg))));
    }
    if (head == "uniform") {
        need_arg();
        return uniform_symmetric(to_int64(BigInt(std::string(arg))));
    }
    if (head == "file") {
        need_arg();
        return load_distribution(std::string(arg));
    }
    throw ValidationError("unknown noise spec '" + std::string(spec) + "'");
}

DiscreteDistribution parse_distribution(std::string_view text, std::string name) {
    std::vector<std::pair<std::int64_t, Rational>> atoms;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string value, prob, extra;
        if (!(fields >> value)) continue;
        if (!(fields >> prob) || (fields >> extra)) {
            throw ValidationError("line " + std::to_string(lineno) + ": expected 'value probability'");
        }
        Rational v = parse_rational(value);
        if (v.get_den() != 1) throw ValidationError("line " + std::to_string(lineno) + ": support values must be integers");
        atoms.emplace_back(to_int64(v.get_num()), parse_rational(prob));
    }
    if (atoms.empty()) throw ValidationError("law '" + name + "' has no atoms");
    Rational total = 0;
    for (auto& a : atoms) total += a.second;
    if (total == 1) return DiscreteDistribution::exact(std::move(name), std::move(atoms));
    // rounded decimals: accept as an approximate law when within tolerance
    std::vector<std::pair<std::int64_t, long double>> approx;
    for (auto& [v, p] : atoms) approx.emplace_back(v, to_long_double(p));
    return DiscreteDistribution::approximate(std::move(name), std::move(approx));
}

DiscreteDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open distribution file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_distribution(buf.str(), "file:" + path);
}

Sampler::Sampler(const DiscreteDistribution& dist)
    : values_(dist.values().begin(), dist.values().end()) {
    long double acc = 0;
    for (auto p : dist.probabilities()) {
        acc += p;
        cdf_.push_back(static_cast<double>(acc));
    }
    cdf_.back() = 1.0;
}

std::int64_t Sampler::draw(Rng& rng) const {
    const double u = rng.uniform01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return values_[static_cast<std::size_t>(it - cdf_.begin())];
}

std::vector<std::int64_t> sample_vector(std::span<const DiscreteDistribution> dist_per_coord, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::int64_t> out;
    out.reserve(dist_per_coord.size());
    for (const auto& d : dist_per_coord) out.push_back(Sampler(d).draw(rng));
    return out;
}

}  // namespace smoothlab
