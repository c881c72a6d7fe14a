#include "smoothlab/stats.hpp"

#include "smoothlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace smoothlab {

Proportion wilson(std::int64_t hits, std::int64_t trials, double z) {
    if (trials <= 0) throw ValidationError("wilson interval needs at least one trial");
    if (hits < 0 || hits > trials) throw ValidationError("wilson interval: hits outside [0, trials]");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Proportion out;
    out.hits = hits;
    out.trials = trials;
    out.estimate = p;
    out.lower = std::max(0.0, center - half);
    out.upper = std::min(1.0, center + half);
    if (hits == 0) out.lower = 0.0;
    if (hits == trials) out.upper = 1.0;
    return out;
}

double wilson_standard_error(std::int64_t hits, std::int64_t trials) {
    auto p = wilson(hits, trials, 1.0);
    return 0.5 * (p.upper - p.lower);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("fit_line: size mismatch");
    if (x.size() < 2) throw ValidationError("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw ValidationError("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = x.size();
    return f;
}

}  // namespace smoothlab
