#pragma once

#include <cstdint>
#include <span>

namespace smoothlab {

inline constexpr double z95 = 1.959963984540054;
inline constexpr double z99 = 2.5758293035489004;

struct Proportion {
    std::int64_t hits = 0;
    std::int64_t trials = 0;
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 1.0;
};

// Wilson score interval for hits/trials at normal quantile z.
Proportion wilson(std::int64_t hits, std::int64_t trials, double z = z95);

// Wilson half-width at z = 1, used as a standard error that stays positive at 0 hits.
double wilson_standard_error(std::int64_t hits, std::int64_t trials);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y ~ intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace smoothlab
