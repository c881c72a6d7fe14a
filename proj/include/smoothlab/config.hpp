#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smoothlab {

/// Parameters shared by all experiments.
///
/// File format: "key = value" lines, '#' comments, and optional "[name]"
/// sections. Top-level keys apply to every experiment; keys inside the section
/// named after the experiment override them; other sections are ignored. Lists
/// are comma separated. to_text writes every key and parse_config reads it back
/// to an equal object (doubles are written with 17 significant digits).
struct ExperimentConfig {
    std::string kind = "cond-tail";
    std::vector<std::int64_t> n = {50};
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string noise = "bernoulli";  // "gaussian" or a noise_models spec
    std::string matrix = "zero";      // worst_case_generator spec
    std::string mask = "none";        // make_mask spec
    double A = 1.0;
    std::vector<double> B = {1, 2, 3, 4, 5, 6};
    double C = 1.0;
    double K = 0.0;
    double alpha = 0.5;
    // Tail grid for |(M+N)^-1|: x_points log-spaced values in [x_min, x_max];
    // x_min = x_max = 0 spans the observed finite values.
    double x_min = 0.0;
    double x_max = 0.0;
    std::int64_t x_points = 40;
    std::string precision = "single";  // "single" or "double"
    bool baseline = false;             // cond-tail: also run Gaussian noise at matched n
    double well_conditioned = 1000.0;  // ge-check: kappa cut for the ratio statistics
    unsigned threads = 1;
    std::string out;

    // Throws ValidationError when a field is out of range.
    void validate() const;
    std::string to_text() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Reads top-level keys, then the keys of section `experiment` when it is not
/// empty. Unknown keys are a ValidationError.
ExperimentConfig parse_config(std::string_view text, std::string_view experiment = {});
ExperimentConfig load_config(const std::string& path, std::string_view experiment = {});

/// Applies one "key = value" assignment.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Shortest decimal string that reads back to exactly x.
std::string format_double(double x);

}  // namespace smoothlab
