#include "smoothlab/config.hpp"

#include "smoothlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace smoothlab {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string bad(std::string_view key, std::string_view value, const char* expected) {
    return "config key '" + std::string(key) + "': expected " + expected + ", got '" + std::string(value) + "'";
}

template <class T>
T parse_number(std::string_view key, std::string_view value, const char* expected) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ValidationError(bad(key, value, expected));
    return out;
}

std::vector<std::string_view> split_list(std::string_view value) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = value.find(',', pos);
        out.push_back(trim(value.substr(pos, comma == std::string_view::npos ? value.size() - pos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_same_v<T, double>) {
            out += format_double(xs[i]);
        } else {
            out += std::to_string(xs[i]);
        }
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw Error("format_double failed");
    return std::string(buf, ptr);
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "kind") {
        c.kind = std::string(value);
    } else if (key == "n") {
        c.n.clear();
        for (auto v : split_list(value)) c.n.push_back(parse_number<std::int64_t>(key, v, "a list of integers"));
    } else if (key == "trials") {
        c.trials = parse_number<std::int64_t>(key, value, "an integer");
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value, "an unsigned 64-bit integer");
    } else if (key == "noise") {
        c.noise = std::string(value);
    } else if (key == "matrix") {
        c.matrix = std::string(value);
    } else if (key == "mask") {
        c.mask = std::string(value);
    } else if (key == "A") {
        c.A = parse_number<double>(key, value, "a number");
    } else if (key == "B") {
        c.B.clear();
        for (auto v : split_list(value)) c.B.push_back(parse_number<double>(key, v, "a list of numbers"));
    } else if (key == "C") {
        c.C = parse_number<double>(key, value, "a number");
    } else if (key == "K") {
        c.K = parse_number<double>(key, value, "a number");
    } else if (key == "alpha") {
        c.alpha = parse_number<double>(key, value, "a number");
    } else if (key == "x_min") {
        c.x_min = parse_number<double>(key, value, "a number");
    } else if (key == "x_max") {
        c.x_max = parse_number<double>(key, value, "a number");
    } else if (key == "x_points") {
        c.x_points = parse_number<std::int64_t>(key, value, "an integer");
    } else if (key == "precision") {
        c.precision = std::string(value);
    } else if (key == "baseline") {
        if (value == "true") {
            c.baseline = true;
        } else if (value == "false") {
            c.baseline = false;
        } else {
            throw ValidationError(bad(key, value, "true or false"));
        }
    } else if (key == "well_conditioned") {
        c.well_conditioned = parse_number<double>(key, value, "a number");
    } else if (key == "threads") {
        c.threads = parse_number<unsigned>(key, value, "a nonnegative integer");
    } else if (key == "out") {
        c.out = std::string(value);
    } else {
        throw ValidationError("unknown config key '" + std::string(key) + "'");
    }
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ValidationError("trials must be at least 1");
    if (n.empty()) throw ValidationError("n list is empty");
    for (auto v : n) {
        if (v < 1) throw ValidationError("every n must be at least 1");
    }
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(A) || A <= 0) throw ValidationError("A must be positive");
    if (!finite(C) || C < 0) throw ValidationError("C must be nonnegative");
    if (!finite(K) || K < 0) throw ValidationError("K must be nonnegative");
    if (!finite(alpha) || alpha <= 0 || alpha >= 1) throw ValidationError("alpha must lie in (0, 1)");
    if (B.empty()) throw ValidationError("B list is empty");
    for (double b : B) {
        if (!finite(b) || b < 0) throw ValidationError("every B must be a nonnegative number");
    }
    if (!finite(x_min) || !finite(x_max) || x_min < 0 || x_max < 0) throw ValidationError("x_min, x_max must be >= 0");
    if (x_min > 0 && x_max > 0 && x_min >= x_max) throw ValidationError("x_min must be below x_max");
    if ((x_min > 0) != (x_max > 0)) throw ValidationError("set both x_min and x_max, or neither");
    if (x_points < 2) throw ValidationError("x_points must be at least 2");
    if (precision != "single" && precision != "double") throw ValidationError("precision must be single or double");
    if (!finite(well_conditioned) || well_conditioned < 1) throw ValidationError("well_conditioned must be >= 1");
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream o;
    o << "kind = " << kind << "\n";
    o << "n = " << join(n) << "\n";
    o << "trials = " << trials << "\n";
    o << "seed = " << seed << "\n";
    o << "noise = " << noise << "\n";
    o << "matrix = " << matrix << "\n";
    o << "mask = " << mask << "\n";
    o << "A = " << format_double(A) << "\n";
    o << "B = " << join(B) << "\n";
    o << "C = " << format_double(C) << "\n";
    o << "K = " << format_double(K) << "\n";
    o << "alpha = " << format_double(alpha) << "\n";
    o << "x_min = " << format_double(x_min) << "\n";
    o << "x_max = " << format_double(x_max) << "\n";
    o << "x_points = " << x_points << "\n";
    o << "precision = " << precision << "\n";
    o << "baseline = " << (baseline ? "true" : "false") << "\n";
    o << "well_conditioned = " << format_double(well_conditioned) << "\n";
    o << "threads = " << threads << "\n";
    o << "out = " << out << "\n";
    return o.str();
}

ExperimentConfig parse_config(std::string_view text, std::string_view experiment) {
    ExperimentConfig c;
    std::string section;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError("config line " + std::to_string(line_no) + ": bad section");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) {
            set_config_value(c, key, value);
        } else if (!experiment.empty() && section == experiment) {
            overrides.emplace_back(key, value);
        } else {
            // Keys of other sections are still checked so typos do not pass silently.
            ExperimentConfig scratch;
            set_config_value(scratch, key, value);
        }
    }
    for (const auto& [k, v] : overrides) set_config_value(c, k, v);
    if (!experiment.empty()) c.kind = std::string(experiment);
    return c;
}

ExperimentConfig load_config(const std::string& path, std::string_view experiment) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), experiment);
}

}  // namespace smoothlab
