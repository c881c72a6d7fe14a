#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace smoothlab {

std::uint64_t splitmix64(std::uint64_t x);

// Stable 64-bit identifier for a named random stream (FNV-1a).
std::uint64_t stream_id(std::string_view name);

// Per-trial seed = hash(master seed, experiment id, trial index). Depends only on
// its arguments, so results do not depend on how trials are scheduled.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t experiment, std::uint64_t index);

// Seeded generator with platform-independent output. std::mt19937_64 is fully
// specified by the standard; the distributions below are implemented here
// because the std:: ones are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer on [0, bound), bound >= 1, without modulo bias.
    std::uint64_t below(std::uint64_t bound);

    // Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace smoothlab
