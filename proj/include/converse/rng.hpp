#pragma once

// Counter-based randomness for simulations: every trial gets its own stream
// derived from (seed, trial index), so results do not depend on scheduling or
// worker count. The generator is splitmix64; normals come from Box-Muller on
// top of it. Both are spelled out here rather than taken from <random>
// because libstdc++'s distributions are implementation-defined, which would
// break cross-build reproducibility at the distributional level.

#include <cstdint>

namespace converse {

std::uint64_t splitmix64(std::uint64_t& state);

class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next_u64();
    double next_double();                      // uniform in [0, 1)
    double next_normal();                      // standard normal, Box-Muller
    std::uint64_t next_below(std::uint64_t n); // uniform in [0, n), unbiased

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace converse
