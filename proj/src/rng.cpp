#include "converse/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace converse {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    // Two mixing rounds decorrelate the (seed, trial) lattice.
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (trial * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    state_ = splitmix64(s);
}

std::uint64_t TrialRng::next_u64() { return splitmix64(state_); }

double TrialRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrialRng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 is shifted into (0,1] so the log is finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t TrialRng::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("TrialRng::next_below: n must be positive");
    // Rejection sampling over the largest multiple of n below 2^64.
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

}  // namespace converse
