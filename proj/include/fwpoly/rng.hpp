#pragma once

#include <cstdint>

namespace fwpoly {

// Deterministic per-trial random stream. The substream for (master, index) is
// seeded as splitmix64(splitmix64(master) ^ splitmix64(index * GOLDEN + 1)),
// then iterated with splitmix64; the same pair always yields the bit-identical
// sequence regardless of scheduling. Gaussians come from an internal
// Box-Muller transform (never from std::normal_distribution, whose output is
// implementation-defined).
class RngStream {
public:
    explicit RngStream(std::uint64_t master, std::uint64_t trial_index = 0);

    std::uint64_t next_u64();
    double uniform();   // [0, 1), 53-bit resolution
    double gaussian();  // standard normal

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fwpoly
