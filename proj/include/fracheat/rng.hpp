#pragma once

#include <cstdint>

namespace fracheat {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: each (key, counter) pair yields an independent 128-bit block,
/// so lattice cells and replicates can be addressed directly.
struct Philox4x32 {
    static void block(const uint32_t key_in[2], const uint32_t counter_in[4],
                      uint32_t out[4]);
};

/// Standard normal draw addressed by (seed, replicate, time cell, space cell).
/// Box-Muller over the first two lanes of one Philox block.
double gaussian_at(uint64_t seed, uint32_t replicate, uint32_t n, uint32_t j);

/// Uniform in (0,1) from the last two lanes (independent of gaussian_at's pair).
double uniform_at(uint64_t seed, uint32_t replicate, uint32_t n, uint32_t j);

} // namespace fracheat
