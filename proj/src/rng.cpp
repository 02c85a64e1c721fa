#include "fracheat/rng.hpp"

#include <cmath>
#include <numbers>

namespace fracheat {

namespace {

constexpr uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    lo = static_cast<uint32_t>(p);
    hi = static_cast<uint32_t>(p >> 32);
}

inline void one_round(uint32_t ctr[4], const uint32_t key[2]) {
    uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    const uint32_t r0 = hi1 ^ ctr[1] ^ key[0];
    const uint32_t r1 = lo1;
    const uint32_t r2 = hi0 ^ ctr[3] ^ key[1];
    const uint32_t r3 = lo0;
    ctr[0] = r0;
    ctr[1] = r1;
    ctr[2] = r2;
    ctr[3] = r3;
}

inline double to_unit(uint32_t hi, uint32_t lo) {
    const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
    // (0,1): 53 significand bits, offset by half an ulp away from zero
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

} // namespace

void Philox4x32::block(const uint32_t key_in[2], const uint32_t counter_in[4],
                       uint32_t out[4]) {
    uint32_t key[2] = {key_in[0], key_in[1]};
    uint32_t ctr[4] = {counter_in[0], counter_in[1], counter_in[2], counter_in[3]};
    for (int round = 0; round < 10; ++round) {
        one_round(ctr, key);
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    out[0] = ctr[0];
    out[1] = ctr[1];
    out[2] = ctr[2];
    out[3] = ctr[3];
}

double gaussian_at(uint64_t seed, uint32_t replicate, uint32_t n, uint32_t j) {
    const uint32_t key[2] = {static_cast<uint32_t>(seed),
                             static_cast<uint32_t>(seed >> 32)};
    const uint32_t ctr[4] = {n, j, replicate, 0u};
    uint32_t out[4];
    Philox4x32::block(key, ctr, out);
    const double u1 = to_unit(out[0], out[1]);
    const double u2 = to_unit(out[2], out[3]);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_at(uint64_t seed, uint32_t replicate, uint32_t n, uint32_t j) {
    const uint32_t key[2] = {static_cast<uint32_t>(seed),
                             static_cast<uint32_t>(seed >> 32)};
    const uint32_t ctr[4] = {n, j, replicate, 1u};
    uint32_t out[4];
    Philox4x32::block(key, ctr, out);
    return to_unit(out[0], out[1]);
}

} // namespace fracheat
