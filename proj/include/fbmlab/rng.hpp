#pragma once

#include <cmath>
#include <cstdint>

namespace fbmlab {

namespace detail {

// Philox4x32-10 counter-based generator. Stateless: each (key, counter) block
// is independent, which makes ensembles order-independent and reproducible
// under any scheduling of paths.
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static void round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t t0 = hi1 ^ c[1] ^ k0;
        const std::uint32_t t2 = hi0 ^ c[3] ^ k1;
        c[0] = t0;
        c[1] = lo1;
        c[2] = t2;
        c[3] = lo0;
    }

    static void block(std::uint64_t key, std::uint64_t ctr_lo, std::uint64_t ctr_hi,
                      std::uint32_t out[4]) {
        std::uint32_t c[4] = {static_cast<std::uint32_t>(ctr_lo),
                              static_cast<std::uint32_t>(ctr_lo >> 32),
                              static_cast<std::uint32_t>(ctr_hi),
                              static_cast<std::uint32_t>(ctr_hi >> 32)};
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int r = 0; r < 10; ++r) {
            round(c, k0, k1);
            k0 += W0;
            k1 += W1;
        }
        out[0] = c[0];
        out[1] = c[1];
        out[2] = c[2];
        out[3] = c[3];
    }
};

inline double u01_from_bits(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;  // in (0,1)
}

}  // namespace detail

/// One standard normal draw addressed by (seed, path, step, stream).
/// Distinct addresses give independent draws; identical addresses reproduce
/// the same value bitwise.
inline double normal_draw(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                          std::uint32_t stream = 0) {
    std::uint32_t out[4];
    const std::uint64_t ctr_hi = step ^ (static_cast<std::uint64_t>(stream) << 48);
    detail::Philox4x32::block(seed, path, ctr_hi, out);
    const double u1 = detail::u01_from_bits(out[0], out[1]);
    const double u2 = detail::u01_from_bits(out[2], out[3]);
    constexpr double two_pi = 6.28318530717958647692;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace fbmlab
