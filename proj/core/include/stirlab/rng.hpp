#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace stirlab {

/// Philox 4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless keyed bijection: a 64-bit key and a 128-bit counter map to 128
/// random bits.  Streams never overlap across keys or counters, so every
/// Monte Carlo sample can own stream (seed, sample_index) and results do not
/// depend on how samples are distributed over workers.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t ctr_lo,
                                              std::uint64_t ctr_hi) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }
};

/// One per-sample random stream: key = user seed, counter high word = sample
/// index, counter low word = running block count within the sample.
///
/// Draws standard normal pairs via Box-Muller from strictly-open uniforms;
/// a path consumes blocks sequentially, so replaying (seed, sample) replays
/// the path bit for bit.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t sample_index)
        : key_(seed), sample_(sample_index) {}

    /// Two independent N(0,1) variates from the next counter block.
    std::array<double, 2> pair() {
        const auto b = Philox4x32::block(key_, block_++, sample_);
        const double u1 = to_open_unit(b[0], b[1]);
        const double u2 = to_open_unit(b[2], b[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Uniform in (0,1), one counter block per draw.
    double uniform() {
        const auto b = Philox4x32::block(key_, block_++, sample_);
        return to_open_unit(b[0], b[1]);
    }

    std::uint64_t blocks_used() const { return block_; }

  private:
    // 53-bit uniform from two words, shifted into (0,1) so log() is safe.
    static double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t m =
            (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
        return (static_cast<double>(m) + 0.5) * 0x1p-53;
    }

    std::uint64_t key_;
    std::uint64_t sample_;
    std::uint64_t block_ = 0;
};

}  // namespace stirlab
