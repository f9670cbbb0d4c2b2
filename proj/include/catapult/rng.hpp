#pragma once

#include <cstdint>

namespace catapult {

// Deterministic, bit-portable RNG streams. Each stream is an xoshiro256++
// generator whose state is derived from (master_seed, stream_id) via
// SplitMix64, so replicate r of an ensemble always sees the same sequence
// no matter how many workers run the ensemble. std::mt19937 would also be
// portable, but the std distributions on top of it are not; we convert to
// doubles by hand instead.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        SplitMix64 sm(master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1)));
        for (auto& word : s_) word = sm.next();
        // all-zero state is invalid for xoshiro; SplitMix64 cannot emit four
        // zero words in a row, but keep the guard explicit
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform double in [0, 1), 53 random bits
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace catapult
