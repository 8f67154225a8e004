#pragma once
// SplitMix64 (Steele, Lea, Flood 2014; constants from Vigna's reference
// implementation). Chosen because it is tiny, portable and fully specified,
// so a seed produces the same stream on every platform.

#include <cstdint>
#include <stdexcept>

namespace sens {

__extension__ using u128 = unsigned __int128;

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi] by multiply-high scaling. Always consumes
    // exactly one draw, even when lo == hi, so that pinning a range does not
    // shift every later sample.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform(): empty range");
        std::uint64_t r = next();
        std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
        if (span == UINT64_MAX) return static_cast<std::int64_t>(r);
        auto scaled = static_cast<std::uint64_t>((static_cast<u128>(r) * (span + 1)) >> 64);
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + scaled);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace sens
