#pragma once

#include <cstdint>
#include <limits>

namespace hypercolor {

// Identifies an independent random stream: the same (value, stream) pair
// always reproduces the same sequence, on every platform.
struct Seed {
    std::uint64_t value = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Counter-based generator: output i is a keyed hash of the counter, so
// streams never share state and any draw index can be reached directly.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(Seed seed = {}) noexcept
        : key_lo_(mix64(seed.value + 0x9e3779b97f4a7c15ULL)),
          key_hi_(mix64(seed.stream ^ 0xd1b54a32d192ed03ULL) | 1ULL) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        const std::uint64_t c = counter_++;
        return mix64(mix64(c * key_hi_ + key_lo_) ^ key_hi_);
    }

    void discard(std::uint64_t n) noexcept { counter_ += n; }
    std::uint64_t position() const noexcept { return counter_; }

    // Uniform integer in [0, bound), bound > 0 (Lemire's method).
    std::uint64_t uniform_below(std::uint64_t bound) noexcept {
        __uint128_t prod = static_cast<__uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                prod = static_cast<__uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_lo_;
    std::uint64_t key_hi_;
    std::uint64_t counter_ = 0;
};

// Stream for sub-task `index` of a job seeded with `base`.
inline Seed derive_seed(Seed base, std::uint64_t group, std::uint64_t index) noexcept {
    return Seed{base.value, mix64(base.stream + 0x632be59bd9b4e019ULL * (group + 1)) + index};
}

}  // namespace hypercolor
