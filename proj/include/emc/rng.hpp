#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace emc {

// SplitMix64 (Steele, Lea and Flood, 2014). Used instead of std:: engines and
// distributions so that generated streams are byte-identical across platforms
// and standard library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1); never returns 0, so it is safe under -log.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform_open()); }

    // Unbiased integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t n) {
        unsigned __int128 prod = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                prod = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

    // Uniform integer in [lo, hi], both ends inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Flat Dirichlet draw: normalized unit-rate exponentials.
    void dirichlet_flat(std::span<double> out) {
        double total = 0.0;
        for (double& v : out) {
            v = exponential();
            total += v;
        }
        for (double& v : out) v /= total;
    }

    // Deterministic child stream. Advances this generator once; distinct tags
    // give children whose outputs do not collide in practice.
    SplitMix64 fork(std::uint64_t tag) {
        return SplitMix64(next_u64() ^ (tag * 0xd1342543de82ef95ull));
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace emc
