#pragma once
// Deterministic seeding. Every random stream is derived from the run seed and
// the coordinates of its work unit, so results do not depend on scheduling.

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace kdvnf {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t s = splitmix64(seed);
    for (std::uint64_t c : coords) s = splitmix64(s ^ splitmix64(c + 0x632BE59BD9B4E019ull));
    return s;
}

inline std::uint64_t name_hash(std::string_view name) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Small counter-based generator; integer draws use rejection so the stream is
// identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return splitmix64(state_);
    }

    // Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = ~0ull - (~0ull % span);
        std::uint64_t x;
        do x = next();
        while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace kdvnf
