#ifndef QSIM_RNG_HPP
#define QSIM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace qsim {

// Seeded pseudorandom stream: xoshiro256** state, expanded from the seed
// with splitmix64. Substreams are derived from the *seed* (not the current
// state) and an FNV-1a hash of a stable name, so adding one source to a
// scenario never perturbs the draws of another.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            word = splitmix64(x);
        }
    }

    std::uint64_t seed() const { return seed_; }

    RandomStream substream(std::string_view name) const {
        return RandomStream(splitmix_once(seed_ ^ fnv1a64(name)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    double exponential(double mean) {
        if (mean <= 0.0) {
            throw std::invalid_argument("RandomStream: exponential mean must be positive");
        }
        // 1 - u is in (0, 1], so the log is finite.
        return -mean * std::log(1.0 - next_unit());
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix_once(std::uint64_t x) { return splitmix64(x); }

    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
};

} // namespace qsim

#endif // QSIM_RNG_HPP
