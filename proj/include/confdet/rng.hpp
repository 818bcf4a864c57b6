#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace confdet {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
/// Distribution transforms are implemented here rather than taken from
/// <random> so that outputs are identical across standard libraries;
/// simulate/detect/sweep outputs must be byte-stable under a fixed seed.
///
/// Independent streams are derived from (seed, path...) so that e.g. each
/// environment, sweep cell, or permutation replicate owns its own stream
/// and results do not depend on evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { init(seed, {}); }
    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) { init(seed, path); }

    /// Derive a child stream; children with different paths are independent.
    Rng stream(std::initializer_list<std::uint64_t> path) const {
        Rng r(0);
        std::uint64_t x = root_;
        for (auto p : path) x = mix(x ^ (p + 0x9e3779b97f4a7c15ULL));
        r.seed_state(x);
        r.root_ = x;
        return r;
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

    /// Uniform in [2^-53, 1]; never exactly zero so log() is always finite.
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n), n >= 1. Rejection-free modulo bias is
    /// negligible for the n used here but we reject anyway for determinism
    /// of the distribution itself.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Fisher-Yates over an index range.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    void seed_state(std::uint64_t x) {
        for (auto& s : s_) {
            x = mix(x);
            s = x;
        }
    }

    void init(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t x = mix(seed);
        for (auto p : path) x = mix(x ^ (p + 0x9e3779b97f4a7c15ULL));
        root_ = x;
        seed_state(x);
    }

    std::uint64_t s_[4] = {};
    std::uint64_t root_ = 0;
};

}  // namespace confdet
