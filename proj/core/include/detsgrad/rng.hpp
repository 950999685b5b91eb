#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace detsgrad {

// Deterministic pseudo-random stream (xoshiro256**). Every stream is derived
// from (master seed, agent id, purpose tag), so runs are bit-reproducible and
// independent of worker-thread count, and two algorithms can share sampling
// noise by construction. Samplers are hand-rolled rather than <random>
// distributions so the byte stream does not depend on the standard library
// implementation.
class RngStream {
public:
    // Purpose tags. Values are part of the reproducibility contract.
    enum class Tag : std::uint64_t {
        init_params = 1,
        data_sampling = 2,
        partition = 3,
        synthetic_data = 4,
        analysis = 5,
        test = 6,
    };

    RngStream() : RngStream(0, 0, Tag::test) {}

    RngStream(std::uint64_t master_seed, int agent_id, Tag tag) {
        std::uint64_t x = master_seed;
        x = splitmix64(x + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(agent_id + 1));
        x = splitmix64(x + static_cast<std::uint64_t>(tag));
        for (auto& s : state_) {
            x = splitmix64(x);
            s = x;
        }
        // xoshiro must not start from the all-zero state
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = 1;
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

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased uniform integer in [0, n). Rejection sampling on the top range.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
        const std::uint64_t bound = 0 - rem;    // multiple-of-n cutoff
        std::uint64_t x = next_u64();
        while (bound != 0 && x >= bound) x = next_u64();
        return x % n;
    }

    // Standard normal via the polar method (one spare value cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // k distinct indices from [0, n), returned in ascending order (Floyd's
    // sampling). Ascending evaluation order is what makes the exhaustive
    // mini-batch equal the full-shard gradient bit-for-bit.
    std::vector<long> sample_without_replacement(long n, long k);

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace detsgrad
