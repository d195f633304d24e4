#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fbq {

// Counter-based random stream: output_i = mix64(key + i * gamma), with the
// key derived from (seed, stream_id). Streams split by arithmetic on the key,
// so replications can be assigned ids without jump-ahead; identical
// (seed, stream_id) replays the identical sequence.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_(mix64(mix64(seed + kGolden) ^ mix64(stream_id * kGolden + 0x5851f42d4c957f2dULL))),
          counter_(0) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    // Strictly inside (0,1): (k + 1/2) / 2^53 with k on 53 bits.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential(double rate) {
        if (!(rate > 0.0)) throw std::domain_error("next_exponential requires rate > 0");
        return -std::log(next_uniform()) / rate;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    // Stafford mix13 finalizer.
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace fbq
