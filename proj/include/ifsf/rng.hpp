#pragma once

#include <cstdint>

namespace ifsf {

// Counter-based generator: draw i is a pure function of (seed, i), so a
// stream can be split into shards by handing out counter ranges.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t i) const {
        return mix(seed_ + 0x9e3779b97f4a7c15ULL * (i + 1));
    }

    std::uint64_t next() { return at(counter_++); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Index in [0, n).
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    /// Seed of an independent child stream, e.g. one per worker shard.
    std::uint64_t derive(std::uint64_t shard) const { return mix(seed_ ^ mix(shard + 0x632be59bd9b4e019ULL)); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace ifsf
