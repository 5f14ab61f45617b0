#pragma once

#include <cstdint>
#include <limits>

namespace pdk {

// Counter-based generator: output n of stream `key` is mix(key, n). Streams are split
// by hashing a child id into a new key, so sub-experiments draw from disjoint sequences
// regardless of how many values their siblings consume.
class counter_rng {
public:
    using result_type = std::uint64_t;

    explicit counter_rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    counter_rng split(std::uint64_t child) const {
        counter_rng r;
        r.key_ = mix(key_ ^ mix(child + 0xbb67ae8584caa73bull));
        return r;
    }

    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace pdk
