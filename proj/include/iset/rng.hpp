#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace iset {

// FNV-1a 64-bit. Used for substream derivation and input content hashes.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(std::string_view s);

// xoshiro256++ 1.0 (Blackman & Vigna), seeded through splitmix64.
// Pinned by name so sample streams are bit-identical across platforms;
// all sampling helpers below are pure integer arithmetic for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Named substream: one root seed fans out into independent generators,
    // one per (name, index). Streams never share state.
    static Rng stream(std::uint64_t root_seed, std::string_view name, std::uint64_t index = 0);

    std::uint64_t next();

    // Unbiased integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::vector<int> permutation(int n);

private:
    std::array<std::uint64_t, 4> s_;
};

} // namespace iset
