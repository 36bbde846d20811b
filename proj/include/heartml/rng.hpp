#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace heartml {

/// splitmix64 generator (Vigna's public-domain fixed-increment variant).
///
/// Every stochastic step in the toolkit draws from this generator so that
/// results are bit-reproducible from the seed alone, independent of
/// platform or thread count. Not shareable between concurrent consumers;
/// parallel code must derive one child seed per task up front.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t state() const { return state_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, n) by rejection: draws at or above
    /// floor(2^64 / n) * n are discarded, the rest reduced mod n.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("Rng::below: n must be >= 1");
        }
        const std::uint64_t rem = (std::uint64_t{0} - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t draw = next_u64();
            if (rem == 0 || draw < std::uint64_t{0} - rem) {
                return draw % n;
            }
        }
    }

    /// In-place Fisher-Yates: i from len-1 down to 1, j = below(i+1), swap.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        if (items.size() < 2) return;
        for (std::size_t i = items.size() - 1; i >= 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i + 1));
            std::swap(items[i], items[j]);
        }
    }

    /// First k entries of a partial Fisher-Yates pass over 0..n-1,
    /// swapping position i with a draw from [i, n). Order is part of the
    /// contract: callers may rely on the exact sequence.
    std::vector<std::size_t> sample_without_replacement(std::size_t k, std::size_t n) {
        if (k > n) {
            throw std::invalid_argument("Rng::sample_without_replacement: k > n");
        }
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::uint64_t state_;
};

}  // namespace heartml
