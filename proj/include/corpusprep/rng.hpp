#pragma once

#include <cstdint>
#include <vector>

namespace corpusprep::rng {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t s = a;
    s ^= splitmix64(s) + b;
    return splitmix64(s);
}

// Counter-based generator: the stream is a pure function of its key, so
// draws are reproducible regardless of platform or call interleaving.
class Pcg {
public:
    explicit Pcg(uint64_t key) : state_(key) {}
    Pcg(uint64_t seed, uint64_t stream, uint64_t index) : state_(mix(mix(seed, stream), index)) {}

    uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound). Bound must be nonzero.
    uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), in selection order.
    std::vector<size_t> sample_without_replacement(size_t n, size_t k) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        for (size_t i = 0; i < k && i < n; ++i) {
            size_t j = i + static_cast<size_t>(next_below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(std::min(k, n));
        return idx;
    }

private:
    uint64_t state_;
};

}  // namespace corpusprep::rng
