#pragma once

#include <cstdint>

namespace slcp {

// Deterministic 64-bit generator (xorshift* family).  The distributions we
// need are hand-rolled on top of it so that sequences are reproducible
// bit-for-bit across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix(seed + 0x9e3779b97f4a7c15ull)) {
        if (state_ == 0) state_ = 0x106689d45497fdb5ull;
    }

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    bool coin() { return (next_u64() & 1ull) != 0; }

    // child generator with an independent stream
    Rng fork(std::uint64_t stream) {
        return Rng(splitmix(state_ ^ (0xbf58476d1ce4e5b9ull * (stream + 1))));
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

} // namespace slcp
