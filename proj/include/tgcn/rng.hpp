#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tgcn/util.hpp"

namespace tgcn {

// Deterministic RNG: mt19937_64 has a standard-specified output sequence, and
// all value transforms are hand-rolled here (std distributions are
// implementation-defined), so every draw is reproducible across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; each call consumes exactly two uniforms.
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // [0, n); modulo bias is < 2^-53 for the n used here.
    int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = below(i + 1);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace tgcn
