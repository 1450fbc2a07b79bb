#pragma once

// Seeded generator shared by the randomized procedures. Values are mapped
// by plain modulo so that streams are identical on every standard library.

#include "azumaya/exact/rat.hpp"

#include <cstdint>
#include <random>

namespace azumaya {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }
    /// Uniform-ish integer in [lo, hi].
    long integer(long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(gen_() % span);
    }
    Rat integer_rat(long bound) { return Rat(integer(-bound, bound)); }
    /// A rational with numerator in [-num, num] and denominator in [1, den].
    Rat rat(long num, long den) { return Rat(integer(-num, num), integer(1, den)); }

private:
    std::mt19937_64 gen_;
};

}  // namespace azumaya
