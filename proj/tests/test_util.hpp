#ifndef GENUSAVG_TEST_UTIL_HPP
#define GENUSAVG_TEST_UTIL_HPP

#include "genusavg/errors.hpp"
#include "genusavg/lattice.hpp"

#include <cstdint>

namespace testutil {

// Small deterministic generator so every grid is reproducible across runs.
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 16;
    }
    // Uniform-ish integer in [lo, hi].
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(
                                                    hi - lo + 1));
    }
};

// Random primitive positive-definite Gram matrix with entries bounded by
// `diag_max` on the diagonal (off-diagonal entries stay smaller so most draws
// are positive definite).
inline genusavg::GramMatrix random_primitive_gram(Lcg& rng,
                                                  long diag_max = 12) {
    using namespace genusavg;
    while (true) {
        GramMatrix g;
        for (int i = 0; i < 3; ++i) g.at(i, i) = Int(rng.range(1, diag_max));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Int v(rng.range(-3, 3));
                g.at(i, j) = v;
                g.at(j, i) = v;
            }
        try {
            validate(g);
        } catch (const Error&) {
            continue;
        }
        return rescale_to_primitive(g).first;
    }
}

// Random unimodular basis change (product of elementary row operations and
// sign flips), for basis-invariance checks.
inline genusavg::BasisMatrix random_unimodular(Lcg& rng, int steps = 6) {
    using namespace genusavg;
    BasisMatrix u{};
    for (int i = 0; i < 3; ++i) u[i][i] = 1;
    for (int s = 0; s < steps; ++s) {
        int i = static_cast<int>(rng.range(0, 2));
        int j = static_cast<int>(rng.range(0, 2));
        if (i == j) {
            for (int k = 0; k < 3; ++k) u[k][i] = -u[k][i];
            continue;
        }
        Int c(rng.range(-2, 2));
        for (int k = 0; k < 3; ++k) u[k][j] += c * u[k][i];
    }
    return u;
}

inline genusavg::GramMatrix even_example() {
    genusavg::GramMatrix g;
    using genusavg::Int;
    g.a = {{{Int(2), Int(1), Int(0)},
            {Int(1), Int(2), Int(1)},
            {Int(0), Int(1), Int(4)}}};
    return g;
}

} // namespace testutil

#endif // GENUSAVG_TEST_UTIL_HPP
