#ifndef GENUSAVG_CONFIG_HPP
#define GENUSAVG_CONFIG_HPP

#include <cstddef>
#include <cstdint>

namespace genusavg {

// Runtime caps for the brute-force oracles and caches.  All values are
// overridable via CLI flags and the environment variables
// GENUSAVG_DEPTH_CAP / GENUSAVG_ENUM_BUDGET (flags win over the environment).
struct Config {
    // Largest modulus p^r the local-density counting oracle may use while
    // waiting for stabilization.
    std::uint64_t depth_cap = std::uint64_t(1) << 15;
    // Largest number of (x1, x2) cells the representation-count enumeration
    // may visit.
    std::uint64_t enum_budget = 1000000000ULL;
    // Largest number of memoized class-number values.
    std::size_t memo_cap = 1000000;
};

// Process-wide configuration.  Initialized from the environment on first use.
Config& config();

// Re-reads the environment variables into the given config.
void apply_env(Config& cfg);

} // namespace genusavg

#endif // GENUSAVG_CONFIG_HPP
