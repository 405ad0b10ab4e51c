#include "genusavg/config.hpp"

#include <cstdlib>
#include <string>

namespace genusavg {

void apply_env(Config& cfg) {
    if (const char* s = std::getenv("GENUSAVG_DEPTH_CAP")) {
        try {
            cfg.depth_cap = std::stoull(std::string(s));
        } catch (...) {
            // Ignore malformed values; keep the default.
        }
    }
    if (const char* s = std::getenv("GENUSAVG_ENUM_BUDGET")) {
        try {
            cfg.enum_budget = std::stoull(std::string(s));
        } catch (...) {
        }
    }
}

Config& config() {
    static Config cfg = [] {
        Config c;
        apply_env(c);
        return c;
    }();
    return cfg;
}

} // namespace genusavg
