#ifndef GENUSAVG_ORACLE_HPP
#define GENUSAVG_ORACLE_HPP

#include "genusavg/lattice.hpp"

#include <string>
#include <vector>

namespace genusavg {

// One cross-check result: a failing check records the inputs and both exact
// values in `witness`.
struct VerificationCheck {
    std::string name;
    std::string grid;
    bool passed = false;
    std::string witness; // empty when passed
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Exact r(n, L) by pruned enumeration over the positive-definite box
// |x_i| <= sqrt(n (A^{-1})_{ii}); the inner coordinate is solved from the
// quadratic rather than enumerated.  Throws BudgetExceeded when the outer
// box exceeds the configured cell budget.
Int count_representations(const GramMatrix& gram, const Int& n);

// Exact r(n, gen L) through the Minkowski-Siegel product: strip squares of
// primes away from 2 d_L down to n0 (a telescoping Hurwitz ratio), then
// 12 sqrt(n0) / (sqrt(d_L) sqrt(|d|)) H(|d|) prod_{p | 2 d_L} c_p with the
// local densities taken from the counting oracle.  The square-root quotient
// is asserted to be rational; no floating point is involved.
Rat siegel_semi_oracle(const LatticeProfile& L, const Int& n);

// Runs the cross-check battery over the corpus: closed-form local densities
// vs the counting oracle, the evaluator vs the semi-oracle and the direct
// counter, the square-scaling ratio laws, and the Watson-chain invariants.
VerificationReport verify_all(const std::vector<GramMatrix>& corpus,
                              const Int& n_max);

// The six-lattice default corpus used by the verification harness.
std::vector<GramMatrix> default_corpus();

} // namespace genusavg

#endif // GENUSAVG_ORACLE_HPP
