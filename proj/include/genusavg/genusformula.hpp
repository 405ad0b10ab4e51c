#ifndef GENUSAVG_GENUSFORMULA_HPP
#define GENUSAVG_GENUSFORMULA_HPP

#include "genusavg/lattice.hpp"

#include <string>
#include <vector>

namespace genusavg {

// prefactor * sum_i coeff_i * H(scale_i * n), with H the Hurwitz class
// number extended by zero to non-integral arguments.
struct HTerm {
    Rat coeff;
    Rat scale; // positive, distinct within a formula
};

struct HFormula {
    Rat prefactor = 0;
    std::vector<HTerm> terms;

    Rat eval(const Int& n) const;
    Rat eval(const Rat& n) const;
    // Folds the prefactor into the coefficients, drops zero terms, sorts by
    // decreasing scale; two formulas are equal as functions of the term data
    // iff their normalized forms are equal.
    HFormula normalized() const;
    // The formula for m = k * n as a formula in n (scales multiplied by k).
    HFormula substituted(const Rat& k) const;
    // Normalized, then the leading (largest-scale) coefficient is pulled out
    // into the prefactor for display.
    HFormula factored() const;

    bool same_function(const HFormula& o) const;
    static HFormula zero() { return HFormula{}; }
};

HFormula operator*(const Rat& c, const HFormula& f);
HFormula operator+(const HFormula& a, const HFormula& b);
HFormula operator-(const HFormula& a, const HFormula& b);

// One residue-class branch of a piecewise formula.
struct FormulaPiece {
    std::vector<Int> residues; // classes mod modulus sharing this formula
    std::vector<std::string> guards; // informational divisibility notes
    HFormula formula;
};

struct PiecewiseFormula {
    Int modulus = 1;
    std::vector<FormulaPiece> pieces; // cover all residues mod modulus

    Rat eval(const Int& n) const;
    const HFormula& piece_for(const Int& n) const;
};

// Trace metadata collected by the evaluator.
struct EvalTrace {
    std::vector<std::string> steps;
    bool semi_oracle_used = false;
    std::string provenance() const {
        return semi_oracle_used ? "semi_oracle" : "closed_form";
    }
};

// The single Hurwitz-sum formula for a stable lattice: prefactor
// 12 prod_{p | P}(p + S_p^*)^{-1}, one term per divisor f | P with
// coefficient (prod_{p|f} S_p^*) f and scale e d_L / f^2 (e = 4 for odd L,
// e = 1 for even L).  Throws NotStable.
HFormula stable_formula(const LatticeProfile& L);

// Exact r(n, gen L) for n in N Z_p^x at every p in P' (N the norm
// generator), via the epsilon/e constant table and local c_p factors.
// Throws CoprimalityViolated when the unit condition fails.
Rat coprime_formula(const LatticeProfile& L, const Int& n);

// Exact r(n, gen L) for arbitrary n >= 1: stable formula, coprime formula,
// or the reduction recursion on Watson transforms; falls back to the
// Minkowski-Siegel semi-oracle for the 2-adic corner with no closed
// reduction (recorded in the trace).
Rat evaluate_genus_avg(const LatticeProfile& L, const Int& n,
                       EvalTrace* trace = nullptr);

// A verified piecewise Hurwitz formula for L: residue classes modulo a
// constructively determined M, each with a closed HFormula, checked against
// evaluate_genus_avg on >= sample_budget members per piece.  Throws
// HypothesisViolated when a class requires the semi-oracle fallback and
// VerificationFailed when sampling disagrees even after enlarging M.
PiecewiseFormula synthesize_formula(const LatticeProfile& L,
                                    long sample_budget);

// r(n q^2, gen L) / r(n, gen L) for q coprime to 2 d_L: the Hurwitz ratio
// H(4 d_L n q^2) / H(4 d_L n).
Rat strip_square_prime(const LatticeProfile& L, const Int& n, const Int& q);

} // namespace genusavg

#endif // GENUSAVG_GENUSFORMULA_HPP
