#ifndef GENUSAVG_WATSON_HPP
#define GENUSAVG_WATSON_HPP

#include "genusavg/lattice.hpp"

#include <vector>

namespace genusavg {

// One Watson-transformation step at modulus m (prime or 4): `after` is the
// primitive rescale of the sublattice, `rescale` the rational applied to the
// sublattice Gram to reach it (1 / content).
struct ReductionStep {
    Int m;
    GramMatrix before;
    GramMatrix after;
    Rat rescale;
};

// The sublattice {x in L : Q(x) = 0 mod m and 2 B(x, e_i) = 0 mod m} in its
// Hermite-reduced basis.  m must be a prime or 4.
GramMatrix big_lambda(const GramMatrix& gram, const Int& m);

// big_lambda's output divided by its content (the primitive rescale).
GramMatrix small_lambda(const GramMatrix& gram, const Int& m);

// Chain of Watson steps carrying a primitive lattice to a stable one:
// odd primes with ord_p(d) >= 2 ascending first, then m = 2 for odd lattices
// unstable at 2, then m = 4 for even lattices with ord_2(d) >= 2.
std::vector<ReductionStep> reduce_to_stable(const GramMatrix& gram);

// The auxiliary lattice K for the isotropic reduction case: L_p must be
// (hyperbolic plane) + <p^m eps> with m >= 2.  K is an index-p sublattice
// with norm ideal p Z_p (4 Z_2 at p = 2), rescaled by 1/p (1/2 at p = 2);
// the tie between the two valid sublattices is broken by the smallest HNF
// basis.  Throws HypothesisViolated when L_p has the wrong shape.
GramMatrix construct_K(const GramMatrix& gram, const Int& p);

} // namespace genusavg

#endif // GENUSAVG_WATSON_HPP
