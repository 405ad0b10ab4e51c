#ifndef GENUSAVG_LOCALDENSITY_HPP
#define GENUSAVG_LOCALDENSITY_HPP

#include "genusavg/lattice.hpp"

#include <string>

namespace genusavg {

// A local density value together with the route that produced it.
struct DensityValue {
    Rat value;
    std::string provenance; // stable_odd_lemma | stable_two_lemma |
                            // generic_unimodular | counting_oracle
};

// Closed-form alpha_p(n, L) at an odd prime p where L is stable: the exact
// piecewise rational in nu_p = ord_p(n), split on ord_p(d_L) in {0, 1} and
// the parity of nu_p.  Throws NotStableAtP otherwise.
Rat alpha_stable_odd(const LatticeProfile& L, const Int& p, const Int& n);

// Closed-form alpha_2(n, L) for L stable at 2: piecewise in n = beta * 2^a
// (beta odd), split on odd-anisotropic / odd-isotropic / even and the residue
// of beta against d_L (resp. d_L/2) mod 4 and 8.  Throws NotStableAtP.
Rat alpha_stable_two(const LatticeProfile& L, const Int& n);

// Counting oracle: alpha_p(n, L) = lim_r p^{-2r} #{x mod p^r : Q(x) = n}.
// Computed per Jordan block (value distributions mod p^r) and combined by
// convolution; the limit is certified by equality at two consecutive depths
// r, r+1 with r >= ord_p(4 * det * n) + 2.  Throws DepthLimitExceeded when
// the configured p^r ceiling is reached before stabilization.
Rat alpha_count(const GramMatrix& gram, const Int& p, const Int& n);

// alpha_p(n, L) from the best available source: the stable closed forms, the
// coprime unimodular-part shortcut at odd p, or the counting oracle.
DensityValue alpha_best(const LatticeProfile& L, const Int& p, const Int& n);

// c_p(n, L) = alpha_p(n, L) * (1 - (d|p)/p) * (1 - 1/p^2)^{-1}, where d is
// the discriminant of Q(sqrt(-4 d_L n)); requires p | 2 d_L.
Rat c_factor(const LatticeProfile& L, const Int& p, const Int& n);

// Clears the distribution cache (exposed for tests).
void localdensity_clear_cache();

} // namespace genusavg

#endif // GENUSAVG_LOCALDENSITY_HPP
