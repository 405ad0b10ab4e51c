#ifndef GENUSAVG_CLASSNUM_HPP
#define GENUSAVG_CLASSNUM_HPP

#include "genusavg/arith.hpp"

namespace genusavg {

// Primitive class number h(d) for d < 0, d = 0 or 1 mod 4: the number of
// SL2(Z)-classes of primitive binary quadratic forms of discriminant d,
// computed by direct enumeration of reduced forms
//   |b| <= a <= c, b^2 - 4ac = d, gcd(a,b,c) = 1,
//   with b >= 0 whenever |b| = a or a = c.
Int h_primitive(const Int& d);

// Hurwitz class number via the defining sum
//   H(N) = sum_{f^2 | N} h(-N/f^2) / (w_{-N/f^2} / 2)
// with w_{-3} = 6, w_{-4} = 4, w = 2 otherwise.  Total on rationals: returns 0
// for non-integral, non-positive, or 1,2 mod 4 arguments (and H(0) = 0).
// This is the trusted enumeration-backed oracle.
Rat hurwitz(const Rat& x);

// Same value as hurwitz(N) for N >= 1, computed from the fundamental
// discriminant d of Q(sqrt(-N)), the conductor F (-N = d F^2, F in (1/2)N),
// and the finite Euler-type product
//   H(N) = h(d)/(w_d/2) * prod_p (p^{ord_p(F)+1} - 1 - (d|p)(p^{ord_p(F)} - 1))/(p - 1).
// This is the production path.
Rat hurwitz_fast(const Int& N);

// H(N) computed through the single-prime reduction
//   H(N) = H(N q^{-2 floor(mu_q/2)})
//          * (q^{floor(mu_q/2)+1} - 1 - (-N q^{-2 floor(mu_q/2)} | q)(q^{floor(mu_q/2)} - 1))/(q - 1),
// where mu_q = ord_q(N) - 2*[q = 2][d = 0 mod 4] and d is the discriminant of
// Q(sqrt(-N)).  Agrees with hurwitz(N) for every prime q.
Rat hurwitz_reduce_q(const Int& N, const Int& q);

// Right side of the conductor relation
//   h(d f^2) = h(d) * f / (w_d / w_{d f^2}) * prod_{p | f} (1 - (d|p)/p)
// for fundamental d < 0, f >= 1 (exposed for the identity tests).
Int h_via_conductor(const Int& d, const Int& f);

// Clears the internal memo tables (exposed for cache-bound tests).
void classnum_clear_cache();

} // namespace genusavg

#endif // GENUSAVG_CLASSNUM_HPP
