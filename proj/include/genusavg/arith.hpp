#ifndef GENUSAVG_ARITH_HPP
#define GENUSAVG_ARITH_HPP

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace genusavg {

// Exact arbitrary-precision integers and rationals.  mpq_class is always kept
// in lowest terms with a positive denominator, matching the Rat contract.
// No floating point is used anywhere in the library.
using Int = mpz_class;
using Rat = mpq_class;

// Kronecker symbol (a|n) with the standard conventions at 2, at negative n,
// and at n = 0 ((a|0) = 1 iff a = +-1).  For odd prime n it is the Legendre
// symbol.  Completely multiplicative in both arguments.
int kronecker(const Int& a, const Int& n);

// Kronecker symbol of a rational a at an odd prime p (or p = 2) with
// denominator coprime to p: (num*den | p).
int kronecker_rat(const Rat& a, const Int& p);

// Largest e with p^e | n.  Rejects n = 0.
long valuation(const Int& n, const Int& p);

// p-adic valuation of a nonzero rational (may be negative).
long valuation_rat(const Rat& x, const Int& p);

// Deterministic primality test (trial division + Miller-Rabin with a proven
// base set for 64-bit inputs; BPSW-style fallback beyond).
bool is_prime(const Int& n);

// Prime factorization of n >= 1 by trial division (inputs at desk scale).
// Returns (prime, exponent) pairs with strictly increasing primes.
std::vector<std::pair<Int, long>> factorize(const Int& n);

// FactoredInt: sign and (prime, exponent) pairs; product reconstructs n.
struct FactoredInt {
    int sign = 1;
    std::vector<std::pair<Int, long>> factors;
    Int value() const;
};
FactoredInt factor_signed(const Int& n);

// n = s * t^2 with s squarefree.  Requires n >= 1.
std::pair<Int, Int> squarefree_split(const Int& n);

// For D < 0 returns (d, F) with d the (fundamental) discriminant of Q(sqrt D)
// and D = d * F^2; F is a positive rational with denominator 1 or 2.
std::pair<Int, Rat> fundamental_discriminant(const Int& D);

// Hilbert symbol (a,b)_p for nonzero rationals; p = 0 denotes the real place.
int hilbert_symbol(const Rat& a, const Rat& b, const Int& p);

// All positive divisors of n >= 1, ascending.
std::vector<Int> divisors(const Int& n);

// True iff x is the square of a rational; if so and root != nullptr, stores
// the nonnegative square root.
bool is_square_rat(const Rat& x, Rat* root = nullptr);

// Exact p^e for e >= 0 as Int, and p^e as Rat for any sign of e.
Int int_pow(const Int& p, long e);
Rat rat_pow(const Int& p, long e);

} // namespace genusavg

#endif // GENUSAVG_ARITH_HPP
