#ifndef GENUSAVG_LATTICE_HPP
#define GENUSAVG_LATTICE_HPP

#include "genusavg/arith.hpp"

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace genusavg {

// Symmetric 3x3 integer Gram matrix: entries are the bilinear values
// B(v_i, v_j), so the quadratic form is x^T A x and the cross coefficients
// 2*a_ij of the form are even.
struct GramMatrix {
    std::array<std::array<Int, 3>, 3> a{};

    static GramMatrix diag(const Int& x, const Int& y, const Int& z);
    // Converting constructor for quadratic-form coefficients
    // Q = q11 x^2 + q22 y^2 + q33 z^2 + q12 xy + q13 xz + q23 yz.
    // If a cross coefficient is odd the form is merely integer-valued; the
    // returned Gram then represents 2Q and `doubled` is set (callers use
    // r_Q(n) = r_{2Q}(2n)).
    static GramMatrix from_form(const Int& q11, const Int& q22, const Int& q33,
                                const Int& q12, const Int& q13, const Int& q23,
                                bool& doubled);

    const Int& at(int i, int j) const { return a[i][j]; }
    Int& at(int i, int j) { return a[i][j]; }

    Int det() const;
    // gcd of all entries (generator of the scale ideal).
    Int content() const;
    // Generator of the norm ideal: gcd of diagonal entries and doubled
    // off-diagonal entries.
    Int norm_gen() const;

    bool operator==(const GramMatrix& o) const { return a == o.a; }
    bool operator<(const GramMatrix& o) const { return a < o.a; }
    std::string str() const;
};

// Throws NotSymmetric / NotPositiveDefinite when the matrix is invalid.
void validate(const GramMatrix& g);

// Divides every entry by the content; returns the primitive Gram and the
// removed scale factor.
std::pair<GramMatrix, Int> rescale_to_primitive(const GramMatrix& g);

// One block of a p-adic Jordan splitting: p^scale_exp times a unimodular
// block.  Rank-1 blocks store the p-adic unit `unit` (a rational with
// numerator and denominator coprime to p).  Rank-2 blocks occur only at
// p = 2 and store the unimodular even binary (b11 b12; b12 b22) together
// with its classification sym = 'A' (det = 3 mod 8) or 'H' (det = 7 mod 8).
struct JordanBlock {
    long scale_exp = 0;
    int rank = 1;
    Rat unit;
    char sym = 0;
    Rat b11, b12, b22;

    // Determinant of the unimodular part.
    Rat unimodular_det() const;
    // True if the unimodular part has odd diagonal (p = 2 only meaningful).
    bool is_odd_two() const;
};

struct JordanSplitting {
    Int p;
    std::vector<JordanBlock> blocks; // scale exponents nondecreasing
    long rank() const;
    // Sum over blocks of rank * scale_exp (must equal ord_p(det)).
    long det_valuation() const;
};

// Deterministic Jordan decomposition at p (any prime; all blocks are rank 1
// for odd p, rank 1 or even binary for p = 2).
JordanSplitting jordan_decompose(const GramMatrix& g, const Int& p);

// Rank and determinant (a p-adic unit) of the unimodular Jordan component
// M_p (the scale-0 blocks).
std::pair<int, Rat> unimodular_part(const GramMatrix& g, const Int& p);

// Hasse symbol S_p(L) = prod_{i <= j} (a_i, a_j)_p over a rational
// diagonalization, and S_p^*(L) = (-1)^{[p=2]} S_p(L); S_p^* = +1 iff L_p is
// isotropic.
int hasse_symbol(const GramMatrix& g, const Int& p);
int hasse_symbol_star(const GramMatrix& g, const Int& p);

// Stability: ord_p(d_L) <= 1, and at p = 2 additionally ord_2(d_L) = 1 iff
// the lattice is even.  Requires a primitive lattice (NotPrimitive else).
bool is_stable_at(const GramMatrix& g, const Int& p);
bool is_stable(const GramMatrix& g);

// All invariants of a lattice in one bundle.  For non-primitive input the
// p-adic classification fields are computed from the primitive rescale
// `prim` (the classification presupposes primitivity); `scale_gen` and
// `is_primitive` describe the input as given.
struct LatticeProfile {
    GramMatrix gram;   // as given
    GramMatrix prim;   // gram / scale_gen
    Int scale_gen;     // content of gram
    bool is_primitive = true;
    Int d_L;           // det(prim)
    int norm_gen = 1;  // 1 or 2 (generator of the norm ideal of prim)
    bool even = false; // norm_gen == 2
    Int s_L;           // squarefree part of d_L
    Int s4, t4;        // 4 d_L = s4 * t4^2 with s4 squarefree
    std::set<Int> P;         // stability prime set (calP)
    Int frakP;               // squarefree product attached to P
    std::set<Int> Pprime;    // primes p | 2 d_L with p not in P
    Int frakD;               // product measuring instability
    long k_L = 0;            // Omega(frakD); zero iff stable
    bool stable = false;
    std::map<Int, int> hasse_star; // S_p^* for p | 2 d_L
};

LatticeProfile profile(const GramMatrix& g);

// True iff alpha_p(n, L) > 0 for every prime p; uses the closed
// representability sets at stable primes and the counting oracle elsewhere.
bool locally_represented(const GramMatrix& g, const Int& n);

// ---- basis utilities shared with the watson module ----

using BasisMatrix = std::array<std::array<Int, 3>, 3>; // columns are vectors

// Column-style Hermite normal form of the lattice spanned by the given
// generator columns (must have full rank 3); returns a canonical triangular
// basis.
BasisMatrix hnf_basis(const std::vector<std::array<Int, 3>>& gens);

// Gram matrix of the sublattice with basis U inside (Z^3, G):  U^T G U.
GramMatrix transform(const GramMatrix& g, const BasisMatrix& u);

// Deterministic Minkowski-style reduction: returns a canonical representative
// of the isometry class for comparison in golden tests (successive-minima
// basis, then lexicographically minimal Gram over the 48 signed coordinate
// permutations).
GramMatrix canonical_reduce(const GramMatrix& g);

} // namespace genusavg

#endif // GENUSAVG_LATTICE_HPP
