#include "genusavg/watson.hpp"

#include "genusavg/errors.hpp"

#include <algorithm>

namespace genusavg {

namespace {

Int mod_inv(const Int& a, const Int& p) {
    Int inv;
    Int am = ((a % p) + p) % p;
    if (mpz_invert(inv.get_mpz_t(), am.get_mpz_t(), p.get_mpz_t()) == 0)
        throw InvalidArgument("mod_inv: not invertible");
    return inv;
}

// Basis of the kernel of the 3x3 matrix A over F_p, lifted to entries in
// [0, p).
std::vector<std::array<Int, 3>> kernel_mod_p(const GramMatrix& g,
                                             const Int& p) {
    std::array<std::array<Int, 3>, 3> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = ((g.a[i][j] % p) + p) % p;
    // Row-reduce; record pivot column of each used row.
    int pivot_col[3] = {-1, -1, -1};
    int row = 0;
    for (int col = 0; col < 3 && row < 3; ++col) {
        int sel = -1;
        for (int r = row; r < 3; ++r)
            if (m[r][col] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[sel], m[row]);
        Int inv = mod_inv(m[row][col], p);
        for (int j = 0; j < 3; ++j) m[row][j] = m[row][j] * inv % p;
        for (int r = 0; r < 3; ++r) {
            if (r == row || m[r][col] == 0) continue;
            Int f = m[r][col];
            for (int j = 0; j < 3; ++j)
                m[r][j] = ((m[r][j] - f * m[row][j]) % p + p) % p;
        }
        pivot_col[row] = col;
        ++row;
    }
    std::vector<std::array<Int, 3>> out;
    for (int col = 0; col < 3; ++col) {
        bool is_pivot = false;
        for (int r = 0; r < row; ++r) is_pivot |= (pivot_col[r] == col);
        if (is_pivot) continue;
        std::array<Int, 3> v{Int(0), Int(0), Int(0)};
        v[col] = 1;
        for (int r = 0; r < row; ++r)
            v[pivot_col[r]] = ((-m[r][col]) % p + p) % p;
        out.push_back(v);
    }
    return out;
}

Int eval_q(const GramMatrix& g, const std::array<Int, 3>& x) {
    Int s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += g.a[i][j] * x[i] * x[j];
    return s;
}

} // namespace

GramMatrix big_lambda(const GramMatrix& gram, const Int& m) {
    validate(gram);
    std::vector<std::array<Int, 3>> gens;
    if (m == 4) {
        // Enumerate residues mod 4 with Q(x) = 0 mod 4, (A x)_i = 0 mod 2.
        for (Int x0 = 0; x0 < 4; ++x0)
            for (Int x1 = 0; x1 < 4; ++x1)
                for (Int x2 = 0; x2 < 4; ++x2) {
                    std::array<Int, 3> x{x0, x1, x2};
                    if (eval_q(gram, x) % 4 != 0) continue;
                    bool ok = true;
                    for (int i = 0; i < 3 && ok; ++i) {
                        Int ax = gram.a[i][0] * x0 + gram.a[i][1] * x1 +
                                 gram.a[i][2] * x2;
                        ok = (ax % 2 == 0);
                    }
                    if (ok) gens.push_back(x);
                }
        for (int i = 0; i < 3; ++i) {
            std::array<Int, 3> e{Int(0), Int(0), Int(0)};
            e[i] = 4;
            gens.push_back(e);
        }
    } else if (m == 2) {
        // 2 B(x, e_i) = 0 mod 2 always; the only condition is Q(x) even,
        // i.e. the linear condition sum a_ii x_i = 0 mod 2.
        for (Int x0 = 0; x0 < 2; ++x0)
            for (Int x1 = 0; x1 < 2; ++x1)
                for (Int x2 = 0; x2 < 2; ++x2) {
                    Int s = gram.a[0][0] * x0 + gram.a[1][1] * x1 +
                            gram.a[2][2] * x2;
                    if (s % 2 == 0) gens.push_back({x0, x1, x2});
                }
        for (int i = 0; i < 3; ++i) {
            std::array<Int, 3> e{Int(0), Int(0), Int(0)};
            e[i] = 2;
            gens.push_back(e);
        }
    } else if (is_prime(m)) {
        // Odd prime: 2 B(x, e_i) = 0 mod m reduces to A x = 0 mod m, which
        // already forces Q(x) = x . A x = 0 mod m.
        gens = kernel_mod_p(gram, m);
        for (int i = 0; i < 3; ++i) {
            std::array<Int, 3> e{Int(0), Int(0), Int(0)};
            e[i] = m;
            gens.push_back(e);
        }
    } else {
        throw InvalidArgument("big_lambda: m must be prime or 4");
    }
    return transform(gram, hnf_basis(gens));
}

GramMatrix small_lambda(const GramMatrix& gram, const Int& m) {
    return rescale_to_primitive(big_lambda(gram, m)).first;
}

std::vector<ReductionStep> reduce_to_stable(const GramMatrix& gram) {
    validate(gram);
    if (gram.content() != 1)
        throw NotPrimitive("reduce_to_stable: input must be primitive");
    std::vector<ReductionStep> chain;
    GramMatrix cur = gram;
    for (int guard = 0; guard < 64; ++guard) {
        if (is_stable(cur)) return chain;
        Int d = cur.det();
        Int m = 0;
        for (const auto& [p, e] : factorize(d))
            if (p != 2 && e >= 2) {
                m = p;
                break;
            }
        if (m == 0) {
            bool even = (cur.norm_gen() % 2 == 0);
            long ord2 = valuation(d, 2);
            if (!even && ord2 >= 1)
                m = 2;
            else if (even && ord2 >= 2)
                m = 4;
            else
                throw InvalidArgument(
                    "reduce_to_stable: no applicable transformation");
        }
        ReductionStep step;
        step.m = m;
        step.before = cur;
        GramMatrix sub = big_lambda(cur, m);
        Int c = sub.content();
        step.after = rescale_to_primitive(sub).first;
        step.rescale = Rat(1, c);
        cur = step.after;
        chain.push_back(step);
    }
    throw InvalidArgument("reduce_to_stable: step guard exceeded");
}

GramMatrix construct_K(const GramMatrix& gram, const Int& p) {
    validate(gram);
    if (!is_prime(p)) throw InvalidArgument("construct_K: p must be prime");
    // Hypothesis: L_p = H + <p^m eps>, m >= 2 (isotropic unimodular binary
    // part, deep rank-1 part).
    JordanSplitting js = jordan_decompose(gram, p);
    {
        int uni_rank = 0;
        Rat uni_det = 1;
        long deep = -1;
        for (const auto& b : js.blocks) {
            if (b.scale_exp == 0) {
                uni_rank += b.rank;
                uni_det *= b.unimodular_det();
            } else {
                deep = b.scale_exp;
            }
        }
        bool ok = (uni_rank == 2 && deep >= 2);
        if (ok) {
            if (p == 2) {
                // Isotropic even binary = 'H'.
                ok = (js.blocks.size() == 2 && js.blocks[0].rank == 2 &&
                      js.blocks[0].sym == 'H');
            } else {
                ok = (kronecker_rat(-uni_det, p) == 1);
            }
        }
        if (!ok)
            throw HypothesisViolated(
                "construct_K: lattice is not isotropic of the required shape "
                "at p");
    }
    // Enumerate the p^2 + p + 1 index-p sublattices {x : phi(x) = 0 mod p}.
    std::vector<std::array<Int, 3>> functionals;
    for (Int a = 0; a < p; ++a)
        for (Int b = 0; b < p; ++b) functionals.push_back({Int(1), a, b});
    for (Int b = 0; b < p; ++b) functionals.push_back({Int(0), Int(1), b});
    functionals.push_back({Int(0), Int(0), Int(1)});

    bool have = false;
    BasisMatrix best{};
    GramMatrix best_gram;
    for (const auto& phi : functionals) {
        // Kernel basis of the functional mod p plus p Z^3.
        std::vector<std::array<Int, 3>> gens;
        if (phi[0] == 1) {
            gens.push_back({((-phi[1]) % p + p) % p, Int(1), Int(0)});
            gens.push_back({((-phi[2]) % p + p) % p, Int(0), Int(1)});
        } else if (phi[1] == 1) {
            gens.push_back({Int(1), Int(0), Int(0)});
            gens.push_back({Int(0), ((-phi[2]) % p + p) % p, Int(1)});
        } else {
            gens.push_back({Int(1), Int(0), Int(0)});
            gens.push_back({Int(0), Int(1), Int(0)});
        }
        for (int i = 0; i < 3; ++i) {
            std::array<Int, 3> e{Int(0), Int(0), Int(0)};
            e[i] = p;
            gens.push_back(e);
        }
        BasisMatrix u = hnf_basis(gens);
        GramMatrix s = transform(gram, u);
        // Norm condition: norm ideal p Z_p at odd p (all entries divisible
        // by p); 4 Z_2 at p = 2 (diagonal mod 4, off-diagonal mod 2).
        bool ok = true;
        if (p == 2) {
            for (int i = 0; i < 3 && ok; ++i)
                for (int j = 0; j < 3 && ok; ++j)
                    ok = (i == j) ? (s.a[i][j] % 4 == 0)
                                  : (s.a[i][j] % 2 == 0);
        } else {
            for (int i = 0; i < 3 && ok; ++i)
                for (int j = 0; j < 3 && ok; ++j) ok = (s.a[i][j] % p == 0);
        }
        if (!ok) continue;
        if (!have || u < best) {
            best = u;
            best_gram = s;
            have = true;
        }
    }
    if (!have)
        throw HypothesisViolated(
            "construct_K: no index-p sublattice with the required norm ideal");
    Int div = (p == 2) ? Int(2) : p;
    GramMatrix k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (best_gram.a[i][j] % div != 0)
                throw HypothesisViolated("construct_K: non-integral rescale");
            k.a[i][j] = best_gram.a[i][j] / div;
        }
    return k;
}

} // namespace genusavg
