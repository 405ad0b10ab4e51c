#include "genusavg/genusformula.hpp"

#include "genusavg/classnum.hpp"
#include "genusavg/errors.hpp"
#include "genusavg/localdensity.hpp"
#include "genusavg/oracle.hpp"
#include "genusavg/watson.hpp"

#include <algorithm>
#include <map>

namespace genusavg {

// ---------------------------------------------------------------- HFormula -

Rat HFormula::eval(const Rat& n) const {
    if (prefactor == 0) return 0;
    Rat s = 0;
    for (const auto& t : terms) s += t.coeff * hurwitz(t.scale * n);
    return prefactor * s;
}

Rat HFormula::eval(const Int& n) const { return eval(Rat(n)); }

HFormula HFormula::normalized() const {
    std::map<Rat, Rat> by_scale;
    for (const auto& t : terms) by_scale[t.scale] += prefactor * t.coeff;
    HFormula out;
    for (auto it = by_scale.rbegin(); it != by_scale.rend(); ++it)
        if (it->second != 0) out.terms.push_back({it->second, it->first});
    out.prefactor = out.terms.empty() ? Rat(0) : Rat(1);
    return out;
}

HFormula HFormula::substituted(const Rat& k) const {
    if (k <= 0) throw InvalidArgument("substituted: k must be positive");
    HFormula out = *this;
    for (auto& t : out.terms) t.scale *= k;
    return out;
}

HFormula HFormula::factored() const {
    HFormula n = normalized();
    if (n.terms.empty()) return n;
    Rat lead = n.terms.front().coeff;
    n.prefactor = lead;
    for (auto& t : n.terms) t.coeff /= lead;
    return n;
}

bool HFormula::same_function(const HFormula& o) const {
    HFormula a = normalized();
    HFormula b = o.normalized();
    if (a.prefactor != b.prefactor || a.terms.size() != b.terms.size())
        return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (a.terms[i].coeff != b.terms[i].coeff ||
            a.terms[i].scale != b.terms[i].scale)
            return false;
    return true;
}

HFormula operator*(const Rat& c, const HFormula& f) {
    HFormula out = f;
    out.prefactor *= c;
    return out.prefactor == 0 ? HFormula::zero() : out;
}

HFormula operator+(const HFormula& a, const HFormula& b) {
    HFormula merged;
    merged.prefactor = 1;
    for (const auto& t : a.terms)
        merged.terms.push_back({a.prefactor * t.coeff, t.scale});
    for (const auto& t : b.terms)
        merged.terms.push_back({b.prefactor * t.coeff, t.scale});
    return merged.normalized();
}

HFormula operator-(const HFormula& a, const HFormula& b) {
    return a + (Rat(-1) * b);
}

Rat PiecewiseFormula::eval(const Int& n) const { return piece_for(n).eval(n); }

const HFormula& PiecewiseFormula::piece_for(const Int& n) const {
    Int r = ((n % modulus) + modulus) % modulus;
    for (const auto& p : pieces)
        for (const auto& rr : p.residues)
            if (rr == r) return p.formula;
    throw InvalidArgument("piece_for: residue class not covered");
}

// ---------------------------------------------------------- stable formula -

HFormula stable_formula(const LatticeProfile& L) {
    if (!L.stable) throw NotStable("stable_formula: lattice is not stable");
    HFormula f;
    f.prefactor = 12;
    for (const auto& [p, e] : factorize(L.frakP)) {
        (void)e;
        f.prefactor /= Rat(p + L.hasse_star.at(p));
    }
    Int e = L.even ? 1 : 4;
    for (const Int& d : divisors(L.frakP)) {
        Rat coeff = d;
        for (const auto& [p, ee] : factorize(d)) {
            (void)ee;
            coeff *= L.hasse_star.at(p);
        }
        Rat scale(e * L.d_L, d * d);
        scale.canonicalize();
        f.terms.push_back({coeff, scale});
    }
    std::sort(f.terms.begin(), f.terms.end(),
              [](const HTerm& x, const HTerm& y) { return x.scale > y.scale; });
    return f;
}

// --------------------------------------------------------- coprime formula -

namespace {

// The Hurwitz-sum formula for n in the coprime range, as a formula in the
// argument itself (evaluating it at n gives r(n, gen L)).  The scalar parts
// (epsilon/e row, c_p factors) are constant on the residue class of n.
HFormula coprime_hformula(const LatticeProfile& L, const Int& n) {
    for (const Int& p : L.Pprime) {
        long want = (p == 2) ? (L.even ? 1 : 0) : 0;
        if (valuation(n, p) != want)
            throw CoprimalityViolated(
                "coprime_formula: n is not a P'-unit times the norm generator");
    }
    const Int& s = L.s4;
    const Int& t = L.t4;
    bool two_stable = L.P.count(2) != 0;
    Rat eps;
    Rat e;
    if (!two_stable) {
        Int g2 = (s % 2 == 0 && n % 2 == 0) ? 2 : 1;
        Int gsn = gcd(s, n);
        Int m = (s * n) / (gsn * gsn);
        if (m % 4 == 3) {
            eps = Rat(24 * g2);
            e = Rat(1, g2 * g2);
        } else {
            eps = Rat(12 * g2);
            e = Rat(4) / Rat(g2 * g2);
        }
    } else if (valuation(L.d_L, 2) == 0) {
        eps = 12;
        e = 4;
    } else {
        eps = 48;
        e = 1;
    }
    Rat scalar = eps / Rat(s * t);
    for (const auto& [p, ee] : factorize(L.frakP)) {
        (void)ee;
        scalar *= Rat(p) / Rat(p + L.hasse_star.at(p));
    }
    for (const Int& p : L.Pprime) scalar *= c_factor(L, p, n);
    HFormula f;
    f.prefactor = scalar;
    if (scalar == 0) return HFormula::zero();
    for (const Int& d : divisors(L.frakP)) {
        Rat coeff = d;
        for (const auto& [p, ee] : factorize(d)) {
            (void)ee;
            coeff *= L.hasse_star.at(p);
        }
        f.terms.push_back({coeff, e * s / Rat(d * d)});
    }
    std::sort(f.terms.begin(), f.terms.end(),
              [](const HTerm& x, const HTerm& y) { return x.scale > y.scale; });
    return f;
}

} // namespace

Rat coprime_formula(const LatticeProfile& L, const Int& n) {
    if (n < 1) throw InvalidArgument("coprime_formula: n must be >= 1");
    return coprime_hformula(L, n).eval(n);
}

// --------------------------------------------------------------- evaluator -

namespace {

void trace_step(EvalTrace* tr, const std::string& s) {
    if (tr) tr->steps.push_back(s);
}

Rat eval_rec(const GramMatrix& gram, const Rat& narg, int depth,
             EvalTrace* tr) {
    if (depth > 64)
        throw RecursionDepthExceeded("evaluate_genus_avg: recursion guard");
    if (narg.get_den() != 1) return 0;
    Int n = narg.get_num();
    if (n <= 0) return 0;
    auto [prim, c] = rescale_to_primitive(gram);
    if (c > 1) {
        trace_step(tr, "rescale by 1/" + c.get_str());
        return eval_rec(prim, narg / c, depth + 1, tr);
    }
    LatticeProfile P = profile(prim);
    if (P.stable) {
        trace_step(tr, "stable [" + prim.str() + "] at n=" + n.get_str());
        return stable_formula(P).eval(n);
    }
    // Coprimality scan over P'; remember the smallest violating prime.
    Int bad = 0;
    for (const Int& p : P.Pprime) {
        long want = (p == 2) ? (P.even ? 1 : 0) : 0;
        long v = valuation(n, p);
        if (v == want) continue;
        if (p == 2 && P.even && v == 0) {
            trace_step(tr, "even lattice, odd n: 0");
            return 0;
        }
        if (bad == 0 || p < bad) bad = p;
    }
    if (bad == 0) {
        trace_step(tr, "coprime [" + prim.str() + "] at n=" + n.get_str());
        return coprime_formula(P, n);
    }
    const Int& p = bad;
    if (p != 2) {
        auto [rank, d_M] = unimodular_part(prim, p);
        if (rank == 2 && kronecker_rat(-d_M, p) == 1) {
            trace_step(tr, "reduce p=" + p.get_str() + " isotropic split");
            GramMatrix K = construct_K(prim, p);
            GramMatrix lam = small_lambda(prim, p);
            return 2 * eval_rec(K, narg / p, depth + 1, tr) -
                   eval_rec(lam, narg / (p * p), depth + 1, tr);
        }
        trace_step(tr, "reduce p=" + p.get_str() + " anisotropic descent");
        GramMatrix big = big_lambda(prim, p);
        Int cc = big.content();
        return eval_rec(rescale_to_primitive(big).first, narg / cc, depth + 1,
                        tr);
    }
    // p = 2.
    if (!P.even) {
        auto [rank, d_M] = unimodular_part(prim, Int(2));
        bool iso = false;
        if (rank == 2) {
            Int m8 = 8;
            Rat md = -d_M;
            Int den = md.get_den();
            Int inv;
            mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m8.get_mpz_t());
            Int r8 = ((md.get_num() % 8) * inv % 8 + 8) % 8;
            iso = (r8 == 1);
        }
        if (!iso) {
            trace_step(tr, "reduce p=2 anisotropic descent");
            GramMatrix big = big_lambda(prim, Int(2));
            Int cc = big.content();
            return eval_rec(rescale_to_primitive(big).first, narg / cc,
                            depth + 1, tr);
        }
        // No closed reduction for the odd isotropic binary at 2.
        trace_step(tr, "semi-oracle fallback at 2, n=" + n.get_str());
        if (tr) tr->semi_oracle_used = true;
        return siegel_semi_oracle(P, n);
    }
    // Even lattice, ord_2(n) >= 2 here.
    JordanSplitting js = jordan_decompose(prim, Int(2));
    char sym = 0;
    for (const auto& b : js.blocks)
        if (b.scale_exp == 0 && b.rank == 2) sym = b.sym;
    if (sym == 'A') {
        trace_step(tr, "reduce p=2 via modulus 4");
        GramMatrix big = big_lambda(prim, Int(4));
        Int cc = big.content();
        if (cc != 4)
            throw InvalidArgument(
                "evaluate_genus_avg: unexpected modulus-4 sublattice scale");
        return eval_rec(rescale_to_primitive(big).first, narg / 4, depth + 1,
                        tr);
    }
    if (sym == 'H') {
        trace_step(tr, "reduce p=2 isotropic split");
        GramMatrix K = construct_K(prim, Int(2));
        GramMatrix lam = small_lambda(prim, Int(4));
        return 2 * eval_rec(K, narg / 2, depth + 1, tr) -
               eval_rec(lam, narg / 4, depth + 1, tr);
    }
    throw InvalidArgument("evaluate_genus_avg: unexpected 2-adic shape");
}

} // namespace

Rat evaluate_genus_avg(const LatticeProfile& L, const Int& n, EvalTrace* tr) {
    if (n < 1) throw InvalidArgument("evaluate_genus_avg: n must be >= 1");
    return eval_rec(L.gram, Rat(n), 0, tr);
}

// ------------------------------------------------------- formula synthesis -

namespace {

struct ClassOrd {
    long ord;   // exact value, or a lower bound when !exact
    bool exact;
};

// ord_p(n) over the class {n = rho mod M} (rho in [0, M)).
ClassOrd ord_in_class(const Int& rho, const Int& M, const Int& p) {
    long vM = valuation(M, p);
    if (rho == 0) return {vM, false};
    long v = valuation(rho, p);
    if (v >= vM) return {vM, false};
    return {v, true};
}

// Symbolic recursion: a formula F with F(n) = r(k n, gen(gram)) for every n
// in the class {n = rho mod M}.  Throws HypothesisViolated for classes that
// would need the semi-oracle, InvalidArgument when M is too small to decide
// a branch.
HFormula symb_rec(const GramMatrix& gram, const Rat& k, const Int& rho,
                  const Int& M, int depth) {
    if (depth > 64)
        throw RecursionDepthExceeded("synthesize_formula: recursion guard");
    // Integrality of k n over the class.
    for (const auto& [p, e] : factorize(k.get_den())) {
        ClassOrd co = ord_in_class(rho, M, p);
        if (co.exact && co.ord < e) return HFormula::zero();
        if (!co.exact && co.ord < e)
            throw InvalidArgument(
                "synthesize_formula: modulus too small to decide integrality");
    }
    auto [prim, c] = rescale_to_primitive(gram);
    if (c > 1) return symb_rec(prim, k / c, rho, M, depth + 1);
    LatticeProfile P = profile(prim);
    if (P.stable) return stable_formula(P).substituted(k);
    Int bad = 0;
    for (const Int& p : P.Pprime) {
        long want = (p == 2) ? (P.even ? 1 : 0) : 0;
        long vk = valuation_rat(k, p);
        ClassOrd co = ord_in_class(rho, M, p);
        long v = vk + co.ord;
        if (!co.exact && v <= want)
            throw InvalidArgument(
                "synthesize_formula: modulus too small at a reduction prime");
        if (v == want) continue;
        if (p == 2 && P.even && v == 0) return HFormula::zero();
        if (bad == 0 || p < bad) bad = p;
    }
    if (bad == 0) {
        Int n_rep = (rho == 0) ? M : rho;
        Rat m_rep = k * n_rep;
        if (m_rep.get_den() != 1 || m_rep <= 0)
            throw InvalidArgument("synthesize_formula: bad representative");
        return coprime_hformula(P, m_rep.get_num()).substituted(k);
    }
    const Int& p = bad;
    if (p != 2) {
        auto [rank, d_M] = unimodular_part(prim, p);
        if (rank == 2 && kronecker_rat(-d_M, p) == 1) {
            GramMatrix K = construct_K(prim, p);
            GramMatrix lam = small_lambda(prim, p);
            return Rat(2) * symb_rec(K, k / p, rho, M, depth + 1) -
                   symb_rec(lam, k / (p * p), rho, M, depth + 1);
        }
        GramMatrix big = big_lambda(prim, p);
        Int cc = big.content();
        return symb_rec(rescale_to_primitive(big).first, k / cc, rho, M,
                        depth + 1);
    }
    if (!P.even) {
        auto [rank, d_M] = unimodular_part(prim, Int(2));
        bool iso = false;
        if (rank == 2) {
            Int den = Rat(-d_M).get_den();
            Int inv;
            Int m8 = 8;
            mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m8.get_mpz_t());
            Int r8 = ((Rat(-d_M).get_num() % 8) * inv % 8 + 8) % 8;
            iso = (r8 == 1);
        }
        if (!iso) {
            GramMatrix big = big_lambda(prim, Int(2));
            Int cc = big.content();
            return symb_rec(rescale_to_primitive(big).first, k / cc, rho, M,
                            depth + 1);
        }
        throw HypothesisViolated(
            "synthesize_formula: residue class requires the semi-oracle "
            "fallback at 2; no closed piecewise formula is produced");
    }
    JordanSplitting js = jordan_decompose(prim, Int(2));
    char sym = 0;
    for (const auto& b : js.blocks)
        if (b.scale_exp == 0 && b.rank == 2) sym = b.sym;
    if (sym == 'A') {
        GramMatrix big = big_lambda(prim, Int(4));
        if (big.content() != 4)
            throw InvalidArgument(
                "synthesize_formula: unexpected modulus-4 sublattice scale");
        return symb_rec(rescale_to_primitive(big).first, k / 4, rho, M,
                        depth + 1);
    }
    if (sym == 'H') {
        GramMatrix K = construct_K(prim, Int(2));
        GramMatrix lam = small_lambda(prim, Int(4));
        return Rat(2) * symb_rec(K, k / 2, rho, M, depth + 1) -
               symb_rec(lam, k / 4, rho, M, depth + 1);
    }
    throw InvalidArgument("synthesize_formula: unexpected 2-adic shape");
}

// A few members of the class {n = r mod M, n >= 1}, smallest first.
std::vector<Int> class_members(const Int& r, const Int& M, long count) {
    std::vector<Int> out;
    Int n = (r == 0) ? M : r;
    while (static_cast<long>(out.size()) < count) {
        out.push_back(n);
        n += M;
    }
    return out;
}

} // namespace

PiecewiseFormula synthesize_formula(const LatticeProfile& L,
                                    long sample_budget) {
    if (sample_budget < 1)
        throw InvalidArgument("synthesize_formula: sample budget must be >= 1");
    if (L.stable) {
        PiecewiseFormula pf;
        pf.modulus = 1;
        pf.pieces.push_back({{Int(0)}, {}, stable_formula(L)});
        return pf;
    }
    std::string last_witness;
    for (int attempt = 1; attempt <= 2; ++attempt) {
        // Per-prime exponents: generous enough that every ord_p decision in
        // the recursion is determined by the residue class; doubled on retry.
        long k0 = 0;
        if (L.Pprime.count(2))
            k0 = 2 * valuation(L.d_L, 2) + 3;
        else if (L.even || L.s4 % 2 == 0)
            k0 = 1;
        Int M = int_pow(2, k0 * attempt);
        for (const Int& p : L.Pprime)
            if (p != 2)
                M *= int_pow(p, (2 * valuation(L.d_L, p) + 1) * attempt);
        // Derive the formula of every residue class.
        std::vector<HFormula> by_residue;
        by_residue.reserve(0);
        for (Int rho = 0; rho < M; ++rho)
            by_residue.push_back(symb_rec(L.gram, 1, rho, M, 0).normalized());
        // Minimize the modulus: smallest divisor M' of M whose classes are
        // internally consistent (checked by sampling against the derived
        // per-class formulas; the candidate for a merged class is the
        // subclass formula with the most terms, whose extra terms vanish on
        // the shallower subclasses).
        Int best_mod = M;
        std::vector<HFormula> best;
        for (const Int& Mp : divisors(M)) {
            std::vector<HFormula> cand(
                static_cast<std::size_t>(Mp.get_ui()));
            bool ok = true;
            for (Int r = 0; r < Mp && ok; ++r) {
                std::size_t ri = r.get_ui();
                for (Int rho = r; rho < M; rho += Mp) {
                    const HFormula& f =
                        by_residue[static_cast<std::size_t>(rho.get_ui())];
                    if (f.terms.size() > cand[ri].terms.size()) cand[ri] = f;
                }
                for (Int rho = r; rho < M && ok; rho += Mp) {
                    const HFormula& f =
                        by_residue[static_cast<std::size_t>(rho.get_ui())];
                    for (const Int& n : class_members(rho, M, 2))
                        if (cand[ri].eval(n) != f.eval(n)) {
                            ok = false;
                            break;
                        }
                }
            }
            if (ok) {
                best_mod = Mp;
                best = std::move(cand);
                break;
            }
        }
        if (best.empty()) {
            for (Int rho = 0; rho < M; ++rho)
                best.push_back(
                    by_residue[static_cast<std::size_t>(rho.get_ui())]);
        }
        // Group residues with identical formulas into pieces.
        PiecewiseFormula pf;
        pf.modulus = best_mod;
        for (Int r = 0; r < best_mod; ++r) {
            const HFormula& f = best[static_cast<std::size_t>(r.get_ui())];
            bool placed = false;
            for (auto& piece : pf.pieces)
                if (piece.formula.same_function(f)) {
                    piece.residues.push_back(r);
                    placed = true;
                    break;
                }
            if (!placed) pf.pieces.push_back({{r}, {}, f.factored()});
        }
        // Verify every piece against the evaluator.
        bool verified = true;
        for (const auto& piece : pf.pieces) {
            long per_residue =
                (sample_budget + static_cast<long>(piece.residues.size()) - 1) /
                static_cast<long>(piece.residues.size());
            for (const Int& r : piece.residues) {
                for (const Int& n : class_members(r, best_mod, per_residue)) {
                    Rat lhs = piece.formula.eval(n);
                    Rat rhs = evaluate_genus_avg(L, n);
                    if (lhs != rhs) {
                        verified = false;
                        last_witness = "n=" + n.get_str() + " formula=" +
                                       lhs.get_str() + " evaluator=" +
                                       rhs.get_str();
                        break;
                    }
                }
                if (!verified) break;
            }
            if (!verified) break;
        }
        if (verified) return pf;
    }
    throw VerificationFailed(
        "synthesize_formula: sampled disagreement with the evaluator (" +
        last_witness + ")");
}

Rat strip_square_prime(const LatticeProfile& L, const Int& n, const Int& q) {
    if (!is_prime(q) || (2 * L.d_L) % q == 0)
        throw InvalidArgument(
            "strip_square_prime: q must be a prime not dividing 2 d_L");
    Rat den = hurwitz(Rat(4 * L.d_L * n));
    Rat num = hurwitz(Rat(4 * L.d_L * n * q * q));
    if (den == 0)
        throw InvalidArgument("strip_square_prime: vanishing denominator");
    return num / den;
}

} // namespace genusavg
