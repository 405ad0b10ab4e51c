#include "genusavg/oracle.hpp"

#include "genusavg/classnum.hpp"
#include "genusavg/config.hpp"
#include "genusavg/errors.hpp"
#include "genusavg/genusformula.hpp"
#include "genusavg/localdensity.hpp"
#include "genusavg/watson.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace genusavg {

namespace {

// Entry (i, i) of the adjugate of the Gram matrix (determinant of the
// complementary 2x2 minor).
Int adjugate_diag(const GramMatrix& g, int k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;
    return g.at(i, i) * g.at(j, j) - g.at(i, j) * g.at(j, i);
}

} // namespace

Int count_representations(const GramMatrix& gram, const Int& n) {
    validate(gram);
    if (n < 0) throw InvalidArgument("count_representations: n must be >= 0");
    if (n == 0) return 1;
    Int D = gram.det();
    // |x_k| <= sqrt(n * (A^{-1})_{kk}) = sqrt(n * adj_kk / D).
    std::array<Int, 3> bound;
    for (int k = 0; k < 3; ++k) {
        Int q = (n * adjugate_diag(gram, k)) / D;
        mpz_sqrt(bound[k].get_mpz_t(), q.get_mpz_t());
    }
    // Solve the coordinate with the largest bound from the quadratic; loop
    // over the other two.
    int ks = 0;
    for (int k = 1; k < 3; ++k)
        if (bound[k] > bound[ks]) ks = k;
    int i = (ks + 1) % 3, j = (ks + 2) % 3;
    Int cells = (2 * bound[i] + 1) * (2 * bound[j] + 1);
    if (cells > Int(config().enum_budget))
        throw BudgetExceeded("count_representations: enumeration box of " +
                             cells.get_str() + " cells exceeds the budget");
    const Int& c2 = gram.at(ks, ks);
    Int count = 0;
    for (Int xi = -bound[i]; xi <= bound[i]; ++xi) {
        for (Int xj = -bound[j]; xj <= bound[j]; ++xj) {
            // c2 x^2 + 2 c1 x + c0 = n with x the solved coordinate.
            Int c1 = gram.at(ks, i) * xi + gram.at(ks, j) * xj;
            Int c0 = gram.at(i, i) * xi * xi + 2 * gram.at(i, j) * xi * xj +
                     gram.at(j, j) * xj * xj - n;
            Int disc = c1 * c1 - c2 * c0;
            if (disc < 0) continue;
            if (mpz_perfect_square_p(disc.get_mpz_t()) == 0) continue;
            Int s;
            mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
            if ((-c1 + s) % c2 == 0) ++count;
            if (s != 0 && (-c1 - s) % c2 == 0) ++count;
        }
    }
    return count;
}

Rat siegel_semi_oracle(const LatticeProfile& L, const Int& n) {
    if (n < 1) throw InvalidArgument("siegel_semi_oracle: n must be >= 1");
    if (!L.is_primitive) {
        if (n % L.scale_gen != 0) return 0;
        return siegel_semi_oracle(profile(L.prim), n / L.scale_gen);
    }
    // Strip squares of primes away from 2 d_L: n = n0 * m^2 with m supported
    // on good primes and ord_q(n0) <= 1 there.  The stripping steps compose
    // into a single class-number ratio because every intermediate H value has
    // a 0 mod 4 argument and is therefore nonzero.
    Int n0 = n;
    for (const auto& [q, e] : factorize(n)) {
        if ((2 * L.d_L) % q == 0 || e < 2) continue;
        n0 /= int_pow(q, 2 * (e / 2));
    }
    Int d = fundamental_discriminant(-4 * L.d_L * n0).first;
    Rat F;
    if (!is_square_rat(Rat(4 * L.d_L * n0) / Rat(-d), &F))
        throw VerificationFailed(
            "siegel_semi_oracle: 4 d_L n0 / |d| is not a rational square");
    Rat value = Rat(12) * F / Rat(2 * L.d_L) * hurwitz(Rat(-d));
    const Int cap(static_cast<unsigned long>(config().depth_cap));
    for (const auto& [p, e] : factorize(2 * L.d_L)) {
        (void)e;
        // Count p-adically when the stabilization depth is affordable; for
        // primes too large to enumerate fall back to the closed local forms.
        long floor_r = valuation(4 * L.d_L * n0, p) + 1;
        Rat alpha = (int_pow(p, floor_r) <= cap)
                        ? alpha_count(L.prim, p, n0)
                        : alpha_best(L, p, n0).value;
        if (alpha == 0) return 0;
        Rat chi(kronecker(d, p), p);
        chi.canonicalize();
        value *= alpha * (1 - chi) / (1 - Rat(1, p * p));
    }
    if (n0 != n)
        value *= hurwitz(Rat(4 * L.d_L * n)) / hurwitz(Rat(4 * L.d_L * n0));
    return value;
}

// ------------------------------------------------------------- verify_all ---

namespace {

struct CheckBuilder {
    VerificationCheck c;
    explicit CheckBuilder(std::string name, std::string grid) {
        c.name = std::move(name);
        c.grid = std::move(grid);
        c.passed = true;
    }
    void fail(const std::string& witness) {
        if (c.passed) {
            c.passed = false;
            c.witness = witness;
        }
    }
};

std::string lat_tag(const GramMatrix& g) { return "[" + g.str() + "]"; }

void check_classnum(std::vector<VerificationCheck>& out, const Int& n_max) {
    long big = static_cast<long>(std::min(Int(10 * n_max), Int(2000)).get_ui());
    {
        CheckBuilder b("classnum/conductor_identity",
                       "d in {-3,-4,-7,-8,-15,-20}, f <= 30");
        for (Int d : {-3, -4, -7, -8, -15, -20})
            for (Int f = 1; f <= 30; ++f)
                if (h_primitive(d * f * f) != h_via_conductor(d, f))
                    b.fail("d=" + d.get_str() + " f=" + f.get_str());
        out.push_back(b.c);
    }
    {
        CheckBuilder b("classnum/product_formula",
                       "N <= " + std::to_string(big));
        for (Int N = 1; N <= big; ++N)
            if (hurwitz(Rat(N)) != hurwitz_fast(N))
                b.fail("N=" + N.get_str() + " sum=" +
                       hurwitz(Rat(N)).get_str() + " product=" +
                       hurwitz_fast(N).get_str());
        out.push_back(b.c);
    }
    {
        long mid = big / 2;
        CheckBuilder b("classnum/reduction_at_q",
                       "N <= " + std::to_string(mid) + ", q <= 13");
        for (Int N = 1; N <= mid; ++N)
            for (Int q : {2, 3, 5, 7, 11, 13})
                if (hurwitz_reduce_q(N, q) != hurwitz(Rat(N)))
                    b.fail("N=" + N.get_str() + " q=" + q.get_str());
        out.push_back(b.c);
    }
    {
        CheckBuilder b("classnum/vanishing_and_integrality",
                       "N <= " + std::to_string(big));
        for (Int N = 1; N <= big; ++N) {
            Rat h = hurwitz(Rat(N));
            Int r = N % 4;
            if ((h != 0) != (r == 0 || r == 3)) b.fail("N=" + N.get_str());
            if (Rat(6 * h).get_den() != 1)
                b.fail("6H not integral at N=" + N.get_str());
        }
        out.push_back(b.c);
    }
}

void check_lattice(std::vector<VerificationCheck>& out,
                   const std::vector<LatticeProfile>& corpus) {
    CheckBuilder b("lattice/hilbert_reciprocity", "corpus");
    for (const auto& L : corpus) {
        int prod = 1;
        for (const auto& [p, e] : factorize(2 * L.d_L)) {
            (void)e;
            prod *= hasse_symbol(L.prim, p);
        }
        // The real-place symbol of a positive-definite form is +1, and the
        // symbol at primes away from 2 d_L is +1, so the product over the
        // support must already be 1.
        if (prod != 1) b.fail(lat_tag(L.prim));
    }
    out.push_back(b.c);
}

void check_localdensity(std::vector<VerificationCheck>& out,
                        const std::vector<LatticeProfile>& corpus,
                        const Int& n_max) {
    Int cap = std::min(n_max, Int(100));
    CheckBuilder b("localdensity/stable_lemmas_vs_oracle",
                   "corpus x p in {2,3,5,7} x n <= " + cap.get_str());
    for (const auto& L : corpus)
        for (Int p : {2, 3, 5, 7}) {
            if (!is_stable_at(L.prim, p)) continue;
            for (Int n = 1; n <= cap; ++n) {
                Rat lemma = (p == 2) ? alpha_stable_two(L, n)
                                     : alpha_stable_odd(L, p, n);
                if (lemma < 0) b.fail("negative alpha " + lat_tag(L.prim));
                Rat counted = alpha_count(L.prim, p, n);
                if (lemma != counted)
                    b.fail(lat_tag(L.prim) + " p=" + p.get_str() + " n=" +
                           n.get_str() + " lemma=" + lemma.get_str() +
                           " count=" + counted.get_str());
            }
        }
    out.push_back(b.c);
}

void check_watson(std::vector<VerificationCheck>& out,
                  const std::vector<LatticeProfile>& corpus) {
    CheckBuilder b("watson/reduction_chain", "corpus");
    for (const auto& L : corpus) {
        auto chain = reduce_to_stable(L.prim);
        GramMatrix cur = chain.empty() ? L.prim : chain.back().after;
        if (!is_stable(cur)) b.fail("non-stable end " + lat_tag(L.prim));
        long budget = 3;
        for (const auto& [p, e] : factorize(L.d_L)) {
            (void)p;
            budget += e;
        }
        if (static_cast<long>(chain.size()) > budget)
            b.fail("chain too long " + lat_tag(L.prim));
        for (const auto& step : chain) {
            Int p = (step.m == 4) ? 2 : step.m;
            long before = valuation(step.before.det(), p);
            long after = valuation(step.after.det(), p);
            if (before >= 2 && after >= before)
                b.fail("no valuation drop " + lat_tag(step.before) + " m=" +
                       step.m.get_str());
        }
    }
    out.push_back(b.c);
}

void check_genusformula(std::vector<VerificationCheck>& out,
                        const std::vector<LatticeProfile>& corpus,
                        const Int& n_max) {
    {
        CheckBuilder b("genusformula/one_class_direct_count",
                       "diag(1,1,1), n <= " + n_max.get_str());
        LatticeProfile cube = profile(GramMatrix::diag(1, 1, 1));
        for (Int n = 1; n <= n_max; ++n) {
            Rat avg = evaluate_genus_avg(cube, n);
            Int cnt = count_representations(cube.gram, n);
            if (avg != Rat(cnt))
                b.fail("n=" + n.get_str() + " avg=" + avg.get_str() +
                       " count=" + cnt.get_str());
            if (cnt % 2 != 0) b.fail("odd count at n=" + n.get_str());
        }
        out.push_back(b.c);
    }
    {
        CheckBuilder b("genusformula/semi_oracle_agreement",
                       "corpus x n <= " + n_max.get_str());
        for (const auto& L : corpus)
            for (Int n = 1; n <= n_max; ++n) {
                Rat a = evaluate_genus_avg(L, n);
                Rat s = siegel_semi_oracle(L, n);
                if (a != s)
                    b.fail(lat_tag(L.prim) + " n=" + n.get_str() + " eval=" +
                           a.get_str() + " semi=" + s.get_str());
            }
        out.push_back(b.c);
    }
    {
        CheckBuilder b("genusformula/even_lattice_odd_n",
                       "even corpus members, odd n < " + n_max.get_str());
        for (const auto& L : corpus) {
            if (!L.even) continue;
            for (Int n = 1; n <= n_max; n += 2)
                if (evaluate_genus_avg(L, n) != 0 ||
                    siegel_semi_oracle(L, n) != 0)
                    b.fail(lat_tag(L.prim) + " n=" + n.get_str());
        }
        out.push_back(b.c);
    }
    {
        CheckBuilder b("genusformula/scaling_invariance",
                       "corpus x c in {2,3} x n <= 25");
        for (const auto& L : corpus)
            for (Int c : {2, 3}) {
                GramMatrix scaled = L.prim;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) scaled.at(i, j) *= c;
                LatticeProfile S = profile(scaled);
                for (Int n = 1; n <= 25; ++n)
                    if (evaluate_genus_avg(S, c * n) !=
                        evaluate_genus_avg(L, n))
                        b.fail(lat_tag(L.prim) + " c=" + c.get_str() + " n=" +
                               n.get_str());
            }
        out.push_back(b.c);
    }
    {
        long cases = 0;
        CheckBuilder b("genusformula/square_ratio_good_prime", "");
        for (const auto& L : corpus)
            for (Int q : {7, 11, 13}) {
                if ((2 * L.d_L) % q == 0) continue;
                for (Int n = 1; n <= 25; ++n) {
                    Rat base = evaluate_genus_avg(L, n);
                    if (base == 0) continue;
                    ++cases;
                    Rat lhs = evaluate_genus_avg(L, n * q * q);
                    Rat rhs = strip_square_prime(L, n, q) * base;
                    if (lhs != rhs)
                        b.fail(lat_tag(L.prim) + " n=" + n.get_str() + " q=" +
                               q.get_str());
                }
            }
        b.c.grid = std::to_string(cases) + " (L, n, q) triples";
        out.push_back(b.c);
    }
    {
        Int cap = std::min(n_max, Int(100));
        long cases = 0;
        CheckBuilder b("genusformula/square_ratio_stable_odd", "");
        for (const auto& L : corpus)
            for (const auto& [p, e] : factorize(L.d_L)) {
                if (p == 2 || e != 1) continue;
                int sp = L.hasse_star.at(p);
                for (Int n = 1; n <= cap; ++n) {
                    if (!locally_represented(L.prim, n)) continue;
                    ++cases;
                    Rat lhs = evaluate_genus_avg(L, n * p * p) *
                              (hurwitz(Rat(4 * L.d_L * n)) +
                               sp * p * hurwitz(Rat(4 * L.d_L * n) /
                                                Rat(p * p)));
                    Rat rhs = evaluate_genus_avg(L, n) *
                              (hurwitz(Rat(4 * L.d_L * n * p * p)) +
                               sp * p * hurwitz(Rat(4 * L.d_L * n)));
                    if (lhs != rhs)
                        b.fail(lat_tag(L.prim) + " p=" + p.get_str() + " n=" +
                               n.get_str());
                }
            }
        b.c.grid = std::to_string(cases) + " (L, n, p) triples";
        out.push_back(b.c);
    }
    {
        Int cap = std::min(n_max, Int(100));
        long cases = 0;
        CheckBuilder b("genusformula/square_ratio_two", "");
        for (const auto& L : corpus) {
            if (!is_stable_at(L.prim, Int(2))) continue;
            int s2 = L.hasse_star.at(2);
            for (Int n = 1; n <= cap; ++n) {
                if (!locally_represented(L.prim, n)) continue;
                ++cases;
                Rat lhs, rhs;
                if (!L.even) {
                    lhs = evaluate_genus_avg(L, 4 * n) *
                          (hurwitz(Rat(4 * L.d_L * n)) +
                           2 * s2 * hurwitz(Rat(L.d_L * n)));
                    rhs = evaluate_genus_avg(L, n) *
                          (hurwitz(Rat(16 * L.d_L * n)) +
                           2 * s2 * hurwitz(Rat(4 * L.d_L * n)));
                } else {
                    lhs = evaluate_genus_avg(L, 4 * n) *
                          hurwitz(Rat(L.d_L * n));
                    rhs = evaluate_genus_avg(L, n) *
                          hurwitz(Rat(4 * L.d_L * n));
                }
                if (lhs != rhs)
                    b.fail(lat_tag(L.prim) + " n=" + n.get_str());
            }
        }
        b.c.grid = std::to_string(cases) + " (L, n) pairs";
        out.push_back(b.c);
    }
    {
        // The isotropic splitting identity at (diag(1,1,75), p = 5), with all
        // three sides taken from the independent semi-oracle route.
        CheckBuilder b("genusformula/splitting_identity",
                       "diag(1,1,75), p = 5, n0 <= 40");
        GramMatrix g75 = GramMatrix::diag(1, 1, 75);
        LatticeProfile L = profile(g75);
        LatticeProfile K = profile(construct_K(g75, Int(5)));
        LatticeProfile lam = profile(small_lambda(g75, Int(5)));
        for (Int n0 = 1; n0 <= 40; ++n0) {
            Rat lhs = siegel_semi_oracle(L, 5 * n0);
            Rat rhs = 2 * siegel_semi_oracle(K, n0);
            if (n0 % 5 == 0) rhs -= siegel_semi_oracle(lam, n0 / 5);
            if (lhs != rhs) b.fail("n0=" + n0.get_str());
        }
        out.push_back(b.c);
    }
}

} // namespace

VerificationReport verify_all(const std::vector<GramMatrix>& corpus,
                              const Int& n_max) {
    VerificationReport report;
    std::vector<LatticeProfile> profiles;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        try {
            validate(corpus[i]);
            profiles.push_back(profile(corpus[i]));
        } catch (const Error& e) {
            VerificationCheck c;
            c.name = "input/validate[" + std::to_string(i) + "]";
            c.grid = lat_tag(corpus[i]);
            c.passed = false;
            c.witness = std::string(e.code()) + ": " + e.what();
            report.checks.push_back(c);
        }
    }
    // Failures are data, never exceptions: a check group that throws (e.g.
    // a depth cap set too low for the grid) becomes a failing check.
    auto guarded = [&report](const char* group, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            VerificationCheck c;
            c.name = std::string(group) + "/exception";
            c.passed = false;
            c.witness = e.what();
            report.checks.push_back(c);
        }
    };
    guarded("classnum", [&] { check_classnum(report.checks, n_max); });
    if (!profiles.empty()) {
        guarded("lattice", [&] { check_lattice(report.checks, profiles); });
        guarded("localdensity",
                [&] { check_localdensity(report.checks, profiles, n_max); });
        guarded("watson", [&] { check_watson(report.checks, profiles); });
        guarded("genusformula",
                [&] { check_genusformula(report.checks, profiles, n_max); });
    }
    std::sort(report.checks.begin(), report.checks.end(),
              [](const VerificationCheck& a, const VerificationCheck& b) {
                  return a.name < b.name;
              });
    return report;
}

std::vector<GramMatrix> default_corpus() {
    GramMatrix even;
    even.a = {{{Int(2), Int(1), Int(0)},
               {Int(1), Int(2), Int(1)},
               {Int(0), Int(1), Int(4)}}};
    return {GramMatrix::diag(1, 1, 1),  GramMatrix::diag(1, 3, 5),
            even,                       GramMatrix::diag(1, 1, 75),
            GramMatrix::diag(1, 1, 15), GramMatrix::diag(1, 1, 3)};
}

} // namespace genusavg
