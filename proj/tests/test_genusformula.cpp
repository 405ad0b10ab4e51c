#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genusavg/classnum.hpp"
#include "genusavg/errors.hpp"
#include "genusavg/genusformula.hpp"
#include "genusavg/oracle.hpp"
#include "genusavg/watson.hpp"
#include "test_util.hpp"

#include <map>

using namespace genusavg;
using testutil::even_example;

namespace {

std::map<Rat, Rat> term_map(const HFormula& f) {
    HFormula n = f.normalized();
    std::map<Rat, Rat> out;
    for (const auto& t : n.terms) out[t.scale] = t.coeff;
    return out;
}

} // namespace

TEST_CASE("formula algebra") {
    HFormula a;
    a.prefactor = 2;
    a.terms = {{Rat(1), Rat(4)}, {Rat(-2), Rat(1)}};
    HFormula b;
    b.prefactor = 1;
    b.terms = {{Rat(4), Rat(1)}, {Rat(3), Rat(2)}};

    HFormula sum = a + b;
    auto m = term_map(sum);
    CHECK(m[Rat(4)] == 2);
    CHECK(m[Rat(2)] == 3);
    CHECK(m.count(Rat(1)) == 0); // -4 + 4 cancels
    CHECK(sum.eval(Int(3)) == a.eval(Int(3)) + b.eval(Int(3)));

    HFormula s = a.substituted(Rat(1, 5));
    CHECK(s.eval(Int(10)) == a.eval(Int(2)));
    CHECK((Rat(3) * a).eval(Int(7)) == 3 * a.eval(Int(7)));
    CHECK(a.same_function(a.factored()));
    CHECK(!a.same_function(b));
    CHECK(HFormula::zero().eval(Int(5)) == 0);
}

TEST_CASE("single-formula shape for the diagonal example") {
    HFormula f = stable_formula(profile(GramMatrix::diag(1, 3, 5)));
    HFormula n = f.normalized();
    REQUIRE(n.terms.size() == 8);
    auto m = term_map(f);
    CHECK(m[Rat(60)] == Rat(1, 4));
    CHECK(m[Rat(15)] == Rat(1, 2));
    CHECK(m[Rat(20, 3)] == Rat(3, 4));
    CHECK(m[Rat(5, 3)] == Rat(3, 2));
    CHECK(m[Rat(12, 5)] == Rat(-5, 4));
    CHECK(m[Rat(3, 5)] == Rat(-5, 2));
    CHECK(m[Rat(4, 15)] == Rat(-15, 4));
    CHECK(m[Rat(1, 15)] == Rat(-15, 2));
    HFormula disp = f.factored();
    CHECK(disp.prefactor == Rat(1, 4));
}

TEST_CASE("single-formula shape for the even example") {
    HFormula f = stable_formula(profile(even_example()));
    auto m = term_map(f);
    REQUIRE(m.size() == 2);
    CHECK(m[Rat(10)] == 3);
    CHECK(m[Rat(2, 5)] == -15);
}

TEST_CASE("single-formula shape for three squares") {
    HFormula f = stable_formula(profile(GramMatrix::diag(1, 1, 1)));
    auto m = term_map(f);
    REQUIRE(m.size() == 2);
    CHECK(m[Rat(4)] == 12);
    CHECK(m[Rat(1)] == -24);
    CHECK_THROWS_AS(stable_formula(profile(GramMatrix::diag(1, 1, 75))),
                    NotStable);
}

TEST_CASE("coprime-range values of the running example") {
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 75));
    CHECK(coprime_formula(L, 1) == Rat(4, 5));
    // The scalar constant splits by the residue of n mod 5.
    for (Int n : {1, 4, 6, 9, 11, 14}) {
        Rat direct = coprime_formula(L, n);
        Rat expected = Rat(2, 5) * (hurwitz(Rat(12 * n)) +
                                    2 * hurwitz(Rat(3 * n)) -
                                    3 * hurwitz(Rat(4 * n) / 3) -
                                    6 * hurwitz(Rat(n) / 3));
        CHECK(direct == expected);
    }
    for (Int n : {2, 3, 7, 8, 12, 13}) {
        Rat direct = coprime_formula(L, n);
        Rat expected = Rat(4, 15) * (hurwitz(Rat(12 * n)) +
                                     2 * hurwitz(Rat(3 * n)) -
                                     3 * hurwitz(Rat(4 * n) / 3) -
                                     6 * hurwitz(Rat(n) / 3));
        CHECK(direct == expected);
    }
    CHECK_THROWS_AS(coprime_formula(L, 5), CoprimalityViolated);
    CHECK_THROWS_AS(coprime_formula(L, 10), CoprimalityViolated);
}

TEST_CASE("evaluator equals the direct count on a one-class genus") {
    LatticeProfile cube = profile(GramMatrix::diag(1, 1, 1));
    for (Int n = 1; n <= 300; ++n)
        CHECK(evaluate_genus_avg(cube, n) ==
              Rat(count_representations(cube.gram, n)));
}

TEST_CASE("evaluator equals the independent product route") {
    for (const auto& g : default_corpus()) {
        LatticeProfile L = profile(g);
        for (Int n = 1; n <= 120; ++n)
            CHECK(evaluate_genus_avg(L, n) == siegel_semi_oracle(L, n));
    }
}

TEST_CASE("recursive step of the running example") {
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 75));
    LatticeProfile K = profile(GramMatrix::diag(1, 1, 15));
    LatticeProfile lam = profile(GramMatrix::diag(1, 1, 3));
    for (Int n0 = 1; n0 <= 60; ++n0) {
        Rat rhs = 2 * evaluate_genus_avg(K, n0);
        if (n0 % 5 == 0) rhs -= evaluate_genus_avg(lam, n0 / 5);
        CHECK(evaluate_genus_avg(L, 5 * n0) == rhs);
    }
}

TEST_CASE("scaling the lattice rescales the represented numbers") {
    testutil::Lcg rng(19);
    for (int t = 0; t < 10; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng, 6);
        LatticeProfile L = profile(g);
        for (Int c : {2, 3, 5}) {
            GramMatrix scaled = g;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) scaled.at(i, j) *= c;
            LatticeProfile S = profile(scaled);
            for (Int n = 1; n <= 12; ++n) {
                CHECK(evaluate_genus_avg(S, c * n) == evaluate_genus_avg(L, n));
                CHECK(evaluate_genus_avg(S, c * n + 1) == 0);
            }
        }
    }
}

TEST_CASE("square scaling at a prime away from the discriminant") {
    int cases = 0;
    for (const auto& g : default_corpus()) {
        LatticeProfile L = profile(g);
        for (Int q : {7, 11}) {
            if ((2 * L.d_L) % q == 0) continue;
            for (Int n = 1; n <= 15; ++n) {
                Rat base = evaluate_genus_avg(L, n);
                if (base == 0) continue;
                ++cases;
                CHECK(evaluate_genus_avg(L, n * q * q) ==
                      strip_square_prime(L, n, q) * base);
            }
        }
    }
    CHECK(cases >= 30);
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 75));
    CHECK_THROWS_AS(strip_square_prime(L, 1, 5), InvalidArgument);
    CHECK_THROWS_AS(strip_square_prime(L, 1, 6), InvalidArgument);
}

TEST_CASE("piecewise synthesis of the running example") {
    PiecewiseFormula pf =
        synthesize_formula(profile(GramMatrix::diag(1, 1, 75)), 20);
    CHECK(pf.modulus == 5);
    REQUIRE(pf.pieces.size() == 3);

    // Constants 2/5, 4/15, 2/3 keyed on the residue mod 5, and the
    // divisible-by-5 branch carries the 8 combined terms.
    std::map<Int, Rat> constant;
    for (const auto& piece : pf.pieces)
        for (const auto& r : piece.residues)
            constant[r] = piece.formula.factored().prefactor;
    CHECK(constant[1] == Rat(2, 5));
    CHECK(constant[4] == Rat(2, 5));
    CHECK(constant[2] == Rat(4, 15));
    CHECK(constant[3] == Rat(4, 15));
    CHECK(constant[0] == Rat(2, 3));

    auto m0 = term_map(pf.piece_for(5));
    REQUIRE(m0.size() == 8);
    Rat c = Rat(2, 3);
    CHECK(m0[Rat(12)] == c);
    CHECK(m0[Rat(3)] == 2 * c);
    CHECK(m0[Rat(4, 3)] == -3 * c);
    CHECK(m0[Rat(1, 3)] == -6 * c);
    CHECK(m0[Rat(12, 25)] == 2 * c);
    CHECK(m0[Rat(3, 25)] == 4 * c);
    CHECK(m0[Rat(4, 75)] == -6 * c);
    CHECK(m0[Rat(1, 75)] == -12 * c);

    // Fresh samples per piece.
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 75));
    for (Int n = 201; n <= 300; ++n)
        CHECK(pf.eval(n) == evaluate_genus_avg(L, n));
}

TEST_CASE("piecewise synthesis of stable lattices is a single branch") {
    PiecewiseFormula pf =
        synthesize_formula(profile(GramMatrix::diag(1, 3, 5)), 10);
    CHECK(pf.modulus == 1);
    REQUIRE(pf.pieces.size() == 1);
    CHECK(pf.pieces[0].formula.same_function(
        stable_formula(profile(GramMatrix::diag(1, 3, 5)))));
}

TEST_CASE("piecewise synthesis of a deeper odd-prime power") {
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 9));
    PiecewiseFormula pf = synthesize_formula(L, 50);
    for (Int n = 1; n <= 150; ++n)
        CHECK(pf.eval(n) == evaluate_genus_avg(L, n));
}

TEST_CASE("evaluation trace provenance") {
    EvalTrace tr;
    evaluate_genus_avg(profile(GramMatrix::diag(1, 1, 75)), 25, &tr);
    CHECK(!tr.semi_oracle_used);
    CHECK(tr.provenance() == "closed_form");
    CHECK(!tr.steps.empty());
}
