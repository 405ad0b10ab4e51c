#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genusavg/errors.hpp"
#include "genusavg/lattice.hpp"
#include "test_util.hpp"

using namespace genusavg;
using testutil::even_example;

TEST_CASE("gram construction, determinant, content, norm") {
    GramMatrix g = GramMatrix::diag(1, 3, 5);
    CHECK(g.det() == 15);
    CHECK(g.content() == 1);
    CHECK(g.norm_gen() == 1);

    GramMatrix e = even_example();
    CHECK(e.det() == 10);
    CHECK(e.content() == 1);
    CHECK(e.norm_gen() == 2);

    bool doubled = false;
    // x^2 + y^2 + z^2 + xy has an odd cross coefficient: the Gram represents
    // the doubled form.
    GramMatrix f = GramMatrix::from_form(1, 1, 1, 1, 0, 0, doubled);
    CHECK(doubled);
    CHECK(f.at(0, 0) == 2);
    CHECK(f.at(0, 1) == 1);

    doubled = true;
    GramMatrix h = GramMatrix::from_form(1, 1, 1, 2, 0, 0, doubled);
    CHECK(!doubled);
    CHECK(h.at(0, 1) == 1);
}

TEST_CASE("validation guards") {
    GramMatrix bad = GramMatrix::diag(1, 1, 1);
    bad.at(0, 1) = 1; // not symmetric
    CHECK_THROWS_AS(validate(bad), NotSymmetric);

    GramMatrix neg = GramMatrix::diag(1, 1, -1);
    CHECK_THROWS_AS(validate(neg), NotPositiveDefinite);

    GramMatrix dg = GramMatrix::diag(1, 1, 1);
    dg.at(0, 1) = dg.at(1, 0) = 5; // 1*1 - 25 < 0 minor
    CHECK_THROWS_AS(validate(dg), NotPositiveDefinite);
}

TEST_CASE("rescale to primitive") {
    GramMatrix g = GramMatrix::diag(3, 9, 15);
    auto [prim, c] = rescale_to_primitive(g);
    CHECK(c == 3);
    CHECK(prim == GramMatrix::diag(1, 3, 5));
}

TEST_CASE("jordan splittings carry the full determinant valuation") {
    testutil::Lcg rng(23);
    for (int t = 0; t < 60; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng);
        for (Int p : {2, 3, 5, 7}) {
            JordanSplitting js = jordan_decompose(g, p);
            CHECK(js.rank() == 3);
            CHECK(js.det_valuation() == valuation(g.det(), p));
            long prev = -1;
            Rat unit_prod = 1;
            for (const auto& b : js.blocks) {
                CHECK(b.scale_exp >= prev);
                prev = b.scale_exp;
                unit_prod *= b.unimodular_det() * rat_pow(p, b.rank * b.scale_exp);
            }
            // Determinant reconstructs up to the p-adic unit structure.
            Rat ratio = Rat(g.det()) / unit_prod;
            CHECK(valuation_rat(ratio, p) == 0);
        }
    }
}

TEST_CASE("jordan shape of the corpus examples") {
    JordanSplitting j5 = jordan_decompose(GramMatrix::diag(1, 1, 75), 5);
    REQUIRE(j5.blocks.size() == 3);
    CHECK(j5.blocks[0].scale_exp == 0);
    CHECK(j5.blocks[1].scale_exp == 0);
    CHECK(j5.blocks[2].scale_exp == 2);

    JordanSplitting j2 = jordan_decompose(even_example(), 2);
    bool has_even_binary = false;
    for (const auto& b : j2.blocks)
        if (b.rank == 2 && b.scale_exp == 0) {
            has_even_binary = true;
            CHECK((b.sym == 'A' || b.sym == 'H'));
        }
    CHECK(has_even_binary);
    CHECK(j2.det_valuation() == 1);
}

TEST_CASE("hasse symbols: invariance and reciprocity") {
    testutil::Lcg rng(31);
    for (int t = 0; t < 100; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng);
        BasisMatrix u = testutil::random_unimodular(rng);
        GramMatrix h = transform(g, u);
        for (Int p : {2, 3, 5, 7})
            CHECK(hasse_symbol_star(g, p) == hasse_symbol_star(h, p));
    }
    // Product formula over the support: the symbol is +1 away from 2 d_L and
    // at the real place (positive definite), so the support product is 1.
    for (int t = 0; t < 40; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng);
        int prod = 1;
        for (const auto& [p, e] : factorize(2 * g.det())) {
            (void)e;
            prod *= hasse_symbol(g, p);
        }
        CHECK(prod == 1);
    }
}

TEST_CASE("stability classification") {
    CHECK(is_stable(GramMatrix::diag(1, 1, 1)));
    CHECK(is_stable(GramMatrix::diag(1, 3, 5)));
    CHECK(is_stable(even_example()));
    CHECK(is_stable(GramMatrix::diag(1, 1, 15)));
    CHECK(is_stable(GramMatrix::diag(1, 1, 3)));
    CHECK(!is_stable(GramMatrix::diag(1, 1, 75)));
    CHECK(is_stable_at(GramMatrix::diag(1, 1, 75), 2));
    CHECK(is_stable_at(GramMatrix::diag(1, 1, 75), 3));
    CHECK(!is_stable_at(GramMatrix::diag(1, 1, 75), 5));
    // Odd lattice with 2 | d_L exactly once is not stable at 2.
    CHECK(!is_stable_at(GramMatrix::diag(1, 1, 2), 2));
    CHECK_THROWS_AS(is_stable_at(GramMatrix::diag(2, 2, 6), 3), NotPrimitive);
}

TEST_CASE("profile invariants of the running example") {
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 75));
    CHECK(L.d_L == 75);
    CHECK(L.norm_gen == 1);
    CHECK(!L.even);
    CHECK(L.s_L == 3);
    CHECK(L.s4 == 3);
    CHECK(L.t4 == 10);
    CHECK(L.P == std::set<Int>{2, 3});
    CHECK(L.frakP == 6);
    CHECK(L.Pprime == std::set<Int>{5});
    CHECK(!L.stable);
    CHECK(L.hasse_star.at(2) == 1);
    CHECK(L.hasse_star.at(3) == -1);

    LatticeProfile E = profile(even_example());
    CHECK(E.d_L == 10);
    CHECK(E.even);
    CHECK(E.norm_gen == 2);
    CHECK(E.P == std::set<Int>{2, 5});
    CHECK(E.frakP == 5);
    CHECK(E.stable);
    CHECK(E.hasse_star.at(5) == -1);

    LatticeProfile C = profile(GramMatrix::diag(1, 1, 1));
    CHECK(C.frakP == 2);
    CHECK(C.hasse_star.at(2) == -1);
    CHECK(C.stable);
}

TEST_CASE("local representability of the sum of three squares") {
    GramMatrix g = GramMatrix::diag(1, 1, 1);
    for (Int n = 1; n <= 200; ++n) {
        Int m = n;
        while (m % 4 == 0) m /= 4;
        bool representable = (m % 8 != 7);
        CHECK(locally_represented(g, n) == representable);
    }
}

TEST_CASE("canonical reduction is an isometry-class invariant") {
    testutil::Lcg rng(41);
    for (int t = 0; t < 40; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng, 6);
        GramMatrix c = canonical_reduce(g);
        CHECK(c.det() == g.det());
        BasisMatrix u = testutil::random_unimodular(rng);
        CHECK(canonical_reduce(transform(g, u)) == c);
    }
    // Coordinate permutations of a diagonal form reduce identically.
    CHECK(canonical_reduce(GramMatrix::diag(5, 1, 3)) ==
          canonical_reduce(GramMatrix::diag(1, 3, 5)));
}
