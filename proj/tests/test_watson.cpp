#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genusavg/errors.hpp"
#include "genusavg/watson.hpp"
#include "test_util.hpp"

using namespace genusavg;
using testutil::even_example;

namespace {

// Q(c) for a coefficient vector c in the basis whose Gram is g.
Int eval_q(const GramMatrix& g, long c0, long c1, long c2) {
    std::array<Int, 3> c = {Int(c0), Int(c1), Int(c2)};
    Int q = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q += c[i] * g.at(i, j) * c[j];
    return q;
}

} // namespace

TEST_CASE("the transformed lattice represents only multiples of m") {
    testutil::Lcg rng(3);
    for (int t = 0; t < 25; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng);
        for (Int m : {Int(2), Int(3), Int(5), Int(4)}) {
            GramMatrix lam = big_lambda(g, m);
            for (long a = -2; a <= 2; ++a)
                for (long b = -2; b <= 2; ++b)
                    for (long c = -2; c <= 2; ++c)
                        CHECK(eval_q(lam, a, b, c) % m == 0);
        }
    }
}

TEST_CASE("running example collapses to the small stable form") {
    GramMatrix g = GramMatrix::diag(1, 1, 75);
    CHECK(canonical_reduce(small_lambda(g, 5)) ==
          canonical_reduce(GramMatrix::diag(1, 1, 3)));
    auto chain = reduce_to_stable(g);
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].m == 5);
    CHECK(canonical_reduce(chain[0].after) ==
          canonical_reduce(GramMatrix::diag(1, 1, 3)));
}

TEST_CASE("reduction chains terminate at stable lattices") {
    testutil::Lcg rng(9);
    for (int t = 0; t < 50; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng);
        auto chain = reduce_to_stable(g);
        GramMatrix cur = chain.empty() ? g : chain.back().after;
        CHECK(is_stable(cur));
        long budget = 3;
        for (const auto& [p, e] : factorize(g.det())) {
            (void)p;
            budget += e;
        }
        CHECK(static_cast<long>(chain.size()) <= budget);
        for (const auto& step : chain) {
            Int p = (step.m == 4) ? Int(2) : step.m;
            long before = valuation(step.before.det(), p);
            long after = valuation(step.after.det(), p);
            if (before >= 2) CHECK(after < before);
        }
    }
}

TEST_CASE("localization away from m is untouched") {
    testutil::Lcg rng(13);
    for (int t = 0; t < 25; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng);
        for (Int m : {Int(3), Int(5)}) {
            GramMatrix lam = big_lambda(g, m);
            for (Int q : {Int(2), Int(7), Int(3)}) {
                if (q == m) continue;
                CHECK(valuation(lam.det(), q) == valuation(g.det(), q));
                CHECK(hasse_symbol_star(lam, q) == hasse_symbol_star(g, q));
            }
        }
    }
}

TEST_CASE("auxiliary lattice of the isotropic split") {
    GramMatrix g = GramMatrix::diag(1, 1, 75);
    GramMatrix K = construct_K(g, 5);
    CHECK(canonical_reduce(K) == canonical_reduce(GramMatrix::diag(1, 1, 15)));
    // Away from 5 the auxiliary lattice keeps the local invariants.
    for (Int q : {Int(2), Int(3)}) {
        CHECK(valuation(K.det(), q) == valuation(g.det(), q));
        CHECK(hasse_symbol_star(K, q) == hasse_symbol_star(g, q));
    }
}

TEST_CASE("auxiliary lattice hypotheses are enforced") {
    CHECK_THROWS_AS(construct_K(GramMatrix::diag(1, 3, 5), 5),
                    HypothesisViolated);
    CHECK_THROWS_AS(construct_K(GramMatrix::diag(1, 1, 75), 3),
                    HypothesisViolated);
    // Anisotropic plane: unit determinant is a non-residue.
    CHECK_THROWS_AS(construct_K(GramMatrix::diag(1, 2, 25), 5),
                    HypothesisViolated);
}

TEST_CASE("primitivity is required") {
    CHECK_THROWS_AS(reduce_to_stable(GramMatrix::diag(2, 2, 2)),
                    NotPrimitive);
}
