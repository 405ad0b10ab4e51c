#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genusavg/config.hpp"
#include "genusavg/errors.hpp"
#include "genusavg/genusformula.hpp"
#include "genusavg/oracle.hpp"
#include "test_util.hpp"

using namespace genusavg;
using testutil::even_example;

TEST_CASE("representation counts of sums of three squares") {
    GramMatrix g = GramMatrix::diag(1, 1, 1);
    CHECK(count_representations(g, 0) == 1);
    CHECK(count_representations(g, 1) == 6);
    CHECK(count_representations(g, 2) == 12);
    CHECK(count_representations(g, 3) == 8);
    CHECK(count_representations(g, 4) == 6);
    CHECK(count_representations(g, 7) == 0);
    CHECK(count_representations(g, 15) == 0);
}

TEST_CASE("representation counts respect parity and scaling") {
    GramMatrix e = even_example();
    for (Int n = 1; n <= 99; n += 2) CHECK(count_representations(e, n) == 0);
    GramMatrix s = GramMatrix::diag(3, 9, 15);
    for (Int n = 1; n <= 30; ++n) {
        Int c = count_representations(s, n);
        if (n % 3 != 0)
            CHECK(c == 0);
        else
            CHECK(c == count_representations(GramMatrix::diag(1, 3, 5), n / 3));
    }
}

TEST_CASE("representation counts are basis invariant") {
    testutil::Lcg rng(101);
    for (int t = 0; t < 15; ++t) {
        GramMatrix g = testutil::random_primitive_gram(rng, 6);
        BasisMatrix u = testutil::random_unimodular(rng);
        GramMatrix h = transform(g, u);
        for (Int n = 1; n <= 20; ++n)
            CHECK(count_representations(g, n) == count_representations(h, n));
    }
}

TEST_CASE("product route agrees with the recursive evaluator") {
    LatticeProfile L = profile(GramMatrix::diag(1, 3, 5));
    for (Int n = 1; n <= 200; ++n)
        CHECK(siegel_semi_oracle(L, n) == evaluate_genus_avg(L, n));
}

TEST_CASE("product route agrees with direct counts on a one-class genus") {
    LatticeProfile L = profile(GramMatrix::diag(1, 1, 1));
    for (Int n = 1; n <= 200; ++n)
        CHECK(siegel_semi_oracle(L, n) == Rat(count_representations(L.prim, n)));
}

TEST_CASE("enumeration budget is enforced") {
    auto saved = config().enum_budget;
    config().enum_budget = 10;
    CHECK_THROWS_AS(count_representations(GramMatrix::diag(1, 1, 1), 5000),
                    BudgetExceeded);
    config().enum_budget = saved;
    CHECK(count_representations(GramMatrix::diag(1, 1, 1), 5000) > 0);
}

TEST_CASE("verification battery passes on the built-in corpus") {
    VerificationReport rep = verify_all(default_corpus(), 40);
    bool all = true;
    for (const auto& c : rep.checks) {
        INFO(c.name << ": " << c.witness);
        CHECK(c.passed);
        all = all && c.passed;
    }
    CHECK(rep.all_pass() == all);
    CHECK(rep.checks.size() >= 10);
}

TEST_CASE("verification battery reports invalid inputs as failures") {
    GramMatrix bad = GramMatrix::diag(1, 1, -1);
    VerificationReport rep = verify_all({GramMatrix::diag(1, 1, 1), bad}, 5);
    CHECK(!rep.all_pass());
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "input/validate[1]") {
            found = true;
            CHECK(!c.passed);
        }
    CHECK(found);
}

TEST_CASE("verification battery on an empty corpus") {
    VerificationReport rep = verify_all({}, 10);
    // Lattice-independent checks (class numbers) still run and pass.
    CHECK(rep.all_pass());
    CHECK(!rep.checks.empty());
}
