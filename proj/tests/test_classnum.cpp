#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genusavg/classnum.hpp"
#include "genusavg/errors.hpp"

using namespace genusavg;

TEST_CASE("primitive class numbers by reduced-form enumeration") {
    CHECK(h_primitive(-3) == 1);
    CHECK(h_primitive(-4) == 1);
    CHECK(h_primitive(-7) == 1);
    CHECK(h_primitive(-8) == 1);
    CHECK(h_primitive(-11) == 1);
    CHECK(h_primitive(-12) == 1);
    CHECK(h_primitive(-15) == 2);
    CHECK(h_primitive(-20) == 2);
    CHECK(h_primitive(-23) == 3);
    CHECK(h_primitive(-47) == 5);
    CHECK(h_primitive(-163) == 1);
    CHECK_THROWS_AS(h_primitive(-5), InvalidArgument); // 3 mod 4
    CHECK_THROWS_AS(h_primitive(4), InvalidArgument);
}

TEST_CASE("Hurwitz class numbers from the defining sum") {
    CHECK(hurwitz(Rat(3)) == Rat(1, 3));
    CHECK(hurwitz(Rat(4)) == Rat(1, 2));
    CHECK(hurwitz(Rat(7)) == 1);
    CHECK(hurwitz(Rat(8)) == 1);
    CHECK(hurwitz(Rat(11)) == 1);
    CHECK(hurwitz(Rat(12)) == Rat(4, 3));
    CHECK(hurwitz(Rat(16)) == Rat(3, 2));
    CHECK(hurwitz(Rat(27)) == Rat(4, 3));

    // Total on rationals: zero off the support.
    CHECK(hurwitz(Rat(0)) == 0);
    CHECK(hurwitz(Rat(-4)) == 0);
    CHECK(hurwitz(Rat(5, 3)) == 0);
    CHECK(hurwitz(Rat(1)) == 0);
    CHECK(hurwitz(Rat(2)) == 0);
    CHECK(hurwitz(Rat(6)) == 0);
}

TEST_CASE("defining sum agrees with the conductor product formula") {
    for (Int N = 1; N <= 2000; ++N)
        CHECK(hurwitz(Rat(N)) == hurwitz_fast(N));
    CHECK(hurwitz_fast(60) == hurwitz(Rat(60)));
    CHECK(hurwitz_fast(75) == hurwitz(Rat(75))); // conductor 5
}

TEST_CASE("single-prime reduction identity") {
    for (Int N = 1; N <= 500; ++N)
        for (Int q : {2, 3, 5, 7, 11, 13})
            CHECK(hurwitz_reduce_q(N, q) == hurwitz(Rat(N)));
    CHECK(hurwitz_reduce_q(300, 5) == hurwitz(Rat(300)));
    CHECK(hurwitz_reduce_q(48, 2) == hurwitz(Rat(48)));
}

TEST_CASE("conductor relation for non-maximal orders") {
    for (Int d : {-3, -4, -7, -8, -15, -20})
        for (Int f = 1; f <= 30; ++f)
            CHECK(h_primitive(d * f * f) == h_via_conductor(d, f));
}

TEST_CASE("vanishing pattern and 6H integrality") {
    for (Int N = 1; N <= 2000; ++N) {
        Rat h = hurwitz(Rat(N));
        Int r = N % 4;
        CHECK((h != 0) == (r == 0 || r == 3));
        CHECK(h >= 0);
        CHECK(Rat(6 * h).get_den() == 1);
    }
}

TEST_CASE("cache clearing does not change values") {
    Rat a = hurwitz(Rat(4 * 75 * 7));
    classnum_clear_cache();
    CHECK(hurwitz(Rat(4 * 75 * 7)) == a);
}
