#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genusavg/errors.hpp"
#include "genusavg/json_io.hpp"
#include "test_util.hpp"

using namespace genusavg;
using testutil::even_example;

TEST_CASE("rational serialization round trip") {
    CHECK(rat_str(Rat(4, 3)) == "4/3");
    CHECK(rat_str(Rat(7)) == "7");
    CHECK(rat_str(Rat(-2, 5)) == "-2/5");
    CHECK(parse_rat("4/3") == Rat(4, 3));
    CHECK(parse_rat("-12") == Rat(-12));
    CHECK(parse_rat("6/4") == Rat(3, 2)); // canonicalized on input
    CHECK_THROWS_AS(parse_rat("abc"), InvalidArgument);
    CHECK_THROWS_AS(parse_rat("1/0"), InvalidArgument);
    CHECK_THROWS_AS(parse_rat(""), InvalidArgument);
}

TEST_CASE("gram matrix JSON round trip") {
    GramMatrix g = even_example();
    Json j = gram_to_json(g);
    REQUIRE(j.contains("gram"));
    CHECK(gram_from_json(j) == g);

    Json d = {{"diag", {1, 3, 5}}};
    CHECK(gram_from_json(d) == GramMatrix::diag(1, 3, 5));

    // String entries are accepted for large values.
    Json s = {{"diag", {"1", "1", "75"}}};
    CHECK(gram_from_json(s) == GramMatrix::diag(1, 1, 75));

    CHECK_THROWS_AS(gram_from_json(Json{{"rows", {1, 2, 3}}}), InvalidArgument);
    CHECK_THROWS_AS(gram_from_json(Json{{"diag", {1, 2}}}), InvalidArgument);
}

TEST_CASE("command-line shorthand parsers") {
    CHECK(parse_diag_arg("1,3,5") == GramMatrix::diag(1, 3, 5));
    CHECK(parse_gram_arg("2,1,0;1,2,1;0,1,4") == even_example());
    CHECK_THROWS_AS(parse_diag_arg("1,3"), InvalidArgument);
    CHECK_THROWS_AS(parse_diag_arg("1,x,5"), InvalidArgument);
    CHECK_THROWS_AS(parse_gram_arg("2,1,0;9,2,1;0,1,4"), NotSymmetric);
    CHECK_THROWS_AS(parse_gram_arg("2,1;1,2"), InvalidArgument);
}

TEST_CASE("formula JSON shape") {
    HFormula f;
    f.prefactor = Rat(1, 4);
    f.terms = {{Rat(1), Rat(60)}, {Rat(-5), Rat(12, 5)}};
    Json j = formula_to_json(f);
    CHECK(j["prefactor"] == "1/4");
    REQUIRE(j["terms"].size() == 2);
    CHECK(j["terms"][0]["coeff"] == "1");
    CHECK(j["terms"][0]["scale"] == "60");
    CHECK(j["terms"][1]["coeff"] == "-5");
    CHECK(j["terms"][1]["scale"] == "12/5");
}

TEST_CASE("piecewise formula JSON shape") {
    FormulaPiece piece;
    piece.residues = {Int(1), Int(4)};
    piece.guards = {"gcd(n, 5) = 1"};
    piece.formula.prefactor = Rat(2, 5);
    piece.formula.terms = {{Rat(1), Rat(12)}};
    PiecewiseFormula pf;
    pf.modulus = 5;
    pf.pieces = {piece};

    Json j = piecewise_to_json(pf);
    CHECK(j["modulus"] == "5");
    REQUIRE(j["pieces"].size() == 1);
    CHECK(j["pieces"][0]["residues"][1] == "4");
    CHECK(j["pieces"][0]["guards"][0] == "gcd(n, 5) = 1");
    CHECK(j["pieces"][0]["formula"]["prefactor"] == "2/5");
}

TEST_CASE("profile and report JSON carry the key fields") {
    Json p = profile_to_json(profile(GramMatrix::diag(1, 1, 75)));
    CHECK(p["d_L"] == "75");
    CHECK(p["stable"] == false);

    VerificationReport rep;
    rep.checks.push_back({"demo/ok", "n <= 3", true, ""});
    rep.checks.push_back({"demo/bad", "n <= 3", false, "n=2: 1 != 2"});
    Json r = report_to_json(rep);
    CHECK(r["all_pass"] == false);
    REQUIRE(r["checks"].size() == 2);
    CHECK(r["checks"][0]["passed"] == true);
    CHECK(r["checks"][1]["witness"] == "n=2: 1 != 2");
}
