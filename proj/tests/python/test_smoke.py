"""Smoke tests for the python bindings."""
from fractions import Fraction

import pytest

import genusavg


def test_hurwitz():
    assert genusavg.hurwitz(12) == Fraction(4, 3)
    assert genusavg.hurwitz(3) == Fraction(1, 3)
    assert genusavg.hurwitz(1) == 0
    assert genusavg.hurwitz(Fraction(5, 3)) == 0


def test_class_number():
    assert genusavg.class_number(-23) == 3
    with pytest.raises(genusavg.GenusAvgError):
        genusavg.class_number(4)


def test_genus_avg_matches_count():
    for n in range(1, 30):
        avg = genusavg.genus_avg((1, 1, 1), n)
        assert avg == genusavg.representation_count((1, 1, 1), n)
    assert genusavg.genus_avg((1, 1, 1), 3) == 8


def test_gram_input():
    gram = [[2, 1, 0], [1, 2, 1], [0, 1, 4]]
    assert genusavg.genus_avg(gram, 3) == 0
    assert genusavg.genus_avg(gram, 2) == genusavg.semi_oracle(gram, 2)


def test_local_density():
    value, provenance = genusavg.local_density((1, 3, 5), 2, 1)
    assert isinstance(value, Fraction)
    assert provenance == "stable_two_lemma"


def test_formula():
    f = genusavg.formula((1, 1, 75), samples=5)
    assert f["modulus"] == "5"
    assert len(f["pieces"]) == 3


def test_watson_chain():
    chain = genusavg.watson_chain((1, 1, 75))
    assert len(chain) == 1
    assert chain[0]["m"] == "5"


def test_verify():
    genusavg.set_depth_cap(262144)
    report = genusavg.verify(nmax=20)
    assert report["all_pass"] is True
