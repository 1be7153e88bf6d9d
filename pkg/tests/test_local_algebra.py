import itertools
import random
from fractions import Fraction

import pytest

from tsmooth.jets import Jet, jet_for_germ, make_jet
from tsmooth.local_algebra import (
    LocalIdealRep,
    NotFiniteColengthError,
    bounded_colength,
    certify_primary,
    colength,
    colength_at,
    ideal_contains,
    intersection_multiplicity,
    minimal_generator_count,
    monomial_count,
    standard_generators,
    tau,
    tjurina_ideal,
)

from _oracles import dense_colength


def ideal(*texts, n=10):
    return LocalIdealRep.of(*(make_jet(t, n) for t in texts))


# -- frozen values, cross-checked against the dense oracle --------------------

CASES = [
    (("x", "y"), 1),
    (("x^2", "y^3"), 6),
    (("x^2", "y", "y^2 - x^3"), 2),  # staircase of <x^2, y> after reduction
    (("x^2 - y^2", "x^2 + y^2"), 4),
    (("x^3", "x*y", "y^2"), 4),
]


@pytest.mark.parametrize("texts,expected", CASES)
def test_colength_frozen_cases(texts, expected):
    assert colength(ideal(*texts)).value == expected


@pytest.mark.parametrize("texts,expected", CASES)
def test_colength_matches_dense_oracle(texts, expected):
    gens = [dict(make_jet(t, 12).coeffs) for t in texts]
    assert dense_colength(gens, 9) == expected


def test_colength_is_stable_flagged():
    got = colength(ideal("x^2", "y^3"))
    assert got.stable


def test_not_finite_reported():
    with pytest.raises(NotFiniteColengthError):
        colength(ideal("x^2*y", n=8), cap=32)


def test_zero_generators_rejected():
    with pytest.raises(ValueError):
        colength(LocalIdealRep((Jet.zero(5),)))


def test_intersection_multiplicity_examples():
    f = jet_for_germ("y^2 - x^3")
    assert intersection_multiplicity(f, make_jet("y", f.truncation)).value == 3
    assert intersection_multiplicity(make_jet("x", 6), make_jet("y", 6)).value == 1
    a = make_jet("x^2 - y^2", 8)
    b = make_jet("x^2 + y^2", 8)
    assert intersection_multiplicity(a, b).value == 4


def test_intersection_multiplicity_shared_branch():
    with pytest.raises(NotFiniteColengthError):
        intersection_multiplicity(make_jet("x*y", 8), make_jet("x", 8), cap=32)


def test_tjurina_ideal_node():
    f = make_jet("x*y", 8)
    tj = tjurina_ideal(f)
    assert [str(g) for g in tj.generators] == ["y", "x", "x*y"]
    assert colength(tj).value == 1


def test_tjurina_ideal_cusp():
    f = make_jet("y^2 - x^3", 10)
    tj = tjurina_ideal(f)
    assert [str(g) for g in tj.generators] == ["-3*x^2", "2*y", "y^2 - x^3"]
    assert colength(tj).value == 2


@pytest.mark.parametrize("k", range(1, 7))
def test_tau_of_ak_normal_forms(k):
    assert tau(jet_for_germ(f"y^2 - x^{k + 1}")) == k


def test_tjurina_preconditions():
    with pytest.raises(ValueError):
        tjurina_ideal(Jet.zero(5))
    with pytest.raises(ValueError):
        tjurina_ideal(make_jet("1 + x", 5))


# -- engine properties ---------------------------------------------------------

def test_colength_stability_across_truncations(germ_corpus):
    for f in germ_corpus.values():
        tj = tjurina_ideal(f)
        value = colength(tj).value
        for bump in (0, 2):
            n = value + 3 + bump
            assert colength_at(tj.at_truncation(n), n) == value


def test_primary_certificate(germ_corpus):
    for f in germ_corpus.values():
        tj = tjurina_ideal(f)
        value = colength(tj).value
        assert certify_primary(tj, value + 1, value + 3)


def test_symmetry(germ_corpus):
    pairs = [
        (germ_corpus[("A", 2)], make_jet("x^2 + y", 10)),
        (germ_corpus[("A", 3)], make_jet("x^2 - y^2 + x^3", 10)),
        (germ_corpus[("E", 6)], make_jet("x + y^2", 10)),
        (make_jet("x^2 - y^3", 10), make_jet("x^2 + y^3", 10)),
    ]
    for f, g in pairs:
        n = max(f.truncation, g.truncation)
        f, g = f.with_truncation(n), g.with_truncation(n)
        assert (
            intersection_multiplicity(f, g).value
            == intersection_multiplicity(g, f).value
        )


def test_additivity_over_products():
    cases = [
        ("y^2 - x^3", "y", "x + y"),
        ("y^2 - x^3", "x", "x - y"),
        ("x^2 + y^3", "x + y", "x - y"),
        ("x^3 + y^4", "y + x^2", "x"),
    ]
    n = 16
    for ftext, gtext, htext in cases:
        f = make_jet(ftext, n)
        g = make_jet(gtext, n)
        h = make_jet(htext, n)
        lhs = intersection_multiplicity(f, g * h).value
        rhs = (
            intersection_multiplicity(f, g).value
            + intersection_multiplicity(f, h).value
        )
        assert lhs == rhs


def test_member_contact_exceeds_colength(germ_corpus):
    # members of any ideal between the Tjurina ideal and m have contact > colength
    for f in germ_corpus.values():
        tj = tjurina_ideal(f)
        d = colength(tj).value
        for g in standard_generators(tj):
            try:
                i = intersection_multiplicity(f, g.with_truncation(f.truncation)).value
            except NotFiniteColengthError:
                continue
            assert i > d


def test_standard_generators_ak():
    for k in range(1, 6):
        f = jet_for_germ(f"y^2 - x^{k + 1}")
        gens = standard_generators(tjurina_ideal(f))
        rendered = sorted(str(g) for g in gens)
        assert rendered == sorted(["y", f"x^{k}" if k > 1 else "x"])


def test_standard_generators_generate_same_ideal():
    f = jet_for_germ("x^2*y - y^5")
    tj = tjurina_ideal(f)
    gens = standard_generators(tj)
    regenerated = LocalIdealRep.of(*gens)
    assert colength(regenerated).value == colength(tj).value
    assert ideal_contains(regenerated, tj.nonzero_generators())
    assert ideal_contains(tj, gens)


def test_minimal_generator_count():
    assert minimal_generator_count(ideal("x", "y")) == 2
    assert minimal_generator_count(ideal("x^2", "x*y", "y^2")) == 3
    f = jet_for_germ("x^2*y - y^5")
    assert minimal_generator_count(tjurina_ideal(f)) == 2


def test_monomial_count():
    assert monomial_count(4) == 10
    assert colength(ideal("x^4", "y^4", n=12)).value == 16


def test_bounded_colength_uncertified_is_lower_bound():
    deep = ideal("x^6", "y^6", n=14)
    got = bounded_colength(deep, 5)
    assert not got.stable
    assert got.value <= colength(deep).value


def test_ideal_contains_certifies():
    tj = tjurina_ideal(jet_for_germ("y^2 - x^3"))
    assert ideal_contains(tj, [make_jet("y^2 - x^3", 10)])
    assert not ideal_contains(tj, [make_jet("x", 10)])


def test_dense_oracle_agrees_on_random_monomial_ideals():
    rng = random.Random(5)
    for _ in range(10):
        e1, e2 = rng.randint(1, 3), rng.randint(1, 3)
        texts = (f"x^{e1}", f"y^{e2}")
        expected = e1 * e2
        assert colength(ideal(*texts)).value == expected
        assert dense_colength([dict(make_jet(t, 10).coeffs) for t in texts], 8) == expected
