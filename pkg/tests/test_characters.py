from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from krfermion.cartan import build_cartan, simple_reflection
from krfermion.characters import (NotACharacter, classical_kr_character,
                                  decompose_into_irreducibles, irreducible_character,
                                  kr_highest_weights, kr_tensor_character, tensor_character,
                                  tensor_weight_multiplicity, weyl_denominator,
                                  weyl_denominator_series, weyl_dimension)
from krfermion.qsystem import QTable, check_qsystem, level_truncation
from krfermion.series import GroupAlgebraElement, TruncatedSeries, Truncation, embed_weight


def chi(c, lam):
    return irreducible_character(c, lam)


def test_irreducible_examples():
    a2, b2 = build_cartan("A2"), build_cartan("B2")
    assert chi(a2, (1, 0)).dimension() == 3
    adj = chi(a2, (1, 1))
    assert adj.dimension() == 8 and adj[(0, 0)] == 2 and adj[(1, 1)] == 1
    assert chi(b2, (0, 1)).dimension() == 4
    with pytest.raises(ValueError):
        chi(a2, (1, -1))


CLASSICAL = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4"]


@pytest.mark.parametrize("name", CLASSICAL)
def test_dimension_and_weyl_invariance(name):
    c = build_cartan(name)
    cap = 3 if c.n <= 2 else (2 if c.n == 3 else 1)
    for lam in product(range(cap + 1), repeat=c.n):
        ch = chi(c, lam)
        assert ch.dimension() == weyl_dimension(c, lam)
        assert ch[lam] == 1
        for mu, v in ch.items():
            for i in range(1, c.n + 1):
                assert ch[simple_reflection(c, i, mu)] == v


def test_classical_kr_examples():
    a3, b2, c2 = build_cartan("A3"), build_cartan("B2"), build_cartan("C2")
    assert classical_kr_character(a3, 2, 3) == chi(a3, (0, 3, 0))
    assert sorted(kr_highest_weights(b2, 2, 2)) == [(0, 0), (0, 2)]
    assert classical_kr_character(b2, 2, 2) == chi(b2, (0, 0)) + chi(b2, (0, 2))
    assert sorted(kr_highest_weights(c2, 1, 2)) == [(0, 0), (2, 0)]
    with pytest.raises(ValueError):
        classical_kr_character(build_cartan("G2"), 1, 1)


def test_tensor_examples():
    a1 = build_cartan("A1")
    assert tensor_weight_multiplicity(a1, [], (0,)) == 1
    assert tensor_weight_multiplicity(a1, [chi(a1, (1,))] * 2, (0,)) == 2
    assert tensor_character([chi(a1, (1,))] * 2) == chi(a1, (2,)) + chi(a1, (0,))


def test_weyl_denominator_series():
    a1, a2, b2 = build_cartan("A1"), build_cartan("A2"), build_cartan("B2")
    t1 = Truncation((3,))
    y = TruncatedSeries.variable
    assert weyl_denominator_series(a1, t1) == TruncatedSeries.one(t1) - y(t1, 0)
    t2 = Truncation((3, 3))
    one = TruncatedSeries.one(t2)
    y1, y2 = y(t2, 0), y(t2, 1)
    assert weyl_denominator_series(a2, t2) == (one - y1) * (one - y2) * (one - y1 * y2)
    expect = one
    for r in b2.posroots:
        expect = expect * (one - TruncatedSeries.monomial(t2, r))
    assert len(b2.posroots) == 4
    assert weyl_denominator_series(b2, t2) == expect
    assert embed_weight(b2, weyl_denominator(b2), (0, 0), t2) == expect


def test_decompose_examples():
    a1, b3 = build_cartan("A1"), build_cartan("B3")
    assert decompose_into_irreducibles(a1, chi(a1, (1,)) ** 2) == {(0,): 1, (2,): 1}
    assert decompose_into_irreducibles(b3, chi(b3, (1, 0, 1))) == {(1, 0, 1): 1}
    with pytest.raises(NotACharacter):
        decompose_into_irreducibles(a1, chi(a1, (0,)) - chi(a1, (2,)))
    with pytest.raises(NotACharacter):
        decompose_into_irreducibles(a1, GroupAlgebraElement({(-1,): 1}))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "C3", "G2"]),
       st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)),
                       st.integers(1, 3), max_size=3))
def test_decompose_roundtrip(name, raw):
    c = build_cartan(name)
    mults = {}
    for lam, v in raw.items():
        lam = lam[:c.n]
        mults[lam] = mults.get(lam, 0) + v
    ch = GroupAlgebraElement()
    for lam, v in mults.items():
        ch = ch + chi(c, lam).scale(v)
    assert decompose_into_irreducibles(c, ch) == dict(sorted(mults.items()))


def kr_table(c, l):
    trunc = level_truncation(c, l)
    entries = {}
    for a in range(1, c.n + 1):
        for m in range(1, c.tt(a) * l + 2):
            hw = [0] * c.n
            hw[a - 1] = m
            entries[(a, m)] = embed_weight(c, classical_kr_character(c, a, m), hw, trunc)
    return QTable(c, l, entries)


@pytest.mark.parametrize("name,l", [("A2", 2), ("B2", 2), ("C2", 2), ("B3", 1), ("C3", 1), ("D4", 1)])
def test_kr_characters_satisfy_qsystem(name, l):
    c = build_cartan(name)
    assert check_qsystem(c, kr_table(c, l)) == {}


def test_kr_tensor_character_dimension():
    a2 = build_cartan("A2")
    ch = kr_tensor_character(a2, {(1, 1): 2, (2, 1): 1})
    assert ch.dimension() == 27
