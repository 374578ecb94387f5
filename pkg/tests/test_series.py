import pytest
from hypothesis import given, settings, strategies as st

from krfermion.cartan import build_cartan
from krfermion.series import (GroupAlgebraElement, NotAUnit, NotHighestWeightBounded,
                              TruncatedSeries, Truncation, TruncationMismatch, embed_weight,
                              invert_unit, mul, partial_derivative, pow_int, pow_rational,
                              series_det)

T1 = Truncation.box([3])


def y(trunc=T1, a=0, p=1):
    return TruncatedSeries.variable(trunc, a, p)


def ser(trunc, terms):
    return TruncatedSeries(trunc, terms)


def test_mul_examples():
    t = Truncation.box([2])
    assert mul(1 + y(t), 1 - y(t)) == 1 - y(t, p=2)
    geo = ser(T1, {(j,): 1 for j in range(4)})
    assert mul(geo, geo) == ser(T1, {(0,): 1, (1,): 2, (2,): 3, (3,): 4})
    assert mul(geo, TruncatedSeries.one(T1)) == geo


def test_mul_mismatch():
    with pytest.raises(TruncationMismatch):
        mul(TruncatedSeries.one(T1), TruncatedSeries.one(Truncation.box([2])))


def test_invert_examples():
    assert invert_unit(1 - y()) == ser(T1, {(j,): 1 for j in range(4)})
    assert invert_unit(TruncatedSeries.one(T1)) == 1
    half = invert_unit(TruncatedSeries.constant(T1, 2))
    assert half.constant_term() * 2 == 1
    with pytest.raises(NotAUnit):
        invert_unit(y())


def test_pow_examples():
    t = Truncation.box([2])
    assert pow_int(1 + y(t), 0) == 1
    assert pow_int(1 - y(t), -2) == ser(t, {(0,): 1, (1,): 2, (2,): 3})
    with pytest.raises(NotAUnit):
        pow_int(y(t), -1)


def test_pow_rational_square_root():
    t = Truncation.box([5])
    r = pow_rational(1 + y(t), "1/2")
    assert r * r == 1 + y(t)


def test_derivative_examples():
    assert partial_derivative(y(p=2), 0) == ser(T1.drop(0), {(1,): 2})
    assert partial_derivative(TruncatedSeries.constant(T1, 7), 0).is_zero()


def test_series_det_2x2():
    t = Truncation.box([2, 2])
    a, b = y(t, 0), y(t, 1)
    m = [[1 + a, b], [a, 1 + b]]
    assert series_det(m) == (1 + a) * (1 + b) - a * b


def test_json_roundtrip():
    t = Truncation.box([2, 2])
    f = ser(t, {(1, 0): 3, (0, 2): -1, (0, 0): 1})
    data = f.to_json()
    assert data == sorted(data, key=lambda d: d["exponents"])
    assert data[0] == {"exponents": [0, 0], "coeff": "1/1"}
    assert TruncatedSeries.from_json(t, data) == f


# -- randomized ring axioms ------------------------------------------------

TR = Truncation.box([3, 2])


@st.composite
def series(draw, unit=False):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 3), st.integers(0, 2)), st.integers(-4, 4), max_size=6))
    if unit:
        terms[(0, 0)] = draw(st.sampled_from([1, -1, 2]))
    return ser(TR, terms)


@settings(max_examples=80, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=60, deadline=None)
@given(series(unit=True))
def test_inverse_properties(f):
    inv = invert_unit(f)
    assert f * inv == 1
    assert invert_unit(inv) == f


@settings(max_examples=60, deadline=None)
@given(series(), st.integers(0, 4))
def test_pow_matches_naive(f, e):
    naive = TruncatedSeries.one(TR)
    for _ in range(e):
        naive = naive * f
    assert pow_int(f, e) == naive


@settings(max_examples=60, deadline=None)
@given(series(), series())
def test_product_rule(f, g):
    for a in (0, 1):
        lhs = partial_derivative(f * g, a)
        rhs = partial_derivative(f, a) * g.retruncate(TR.drop(a)) + \
            f.retruncate(TR.drop(a)) * partial_derivative(g, a)
        assert lhs == rhs


def test_total_degree_truncation_packing():
    t = Truncation.total_degree(3, 4)
    x, z = TruncatedSeries.variable(t, 0), TruncatedSeries.variable(t, 2)
    f = pow_int(1 + x + z, 6)
    assert all(sum(e) <= 4 for e in f.terms)
    assert f.coeff((2, 0, 2)) == 6 * 5 * 4 * 3 // 4


# -- group algebra and embedding -------------------------------------------

def test_embed_weight_examples():
    a1 = build_cartan("A1")
    t = Truncation.box([2])
    g = GroupAlgebraElement({(1,): 1, (-1,): 1})
    assert embed_weight(a1, g, (1,), t) == 1 + y(t)
    assert embed_weight(a1, GroupAlgebraElement.exp((3,)), (3,), t) == 1
    a2 = build_cartan("A2")
    t2 = Truncation.box([2, 2])
    fund = GroupAlgebraElement({(1, 0): 1, (-1, 1): 1, (0, -1): 1})
    expect = 1 + y(t2, 0) + y(t2, 0) * y(t2, 1)
    assert embed_weight(a2, fund, (1, 0), t2) == expect


def test_embed_weight_rejects_unbounded():
    a1 = build_cartan("A1")
    with pytest.raises(NotHighestWeightBounded):
        embed_weight(a1, GroupAlgebraElement({(3,): 1}), (1,), Truncation.box([2]))
    with pytest.raises(NotHighestWeightBounded):
        embed_weight(a1, GroupAlgebraElement({(0,): 1}), (1,), Truncation.box([2]))


def test_embed_weight_is_multiplicative():
    a2 = build_cartan("A2")
    t = Truncation.box([3, 3])
    fund = GroupAlgebraElement({(1, 0): 1, (-1, 1): 1, (0, -1): 1})
    dual = GroupAlgebraElement({(0, 1): 1, (1, -1): 1, (-1, 0): 1})
    lhs = embed_weight(a2, fund * dual, (1, 1), t)
    assert lhs == embed_weight(a2, fund, (1, 0), t) * embed_weight(a2, dual, (0, 1), t)
