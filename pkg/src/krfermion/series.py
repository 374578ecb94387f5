"""Sparse exact truncated multivariate power series and the weight group algebra.

A :class:`TruncatedSeries` lives in ``Q[[y_1..y_n]]`` modulo a truncation
ideal: either a per-variable box (``y_a^(d_a+1)``) or a total-degree cutoff,
or both.  Coefficients are Python ``int`` or ``Fraction``.

Exponent vectors are packed into a single integer with one guard bit per
field, so a product exponent is one integer addition and the out-of-range
test is one mask.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class Truncation:
    """Per-variable maximal exponents, plus an optional total-degree cutoff."""

    maxdeg: tuple
    total: int | None = None

    def __post_init__(self):
        if any(d < 0 for d in self.maxdeg):
            raise ValueError("truncation degrees must be nonnegative")
        if self.total is not None and self.total < 0:
            raise ValueError("total degree cutoff must be nonnegative")

    @classmethod
    def box(cls, degs: Iterable[int]) -> "Truncation":
        return cls(tuple(degs))

    @classmethod
    def total_degree(cls, nvars: int, total: int) -> "Truncation":
        return cls((total,) * nvars, total)

    @property
    def nvars(self) -> int:
        return len(self.maxdeg)

    def contains(self, exp) -> bool:
        if any(e < 0 or e > d for e, d in zip(exp, self.maxdeg)):
            return False
        return self.total is None or sum(exp) <= self.total

    def exponents(self):
        """All exponent vectors inside the truncation, by total degree."""
        out = [e for e in itertools.product(*(range(d + 1) for d in self.maxdeg))
               if self.total is None or sum(e) <= self.total]
        out.sort(key=lambda e: (sum(e), e))
        return out

    @cached_property
    def max_total(self) -> int:
        s = sum(self.maxdeg)
        return s if self.total is None else min(s, self.total)

    def drop(self, a: int) -> "Truncation":
        """Truncation after differentiating in variable ``a`` (0-based)."""
        degs = list(self.maxdeg)
        degs[a] = max(degs[a] - 1, 0)
        total = None if self.total is None else max(self.total - 1, 0)
        return Truncation(tuple(degs), total)

    @cached_property
    def _packing(self):
        caps = list(self.maxdeg)
        if self.total is not None:
            caps.append(self.total)
        widths = [max(c, 1).bit_length() + 2 for c in caps]
        shifts = []
        s = 0
        for w in widths:
            shifts.append(s)
            s += w
        guard = 0
        offset = 0
        for c, w, sh in zip(caps, widths, shifts):
            guard |= 1 << (sh + w - 1)
            offset |= ((1 << (w - 1)) - 1 - c) << sh
        masks = [(1 << w) - 1 for w in widths]
        return tuple(shifts), tuple(masks), guard, offset

    def pack(self, exp) -> int:
        shifts, _, _, _ = self._packing
        key = 0
        for e, sh in zip(exp, shifts):
            key |= e << sh
        if self.total is not None:
            key |= sum(exp) << shifts[-1]
        return key

    def unpack(self, key: int) -> tuple:
        shifts, masks, _, _ = self._packing
        return tuple((key >> shifts[i]) & masks[i] for i in range(self.nvars))

    def in_range(self, key: int) -> bool:
        _, _, guard, offset = self._packing
        return not ((key + offset) & guard)


class TruncationMismatch(ValueError):
    pass


class TruncatedSeries:
    """An element of ``Q[[y]] / I`` for a truncation ideal ``I``.

    Values are treated as immutable: every operation returns a new series.
    """

    __slots__ = ("trunc", "_terms")

    def __init__(self, trunc: Truncation, terms: Mapping | None = None, *, _packed=None):
        self.trunc = trunc
        if _packed is not None:
            self._terms = _packed
            return
        packed = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != trunc.nvars:
                raise ValueError("exponent length does not match number of variables")
            if not trunc.contains(exp):
                continue
            c = _norm(c)
            if c:
                k = trunc.pack(exp)
                packed[k] = _norm(packed.get(k, 0) + c)
                if not packed[k]:
                    del packed[k]
        self._terms = packed

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, trunc: Truncation, c=1) -> "TruncatedSeries":
        return cls(trunc, {(0,) * trunc.nvars: c})

    @classmethod
    def one(cls, trunc: Truncation) -> "TruncatedSeries":
        return cls.constant(trunc, 1)

    @classmethod
    def zero(cls, trunc: Truncation) -> "TruncatedSeries":
        return cls(trunc, _packed={})

    @classmethod
    def monomial(cls, trunc: Truncation, exp, c=1) -> "TruncatedSeries":
        return cls(trunc, {tuple(exp): c})

    @classmethod
    def variable(cls, trunc: Truncation, a: int, power: int = 1) -> "TruncatedSeries":
        exp = [0] * trunc.nvars
        exp[a] = power
        return cls(trunc, {tuple(exp): 1})

    # -- access -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return {self.trunc.unpack(k): c for k, c in self._terms.items()}

    def coeff(self, exp):
        exp = tuple(exp)
        if not self.trunc.contains(exp):
            return 0
        return self._terms.get(self.trunc.pack(exp), 0)

    def constant_term(self):
        return self._terms.get(0, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self.items():
            mono = "*".join(f"y{i + 1}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(exp) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def _check(self, other: "TruncatedSeries"):
        if other.trunc != self.trunc:
            raise TruncationMismatch(f"{self.trunc} vs {other.trunc}")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(self.trunc, other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash((self.trunc, frozenset(self._terms.items())))

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = _norm(out.get(k, 0) + c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TruncatedSeries(self.trunc, _packed=out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.trunc, _packed={k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "TruncatedSeries":
        s = _norm(Fraction(s)) if not isinstance(s, int) else s
        if not s:
            return TruncatedSeries.zero(self.trunc)
        return TruncatedSeries(self.trunc, _packed={k: _norm(c * s) for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return pow_int(self, e)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * invert_unit(other)

    def inverse(self) -> "TruncatedSeries":
        return invert_unit(self)

    def map_coeffs(self, fn) -> "TruncatedSeries":
        return TruncatedSeries(self.trunc, {e: fn(c) for e, c in self.terms.items()})

    def retruncate(self, trunc: Truncation) -> "TruncatedSeries":
        """Reduce into a smaller (or equal) truncation."""
        return TruncatedSeries(trunc, self.terms)

    def reduce_mod_power(self, a: int, power: int) -> "TruncatedSeries":
        """Drop terms divisible by ``y_a^power`` (0-based ``a``)."""
        return TruncatedSeries(self.trunc, {e: c for e, c in self.terms.items() if e[a] < power})

    def shift(self, exp) -> "TruncatedSeries":
        """Multiply by the monomial ``y^exp``."""
        return TruncatedSeries(self.trunc, {tuple(x + d for x, d in zip(e, exp)): c
                                            for e, c in self.terms.items()})

    def divide_monomial(self, exp) -> "TruncatedSeries":
        """Exact division by ``y^exp``; every term must be divisible.

        The result lives in the same truncation, so its top degrees are
        not determined and are only meaningful below ``maxdeg - exp``.
        """
        out = {}
        for e, c in self.terms.items():
            q = tuple(x - d for x, d in zip(e, exp))
            if min(q) < 0:
                raise ValueError("series not divisible by monomial")
            out[q] = c
        return TruncatedSeries(self.trunc, out)

    def to_json(self) -> list:
        return [
            {"exponents": list(exp), "coeff": f"{Fraction(c).numerator}/{Fraction(c).denominator}"}
            for exp, c in self.items()
        ]

    @classmethod
    def from_json(cls, trunc: Truncation, data: list) -> "TruncatedSeries":
        return cls(trunc, {tuple(d["exponents"]): Fraction(d["coeff"]) for d in data})


# -- series operations ------------------------------------------------

def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    f._check(g)
    trunc = f.trunc
    _, _, guard, offset = trunc._packing
    if len(f._terms) > len(g._terms):
        f, g = g, f
    out: dict = {}
    gitems = list(g._terms.items())
    for kf, cf in f._terms.items():
        for kg, cg in gitems:
            k = kf + kg
            if (k + offset) & guard:
                continue
            out[k] = out.get(k, 0) + cf * cg
    packed = {}
    for k, c in out.items():
        c = _norm(c)
        if c:
            packed[k] = c
    return TruncatedSeries(trunc, _packed=packed)


class NotAUnit(ZeroDivisionError):
    pass


def invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse modulo the truncation ideal."""
    c0 = f.constant_term()
    if not c0:
        raise NotAUnit("constant term is zero")
    trunc = f.trunc
    inv0 = _norm(Fraction(1) / Fraction(c0)) if c0 not in (1, -1) else c0
    _, _, guard, _ = trunc._packing
    rest = [(k, c) for k, c in f._terms.items() if k != 0]
    g = {0: inv0}
    # recursion on exponents in order of total degree
    for exp in trunc.exponents()[1:]:
        key = trunc.pack(exp) | guard
        s = 0
        for kf, cf in rest:
            d = key - kf
            # a borrow out of any field clears that field's guard bit
            if d & guard != guard:
                continue
            cg = g.get(d ^ guard)
            if cg is not None:
                s += cf * cg
        if s:
            v = _norm(-s * inv0)
            if v:
                g[key ^ guard] = v
    return TruncatedSeries(trunc, _packed=g)


def pow_int(f: TruncatedSeries, e: int) -> TruncatedSeries:
    e = int(e)
    if e < 0:
        if not f.constant_term():
            raise NotAUnit("negative power of a non-unit")
        return pow_int(invert_unit(f), -e)
    result = TruncatedSeries.one(f.trunc)
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def pow_rational(f: TruncatedSeries, s) -> TruncatedSeries:
    """``f**s`` for rational ``s``; ``f`` must have constant term 1."""
    s = Fraction(s)
    if s.denominator == 1:
        return pow_int(f, s.numerator)
    if f.constant_term() != 1:
        raise NotAUnit("rational powers need constant term 1")
    from .fermionic import gen_binomial

    h = f - 1
    result = TruncatedSeries.one(f.trunc)
    hp = TruncatedSeries.one(f.trunc)
    for j in range(1, f.trunc.max_total + 1):
        hp = hp * h
        if hp.is_zero():
            break
        result = result + hp.scale(gen_binomial(s, j))
    return result


def partial_derivative(f: TruncatedSeries, a: int) -> TruncatedSeries:
    """d/dy_a (0-based ``a``); the result lives in the reduced truncation."""
    trunc = f.trunc.drop(a)
    out = {}
    for exp, c in f.terms.items():
        if exp[a]:
            e = list(exp)
            e[a] -= 1
            out[tuple(e)] = c * exp[a]
    return TruncatedSeries(trunc, out)


def euler_derivative(f: TruncatedSeries, a: int) -> TruncatedSeries:
    """y_a d/dy_a (0-based ``a``); preserves the truncation."""
    return TruncatedSeries(f.trunc, {e: c * e[a] for e, c in f.terms.items()})


def total_euler(f: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(f.trunc, {e: c * sum(e) for e, c in f.terms.items()})


def log_derivative(f: TruncatedSeries, a: int) -> TruncatedSeries:
    """y_a (d/dy_a f) / f for a unit ``f``."""
    return euler_derivative(f, a) * invert_unit(f)


def series_det(matrix) -> TruncatedSeries:
    """Determinant of a square matrix of series by cofactor expansion.

    Minors are memoized on their column sets, giving ``O(n 2^n)`` products.
    """
    n = len(matrix)
    memo = {}

    def minor(row, cols):
        if row == n:
            return None
        key = cols
        if key in memo:
            return memo[key]
        total = None
        sign = 1
        for j in range(n):
            if cols & (1 << j):
                continue
            entry = matrix[row][j]
            if not entry.is_zero():
                sub = minor(row + 1, cols | (1 << j))
                term = entry if sub is None else entry * sub
                term = term if sign > 0 else -term
                total = term if total is None else total + term
            sign = -sign
        if total is None:
            total = TruncatedSeries.zero(matrix[0][0].trunc)
        memo[key] = total
        return total

    if n == 0:
        raise ValueError("empty matrix")
    return minor(0, 0)


# -- group algebra of the weight lattice -----------------------------------

class GroupAlgebraElement:
    """Finitely supported map weight -> integer, with convolution product."""

    __slots__ = ("_d",)

    def __init__(self, data: Mapping | None = None):
        d = {}
        for w, c in (data or {}).items():
            if c:
                w = tuple(w)
                v = d.get(w, 0) + c
                if v:
                    d[w] = v
                else:
                    d.pop(w, None)
        self._d = d

    @classmethod
    def exp(cls, weight, c=1) -> "GroupAlgebraElement":
        return cls({tuple(weight): c})

    @classmethod
    def one(cls, rank: int) -> "GroupAlgebraElement":
        return cls({(0,) * rank: 1})

    def __getitem__(self, w):
        return self._d.get(tuple(w), 0)

    coeff = __getitem__

    def items(self):
        return sorted(self._d.items())

    def support(self):
        return set(self._d)

    def __len__(self):
        return len(self._d)

    def __iter__(self):
        return iter(self._d)

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __repr__(self):
        return "GroupAlgebraElement(" + ", ".join(f"{w}: {c}" for w, c in self.items()) + ")"

    def __add__(self, other):
        out = dict(self._d)
        for w, c in other._d.items():
            out[w] = out.get(w, 0) + c
        return GroupAlgebraElement(out)

    def __neg__(self):
        return GroupAlgebraElement({w: -c for w, c in self._d.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "GroupAlgebraElement":
        return GroupAlgebraElement({w: c * s for w, c in self._d.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        out: dict = {}
        for w1, c1 in self._d.items():
            for w2, c2 in other._d.items():
                w = tuple(x + y for x, y in zip(w1, w2))
                out[w] = out.get(w, 0) + c1 * c2
        return GroupAlgebraElement(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in the group algebra")
        out = None
        for _ in range(e):
            out = self if out is None else out * self
        if out is None:
            rank = len(next(iter(self._d))) if self._d else 0
            return GroupAlgebraElement.one(rank)
        return out

    def dimension(self) -> int:
        return sum(self._d.values())


class NotHighestWeightBounded(ValueError):
    pass


def embed_weight(c, g: GroupAlgebraElement, highest, trunc: Truncation) -> TruncatedSeries:
    """The y-series of ``e^{-highest} * g`` using ``y_a = e^{-alpha_a}``."""
    highest = tuple(highest)
    terms = {}
    for mu, coeff in g.items():
        diff = [h - x for h, x in zip(highest, mu)]
        d = c.weight_to_root(diff)
        if any(Fraction(x).denominator != 1 or x < 0 for x in d):
            raise NotHighestWeightBounded(f"weight {mu} is not below {highest}")
        terms[tuple(int(x) for x in d)] = coeff
    return TruncatedSeries(trunc, terms)
