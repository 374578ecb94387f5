"""Cartan data for the simple Lie algebras A-G.

Vertex numbering follows the usual Bourbaki-style diagrams:

* ``B_n``: vertex ``n`` is the short root.
* ``C_n``: vertices ``1..n-1`` are short, ``n`` is long.
* ``D_n``: vertices ``n-1`` and ``n`` are the two spin nodes, both attached
  to ``n-2``.
* ``E_6``/``E_7``: chain ``1..n-1`` with vertex ``n`` attached to ``3``;
  ``E_8``: chain ``1..7`` with vertex ``8`` attached to ``5``.
* ``F_4``: ``1-2 => 3-4``, vertices 3 and 4 short.
* ``G_2``: vertex 2 short.

Weights are integer vectors in the fundamental-weight basis; roots are
integer vectors in the simple-root basis unless noted otherwise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .linalg import inverse_rational

FAMILIES = "ABCDEFG"

_WEYL_ORDER = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


class InvalidAlgebra(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraId:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        if f not in FAMILIES:
            raise InvalidAlgebra(f"unknown family {f!r}")
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }[f]
        if not ok:
            raise InvalidAlgebra(f"invalid rank {n} for family {f}")

    @classmethod
    def parse(cls, text: str) -> "AlgebraId":
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
        if not m:
            raise InvalidAlgebra(f"cannot parse algebra {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def _cartan_and_t(family: str, n: int):
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    t = [1] * n

    def link(i, j, cij=-1, cji=-1):
        # 1-based vertices
        c[i - 1][j - 1] = cij
        c[j - 1][i - 1] = cji

    if family in "ABC":
        for i in range(1, n):
            link(i, i + 1)
        if family == "B":
            t[n - 1] = 2
            link(n - 1, n, -1, -2)
        elif family == "C":
            t = [2] * (n - 1) + [1]
            link(n - 1, n, -2, -1)
    elif family == "D":
        for i in range(1, n - 1):
            link(i, i + 1)
        link(n - 2, n)
    elif family == "E":
        for i in range(1, n - 1):
            link(i, i + 1)
        link(5 if n == 8 else 3, n)
    elif family == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
        t = [1, 1, 2, 2]
    elif family == "G":
        link(1, 2, -1, -3)
        t = [1, 3]
    return c, t


@dataclass(frozen=True, eq=False)
class CartanData:
    """Immutable Cartan data of a simple Lie algebra.

    ``C[a][b] = t[a] * G[a][b]`` where ``G`` is the symmetric bilinear form on
    simple roots normalized so long roots have length 2.
    """

    algebra: AlgebraId
    C: tuple
    t: tuple
    G: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return self.algebra.rank

    @property
    def tmax(self) -> int:
        return max(self.t)

    def __hash__(self):
        return hash(self.algebra)

    def __eq__(self, other):
        return isinstance(other, CartanData) and other.algebra == self.algebra

    def form(self, a: int, b: int) -> Fraction:
        """(alpha_a | alpha_b) for 1-based colors."""
        return self.G[a - 1][b - 1]

    def tt(self, a: int) -> int:
        return self.t[a - 1]

    @cached_property
    def C_inv(self):
        return tuple(tuple(r) for r in inverse_rational(self.C))

    @cached_property
    def posroots(self) -> tuple:
        return tuple(positive_roots(self))

    def root_to_weight(self, root) -> tuple:
        """Simple-root coordinates to fundamental-weight coordinates."""
        n = self.n
        return tuple(sum(self.C[b][a] * root[a] for a in range(n)) for b in range(n))

    def weight_to_root(self, weight) -> tuple:
        """Fundamental-weight coordinates to (rational) simple-root coordinates."""
        n = self.n
        return tuple(sum(self.C_inv[a][b] * weight[b] for b in range(n)) for a in range(n))

    def simple_root(self, a: int) -> tuple:
        return tuple(self.C[b][a - 1] for b in range(self.n))

    def inner(self, lam, mu) -> Fraction:
        """(lam | mu) for weights in the fundamental-weight basis."""
        x = self.weight_to_root(lam)
        y = self.weight_to_root(mu)
        n = self.n
        return sum((x[a] * self.G[a][b] * y[b] for a in range(n) for b in range(n)), Fraction(0))

    @cached_property
    def rho(self) -> tuple:
        return (1,) * self.n

    def weyl_group_order(self) -> int:
        f, n = self.algebra.family, self.algebra.rank
        if f == "A":
            return _factorial(n + 1)
        if f in "BC":
            return 2 ** n * _factorial(n)
        if f == "D":
            return 2 ** (n - 1) * _factorial(n)
        return _WEYL_ORDER[(f, n)]


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def build_cartan(algebra) -> CartanData:
    if isinstance(algebra, str):
        algebra = AlgebraId.parse(algebra)
    c, t = _cartan_and_t(algebra.family, algebra.rank)
    n = algebra.rank
    g = [[Fraction(c[a][b], t[a]) for b in range(n)] for a in range(n)]
    for a in range(n):
        assert c[a][a] == 2
        assert g[a][a] == Fraction(2, t[a])
        for b in range(n):
            assert g[a][b] == g[b][a], "bilinear form not symmetric"
            assert a == b or c[a][b] <= 0
            assert (max(t) * g[a][b]).denominator == 1
    return CartanData(
        algebra=algebra,
        C=tuple(tuple(r) for r in c),
        t=tuple(t),
        G=tuple(tuple(r) for r in g),
    )


def positive_roots(c: CartanData) -> list:
    """Positive roots in simple-root coordinates, ordered by height."""
    n = c.n
    simple = [tuple(int(i == a) for i in range(n)) for a in range(n)]
    roots = list(simple)
    seen = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                if beta == simple[i]:
                    continue
                # p: how far down the alpha_i string through beta goes
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in seen:
                        p += 1
                    else:
                        break
                pairing = sum(beta[j] * c.C[i][j] for j in range(n))
                q = p - pairing
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in seen:
                        seen.add(up)
                        nxt.append(up)
                        roots.append(up)
        layer = nxt
    roots.sort(key=lambda r: (sum(r), r))
    return roots


def simple_reflection(c: CartanData, a: int, lam) -> tuple:
    """s_a(lam) = lam - <lam, alpha_a^vee> alpha_a, all in the weight basis."""
    if not 1 <= a <= c.n:
        raise IndexError(f"simple reflection index {a} out of range 1..{c.n}")
    k = lam[a - 1]
    return tuple(x - k * c.C[b][a - 1] for b, x in enumerate(lam))


def to_dominant(c: CartanData, lam) -> tuple:
    lam = tuple(lam)
    while True:
        for a in range(c.n):
            if lam[a] < 0:
                lam = simple_reflection(c, a + 1, lam)
                break
        else:
            return lam


def weyl_orbit(c: CartanData, lam) -> set:
    lam = tuple(lam)
    orbit = {lam}
    stack = [lam]
    while stack:
        mu = stack.pop()
        for a in range(1, c.n + 1):
            nu = simple_reflection(c, a, mu)
            if nu not in orbit:
                orbit.add(nu)
                stack.append(nu)
    return orbit


def integrality_ok(c: CartanData, bound: int = 20) -> bool:
    """G_ab * min(t_b m, t_a k) is an integer for all 1 <= m, k <= bound."""
    for a in range(c.n):
        for b in range(c.n):
            for m in range(1, bound + 1):
                for k in range(1, bound + 1):
                    if (c.G[a][b] * min(c.t[b] * m, c.t[a] * k)).denominator != 1:
                        return False
    return True
