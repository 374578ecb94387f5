"""The B-function, the forward Q-system recursion and Q-system checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import CartanData
from .series import TruncatedSeries, Truncation, invert_unit, pow_int


@dataclass(frozen=True, order=True)
class ModeIndex:
    a: int
    m: int

    def in_H(self, c: CartanData, l: int) -> bool:
        """Membership in H_l: 1 <= m <= t_a l."""
        return 1 <= self.m <= c.tt(self.a) * l

    def in_calH(self, c: CartanData, l: int) -> bool:
        """Membership in the filtration t(m-1) <= t_a(l-1)."""
        return c.tmax * (self.m - 1) <= c.tt(self.a) * (l - 1)


def b_coeff(c: CartanData, am, bk) -> int:
    (a, m), (b, k) = am, bk
    ta, tb = c.tt(a), c.tt(b)
    return (2 * min(tb * m, ta * k) - min(tb * m, ta * (k + 1))
            - min(tb * m, ta * (k - 1)))


def b_coeff_closed(c: CartanData, am, bk) -> int:
    """Case-by-case form of the B-function."""
    (a, m), (b, k) = am, bk
    ta, tb = c.tt(a), c.tt(b)
    d = lambda x, y: int(x == y)  # noqa: E731
    if (ta, tb) == (2, 1):
        return 2 * d(m, 2 * k) + d(m, 2 * k + 1) + d(m, 2 * k - 1)
    if (ta, tb) == (3, 1):
        return (3 * d(m, 3 * k) + 2 * d(m, 3 * k + 1) + 2 * d(m, 3 * k - 1)
                + d(m, 3 * k + 2) + d(m, 3 * k - 2))
    return ta * d(tb * m, ta * k)


def b_support(c: CartanData, am, b: int) -> list:
    """The k with B_{am,bk} != 0 for a fixed color ``b``."""
    a, m = am
    # B vanishes once t_a (k - 1) >= t_b m
    kmax = c.tt(b) * m // c.tt(a) + 2
    return [k for k in range(1, kmax + 1) if b_coeff(c, am, (b, k))]


def qsys_exponent(c: CartanData, am, bk) -> int:
    """-(alpha_a|alpha_b) B_{am,bk}, asserted integral."""
    e = -c.form(am[0], bk[0]) * b_coeff(c, am, bk)
    if Fraction(e).denominator != 1:
        raise ArithmeticError(f"non-integral Q-system exponent at {am}, {bk}")
    return int(e)


def qsys_factors(c: CartanData, am) -> dict:
    """{(b,k): exponent} for the finite product in the Q-system at ``am``."""
    out = {}
    for b in range(1, c.n + 1):
        for k in b_support(c, am, b):
            e = qsys_exponent(c, am, (b, k))
            if e:
                out[(b, k)] = e
    return out


def level_truncation(c: CartanData, l: int) -> Truncation:
    """The box of the ideal I_l: y_a^(t_a l + 1) = 0."""
    return Truncation.box(t * l for t in c.t)


@dataclass
class QTable:
    """Q-tilde series for 1 <= m <= t_a l + 1, modulo I_l."""

    c: CartanData
    level: int
    entries: dict = field(default_factory=dict)

    @property
    def trunc(self) -> Truncation:
        return level_truncation(self.c, self.level)

    def __getitem__(self, am) -> TruncatedSeries:
        a, m = am
        if m == 0:
            return TruncatedSeries.one(self.trunc)
        return self.entries[(a, m)]

    def __contains__(self, am):
        return am[1] == 0 or tuple(am) in self.entries

    def modes(self):
        return sorted(self.entries)

    def max_m(self, a: int) -> int:
        return self.c.tt(a) * self.level + 1

    def to_json(self) -> dict:
        return {f"{a},{m}": s.to_json() for (a, m), s in sorted(self.entries.items())}


def _qsys_product(table: QTable, am) -> TruncatedSeries:
    a, m = am
    trunc = table.trunc
    prod = TruncatedSeries.variable(trunc, a - 1, m)
    for bk, e in sorted(qsys_factors(table.c, am).items()):
        prod = prod * pow_int(table[bk], e)
    return prod


def q_forward(c: CartanData, q1, l: int) -> QTable:
    """Fill Q_m^(a), m <= t_a l + 1, from Q_1^(a) by the Q-system."""
    table = QTable(c, l)
    trunc = table.trunc
    for a, s in enumerate(q1, start=1):
        if s.trunc != trunc:
            s = s.retruncate(trunc)
        if not s.constant_term():
            raise ValueError(f"initial series for color {a} is not invertible")
        table.entries[(a, 1)] = s
    targets = [(a, m) for a in range(1, c.n + 1) for m in range(2, table.max_m(a) + 1)]
    # Targets are filled in order of the filtration t(m-1) <= t_a(l'-1); a
    # target is computable once all factors of its product are present.
    targets.sort(key=lambda am: (Fraction(c.tmax * (am[1] - 1), c.tt(am[0])), am))
    pending = list(targets)
    while pending:
        progressed = False
        rest = []
        for a, m1 in pending:
            src = (a, m1 - 1)
            needed = [src, (a, m1 - 2)] + list(qsys_factors(c, src))
            if all(nk in table for nk in needed):
                q = table[src]
                qm1 = table[(a, m1 - 2)]
                new = q * q * invert_unit(qm1) * (1 - _qsys_product(table, src))
                assert new.constant_term() == table[(a, 1)].constant_term() ** m1
                table.entries[(a, m1)] = new
                progressed = True
            else:
                rest.append((a, m1))
        if not progressed:
            raise RuntimeError(f"Q-system recursion stuck at {rest}")
        pending = rest
    return table


def check_qsystem(c: CartanData, table: QTable) -> dict:
    """Residuals of the Q-system at every (a, m) in H_l.

    Returns ``{(a, m): residual}`` for the nonzero residuals only.
    """
    report = {}
    for a in range(1, c.n + 1):
        for m in range(1, c.tt(a) * table.level + 1):
            q = table[(a, m)]
            lhs = q * q
            rhs = table[(a, m + 1)] * table[(a, m - 1)] + q * q * _qsys_product(table, (a, m))
            res = lhs - rhs
            if not res.is_zero():
                report[(a, m)] = res
    return report


def check_convergence(table: QTable) -> dict:
    """Per color: Q_m == Q_{m+1} mod y_a^(m+1) for all consecutive pairs."""
    out = {}
    for a in range(1, table.c.n + 1):
        ms = sorted(m for (b, m) in table.entries if b == a)
        ok = True
        for m in ms:
            if m + 1 not in ms:
                continue
            diff = table[(a, m)] - table[(a, m + 1)]
            if not diff.reduce_mod_power(a - 1, m + 1).is_zero():
                ok = False
                break
        out[a] = ok
    return out


def verify_b_identities(c: CartanData, bound: int = 12, levels=range(1, 5)) -> dict:
    """Check the B-function identities on all index pairs with m, k <= bound.

    Returns ``{identity name: list of failing index pairs}``.
    """
    n = c.n
    fails = {"closed form": [], "min sum": [], "linear sum": [], "root sum": [],
             "truncation support": []}
    for a in range(1, n + 1):
        for m in range(1, bound + 1):
            am = (a, m)
            root = [Fraction(0)] * n
            for b in range(1, n + 1):
                supp = b_support(c, am, b)
                for k in range(1, bound + 1):
                    if b_coeff(c, am, (b, k)) != b_coeff_closed(c, am, (b, k)):
                        fails["closed form"].append((am, (b, k)))
                    s = sum(b_coeff(c, am, (b, j)) * min(j, k) for j in supp)
                    if s != min(c.tt(b) * m, c.tt(a) * k):
                        fails["min sum"].append((am, (b, k)))
                if sum(b_coeff(c, am, (b, k)) * k for k in supp) != c.tt(b) * m:
                    fails["linear sum"].append((am, b))
                for k in supp:
                    root[b - 1] += c.form(a, b) * b_coeff(c, am, (b, k)) * k
                for l in levels:
                    if am_in_H(c, am, l) and any(not am_in_H(c, (b, k), l) for k in supp):
                        fails["truncation support"].append((am, b, l))
            if tuple(root) != tuple(m * x for x in c.simple_root(a)):
                fails["root sum"].append(am)
    return fails


def am_in_H(c: CartanData, am, l: int) -> bool:
    return ModeIndex(*am).in_H(c, l)
