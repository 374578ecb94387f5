"""Vacancy numbers, the counting numbers R and K, and fermionic series."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod

from .cartan import CartanData
from .linalg import det_bareiss


class ModeMap(Mapping):
    """Finitely supported map (a, m) -> integer, used for both nu and N.

    Zero entries are never stored. Negative entries are rejected unless
    ``allow_negative`` is set (internal use only).
    """

    __slots__ = ("_d", "_key")

    def __init__(self, data=None, *, allow_negative=False):
        d = {}
        for (a, m), v in dict(data or {}).items():
            a, m, v = int(a), int(m), int(v)
            if m < 1 or a < 1:
                raise ValueError(f"mode ({a}, {m}) out of range")
            if v < 0 and not allow_negative:
                raise ValueError(f"negative multiplicity at ({a}, {m})")
            if v:
                d[(a, m)] = d.get((a, m), 0) + v
        self._d = {k: v for k, v in sorted(d.items()) if v}
        self._key = tuple(self._d.items())

    @classmethod
    def delta(cls, a: int, m: int, mult: int = 1) -> "ModeMap":
        return cls({(a, m): mult})

    @classmethod
    def from_records(cls, records) -> "ModeMap":
        """From ``[{"a": .., "m": .., "mult": ..}, ...]``."""
        d = {}
        for r in records:
            key = (int(r["a"]), int(r["m"]))
            d[key] = d.get(key, 0) + int(r.get("mult", 1))
        return cls(d)

    def to_records(self) -> list:
        return [{"a": a, "m": m, "mult": v} for (a, m), v in self._key]

    def __getitem__(self, am):
        return self._d.get(tuple(am), 0)

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        if isinstance(other, ModeMap):
            return self._key == other._key
        if isinstance(other, Mapping):
            return self == ModeMap(other, allow_negative=True)
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"({a},{m}):{v}" for (a, m), v in self._key)
        return f"ModeMap({{{inner}}})"

    def __add__(self, other):
        d = dict(self._d)
        for k, v in other.items():
            d[k] = d.get(k, 0) + v
        return ModeMap(d, allow_negative=True)

    def __sub__(self, other):
        d = dict(self._d)
        for k, v in other.items():
            d[k] = d.get(k, 0) - v
        return ModeMap(d, allow_negative=True)

    @property
    def key(self) -> tuple:
        return self._key

    def support(self) -> list:
        """H'(N): modes with a positive entry, sorted."""
        return [k for k, v in self._key if v > 0]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self._d.values())

    def color_weight(self, a: int) -> int:
        """sum_m m * N_m^(a)."""
        return sum(m * v for (b, m), v in self._key if b == a)

    def validate(self, c: CartanData):
        for a, _ in self._d:
            if not 1 <= a <= c.n:
                raise ValueError(f"color {a} out of range 1..{c.n}")
        return self


def as_modemap(x) -> ModeMap:
    if isinstance(x, ModeMap):
        return x
    if x is None:
        return ModeMap()
    if isinstance(x, Mapping):
        return ModeMap(x)
    return ModeMap.from_records(x)


def _int(x, what="value"):
    x = Fraction(x)
    if x.denominator != 1:
        raise ArithmeticError(f"non-integral {what}: {x}")
    return x.numerator


def gen_binomial(k, j: int):
    """k(k-1)...(k-j+1)/j! for j > 0, 1 for j == 0, 0 for j < 0."""
    if j < 0:
        return 0
    if j == 0:
        return 1
    num = 1
    for i in range(j):
        num *= k - i
    out = Fraction(num) / factorial(j)
    return out.numerator if out.denominator == 1 else out


def gamma(c: CartanData, nu, am) -> int:
    a, m = am
    return sum(min(m, k) * v for (b, k), v in as_modemap(nu).items() if b == a)


def vacancy(c: CartanData, nu, N, am) -> int:
    """P_m^(a) for quantum space ``nu`` and string pattern ``N``."""
    a, m = am
    ta = c.tt(a)
    p = Fraction(gamma(c, nu, am))
    for (b, k), v in as_modemap(N).items():
        p -= c.form(a, b) * min(c.tt(b) * m, ta * k) * v
    return _int(p, f"vacancy number at {am}")


def _coupling(c: CartanData, am, bk) -> int:
    """(alpha_a|alpha_b) min(t_b m, t_a k), an integer."""
    (a, m), (b, k) = am, bk
    return _int(c.form(a, b) * min(c.tt(b) * m, c.tt(a) * k), "coupling")


def f_matrix(c: CartanData, modes, Ns, Ps) -> list:
    return [[(P if i == j else 0) + _coupling(c, am, bk) * Nb
             for j, (bk, Nb) in enumerate(zip(modes, Ns))]
            for i, (am, P) in enumerate(zip(modes, Ps))]


@dataclass(frozen=True)
class CountReport:
    value: int
    detF: int
    factors: tuple

    def __int__(self):
        return self.value


def _r_parts(c, modes, Ns, Ps):
    detf = det_bareiss(f_matrix(c, modes, Ns, Ps))
    factors = tuple(Fraction(gen_binomial(P + n - 1, n - 1)) / n for P, n in zip(Ps, Ns))
    value = detf * prod(factors, start=Fraction(1))
    return CountReport(_int(value, "R(nu, N)"), detf, factors)


@lru_cache(maxsize=200_000)
def _r_cached(c, modes, Ns, Ps) -> int:
    return _r_parts(c, modes, Ns, Ps).value


def _vacancies(c, nu, N, modes):
    return tuple(vacancy(c, nu, N, am) for am in modes)


def r_number(c: CartanData, nu, N) -> CountReport:
    nu = as_modemap(nu)
    if isinstance(N, Mapping) and not isinstance(N, ModeMap):
        N = ModeMap(N, allow_negative=True)
    N = as_modemap(N)
    if not N.is_nonnegative():
        # extension by zero to patterns with negative entries
        return CountReport(0, 0, ())
    if not N:
        return CountReport(1, 1, ())
    modes = tuple(N.support())
    Ns = tuple(N[am] for am in modes)
    return _r_parts(c, modes, Ns, _vacancies(c, nu, N, modes))


def k_number(c: CartanData, nu, N) -> int:
    nu, N = as_modemap(nu), as_modemap(N)
    out = Fraction(1)
    for am in N.support():
        n = N[am]
        out *= gen_binomial(vacancy(c, nu, N, am) + n, n)
    return _int(out, "K(nu, N)")


def d_matrix(c: CartanData, modes) -> list:
    return [[_coupling(c, am, bk) - int(am == bk) for bk in modes] for am in modes]


def r_number_alt(c: CartanData, nu, N) -> int:
    """R(nu, N) as a signed sum over subsets J of H'(N) of binomial products."""
    from .qsystem import b_coeff, b_support

    nu, N = as_modemap(nu), as_modemap(N)
    hp = N.support()
    total = Fraction(0)
    for mask in range(1 << len(hp)):
        J = [am for i, am in enumerate(hp) if mask >> i & 1]
        dj = det_bareiss(d_matrix(c, J))
        if not dj:
            continue
        shift = {}
        for bk in J:
            b = bk[0]
            for a in range(1, c.n + 1):
                for m in b_support(c, bk, a):
                    v = _int(c.form(a, b) * b_coeff(c, bk, (a, m)), "nu[J] shift")
                    shift[(a, m)] = shift.get((a, m), 0) + v
        nuJ = nu - ModeMap(shift, allow_negative=True)
        NJ = N - ModeMap({am: 1 for am in J})
        term = Fraction(dj)
        for am in NJ.support():
            n = NJ[am]
            term *= gen_binomial(vacancy(c, nuJ, NJ, am) + n, n)
            if not term:
                break
        total += term
    return _int(total, "R(nu, N) via subsets")


@lru_cache(maxsize=None)
def integer_partitions(n: int) -> tuple:
    """Partitions of n as tuples of (part, count) pairs, parts increasing."""
    if n == 0:
        return ((),)
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            counts = {}
            for p in acc:
                counts[p] = counts.get(p, 0) + 1
            out.append(tuple(sorted(counts.items())))
            return
        for p in range(min(rest, maxpart), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def highest_weight(c: CartanData, nu) -> tuple:
    h = [0] * c.n
    for (a, m), v in as_modemap(nu).items():
        h[a - 1] += m * v
    return tuple(h)


def root_depth(c: CartanData, highest, lam):
    """d with highest - lam = sum d_a alpha_a, or None if not in the cone."""
    diff = [x - y for x, y in zip(highest, lam)]
    d = c.weight_to_root(diff)
    if any(x.denominator != 1 or x < 0 for x in d):
        return None
    return tuple(int(x) for x in d)


def _patterns_for_depth(d) -> list:
    per_color = [integer_partitions(x) for x in d]
    out = []
    for combo in product(*per_color):
        entries = {}
        for a, part in enumerate(combo, start=1):
            for m, cnt in part:
                entries[(a, m)] = cnt
        out.append(ModeMap(entries))
    return out


def enumerate_patterns(c: CartanData, nu, lam) -> list:
    nu = as_modemap(nu)
    d = root_depth(c, highest_weight(c, nu), tuple(lam))
    if d is None:
        return []
    return _patterns_for_depth(d)


def _fast_r(c, nu, N) -> int:
    if not N:
        return 1
    modes = tuple(N.support())
    Ns = tuple(N[am] for am in modes)
    return _r_cached(c, modes, Ns, _vacancies(c, nu, N, modes))


def weight_multiplicity_r(c: CartanData, nu, lam) -> int:
    nu = as_modemap(nu)
    return sum(_fast_r(c, nu, N) for N in enumerate_patterns(c, nu, lam))


def weight_multiplicity_k(c: CartanData, nu, lam) -> int:
    nu = as_modemap(nu)
    return sum(k_number(c, nu, N) for N in enumerate_patterns(c, nu, lam))


def _level_patterns(c: CartanData, l: int):
    """(exponent, N) for every pattern inside the box d_a <= t_a l."""
    key = (c, l)
    if key not in _PATTERN_CACHE:
        boxes = [range(t * l + 1) for t in c.t]
        out = []
        for d in product(*boxes):
            for N in _patterns_for_depth(d):
                out.append((d, N))
        _PATTERN_CACHE[key] = out
    return _PATTERN_CACHE[key]


_PATTERN_CACHE: dict = {}


def _pattern_series(c: CartanData, l: int, fn):
    from .qsystem import level_truncation
    from .series import TruncatedSeries

    terms = {}
    for d, N in _level_patterns(c, l):
        v = fn(N)
        if v:
            terms[d] = terms.get(d, 0) + v
    return TruncatedSeries(level_truncation(c, l), terms)


def r_series(c: CartanData, nu, l: int):
    """The series sum_N R(nu, N) y^(sum m N) modulo I_l."""
    return _r_series_cached(c, as_modemap(nu), l)


@lru_cache(maxsize=4096)
def _r_series_cached(c, nu, l):
    return _pattern_series(c, l, lambda N: _fast_r(c, nu, N))


def k_series(c: CartanData, nu, l: int):
    """The series sum_N K(nu, N) y^(sum m N) modulo I_l."""
    nu = as_modemap(nu)
    return _pattern_series(c, l, lambda N: k_number(c, nu, N))


def fermionic_qtable(c: CartanData, l: int):
    """QTable of r_series(delta_m^(a)) for all m <= t_a l + 1."""
    from .qsystem import QTable

    table = QTable(c, l)
    for a in range(1, c.n + 1):
        for m in range(1, table.max_m(a) + 1):
            table.entries[(a, m)] = r_series(c, ModeMap.delta(a, m), l)
    return table


def weyl_invariance_report(c: CartanData, nu) -> dict:
    """r-multiplicities compared across simple reflections of dominant weights.

    For exceptional types this is an experimental observation, not a check
    of a proven statement. Returns ``{"checked": int, "mismatches": [...]}``.
    """
    from .cartan import simple_reflection
    from .characters import dominant_weights_below

    nu = as_modemap(nu)
    checked, bad = 0, []
    for lam in sorted(dominant_weights_below(c, highest_weight(c, nu))):
        r = weight_multiplicity_r(c, nu, lam)
        for b in range(1, c.n + 1):
            mu = simple_reflection(c, b, lam)
            if mu == lam:
                continue
            checked += 1
            r2 = weight_multiplicity_r(c, nu, mu)
            if r2 != r:
                bad.append({"weight": list(lam), "reflection": b, "r": r, "r_reflected": r2})
    return {"checked": checked, "mismatches": bad}
