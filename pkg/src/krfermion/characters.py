"""Classical characters: Freudenthal multiplicities, KR candidates, decompositions."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from .cartan import CartanData, to_dominant, weyl_orbit
from .series import GroupAlgebraElement, TruncatedSeries, Truncation


class NotACharacter(ValueError):
    pass


def _is_dominant(lam) -> bool:
    return all(x >= 0 for x in lam)


def _posroots_weight(c: CartanData) -> list:
    """Positive roots as (weight-basis vector, height)."""
    return [(c.root_to_weight(r), sum(r)) for r in c.posroots]


def dominant_weights_below(c: CartanData, lam) -> dict:
    """Dominant mu <= lam mapped to the height of lam - mu."""
    lam = tuple(lam)
    roots = _posroots_weight(c)
    depth = {lam: 0}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for r, h in roots:
                nu = tuple(x - y for x, y in zip(mu, r))
                if _is_dominant(nu) and nu not in depth:
                    depth[nu] = depth[mu] + h
                    nxt.append(nu)
        frontier = nxt
    return depth


@lru_cache(maxsize=None)
def dominant_multiplicities(c: CartanData, lam: tuple) -> dict:
    """Freudenthal recursion on the dominant weights of V(lam)."""
    if not _is_dominant(lam):
        raise ValueError(f"weight {lam} is not dominant")
    depth = dominant_weights_below(c, lam)
    rho = c.rho
    roots = _posroots_weight(c)
    lr = tuple(x + y for x, y in zip(lam, rho))
    norm_lr = c.inner(lr, lr)
    mult = {lam: 1}
    for mu in sorted(depth, key=lambda w: (depth[w], w)):
        if mu == lam:
            continue
        mr = tuple(x + y for x, y in zip(mu, rho))
        denom = norm_lr - c.inner(mr, mr)
        total = Fraction(0)
        for r, h in roots:
            k = 1
            while k * h <= depth[mu]:
                nu = tuple(x + k * y for x, y in zip(mu, r))
                m_nu = mult.get(to_dominant(c, nu), 0)
                if m_nu:
                    total += m_nu * c.inner(nu, r)
                k += 1
        val = 2 * total / denom
        assert val.denominator == 1 and val >= 0, f"bad Freudenthal multiplicity at {mu}"
        if val:
            mult[mu] = int(val)
    return mult


def irreducible_character(c: CartanData, lam) -> GroupAlgebraElement:
    lam = tuple(lam)
    if len(lam) != c.n or not _is_dominant(lam):
        raise ValueError(f"weight {lam} is not dominant")
    out = {}
    for mu, m in dominant_multiplicities(c, lam).items():
        for w in weyl_orbit(c, mu):
            out[w] = m
    return GroupAlgebraElement(out)


def weyl_dimension(c: CartanData, lam) -> int:
    lr = tuple(x + y for x, y in zip(lam, c.rho))
    num = Fraction(1)
    for r in c.posroots:
        rw = c.root_to_weight(r)
        num *= c.inner(lr, rw) / c.inner(c.rho, rw)
    assert num.denominator == 1
    return int(num)


def _weight(c: CartanData, coeffs: dict) -> tuple:
    w = [0] * c.n
    for b, k in coeffs.items():
        if b >= 1:
            w[b - 1] += k
    return tuple(w)


def kr_highest_weights(c: CartanData, a: int, m: int) -> list:
    """Dominant weights (with multiplicity one each) in the classical KR formula."""
    fam, n = c.algebra.family, c.n
    if not 1 <= a <= n:
        raise IndexError(f"color {a} out of range 1..{n}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if fam == "A" or (fam == "D" and a >= n - 1) or (fam == "C" and a == n):
        return [_weight(c, {a: m})]
    if fam in "BD":
        a0 = a % 2
        inner = list(range(a0, a - 1, 2))   # a0, a0+2, .., a-2
        ta = c.tt(a)
        out = []
        for ka in range(m, -1, -1):
            rest = m - ka
            if rest % ta:
                continue
            for ks in _compositions(rest // ta, len(inner)):
                coeffs = {a: ka}
                for b, k in zip(inner, ks):
                    coeffs[b] = coeffs.get(b, 0) + k
                out.append(_weight(c, coeffs))
        return sorted(out)
    if fam == "C":
        out = []
        ranges = [range(m % 2 if b == a else 0, m + 1, 2) for b in range(1, a + 1)]
        for ks in product(*ranges):
            if sum(ks) <= m:
                out.append(_weight(c, dict(zip(range(1, a + 1), ks))))
        return sorted(out)
    raise ValueError(f"no classical KR formula for type {fam}")


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def classical_kr_character(c: CartanData, a: int, m: int) -> GroupAlgebraElement:
    out = GroupAlgebraElement()
    for lam in kr_highest_weights(c, a, m):
        out = out + irreducible_character(c, lam)
    return out


def tensor_character(factors) -> GroupAlgebraElement:
    factors = list(factors)
    if not factors:
        raise ValueError("empty tensor product needs a rank; use GroupAlgebraElement.one")
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


def tensor_weight_multiplicity(c: CartanData, factors, lam) -> int:
    prod_ = GroupAlgebraElement.one(c.n)
    for f in factors:
        prod_ = prod_ * f
    return prod_[tuple(lam)]


def kr_tensor_character(c: CartanData, nu) -> GroupAlgebraElement:
    """Character of the tensor product of classical KR characters over nu."""
    from .fermionic import as_modemap

    out = GroupAlgebraElement.one(c.n)
    for (a, m), v in as_modemap(nu).items():
        out = out * classical_kr_character(c, a, m) ** v
    return out


def weyl_denominator(c: CartanData) -> GroupAlgebraElement:
    """prod over positive roots of (1 - e^{-alpha}) in the group algebra."""
    out = GroupAlgebraElement.one(c.n)
    for r in c.posroots:
        w = tuple(-x for x in c.root_to_weight(r))
        out = out * (GroupAlgebraElement.one(c.n) - GroupAlgebraElement.exp(w))
    return out


def weyl_denominator_series(c: CartanData, trunc: Truncation) -> TruncatedSeries:
    """The same product with e^{-alpha} written as prod y_a^{c_a}."""
    one = TruncatedSeries.one(trunc)
    out = one
    for r in c.posroots:
        out = out * (one - TruncatedSeries.monomial(trunc, r))
    return out


def decompose_into_irreducibles(c: CartanData, ch: GroupAlgebraElement) -> dict:
    """Dominant weight -> multiplicity, by peeling off highest weights."""
    rest = {w: v for w, v in ch.items()}
    out = {}
    while rest:
        dom = [w for w in rest if _is_dominant(w)]
        if not dom:
            raise NotACharacter("no dominant weight left in a nonzero remainder")
        # a maximal weight: nothing in the remainder sits strictly above it
        top = max(dom, key=lambda w: (sum(c.weight_to_root(w)), w))
        k = rest[top]
        if k < 0:
            raise NotACharacter(f"negative multiplicity {k} at {top}")
        out[top] = k
        for w, m in irreducible_character(c, top).items():
            v = rest.get(w, 0) - k * m
            if v:
                rest[w] = v
            else:
                rest.pop(w, None)
    return dict(sorted(out.items()))
