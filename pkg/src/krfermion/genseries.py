"""Changes of variables w <-> v <-> z and the generating-series identities.

All series here live in variables indexed by H_l = {(a, m): m <= t_a l}
with a total-degree cutoff ``D``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

from .cartan import CartanData
from .characters import weyl_denominator_series
from .fermionic import (ModeMap, _coupling, _fast_r, as_modemap, d_matrix, fermionic_qtable,
                        gamma, gen_binomial, k_number, k_series)
from .qsystem import level_truncation
from .series import (TruncatedSeries, Truncation, euler_derivative, invert_unit, pow_int,
                     pow_rational, series_det)


@dataclass(frozen=True)
class WSpace:
    c: CartanData
    l: int
    D: int
    modes: tuple

    @property
    def trunc(self) -> Truncation:
        return Truncation.total_degree(len(self.modes), self.D)

    def var(self, am) -> TruncatedSeries:
        return TruncatedSeries.variable(self.trunc, self.modes.index(am))

    def one(self) -> TruncatedSeries:
        return TruncatedSeries.one(self.trunc)

    def pattern(self, exp) -> ModeMap:
        return ModeMap({am: e for am, e in zip(self.modes, exp)})


def h_modes(c: CartanData, l: int) -> tuple:
    return tuple((a, m) for a in range(1, c.n + 1) for m in range(1, c.tt(a) * l + 1))


def w_space(c: CartanData, l: int, D: int) -> WSpace:
    if D < 1:
        raise ValueError("degree cutoff must be at least 1")
    return WSpace(c, l, D, h_modes(c, l))


def _w_exponent(c, am, bk) -> int:
    return _coupling(c, am, bk)


def _z_exponent(c, am, bk) -> int:
    (a, m), (b, k) = am, bk
    if c.tt(b) * m <= c.tt(a) * k:
        return 0
    e = c.form(a, b) * (c.tt(b) * m - c.tt(a) * k)
    assert Fraction(e).denominator == 1
    return int(e)


def _substitute(space: WSpace, xs: dict, expfn, sign: int, lead=None) -> dict:
    """lead_am * prod (1 - x_bk)^(sign * expfn(am, bk)), lead defaulting to x."""
    lead = xs if lead is None else lead
    one = space.one()
    out = {}
    for am in space.modes:
        s = lead[am]
        for bk in space.modes:
            e = sign * expfn(space.c, am, bk)
            if e:
                s = s * pow_int(one - xs[bk], e)
        out[am] = s
    return out


def _fixed_point(space: WSpace, expfn, sign: int) -> dict:
    """Solve v = x * prod (1 - v)^(sign * e) for v as series in x."""
    xs = {am: space.var(am) for am in space.modes}
    v = dict(xs)
    # each pass fixes one more degree
    for _ in range(space.D):
        v = _substitute(space, v, expfn, sign, lead=xs)
    return v


def _unit_exp(space: WSpace, am) -> tuple:
    return tuple(int(bk == am) for bk in space.modes)


def w_of_v(c: CartanData, l: int, D: int) -> dict:
    """w_am = v_am prod (1 - v_bk)^(-(alpha_a|alpha_b) min(t_b m, t_a k))."""
    space = w_space(c, l, D)
    return _substitute(space, {am: space.var(am) for am in space.modes}, _w_exponent, -1)


def v_of_w(c: CartanData, l: int, D: int) -> dict:
    """Inverse of ``w_of_v`` as series in w, by fixed-point iteration."""
    return _fixed_point(w_space(c, l, D), _w_exponent, +1)


def z_of_v(c: CartanData, l: int, D: int) -> dict:
    """z_am = v_am prod over t_b m > t_a k of (1 - v_bk)^((alpha_a|alpha_b)(t_b m - t_a k))."""
    space = w_space(c, l, D)
    return _substitute(space, {am: space.var(am) for am in space.modes}, _z_exponent, +1)


def v_of_z(c: CartanData, l: int, D: int) -> dict:
    return _fixed_point(w_space(c, l, D), _z_exponent, -1)


def compose(space: WSpace, outer: dict, inner: dict) -> dict:
    """Substitute the series ``inner`` (no constant terms) into ``outer``."""
    out = {}
    for am, f in outer.items():
        total = TruncatedSeries.zero(space.trunc)
        powers = {}
        for exp, coeff in f.terms.items():
            term = space.one().scale(coeff)
            for bk, e in zip(space.modes, exp):
                if e:
                    key = (bk, e)
                    if key not in powers:
                        powers[key] = pow_int(inner[bk], e)
                    term = term * powers[key]
            total = total + term
        out[am] = total
    return out


def log_jacobian_det(space: WSpace, vs: dict) -> TruncatedSeries:
    """det((x_k / v_m) dv_m/dx_k) for v_m = x_m * u_m(x).

    ``vs`` must be known to degree ``space.D + 1``; dividing by x_m costs a
    degree, so the result is exact to degree ``space.D``.
    """
    hi = w_space(space.c, space.l, space.D + 1)
    vs = {am: f.retruncate(hi.trunc) for am, f in vs.items()}
    space, lo = hi, space
    rows = []
    for i, am in enumerate(space.modes):
        u = vs[am].divide_monomial(_unit_exp(space, am))
        uinv = invert_unit(u)
        row = []
        for j in range(len(space.modes)):
            entry = euler_derivative(u, j) * uinv
            if i == j:
                entry = entry + 1
            row.append(entry)
        rows.append(row)
    return series_det(rows).retruncate(lo.trunc)


@dataclass
class IdentityReport:
    """Named checks mapped to the exponents where the two sides differ."""

    checks: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def add(self, name: str, lhs: TruncatedSeries, rhs: TruncatedSeries):
        diff = lhs - rhs
        self.checks[name] = sorted(e for e, _ in diff.items())

    def add_flag(self, name: str, ok: bool):
        self.checks[name] = [] if ok else ["failed"]

    @property
    def ok(self) -> bool:
        return all(not v for v in self.checks.values())

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": {k: [list(e) if isinstance(e, tuple) else e for e in v]
                       for k, v in sorted(self.checks.items())},
            "info": dict(sorted(self.info.items())),
        }


def fermionic_w_series(space: WSpace, nu, kind: str = "R") -> TruncatedSeries:
    """sum over N in N_l with |N| <= D of R(nu, N) w^N (or K)."""
    nu = as_modemap(nu)
    terms = {}
    for exp in space.trunc.exponents():
        N = space.pattern(exp)
        v = _fast_r(space.c, nu, N) if kind == "R" else k_number(space.c, nu, N)
        if v:
            terms[exp] = v
    return TruncatedSeries(space.trunc, terms)


def _gamma_product(space: WSpace, nu, v: dict) -> TruncatedSeries:
    one = space.one()
    out = one
    for am in space.modes:
        g = gamma(space.c, nu, am)
        if g:
            out = out * pow_int(one - v[am], -g)
    return out


def verify_generating_identities(c: CartanData, nu, l: int, D: int) -> IdentityReport:
    """Compare fermionic w-series with their closed forms in v(w)."""
    nu = as_modemap(nu)
    space = w_space(c, l, D)
    rep = IdentityReport(info={"algebra": str(c.algebra), "level": l, "degree": D,
                               "variables": len(space.modes)})
    one = space.one()
    v = v_of_w(c, l, D)
    back = compose(space, w_of_v(c, l, D), v)
    for am in space.modes:
        rep.add(f"w(v(w)) = w at {am}", back[am], space.var(am))
    R = fermionic_w_series(space, nu, "R")
    K = fermionic_w_series(space, nu, "K")
    K0 = fermionic_w_series(space, ModeMap(), "K")
    gam = _gamma_product(space, nu, v)
    rep.add("R = prod (1-v)^-gamma", R, gam)
    dm = d_matrix(c, list(space.modes))
    det = series_det([[(one if i == j else TruncatedSeries.zero(space.trunc))
                       + v[am] * dm[i][j] for j in range(len(space.modes))]
                      for i, am in enumerate(space.modes)])
    rep.add("K0 = 1/det(1 + D v)", K0, invert_unit(det))
    inv_prod = one
    for am in space.modes:
        inv_prod = inv_prod * invert_unit(one - v[am])
    jac = log_jacobian_det(space, v_of_w(c, l, D + 1))
    rep.add("K0 = det(w dv/v dw) prod (1-v)^-1", K0, jac * inv_prod)
    rep.add("K = K0 prod (1-v)^-gamma", K, K0 * gam)
    rep.add("R = K / K0", R, K * invert_unit(K0))
    return rep


def verify_zv_jacobian(c: CartanData, l: int, D: int) -> IdentityReport:
    space = w_space(c, l, D)
    rep = IdentityReport(info={"algebra": str(c.algebra), "level": l, "degree": D})
    v = v_of_z(c, l, D)
    back = compose(space, z_of_v(c, l, D), v)
    for am in space.modes:
        rep.add(f"z(v(z)) = z at {am}", back[am], space.var(am))
    rep.add("det((z/v) dv/dz) = 1", log_jacobian_det(space, v_of_z(c, l, D + 1)), space.one())
    return rep


def binomial_shift(c: CartanData, modes, am, N: ModeMap) -> int:
    a, m = am
    out = Fraction(0)
    for (b, k) in modes:
        if c.tt(b) * m < c.tt(a) * k:
            out += c.form(a, b) * (c.tt(a) * k - c.tt(b) * m) * N[(b, k)]
    assert out.denominator == 1
    return int(out)


def verify_binomial_expansion(c: CartanData, l: int, D: int, beta=None) -> IdentityReport:
    """prod (1 - v(z))^(-beta-1) against the shifted binomial expansion in z."""
    space = w_space(c, l, D)
    if beta is None:
        beta = {am: Fraction(2 * i + 1, 3) for i, am in enumerate(space.modes)}
    beta = {am: Fraction(beta[am]) for am in space.modes}
    rep = IdentityReport(info={"algebra": str(c.algebra), "level": l, "degree": D,
                               "beta": {f"{a},{m}": str(b) for (a, m), b in beta.items()}})
    one = space.one()
    v = v_of_z(c, l, D)
    lhs = one
    for am in space.modes:
        lhs = lhs * pow_rational(one - v[am], -beta[am] - 1)
    terms = {}
    for exp in space.trunc.exponents():
        N = space.pattern(exp)
        coeff = Fraction(1)
        for am, n in zip(space.modes, exp):
            coeff *= gen_binomial(beta[am] + binomial_shift(c, space.modes, am, N) + n, n)
        if coeff:
            terms[exp] = coeff
    rep.add("shifted binomial expansion", lhs, TruncatedSeries(space.trunc, terms))
    return rep


def k0_jacobian_series(c: CartanData, l: int, q1=None) -> TruncatedSeries:
    """det(y_b/U_a dU_a/dy_b) prod Q1 with U_a = y_a prod Q1^(b)^(-(alpha_a|alpha_b) t_b)."""
    if q1 is None:
        table = fermionic_qtable(c, l)
        q1 = [table[(a, 1)] for a in range(1, c.n + 1)]
    logs = [[euler_derivative(q, b) * invert_unit(q) for b in range(c.n)] for q in q1]
    rows = []
    for a in range(c.n):
        row = []
        for b in range(c.n):
            entry = TruncatedSeries.constant(q1[0].trunc, int(a == b))
            for cc in range(c.n):
                if c.C[cc][a]:
                    entry = entry - logs[cc][b].scale(c.C[cc][a])
            row.append(entry)
        rows.append(row)
    out = series_det(rows)
    for q in q1:
        out = out * q
    return out


def verify_k0_identities(c: CartanData, l: int) -> IdentityReport:
    """Three-way comparison of K0 modulo I_l."""
    classical = c.algebra.family in "ABCD"
    rep = IdentityReport(info={"algebra": str(c.algebra), "level": l,
                               "experimental": not classical})
    trunc = level_truncation(c, l)
    fermi = k_series(c, ModeMap(), l)
    weyl = weyl_denominator_series(c, trunc)
    jac = k0_jacobian_series(c, l)
    rep.add("fermionic K0 = Weyl denominator", fermi, weyl)
    rep.add("fermionic K0 = Jacobian expression", fermi, jac)
    return rep


def convergence_sanity(w=Fraction(1, 8), degrees=range(5, 26)) -> dict:
    """Partial sums of K0 for A1 at level 1 at a point inside the radius 1/4."""
    from .cartan import build_cartan

    c = build_cartan("A1")
    w = Fraction(w)
    hi = max(degrees)
    coeffs = [k_number(c, ModeMap(), ModeMap({(1, 1): N} if N else {})) for N in range(hi + 1)]
    partial, sums = Fraction(0), {}
    for N in range(hi + 1):
        partial += coeffs[N] * w ** N
        sums[N] = partial
    incs = [abs(sums[D] - sums[D - 1]) for D in degrees]
    decreasing = all(x > y for x, y in zip(incs, incs[1:]))
    # closed form at the same point: 1/(1 + v) with w = v / (1 - v)^2
    wf = float(w)
    v = ((1 + 2 * wf) - sqrt(1 + 4 * wf)) / (2 * wf)
    limit = 1 / (1 + v)
    return {
        "point": str(w),
        "increments_decreasing": decreasing,
        "last_increment": float(incs[-1]),
        "partial_sum": float(sums[hi]),
        "closed_form": limit,
        "ok": decreasing and abs(float(sums[hi]) - limit) < 1e-6,
    }
