"""The string center equation A u = (P + N + 1)/2 mod Z and its solution counts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial, prod

from .cartan import CartanData
from .fermionic import ModeMap, _coupling, as_modemap, det_bareiss, f_matrix, vacancy
from .linalg import smith_normal_form

DEFAULT_MAX_DET = 10 ** 6


@dataclass(frozen=True)
class SCEInstance:
    c: CartanData
    nu: ModeMap
    N: ModeMap
    index: tuple     # (a, m, alpha) in lexicographic order
    A: tuple
    rhs: tuple
    P: dict

    @property
    def d(self) -> int:
        return len(self.index)

    def modes(self) -> list:
        return self.N.support()

    def groups(self) -> dict:
        """(a, m) -> list of positions in ``index``."""
        out = {}
        for pos, (a, m, _) in enumerate(self.index):
            out.setdefault((a, m), []).append(pos)
        return out

    def p_nonneg(self) -> bool:
        return all(self.P[am] >= 0 for am in self.modes())

    def det(self) -> int:
        return det_bareiss(self.A)


def build_sce(c: CartanData, nu, N) -> SCEInstance:
    nu, N = as_modemap(nu), as_modemap(N)
    if not N:
        raise ValueError("the string center equation needs a nonzero pattern")
    modes = N.support()
    P = {am: vacancy(c, nu, N, am) for am in modes}
    index = tuple((a, m, al) for (a, m) in modes for al in range(1, N[(a, m)] + 1))
    A = []
    for (a, m, al) in index:
        row = []
        for (b, k, be) in index:
            same = (a, m) == (b, k)
            v = _coupling(c, (a, m), (b, k)) - int(same)
            if same and al == be:
                v += P[(a, m)] + N[(a, m)]
            row.append(v)
        A.append(tuple(row))
    for i in range(len(A)):
        for j in range(i):
            assert A[i][j] == A[j][i], "string center matrix is not symmetric"
    rhs = tuple(Fraction(P[(a, m)] + N[(a, m)] + 1, 2) for (a, m, _) in index)
    return SCEInstance(c, nu, N, index, tuple(A), rhs, P)


# set partitions, ordered so that pi <= pi' when every block of pi' lies in a block of pi

@dataclass(frozen=True)
class SetPartition:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks if b))
        object.__setattr__(self, "blocks", blocks)
        seen = [x for b in blocks for x in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks are not disjoint")

    def __len__(self):
        return len(self.blocks)

    @property
    def ground(self) -> frozenset:
        return frozenset(x for b in self.blocks for x in b)

    @classmethod
    def finest(cls, k: int) -> "SetPartition":
        return cls(tuple((i,) for i in range(k)))

    @classmethod
    def coarsest(cls, k: int) -> "SetPartition":
        return cls((tuple(range(k)),) if k else ())

    def le(self, other: "SetPartition") -> bool:
        """True when every block of ``other`` lies inside a block of ``self``."""
        if self.ground != other.ground:
            return False
        where = {x: i for i, b in enumerate(self.blocks) for x in b}
        return all(len({where[x] for x in b}) == 1 for b in other.blocks)


def set_partitions(k: int):
    """All set partitions of {0, .., k-1} (restricted growth strings)."""
    if k == 0:
        yield SetPartition(())
        return

    def rec(i, blocks):
        if i == k:
            yield SetPartition(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def mobius_partition(pi: SetPartition, top: SetPartition) -> int:
    """Moebius function mu(pi, top) of the partition lattice, pi <= top."""
    if not pi.le(top):
        raise ValueError("mobius_partition needs pi <= top")
    out = 1
    for b in pi.blocks:
        inner = sum(1 for tb in top.blocks if set(tb) <= set(b))
        out *= (-1) ** (inner - 1) * factorial(inner - 1)
    return out


def falling(x, k: int):
    return prod((x - i for i in range(k)), start=1)


def _det_closed(inst: SCEInstance, family: dict) -> int:
    modes = inst.modes()
    Ns = [inst.N[am] for am in modes]
    Ps = [inst.P[am] for am in modes]
    detf = det_bareiss(f_matrix(inst.c, modes, Ns, Ps))
    return detf * prod(((inst.P[am] + inst.N[am]) ** (len(family[am]) - 1) for am in modes), start=1)


def _det_reduced(inst: SCEInstance, family: dict) -> int:
    groups = inst.groups()
    cells = []  # positions of A merged into one reduced index
    for am in inst.modes():
        pos = groups[am]
        for b in family[am].blocks:
            cells.append([pos[i] for i in b])
    red = [[sum(inst.A[cell_r[0]][j] for j in cell_c) for cell_c in cells] for cell_r in cells]
    return det_bareiss(red)


def det_a_pi(inst: SCEInstance, family: dict) -> int:
    """det A^pi for a family {(a, m): SetPartition of range(N_m^(a))}."""
    for am in inst.modes():
        if family[am].ground != frozenset(range(inst.N[am])):
            raise ValueError(f"partition for {am} does not cover {inst.N[am]} strings")
    closed = _det_closed(inst, family)
    direct = _det_reduced(inst, family)
    assert closed == direct, f"det A^pi mismatch: {closed} != {direct}"
    return closed


def partition_families(inst: SCEInstance):
    modes = inst.modes()
    for combo in product(*(list(set_partitions(inst.N[am])) for am in modes)):
        yield dict(zip(modes, combo))


@dataclass(frozen=True)
class MobiusCount:
    value: Fraction
    hypothesis_ok: bool   # all vacancy numbers on the support are >= 0


def count_offdiagonal_mobius(inst: SCEInstance) -> MobiusCount:
    """Off-diagonal solutions divided by prod N!, by inversion over partitions."""
    finest = {am: SetPartition.finest(inst.N[am]) for am in inst.modes()}
    total = 0
    for fam in partition_families(inst):
        mu = prod((mobius_partition(fam[am], finest[am]) for am in fam), start=1)
        total += mu * abs(det_a_pi(inst, fam))
    denom = prod((factorial(inst.N[am]) for am in inst.modes()), start=1)
    return MobiusCount(Fraction(total, denom), inst.p_nonneg())


class SingularSCE(ValueError):
    pass


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def enumerate_solutions_bruteforce(inst: SCEInstance, max_det: int = DEFAULT_MAX_DET) -> list:
    """All u in [0,1)^d with A u - rhs in Z^d, via the Smith normal form."""
    det = inst.det()
    if det == 0:
        raise SingularSCE("det A = 0")
    if abs(det) > max_det:
        raise SingularSCE(f"|det A| = {abs(det)} exceeds the brute-force guard {max_det}")
    d = inst.d
    U, S, V = smith_normal_form(inst.A)
    b = [sum(Fraction(U[i][j]) * inst.rhs[j] for j in range(d)) for i in range(d)]
    choices = []
    for i in range(d):
        s = S[i][i]
        choices.append([(b[i] + j) / s for j in range(abs(s))])
    sols = set()
    for w in product(*choices):
        u = tuple(_frac_mod1(sum(V[i][j] * w[j] for j in range(d))) for i in range(d))
        sols.add(u)
    out = sorted(sols)
    assert len(out) == abs(det)
    for u in out:
        for i in range(d):
            r = sum(inst.A[i][j] * u[j] for j in range(d)) - inst.rhs[i]
            assert r.denominator == 1, "brute-force solution fails the congruence"
    return out


def filter_offdiagonal(inst: SCEInstance, sols) -> list:
    groups = list(inst.groups().values())
    return [u for u in sols
            if all(len({u[p] for p in pos}) == len(pos) for pos in groups)]


def _delta_order(c: CartanData, N: ModeMap, a: int, j: int) -> int:
    if c.tt(a) != 1:
        return 0
    out = 0
    for b in range(1, c.n + 1):
        if b == a or c.C[a - 1][b - 1] == 0 or c.tt(b) == 1:
            continue
        if c.tt(b) == 2:
            out -= N[(b, 2 * j)]
        elif c.tt(b) == 3:
            out -= N[(b, 3 * j - 1)] + 2 * N[(b, 3 * j)] + N[(b, 3 * j + 1)]
    return out


def check_order_condition(c: CartanData, nu, N) -> bool:
    """Necessary inequalities on (P, N) for a generic string solution."""
    nu, N = as_modemap(nu), as_modemap(N)
    t = c.tmax
    for (a, m) in N.support():
        ta = c.tt(a)
        for i in range(2, m + 1):
            s = Fraction(0)
            for k in range(1, min(i - 1, m + 1 - i) + 1):
                j = m + 1 - 2 * k
                s += Fraction(t, ta) * (vacancy(c, nu, N, (a, j)) + N[(a, j)])
                s += _delta_order(c, N, a, j)
            if s <= 0:
                return False
    return True


def _delta_pair(c: CartanData, am, bk) -> int:
    (a, m), (b, k) = am, bk
    ta, tb, t2 = c.tt(a), c.tt(b), 2 * c.tmax
    r = (tb * m - ta * k) % t2
    if r not in (1, t2 - 1):
        return 0
    if ta < tb and tb * m > ta * k:
        return 1 if r == 1 else -1
    if ta > tb and tb * m < ta * k:
        return -1 if r == 1 else 1
    return 0


def pair_exponent(c: CartanData, am, bk) -> Fraction:
    """Exponent of (z_am - z_bk) in the second genericity product."""
    (a, m), (b, k) = am, bk
    tab = max(c.tt(a), c.tt(b))
    e = Fraction(min(c.tt(b) * m, c.tt(a) * k) + (1 - c.tmax) * _delta_pair(c, am, bk), tab)
    return e - int(am == bk)


def check_genericity(inst: SCEInstance, sol) -> bool:
    c, nu = inst.c, inst.nu
    u = [_frac_mod1(Fraction(x)) for x in sol]
    for i, (a, m, al) in enumerate(inst.index):
        if u[i] == 0 and any(nu[(a, k)] > 0 for k in range(1, m) if (m - k) % 2):
            return False
        for j, (b, k, be) in enumerate(inst.index):
            if i == j or u[i] != u[j]:
                continue
            par = c.tt(b) * (m - 1) - c.tt(a) * (k - 1) - c.tt(a) * c.tt(b) * c.form(a, b)
            if Fraction(par).denominator != 1 or int(par) % 2:
                continue
            if pair_exponent(c, (a, m), (b, k)) != 0:
                return False
    return True
