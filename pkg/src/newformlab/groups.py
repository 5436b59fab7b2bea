"""SL2 and U(1,1) over truncated rings: elements, filtration subgroups,
enumeration, double cosets and the Iwasawa decomposition.

Raw matrices are 4-tuples (a, b, c, d) of raw coefficients, where the
coefficient algebra ``C`` is a RingSpec (SL2) or a QuadExtSpec (U(1,1)).
U(1,1) is the group of g in GL2(E) with conj(g) J g^T = J, J = [[0,1],[-1,0]].

>>> from newformlab.local_rings import make_ring
>>> R = make_ring("mixed", 3, 1, 4)
>>> len(enumerate("SL2", R, 1).elements)
24
"""
from __future__ import annotations

import builtins
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

from .characters import unit_group
from .kernels import orbit_bfs
from .local_rings import (
    PrecisionError,
    QuadElem,
    QuadExtSpec,
    RElem,
    RingSpec,
    galois_conj,
    invert,
    make_quad_ext,
    valuation,
)

__all__ = [
    "GrpElem",
    "SubgroupSpec",
    "FiniteGroup",
    "DoubleCosetSet",
    "CosetSpace",
    "enumerate",
    "membership",
    "double_cosets",
    "iwasawa",
    "constants",
    "n_mat",
    "nbar_mat",
    "diag_mat",
    "w_mat",
    "additive_generators",
    "borel_generators",
    "group_generators",
    "subgroup_generators",
    "alg_for",
    "GROUP_SIZE_GUARD",
]

GROUP_SIZE_GUARD = 10**7


def alg_for(flavor: str, ring: RingSpec):
    """Coefficient algebra of a flavor: O for SL2, O_E for U(1,1)."""
    if flavor == "SL2":
        return ring
    if flavor == "U11":
        return make_quad_ext(ring)
    raise ValueError(f"unknown flavor {flavor!r}")


def _base(C) -> RingSpec:
    return C.base if isinstance(C, QuadExtSpec) else C


# ---------------------------------------------------------------------------
# raw matrix helpers


def mat_mul(C, g, h):
    a, b, c, d = g
    e, f, k, l = h
    mul, add = C.mul, C.add
    return (add(mul(a, e), mul(b, k)), add(mul(a, f), mul(b, l)),
            add(mul(c, e), mul(d, k)), add(mul(c, f), mul(d, l)))


def mat_det(C, g):
    a, b, c, d = g
    return C.sub(C.mul(a, d), C.mul(b, c))


def mat_inv(C, g):
    """Inverse of a matrix with unit determinant."""
    a, b, c, d = g
    di = C.unit_inv(mat_det(C, g))
    return (C.mul(d, di), C.neg(C.mul(b, di)), C.neg(C.mul(c, di)), C.mul(a, di))


def mat_reduce(C, g, k: int):
    return tuple(C.reduce(x, k) for x in g)


def mat_key(C, g, k: int):
    return tuple(C.key(x, k) for x in g)


def mat_conj(C, g):
    return tuple(C.conj(x) for x in g)


def n_mat(C, x):
    return (C.one(), x, C.zero(), C.one())


def nbar_mat(C, x):
    return (C.one(), C.zero(), x, C.one())


def diag_mat(C, t, s):
    return (t, C.zero(), C.zero(), s)


def w_mat(C):
    """w = [[0, -1], [1, 0]]."""
    return (C.zero(), C.neg(C.one()), C.one(), C.zero())


def torus_mat(C, t):
    """diag(t, conj(t)^{-1}) (diag(t, t^{-1}) for SL2)."""
    return diag_mat(C, t, C.unit_inv(C.conj(t)))


def embed(C, x):
    """Base-ring raw element inside C."""
    return C.from_base(x) if isinstance(C, QuadExtSpec) else x


def is_unitary_raw(C, g, k: int) -> bool:
    """conj(g) J g^T = J modulo P^k (det = 1 for SL2)."""
    if not isinstance(C, QuadExtSpec):
        return C.key(mat_det(C, g), k) == C.key(C.one(), k)
    a, b, c, d = g
    ca, cb, cc, cd = mat_conj(C, g)
    r11 = C.sub(C.mul(ca, b), C.mul(cb, a))
    r12 = C.sub(C.mul(ca, d), C.mul(cb, c))
    r22 = C.sub(C.mul(cc, d), C.mul(cd, c))
    z = C.key(C.zero(), k)
    return C.key(r11, k) == z and C.key(r22, k) == z and C.key(r12, k) == C.key(C.one(), k)


# ---------------------------------------------------------------------------
# generators


def additive_generators(ring: RingSpec, k: int) -> list:
    """Generators of the additive group O/P^k (raw)."""
    if k == 0:
        return []
    if ring.mixed:
        return [ring.one()]
    out = []
    for j in range(k):
        for i in range(ring.f):
            out.append(ring.shift_up(ring.lift(ring.p**i), j))
    return out


def unit_generators(C, k: int) -> list:
    if k == 0:
        return []
    return list(unit_group(C, k).generators)


def borel_generators(flavor: str, ring: RingSpec, M: int) -> list:
    """Generators of (B cap K_0) mod P^M: n(x), x in O_F, and the torus."""
    C = alg_for(flavor, ring)
    gens = [n_mat(C, embed(C, x)) for x in additive_generators(ring, M)]
    gens += [torus_mat(C, t) for t in unit_generators(C, M)]
    return [mat_reduce(C, g, M) for g in gens]


def group_generators(flavor: str, ring: RingSpec, M: int) -> list:
    """Generators of K_0 mod P^M (SL2(O) resp. U(1,1)(O_E))."""
    C = alg_for(flavor, ring)
    gens = borel_generators(flavor, ring, M)
    gens += [mat_reduce(C, nbar_mat(C, embed(C, x)), M) for x in additive_generators(ring, M)]
    return gens


@dataclass(frozen=True)
class SubgroupSpec:
    """Symbolic subgroup tag with its parameter.

    Tags: K, Kp (K'_m), Kbar, Kbarp, B0 (B cap K_0), Iwahori, principal,
    N, Nbar, T0, Z.
    """

    tag: str
    param: int = 0

    def __str__(self):
        return f"{self.tag}({self.param})"


def subgroup_generators(S: SubgroupSpec, flavor: str, ring: RingSpec, M: int) -> list:
    """Generators of the image of S in K_0 mod P^M (raw matrices)."""
    C = alg_for(flavor, ring)
    R = ring
    tag, m = S.tag, S.param
    pi_m = lambda x, j: embed(C, R.shift_up(x, j))
    add = additive_generators(R, M)
    if tag in ("B0",):
        gens = borel_generators(flavor, R, M)
    elif tag in ("K", "Kbar", "Iwahori"):
        if tag == "Iwahori":
            m = 1
        nbar = [nbar_mat(C, pi_m(x, m)) for x in add]
        if tag == "K":
            # SL2-type torus diag(u, u^{-1}), u in O^x, in either flavor
            gens = [n_mat(C, embed(C, x)) for x in add] + nbar
            gens += [diag_mat(C, embed(C, u), embed(C, R.unit_inv(u))) for u in unit_generators(R, M)]
        else:
            gens = borel_generators(flavor, R, M) + nbar
    elif tag == "principal":
        gens = [n_mat(C, pi_m(x, m)) for x in add] + [nbar_mat(C, pi_m(x, m)) for x in add]
        gens += [diag_mat(C, embed(C, u), embed(C, R.unit_inv(u))) for u in unit_generators(R, M)
                 if R.key(R.sub(u, R.one()), m) == 0]
        if m > 0:
            ones = [R.add(R.one(), R.shift_up(x, m)) for x in add]
            gens += [diag_mat(C, embed(C, u), embed(C, R.unit_inv(u))) for u in ones]
    elif tag == "N":
        gens = [n_mat(C, pi_m(x, m)) for x in add]
    elif tag == "Nbar":
        gens = [nbar_mat(C, pi_m(x, m)) for x in add]
    elif tag == "T0":
        gens = [torus_mat(C, t) for t in unit_generators(C, M)]
    elif tag == "Z":
        if not isinstance(C, QuadExtSpec):
            gens = [diag_mat(C, C.neg(C.one()), C.neg(C.one()))]
        else:
            g = unit_group(C, M)
            norm1 = [x for x in g.elements if R.key(C.norm(x), M) == R.key(R.one(), M)]
            gens = [diag_mat(C, z, z) for z in norm1]
    else:
        raise ValueError(f"no finite image for subgroup {S}")
    return [mat_reduce(C, g, M) for g in gens]


# ---------------------------------------------------------------------------
# public group elements


@dataclass(frozen=True, eq=False)
class GrpElem:
    """2x2 matrix with RElem (SL2, GL2) or QuadElem (U11) entries.

    Entries may carry negative shifts (elements of F rather than O).
    """

    flavor: str
    a: RElem | QuadElem
    b: RElem | QuadElem
    c: RElem | QuadElem
    d: RElem | QuadElem

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def precision(self) -> int:
        return min(_abs_prec(x) for x in self.entries)

    def __mul__(self, other: "GrpElem") -> "GrpElem":
        a, b, c, d = self.entries
        e, f, k, l = other.entries
        flav = self.flavor if self.flavor == other.flavor else "GL2"
        return GrpElem(flav, a * e + b * k, a * f + b * l, c * e + d * k, c * f + d * l)

    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "GrpElem":
        di = invert(self.det())
        return GrpElem(self.flavor, self.d * di, -self.b * di, -self.c * di, self.a * di)

    def conj_entries(self) -> "GrpElem":
        return GrpElem(self.flavor, *(galois_conj(x) for x in self.entries))

    def __eq__(self, other):
        return isinstance(other, GrpElem) and all(x == y for x, y in zip(self.entries, other.entries))

    __hash__ = None  # type: ignore[assignment]

    def is_in_group(self) -> bool:
        """The defining relation of the flavor, at the available precision."""
        if self.flavor == "SL2":
            return self.det() == 1
        if self.flavor == "U11":
            ca, cb, cc, cd = (galois_conj(x) for x in self.entries)
            a, b, c, d = self.entries
            return ca * b - cb * a == 0 and cc * d - cd * c == 0 and ca * d - cb * c == 1
        return True

    def raw(self, C) -> tuple:
        R = _base(C)

        def integral(y: RElem):
            if y.shift >= 0:
                return R.shift_up(y.raw, y.shift)
            if R.val(y.raw) >= y.prec:
                return R.zero()
            raise PrecisionError("entry not integral")

        out = []
        for x in self.entries:
            if isinstance(x, QuadElem):
                out.append((integral(x.a), integral(x.b)))
            elif isinstance(C, QuadExtSpec):
                out.append(C.from_base(integral(x)))
            else:
                out.append(integral(x))
        return tuple(out)

    @staticmethod
    def from_raw(flavor: str, C, g) -> "GrpElem":
        if isinstance(C, QuadExtSpec):
            R = C.base
            return GrpElem(flavor, *(QuadElem(C, RElem(R, x[0]), RElem(R, x[1])) for x in g))
        return GrpElem(flavor, *(RElem(C, x) for x in g))

    def __repr__(self):
        return f"GrpElem[{self.flavor}]({self.a!r}, {self.b!r}; {self.c!r}, {self.d!r})"


def _abs_prec(x) -> int:
    if isinstance(x, QuadElem):
        return min(x.a.abs_prec, x.b.abs_prec)
    return x.abs_prec


def _val(x) -> int:
    return valuation(x)


def membership(g: GrpElem, S: SubgroupSpec) -> bool:
    """Exact congruence test of g against the subgroup S.

    >>> from newformlab.local_rings import make_ring
    >>> R = make_ring("mixed", 3, 1, 5)
    >>> k = GrpElem("SL2", R.elem(1), R.elem(0), R.elem(9), R.elem(1))
    >>> membership(k, SubgroupSpec("K", 2)), membership(k, SubgroupSpec("K", 3))
    (True, False)
    """
    tag, m = S.tag, S.param
    if g.precision < m + 1 and tag not in ("T0", "Z"):
        raise PrecisionError("insufficient precision for membership")
    if not g.is_in_group():
        return False
    a, b, c, d = g.entries
    va, vb, vc, vd = (_val(x) for x in (a, b, c, d))
    integral = min(va, vb, vc, vd) >= 0
    if tag in ("K", "Kbar"):
        return integral and vc >= m
    if tag == "Iwahori":
        return integral and vc >= 1
    if tag == "B0":
        return integral and vc >= g.precision
    if tag in ("Kp", "Kbarp"):
        return va >= 0 and vd >= 0 and vb >= -1 and vc >= m + 1
    if tag == "principal":
        return integral and vb >= m and vc >= m and _val(a - 1) >= m and _val(d - 1) >= m
    if tag == "N":
        return vc >= g.precision and _val(a - 1) >= g.precision and _val(d - 1) >= g.precision and vb >= m
    if tag == "Nbar":
        return vb >= g.precision and _val(a - 1) >= g.precision and _val(d - 1) >= g.precision and vc >= m
    if tag == "T0":
        return vb >= g.precision and vc >= g.precision and va == 0 and vd == 0
    if tag == "Z":
        return vb >= g.precision and vc >= g.precision and a == d
    raise ValueError(f"unknown subgroup tag {tag!r}")


# ---------------------------------------------------------------------------
# finite groups


@dataclass
class FiniteGroup:
    flavor: str
    ring: RingSpec
    m: int
    elements: list
    index: dict

    @property
    def alg(self):
        return alg_for(self.flavor, self.ring)

    def idx(self, g) -> int:
        return self.index[mat_key(self.alg, g, self.m)]

    def mul(self, g, h):
        return mat_reduce(self.alg, mat_mul(self.alg, g, h), self.m)

    def __len__(self):
        return len(self.elements)


def _sl2_elements(R: RingSpec, m: int) -> list:
    els = R.elements(m)
    out = []
    for a in els:
        for c in els:
            if not (R.is_unit(a) or R.is_unit(c)):
                continue
            for e in els:
                if R.is_unit(a):
                    b = e
                    d = R.reduce(R.mul(R.add(R.one(), R.mul(b, c)), R.unit_inv(a)), m)
                else:
                    d = e
                    b = R.reduce(R.mul(R.sub(R.mul(a, d), R.one()), R.unit_inv(c)), m)
                out.append((a, b, c, d))
    return out


def enumerate(flavor: str, ring: RingSpec, m: int) -> FiniteGroup:
    """All elements of SL2(O/P^m) or U(1,1)(O_E/P^m).

    U(1,1) is enumerated as diag(t, conj(t)^{-1}) * s with s in SL2 and t
    over representatives of units of O_E modulo units of O_F.
    """
    q = ring.q
    size = q ** (3 * (m - 1)) * q * (q * q - 1) if m else 1
    if flavor == "U11":
        size *= (q + 1) * q ** (m - 1) if m else 1
    if size > GROUP_SIZE_GUARD:
        raise MemoryError(f"group of order {size} exceeds the size guard")
    if m > ring.N:
        raise PrecisionError("enumeration level exceeds ring precision")
    C = alg_for(flavor, ring)
    if m == 0:
        one = (C.one(), C.zero(), C.zero(), C.one())
        return FiniteGroup(flavor, ring, 0, [one], {mat_key(C, one, 0): 0})
    sl = _sl2_elements(ring, m)
    if flavor == "SL2":
        els = sl
    else:
        base_units = {ring.key(u, m) for u in ring.units(m)}
        reps, seen = [], set()
        for t in C.units(m):
            cls = frozenset(C.key(C.reduce(C.scale(u, t), m), m) for u in ring.units(m))
            if min(cls) in seen:
                continue
            seen.add(min(cls))
            reps.append(t)
        assert len(reps) == (q + 1) * q ** (m - 1)
        els = []
        for t in reps:
            T = torus_mat(C, t)
            for s in sl:
                els.append(mat_reduce(C, mat_mul(C, T, tuple(C.from_base(x) for x in s)), m))
    index = {}
    for i, g in builtins.enumerate(els):
        index[mat_key(C, g, m)] = i
    assert len(index) == len(els) == size, (len(index), len(els), size)
    return FiniteGroup(flavor, ring, m, els, index)


@dataclass
class DoubleCosetSet:
    """Orbits of left x right multiplication with stabilizer generators."""

    group: FiniteGroup
    left: SubgroupSpec
    right: SubgroupSpec
    representatives: list
    sizes: list
    stabilizers: list  # per representative: list of (l, r) with l g r = g

    def __len__(self):
        return len(self.representatives)


def double_cosets(G: FiniteGroup, left: SubgroupSpec, right: SubgroupSpec) -> DoubleCosetSet:
    """L \\ G / R by orbit growing over generator permutations.

    >>> from newformlab.local_rings import make_ring
    >>> G = enumerate("SL2", make_ring("mixed", 3, 1, 3), 1)
    >>> len(double_cosets(G, SubgroupSpec("B0"), SubgroupSpec("B0")))
    2
    """
    C, m = G.alg, G.m
    L = subgroup_generators(left, G.flavor, G.ring, m)
    Rg = subgroup_generators(right, G.flavor, G.ring, m)
    Li = [mat_inv(C, l) for l in L]
    n = len(G)
    perms = []
    moves = []
    for l, li in zip(L, Li):
        perms.append([G.idx(G.mul(l, g)) for g in G.elements])
        moves.append(("L", l))
    for r in Rg:
        perms.append([G.idx(G.mul(g, r)) for g in G.elements])
        moves.append(("R", r))
    label, parent, via = orbit_bfs(perms, n)
    one = (C.one(), C.zero(), C.zero(), C.one())
    # transversal words: left factor lw and right factor rw with lw g_rep rw = g
    lw: dict[int, tuple] = {}
    rw: dict[int, tuple] = {}
    order = sorted(range(n), key=lambda x: (label[x], _depth(parent, x)))
    for x in order:
        if parent[x] == -1:
            lw[x], rw[x] = mat_reduce(C, one, m), mat_reduce(C, one, m)
            continue
        side, s = moves[via[x]]
        p = parent[x]
        if side == "L":
            lw[x], rw[x] = G.mul(s, lw[p]), rw[p]
        else:
            lw[x], rw[x] = lw[p], G.mul(rw[p], s)
    reps = sorted(set(label))
    sizes = {r: 0 for r in reps}
    for x in range(n):
        sizes[label[x]] += 1
    stabs = {r: [] for r in reps}
    for x in range(n):
        r = label[x]
        for k, (side, s) in builtins.enumerate(moves):
            y = perms[k][x]
            # lw[y]^{-1} (s-move of lw[x] . rep . rw[x]) = rep
            if side == "L":
                l = G.mul(mat_inv(C, lw[y]), G.mul(s, lw[x]))
                rr = G.mul(rw[x], mat_inv(C, rw[y]))
            else:
                l = G.mul(mat_inv(C, lw[y]), lw[x])
                rr = G.mul(G.mul(rw[x], s), mat_inv(C, rw[y]))
            if mat_key(C, l, m) != mat_key(C, one, m) or mat_key(C, rr, m) != mat_key(C, one, m):
                stabs[r].append((l, rr))
    return DoubleCosetSet(G, left, right, [G.elements[r] for r in reps], [sizes[r] for r in reps],
                          [stabs[r] for r in reps])


def _depth(parent: Sequence[int], x: int) -> int:
    d = 0
    while parent[x] != -1:
        x = parent[x]
        d += 1
    return d


# ---------------------------------------------------------------------------
# Iwasawa decomposition


@dataclass(frozen=True)
class IwasawaResult:
    t: object  # RElem or QuadElem: diagonal entry of the Borel factor
    x: object  # upper-right entry of the Borel factor
    k: GrpElem
    q_power: int  # e with |t| = q^{-e}


def iwasawa(g: GrpElem) -> IwasawaResult:
    """g = (t, x; 0, conj(t)^{-1}) k with k integral.

    Pivot rule: the bottom row (c, d) is divided by its entry of least
    valuation; ties prefer d.  With pivot d, k = (1, 0; c/d, 1); with pivot
    c, k = (0, -1; 1, d/c).

    >>> from newformlab.local_rings import make_ring, invert
    >>> R = make_ring("mixed", 3, 1, 6)
    >>> x = invert(R.elem(3))
    >>> res = iwasawa(GrpElem("SL2", R.elem(0), R.elem(-1), R.elem(1), x))
    >>> res.q_power, res.k.c == invert(x)
    (1, True)
    """
    a, b, c, d = g.entries
    vc, vd = _val(c), _val(d)
    if isinstance(c, QuadElem):
        one, zero = c.ext.elem(1), c.ext.elem(0)
    else:
        one, zero = c.ring.elem(1), c.ring.elem(0)
    if vd <= vc:
        lam = d
        r = c * invert(d)
        k = GrpElem(g.flavor, one, zero, r, one)
    else:
        lam = c
        r = d * invert(c)
        k = GrpElem(g.flavor, zero, -one, one, r)
    if min(_val(x) for x in k.entries) < 0:
        raise PrecisionError("pivot did not produce an integral factor")
    bmat = g * k.inverse()
    t = bmat.a
    # |t| for U(1,1) is measured in F: v_E(t) = v_F(t) since E/F is unramified
    e = _val(t)
    assert _val(lam) == -e, "bottom-right of the Borel factor must be conj(t)^{-1}"
    return IwasawaResult(t, bmat.b, k, e)


# ---------------------------------------------------------------------------
# distinguished elements


def constants(ring: RingSpec) -> dict[str, GrpElem]:
    """alpha, beta, gamma, theta, w.

    alpha = diag(pi, 1), beta = diag(1, pi), gamma = diag(eps_F, 1),
    theta = diag(eps_E, conj(eps_E)^{-1}), w = [[0, -1], [1, 0]].
    """
    R = ring
    E = make_quad_ext(R)
    z, o = R.elem(0), R.elem(1)
    pi = RElem(R, R.pi_power(1))
    eE = E.eps_E
    Ez, Eo = E.elem(0), E.elem(1)
    return {
        "alpha": GrpElem("GL2", pi, z, z, o),
        "beta": GrpElem("GL2", o, z, z, pi),
        "gamma": GrpElem("GL2", R.eps, z, z, o),
        "theta": GrpElem("U11", eE, Ez, Ez, invert(galois_conj(eE))),
        "w": GrpElem("SL2", z, -o, o, z),
    }


# ---------------------------------------------------------------------------
# coset spaces K_0 / K_m as lines


class CosetSpace:
    """K_0/K_m identified with the K_0-orbit of [1:0] in P^1(C/P^m).

    A coset g K_m is recorded by the line through the first column of g.
    Matrices are handled modulo P^M (M >= m).  ``transversal[i]`` maps
    [1:0] to point i.
    """

    def __init__(self, flavor: str, ring: RingSpec, m: int, M: int):
        assert M >= max(m, 1)
        self.flavor, self.ring, self.m, self.M = flavor, ring, m, M
        C = self.C = alg_for(flavor, ring)
        gens = group_generators(flavor, ring, M)
        one = mat_reduce(C, (C.one(), C.zero(), C.zero(), C.one()), M)
        self.identity = one
        start = self.normalize(C.one(), C.zero())
        self.points = [start]
        self.index = {self.point_key(start): 0}
        self.transversal = [one]
        queue = deque([0])
        while queue:
            i = queue.popleft()
            pa, pc = self.points[i]
            for s in gens:
                pt = self.act(s, (pa, pc))
                key = self.point_key(pt)
                if key not in self.index:
                    self.index[key] = len(self.points)
                    self.points.append(pt)
                    self.transversal.append(mat_reduce(C, mat_mul(C, s, self.transversal[i]), M))
                    queue.append(len(self.points) - 1)

    def normalize(self, a, c):
        C, m = self.C, self.m
        if m == 0:
            return (C.zero(), C.zero())
        if C.is_unit(a):
            return (C.reduce(C.one(), m), C.reduce(C.mul(c, C.unit_inv(a)), m))
        assert C.is_unit(c), "first column must be primitive"
        return (C.reduce(C.mul(a, C.unit_inv(c)), m), C.reduce(C.one(), m))

    def point_key(self, pt):
        C, m = self.C, self.m
        if m == 0:
            return 0
        a, c = pt
        return (C.key(a, m), C.key(c, m))

    def act(self, g, pt):
        C = self.C
        a, c = pt
        ga, gb, gc, gd = g
        return self.normalize(C.add(C.mul(ga, a), C.mul(gb, c)), C.add(C.mul(gc, a), C.mul(gd, c)))

    def locate(self, g) -> int:
        """Index of the coset g K_m (g integral, in the group)."""
        return self.index[self.point_key(self.normalize(g[0], g[2]))]

    def perm(self, g) -> list[int]:
        return [self.index[self.point_key(self.act(g, pt))] for pt in self.points]

    def __len__(self):
        return len(self.points)


@lru_cache(maxsize=None)
def coset_space(flavor: str, ring: RingSpec, m: int, M: int) -> CosetSpace:
    return CosetSpace(flavor, ring, m, M)
