"""Level-one supercuspidals of SL2(F) via cuspidal data on the residue field.

A regular character theta of F_{q^2}^x gives the cuspidal representation of
GL2(F_q) of dimension q - 1, with character

    z       -> (q - 1) theta(z)        z u    -> -theta(z)
    split   -> 0                       zeta   -> -(theta(zeta) + theta(zeta^q))

On SL2(F_q) it is irreducible or splits into two pieces of dimension
(q - 1)/2, which differ only on the non-trivial unipotent classes.  Every
claim about these class functions is checked by exact inner products.

Fixed-space dimensions of pi = ind_K^G(sigma) are computed by Mackey theory:
double cosets K \\ X / K_m (X = G for the K tower, alpha^{-1} G for the K'
tower) are grouped into shells of tree distance delta; each cell contributes
the multiplicity of eta in sigma twisted by the cell representative, as an
average over a finite image group.

>>> from newformlab.local_rings import make_ring
>>> R = make_ring("mixed", 3, 1, 6)
>>> data = [cuspidal_character(R, t) for t in regular_thetas(R)]
>>> len(data), sum(d.splits for d in data)
(3, 1)
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .characters import UnitChar, unit_group
from .cyclotomic import Cyclotomic, RootOfUnity
from .groups import SubgroupSpec, group_generators, mat_inv, mat_mul, mat_reduce, subgroup_generators
from .kernels import orbit_bfs, prepare_table, subgroup_closure
from .local_rings import QuadExtSpec, RingSpec, make_quad_ext

__all__ = [
    "ResidueGL2",
    "CuspidalCharData",
    "regular_thetas",
    "cuspidal_character",
    "MackeyCell",
    "MackeyResult",
    "mackey_dims",
    "packet_taxonomy",
    "MackeyError",
    "SC_SIZE_GUARD",
]

SC_SIZE_GUARD = 2 * 10**6


class MackeyError(RuntimeError):
    """A Mackey contribution failed an integrality or vanishing check."""


# ---------------------------------------------------------------------------
# 2x2 matrices over the residue field


class ResidueGL2:
    """GL2(F_q) and SL2(F_q) on residue-field codes."""

    def __init__(self, ring: RingSpec):
        self.ring = ring
        self.F = F = ring.field_
        self.q = F.q
        q = self.q
        self.gl2 = [(a, b, c, d) for a in range(q) for b in range(q) for c in range(q) for d in range(q)
                    if self.det((a, b, c, d)) != 0]
        self.sl2 = [g for g in self.gl2 if self.det(g) == 1]
        self.sl2_index = {g: i for i, g in enumerate(self.sl2)}

    def det(self, g) -> int:
        F = self.F
        a, b, c, d = g
        return F.sub(F.mul(a, d), F.mul(b, c))

    def mul(self, g, h):
        F = self.F
        a, b, c, d = g
        e, f, k, l = h
        return (F.add(F.mul(a, e), F.mul(b, k)), F.add(F.mul(a, f), F.mul(b, l)),
                F.add(F.mul(c, e), F.mul(d, k)), F.add(F.mul(c, f), F.mul(d, l)))

    @cached_property
    def prepared_table(self):
        return prepare_table(self.sl2_table)

    @cached_property
    def sl2_table(self) -> list[list[int]]:
        idx, els = self.sl2_index, self.sl2
        return [[idx[self.mul(g, h)] for h in els] for g in els]

    def classify(self, g):
        """("central", z), ("unipotent", z, beta), ("split",), ("elliptic", (x, y)).

        For z u with u unipotent, beta is a parameter whose square class
        fixes the SL2-class: u is SL2-conjugate to n(beta).  For elliptic
        elements (x, y) are the residue coordinates of the eigenvalue
        x + y sqrt(eps).
        """
        F = self.F
        a, b, c, d = g
        tr = F.add(a, d)
        det = self.det(g)
        two_inv = F.inv[F.from_int(2)]
        disc = F.sub(F.mul(tr, tr), F.mul(F.from_int(4), det))
        if disc == 0:
            z = F.mul(tr, two_inv)
            if b == 0 and c == 0 and a == d:
                return ("central", z)
            zi = F.inv[z]
            # z^{-1} g - 1 = X nilpotent; its SL2-class is read off b or -c
            xb, xc = F.mul(zi, b), F.mul(zi, c)
            beta = xb if xb != 0 else F.neg[xc]
            return ("unipotent", z, beta)
        if disc in F.squares:
            return ("split",)
        eps = self.ring.residue(self.ring.eps_raw)
        s = F.sqrt_t[F.mul(disc, F.inv[eps])]
        return ("elliptic", (F.mul(tr, two_inv), F.mul(s, two_inv)))


@lru_cache(maxsize=None)
def residue_gl2(ring: RingSpec) -> ResidueGL2:
    return ResidueGL2(ring)


# ---------------------------------------------------------------------------
# cuspidal characters


def _theta_value(theta: UnitChar, pair) -> RootOfUnity:
    ext = theta.group.ring
    R = ext.base
    return theta((R.lift(pair[0]), R.lift(pair[1])))


def regular_thetas(ring: RingSpec) -> list[UnitChar]:
    """One regular character of F_{q^2}^x per Frobenius orbit {theta, theta^q}."""
    ext = make_quad_ext(ring)
    g = unit_group(ext, 1)
    seen, out = set(), []
    for th in g.chars():
        frob = g.char_from_function(lambda x: th(ext.conj(x)), check=False)
        if frob == th or th in seen:
            continue
        seen.update({th, frob})
        out.append(th)
    return out


def _psi_bar(F, x: int) -> RootOfUnity:
    """The additive character of F_q read from P^{-1}/O: zeta_p^{Tr x}."""
    return RootOfUnity(F.p, F.trace(x))


@dataclass
class CuspidalCharData:
    """A cuspidal representation of GL2(F_q) and its SL2(F_q) pieces."""

    ring: RingSpec
    theta: UnitChar
    q: int
    dimension: int
    splits: bool
    class_values: dict = field(repr=False)
    constituents: list = field(repr=False)  # class functions on SL2(F_q) indices
    generic_labels: list = field(default_factory=list)
    norm_gl2: Fraction = Fraction(0)

    def central_value(self, z: int) -> RootOfUnity:
        return _theta_value(self.theta, (z, 0))

    def omega_minus_one(self) -> RootOfUnity:
        F = self.ring.field_
        return self.central_value(F.neg[1])

    def to_json(self) -> dict:
        return {
            "theta": self.theta.label(),
            "q": self.q,
            "dimension": self.dimension,
            "splits": self.splits,
            "constituent_dimensions": [int(c[self._identity].rational_value()) for c in self.constituents],
            "generic_labels": self.generic_labels,
        }

    @property
    def _identity(self) -> int:
        return residue_gl2(self.ring).sl2_index[(1, 0, 0, 1)]


def _gl2_value(G: ResidueGL2, theta: UnitChar, g) -> Cyclotomic:
    cls = G.classify(g)
    q = G.q
    if cls[0] == "central":
        return _theta_value(theta, (cls[1], 0)).to_cyclotomic() * (q - 1)
    if cls[0] == "unipotent":
        return -_theta_value(theta, (cls[1], 0)).to_cyclotomic()
    if cls[0] == "split":
        return Cyclotomic.rational(0)
    x, y = cls[1]
    F = G.F
    return -(_theta_value(theta, (x, y)).to_cyclotomic() + _theta_value(theta, (x, F.neg[y])).to_cyclotomic())


def _inner(values_a, values_b, order: int) -> Cyclotomic:
    total = Cyclotomic.rational(0)
    for a, b in zip(values_a, values_b):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b.conj()
    return total * Fraction(1, order)


def cuspidal_character(ring: RingSpec, theta: UnitChar) -> CuspidalCharData:
    """Character data of the cuspidal representation attached to ``theta``."""
    ext = theta.group.ring
    assert isinstance(ext, QuadExtSpec) and theta.modulus == 1
    frob = theta.group.char_from_function(lambda x: theta(ext.conj(x)), check=False)
    if frob == theta:
        raise ValueError("theta is not regular (theta = theta^q)")
    G = residue_gl2(ring)
    F, q = G.F, G.q
    if len(G.gl2) > SC_SIZE_GUARD:
        raise MemoryError("GL2 over the residue field exceeds the size guard")
    gl_vals = [_gl2_value(G, theta, g) for g in G.gl2]
    norm = _inner(gl_vals, gl_vals, len(G.gl2))
    if norm != Cyclotomic.rational(1):
        raise AssertionError("cuspidal character formula is not irreducible")
    dim = gl_vals[G.gl2.index((1, 0, 0, 1))]
    assert dim == Cyclotomic.rational(q - 1)
    sl_vals = [_gl2_value(G, theta, g) for g in G.sl2]
    rnorm = _inner(sl_vals, sl_vals, len(G.sl2)).rational_value()
    assert rnorm in (1, 2), "restriction to SL2 has unexpected norm"
    splits = rnorm == 2
    class_values = {}
    for g, v in zip(G.gl2, gl_vals):
        class_values.setdefault(G.classify(g), v)
    if not splits:
        constituents = [sl_vals]
    else:
        # quadratic Gauss sum g = sum_x psi_bar(x^2), g^2 = (-1 / q) q
        gsum = Cyclotomic.rational(0)
        for x in range(q):
            gsum = gsum + _psi_bar(F, F.mul(x, x)).to_cyclotomic()
        halves = []
        for s in (1, -1):
            vals = []
            for g, v in zip(G.sl2, sl_vals):
                cls = G.classify(g)
                if cls[0] == "unipotent":
                    z = _theta_value(theta, (cls[1], 0)).to_cyclotomic()
                    sgn = F.legendre(cls[2])
                    vals.append(z * (Cyclotomic.rational(-1) + gsum * (s * sgn)) * Fraction(1, 2))
                else:
                    vals.append(v * Fraction(1, 2))
            halves.append(vals)
        for h in halves:
            if _inner(h, h, len(G.sl2)) != Cyclotomic.rational(1):
                raise AssertionError("split constituent is not irreducible")
        if any(not (a + b - v).is_zero() for a, b, v in zip(halves[0], halves[1], sl_vals)):
            raise AssertionError("split constituents do not add up to the restriction")
        constituents = halves
    data = CuspidalCharData(ring, theta, q, q - 1, splits, class_values, constituents, norm_gl2=Fraction(1))
    data.generic_labels = [_psi_bar_multiplicity(G, c) for c in constituents]
    if splits:
        assert sorted(data.generic_labels) == [0, 1], "exactly one constituent should be psi-bar-generic"
    return data


def _psi_bar_multiplicity(G: ResidueGL2, values) -> int:
    """Multiplicity of psi_bar in the restriction to the upper unipotents."""
    F = G.F
    total = Cyclotomic.rational(0)
    for beta in range(G.q):
        v = values[G.sl2_index[(1, beta, 0, 1)]]
        total = total + v * _psi_bar(F, beta).inverse().to_cyclotomic()
    r = (total * Fraction(1, G.q)).rational_value()
    assert r is not None and r.denominator == 1 and r >= 0
    return int(r)


def _unipotent_invariants(G: ResidueGL2, values) -> int:
    total = Cyclotomic.rational(0)
    for beta in range(G.q):
        total = total + values[G.sl2_index[(1, beta, 0, 1)]]
    r = (total * Fraction(1, G.q)).rational_value()
    assert r is not None and r.denominator == 1
    return int(r)


# ---------------------------------------------------------------------------
# Mackey computation


@dataclass
class MackeyCell:
    shell: int  # tree distance delta of the double coset
    rep_row: tuple  # first row of k2 modulo P^delta (the vertex)
    image_order: int  # |H| for the finite image group of K_m cap g^{-1} K g
    contribution: int

    def to_json(self) -> dict:
        return {"shell": self.shell, "vertex": [str(x) for x in self.rep_row],
                "image_order": self.image_order, "contribution": self.contribution}


@dataclass
class MackeyResult:
    dim: int
    cells: list
    shells: dict  # delta -> total contribution
    certified_from: int  # first shell covered by the unipotent-invariants certificate

    def to_json(self) -> dict:
        return {"dimension": self.dim, "shells": {str(k): v for k, v in self.shells.items()},
                "certified_from": self.certified_from, "cells": [c.to_json() for c in self.cells]}


class _RowLines:
    """Right action of K on primitive rows modulo P^delta (delta >= 1)."""

    def __init__(self, ring: RingSpec, delta: int, M: int):
        self.R, self.delta, self.M = ring, delta, M
        R = ring
        gens = group_generators("SL2", ring, M)
        start = self.normalize((R.one(), R.zero()))
        self.points = [start]
        self.index = {self.key(start): 0}
        self.trans = [mat_reduce(R, (R.one(), R.zero(), R.zero(), R.one()), M)]
        i = 0
        while i < len(self.points):
            for s in gens:
                pt = self.act(self.points[i], s)
                k = self.key(pt)
                if k not in self.index:
                    self.index[k] = len(self.points)
                    self.points.append(pt)
                    self.trans.append(mat_reduce(R, mat_mul(R, self.trans[i], s), M))
            i += 1

    def normalize(self, row):
        R, d = self.R, self.delta
        x, y = row
        if R.is_unit(x):
            return (R.reduce(R.one(), d), R.reduce(R.mul(y, R.unit_inv(x)), d))
        return (R.reduce(R.mul(x, R.unit_inv(y)), d), R.reduce(R.one(), d))

    def key(self, pt):
        return (self.R.key(pt[0], self.delta), self.R.key(pt[1], self.delta))

    def act(self, pt, h):
        R = self.R
        x, y = pt
        a, b, c, d = h
        return self.normalize((R.add(R.mul(x, a), R.mul(y, c)), R.add(R.mul(x, b), R.mul(y, d))))

    def perm(self, h) -> list[int]:
        return [self.index[self.key(self.act(pt, h))] for pt in self.points]


def _conj_to_residue(R: RingSpec, delta: int, k2, k2_inv, h):
    """g h g^{-1} mod P for g = diag(pi^{-delta}, 1) k2."""
    a, b, c, d = mat_mul(R, k2, mat_mul(R, h, k2_inv))
    assert delta == 0 or R.val(b) >= delta, "element does not fix the vertex"
    bb = R.shift_down(b, delta) if delta else b
    cc = R.shift_up(c, delta) if delta else c
    return (R.residue(a), R.residue(bb), R.residue(cc), R.residue(d))


def mackey_dims(data: CuspidalCharData, eta: UnitChar | None, m: int, tower: str = "K",
                constituent: int = 0, explicit: bool = False) -> MackeyResult:
    """dim of (eta, K_m)- (tower K) or (eta, K'_m)-fixed vectors (tower Kp)
    in ind_K^G(sigma), sigma the chosen SL2(F_q)-constituent inflated to K.

    Shells delta >= m are certified zero from the unipotent invariants of
    sigma.  With ``explicit`` the two shells from m on are summed cell by
    cell instead (needs ring precision m + 5) and must vanish.
    """
    R = data.ring
    if tower not in ("K", "Kp"):
        raise ValueError("tower must be K or Kp")
    G = residue_gl2(R)
    chi_s = data.constituents[constituent]
    F = G.F
    if eta is not None and eta.conductor > 1:
        raise ValueError("only eta with c(eta) <= 1 are supported at level one")
    if eta is not None and eta.conductor > m:
        return MackeyResult(0, [], {}, 0)
    eta_val = (lambda r: RootOfUnity.one()) if eta is None else (lambda r: eta(R.lift(r)))
    if eta is not None and eta(R.neg(R.one())) != data.omega_minus_one():
        raise ValueError("eta(-1) differs from the central character of sigma")
    M = max(m, 1) if not explicit else m + 4
    if R.N < M + 1:
        raise ValueError(f"ring precision must be at least {M + 1}")
    parity = 0 if tower == "K" else 1
    # eta on the residue units: tables for the closure kernel
    units = [x for x in range(1, G.q)]
    uidx = {x: i for i, x in enumerate(units)}
    utab = prepare_table([[uidx[F.mul(x, y)] for y in units] for x in units])
    stab = G.prepared_table
    # certificate for shells delta >= m: N(P^delta) lies in K(m), which lies
    # in every K_m-conjugate, and sigma has no unipotent invariants
    inv_N = _unipotent_invariants(G, chi_s)
    if inv_N != 0:
        raise MackeyError("sigma has unipotent invariants: not cuspidal")
    km_gens = subgroup_generators(SubgroupSpec("K", m), "SL2", R, M)
    cells, shells = [], {}
    delta = parity
    zero_run = 0
    certified_from = None
    while True:
        if delta >= m and not explicit:
            total = 0  # certified by inv_N == 0
            if certified_from is None:
                certified_from = delta
        else:
            total = 0
            if delta == 0:
                reps = [(None, mat_reduce(R, (R.one(), R.zero(), R.zero(), R.one()), M))]
                stabs = {0: km_gens}
                rows = {0: ()}
            else:
                lines = _RowLines(R, delta, M)
                perms = [lines.perm(h) for h in km_gens]
                label, parent, via = orbit_bfs(perms, len(lines.points))
                # K_m-transversal u[x]: point(root) . u[x] = point(x)
                u = [None] * len(lines.points)
                ident = mat_reduce(R, (R.one(), R.zero(), R.zero(), R.one()), M)
                order = sorted(range(len(lines.points)), key=lambda x: _depth(parent, x))
                for x in order:
                    u[x] = ident if parent[x] == -1 else mat_reduce(R, mat_mul(R, u[parent[x]], km_gens[via[x]]), M)
                stabs = defaultdict(dict)
                for x in range(len(lines.points)):
                    r = label[x]
                    for s, perm in zip(km_gens, perms):
                        y = perm[x]
                        sch = mat_reduce(R, mat_mul(R, u[x], mat_mul(R, s, mat_inv(R, u[y]))), M)
                        stabs[r][tuple(R.key(e, M) for e in sch)] = sch
                stabs = {r: list(v.values()) for r, v in stabs.items()}
                reps = [(r, lines.trans[r]) for r in sorted(stabs)]
                rows = {r: tuple(lines.points[r]) for r in stabs}
            for r, k2 in reps:
                key = 0 if r is None else r
                k2_inv = mat_inv(R, k2)
                gens_a, gens_b = [], []
                for h in stabs[key]:
                    img = _conj_to_residue(R, delta, k2, k2_inv, h)
                    gens_a.append(G.sl2_index[img])
                    gens_b.append(uidx[R.residue(h[3])])
                pairs = subgroup_closure(gens_a, gens_b, stab, utab,
                                         G.sl2_index[(1, 0, 0, 1)], uidx[1])
                acc = Cyclotomic.rational(0)
                for ia, ib in pairs:
                    v = chi_s[ia]
                    if not v.is_zero():
                        acc = acc + v * eta_val(units[ib]).inverse().to_cyclotomic()
                val = (acc * Fraction(1, len(pairs))).rational_value()
                if val is None or val.denominator != 1 or val < 0:
                    raise MackeyError(f"non-integral Mackey contribution {acc} at shell {delta}")
                c = int(val)
                total += c
                cells.append(MackeyCell(delta, tuple(R.digits(x) for x in rows[key]) if rows[key] else (),
                                        len(pairs), c))
        shells[delta] = total
        if explicit and delta >= m and total:
            raise MackeyError(f"shell {delta} >= m = {m} contributes {total}")
        zero_run = zero_run + 1 if total == 0 else 0
        tail = sum(d >= m for d in shells)
        if delta >= m and zero_run >= 2 and (not explicit or tail >= 2):
            break
        if delta > m + 4:
            raise MackeyError("shell contributions did not vanish by the expected shell")
        delta += 2
    return MackeyResult(sum(shells.values()), cells, shells, certified_from)


def _depth(parent, x: int) -> int:
    d = 0
    while parent[x] != -1:
        x = parent[x]
        d += 1
    return d


# ---------------------------------------------------------------------------
# taxonomy


def packet_taxonomy(data: CuspidalCharData | None = None, ramified_level: int | None = None):
    """Descriptor family of the SL2 packet cut out by a level-one datum.

    A split datum gives the packet of cardinality four (conductor 2), an
    irreducible one the cardinality-two packet of level one (conductor 2).
    Ramified data of level l give conductor 2l + 1.
    """
    from .formulas import ReprDescriptor, conductor_formula

    if ramified_level is not None:
        d = ReprDescriptor("SL2", "sc-ram", (("l", ramified_level), ("member", 1)))
    elif data is None:
        raise ValueError("need a cuspidal datum or a ramified level")
    elif data.splits:
        d = ReprDescriptor("SL2", "sc-unram4", (("member", "pi1"),))
    else:
        d = ReprDescriptor("SL2", "sc-unram2", (("l", 1), ("member", "pi")))
    return d, conductor_formula(d).conductor
