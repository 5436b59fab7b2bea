"""Finite models of principal series and their (eta, K_m)-fixed spaces.

A vector of Ind_B^G(chi) is determined by its values on K_0.  A fixed
vector under (eta, K_m) is determined by its values on representatives of
(B cap K_0) \\ K_0 / K_m, which are the B-orbits on the coset space K_0/K_m
(lines [a:c] modulo P^m).  An orbit carries a vector iff chi(t_b) equals
eta(d(g^{-1} b g)) for every stabilizer element b of its representative g;
checking Schreier generators suffices because both sides are characters.

K'_m-fixed vectors are stored through the transport h(g) = f(alpha^{-1} g alpha),
which carries (eta, K'_m)-vectors of pi(chi) to (eta, K_m)-vectors.

>>> from newformlab.local_rings import make_ring
>>> from newformlab.characters import unramified_char, RootOfUnity
>>> R = make_ring("mixed", 3, 1, 5)
>>> chi = unramified_char(R, RootOfUnity(4, 1))
>>> [fixed_space(chi, None, m, "K").dim for m in range(4)]
[1, 2, 4, 6]
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .characters import (
    FieldChar,
    UnitChar,
    norm_one_indices,
    restrict_to_F,
    psi_exponent,
    trivial_char,
    unit_group,
)
from .cyclotomic import Cyclotomic, QHalfGraded, RootOfUnity, lcm
from .groups import (
    CosetSpace,
    GrpElem,
    alg_for,
    borel_generators,
    coset_space,
    additive_generators,
    embed,
    iwasawa,
    mat_inv,
    mat_key,
    mat_mul,
    mat_reduce,
    n_mat,
    nbar_mat,
    unit_generators,
    w_mat,
)
from .kernels import orbit_bfs
from .linalg import nullspace, rank, row_space_equal
from .local_rings import PrecisionError, QuadElem, QuadExtSpec, RElem, RingSpec, invert, valuation

__all__ = [
    "CentralCharacterError",
    "Skeleton",
    "PSModel",
    "PSVector",
    "FixedSpace",
    "fixed_space",
    "eta_conductor_search",
    "steinberg_subspace",
    "packet_split",
    "theta_criterion_space",
    "evaluate",
    "intertwiner_matrix",
    "direct_fixed_dim",
    "restrict_char_to_F",
    "required_precision",
]

TOWERS = {"K": ("SL2", False), "Kp": ("SL2", True), "Kbar": ("U11", False), "Kbarp": ("U11", True)}


class CentralCharacterError(ValueError):
    """eta is incompatible with the central character: the space is zero."""


# ---------------------------------------------------------------------------
# character helpers


def _ring_of(chi: FieldChar | UnitChar) -> RingSpec:
    u = chi.unit if isinstance(chi, FieldChar) else chi
    r = u.group.ring
    return r.base if isinstance(r, QuadExtSpec) else r


@lru_cache(maxsize=None)
def restrict_char_to_F(chi: FieldChar) -> FieldChar:
    """chi|_{F^*} for a character of E^* (identity on characters of F^*)."""
    if not isinstance(chi.unit.group.ring, QuadExtSpec):
        return chi
    return FieldChar(restrict_to_F(chi.unit), chi.at_pi, chi.grade)


def _unit_value(chi: UnitChar, x) -> RootOfUnity:
    return RootOfUnity(chi.order, chi.exp_raw(x))


def required_precision(chi: FieldChar, eta: UnitChar | None, m: int) -> int:
    """Working level M = max(m, c(chi), c(eta), 1) of the finite model."""
    ce = eta.conductor if eta is not None else 0
    return max(m, chi.conductor, ce, 1)


# ---------------------------------------------------------------------------
# character-independent skeleton


class Skeleton:
    """Coset space K_0/K_m with its B-orbits and Schreier generators."""

    def __init__(self, flavor: str, ring: RingSpec, m: int, M: int):
        if ring.N < M:
            raise PrecisionError(f"ring precision {ring.N} below working level {M}")
        self.flavor, self.ring, self.m, self.M = flavor, ring, m, M
        self.C = C = alg_for(flavor, ring)
        self.space = space = coset_space(flavor, ring, m, M)
        self.bgens = bgens = borel_generators(flavor, ring, M)
        n = len(space)
        perms = [space.perm(b) for b in bgens]
        label, parent, via = orbit_bfs(perms, n)
        self.label = list(label)
        # B-transversal: bt[x] . point(rep) = point(x)
        bt: list = [None] * n
        for x in range(n):
            chain = []
            y = x
            while bt[y] is None and parent[y] != -1:
                chain.append(y)
                y = parent[y]
            if bt[y] is None:
                bt[y] = space.identity
            for z in reversed(chain):
                bt[z] = mat_reduce(C, mat_mul(C, bgens[via[z]], bt[parent[z]]), M)
        self.bt = bt
        self.bt_inv = [mat_inv(C, b) for b in bt]
        self.reps = sorted(set(self.label))
        self.g_rep = {r: space.transversal[r] for r in self.reps}
        self.g_rep_inv = {r: mat_inv(C, g) for r, g in self.g_rep.items()}
        # Schreier generators of Stab_B(rep), as (t-entry, d-entry of g^{-1} b g)
        stab: dict[int, dict] = {r: {} for r in self.reps}
        for x in range(n):
            r = self.label[x]
            for s, perm in zip(bgens, perms):
                y = perm[x]
                b = mat_reduce(C, mat_mul(C, self.bt_inv[y], mat_mul(C, s, bt[x])), M)
                k = mat_reduce(C, mat_mul(C, self.g_rep_inv[r], mat_mul(C, b, self.g_rep[r])), M)
                assert m == 0 or C.val(k[2]) >= m, "Schreier element left K_m"
                stab[r][(C.key(b[0], M), C.key(k[3], M))] = (b[0], k[3])
        self.stab = {r: list(v.values()) for r, v in stab.items()}
        self.orbit_size = defaultdict(int)
        for x in range(n):
            self.orbit_size[self.label[x]] += 1

    def decompose(self, k):
        """k = bt[x] g_rep k' with k' in K_m: returns (rep, t-entry, d(k'))."""
        C, M = self.C, self.M
        x = self.space.locate(k)
        r = self.label[x]
        kp = mat_mul(C, self.g_rep_inv[r], mat_mul(C, self.bt_inv[x], k))
        return r, self.bt[x][0], C.reduce(kp[3], M)


@lru_cache(maxsize=None)
def skeleton(flavor: str, ring: RingSpec, m: int, M: int) -> Skeleton:
    return Skeleton(flavor, ring, m, M)


# ---------------------------------------------------------------------------
# models and vectors


class PSModel:
    """(eta, K_m)-equivariant functions in Ind(chi), restricted to K_0."""

    def __init__(self, flavor: str, chi: FieldChar, eta: UnitChar | None, m: int):
        ring = _ring_of(chi)
        C = alg_for(flavor, ring)
        if eta is None:
            eta = trivial_char(C, 0)
        self.flavor, self.chi, self.eta, self.m = flavor, chi, eta, m
        self.ring, self.C = ring, C
        self.M = required_precision(chi, eta, m)
        self.skel = skeleton(flavor, ring, m, self.M)
        if eta.conductor > m:
            self.compatible = []  # k -> eta(d_k) is not a character of K_m
        else:
            self.compatible = [r for r in self.skel.reps if self._compatible(r)]

    def _compatible(self, r: int) -> bool:
        chi, eta = self.chi.unit, self.eta
        return all(_unit_value(chi, t) == _unit_value(eta, d) for t, d in self.skel.stab[r])

    @property
    def q(self) -> int:
        return self.ring.q

    def root_at(self, k) -> tuple[int, RootOfUnity] | None:
        """f(k) = root * f(g_rep) for every vector; None if k's orbit is dead."""
        r, t, d = self.skel.decompose(k)
        if r not in self.compatible_set:
            return None
        return r, _unit_value(self.chi.unit, t) * _unit_value(self.eta, d)

    @cached_property
    def compatible_set(self) -> frozenset:
        return frozenset(self.compatible)

    def basis_vectors(self) -> list["PSVector"]:
        return [PSVector(self, {r: Cyclotomic.rational(1)}) for r in self.compatible]

    def coords(self, values: dict[int, Cyclotomic]) -> list[Cyclotomic]:
        return [values.get(r, Cyclotomic.rational(0)) for r in self.compatible]


@lru_cache(maxsize=None)
def ps_model(flavor: str, chi: FieldChar, eta: UnitChar | None, m: int) -> PSModel:
    return PSModel(flavor, chi, eta, m)


@dataclass(eq=False)
class PSVector:
    """Values at the compatible orbit representatives (K-model)."""

    model: PSModel
    coeffs: dict

    def coordinates(self) -> list[Cyclotomic]:
        return self.model.coords(self.coeffs)

    def value_raw(self, k) -> Cyclotomic:
        hit = self.model.root_at(k)
        if hit is None:
            return Cyclotomic.rational(0)
        r, z = hit
        c = self.coeffs.get(r)
        return Cyclotomic.rational(0) if c is None else c * z.to_cyclotomic()

    def __add__(self, other: "PSVector") -> "PSVector":
        out = dict(self.coeffs)
        for r, c in other.coeffs.items():
            out[r] = out.get(r, Cyclotomic.rational(0)) + c
        return PSVector(self.model, out)

    def scale(self, c) -> "PSVector":
        return PSVector(self.model, {r: v * c for r, v in self.coeffs.items()})

    def to_json(self) -> dict:
        return {str(r): QHalfGraded(self.model.q, c).to_json() for r, c in self.coeffs.items()}


@dataclass(eq=False)
class FixedSpace:
    """A space of (eta, S)-fixed vectors, S one of K, Kp, Kbar, Kbarp.

    For the primed towers the basis vectors are the transported functions h
    with f(g) = h(alpha g alpha^{-1}).
    """

    model: PSModel
    tower: str
    basis: list
    label: str = "ps"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def transported(self) -> bool:
        return TOWERS[self.tower][1]

    def matrix(self) -> list[list[Cyclotomic]]:
        return [v.coordinates() for v in self.basis]

    def to_json(self) -> dict:
        sk = self.model.skel
        return {
            "flavor": self.model.flavor,
            "tower": self.tower,
            "m": self.model.m,
            "working_level": self.model.M,
            "label": self.label,
            "dimension": self.dim,
            "representatives": {
                str(r): [list(self.model.ring.digits(_base_raw(self.model.C, x))) for x in sk.g_rep[r]]
                for r in self.model.compatible
            },
            "basis": [v.to_json() for v in self.basis],
        }


def _base_raw(C, x):
    return x[0] if isinstance(C, QuadExtSpec) else x


def _sub_space(model: PSModel, tower: str, vectors: Sequence[Sequence[Cyclotomic]], label: str) -> FixedSpace:
    basis = [PSVector(model, {r: c for r, c in zip(model.compatible, v) if not c.is_zero()}) for v in vectors]
    return FixedSpace(model, tower, basis, label)


# ---------------------------------------------------------------------------
# fixed spaces


def _check_central(flavor: str, chi: FieldChar, eta: UnitChar, M: int) -> None:
    C = alg_for(flavor, _ring_of(chi))
    if flavor == "SL2":
        m1 = C.neg(C.one())
        if _unit_value(chi.unit, m1) != _unit_value(eta, m1):
            raise CentralCharacterError("eta(-1) differs from the central character")
        return
    g = unit_group(C, M)
    for i in norm_one_indices(g):
        z = g.elements[i]
        if _unit_value(chi.unit, z) != _unit_value(eta, z):
            raise CentralCharacterError("eta differs from the central character on E^1")


def fixed_space(chi: FieldChar, eta: UnitChar | None, m: int, tower: str = "K") -> FixedSpace:
    """Basis of the (eta, S)-fixed vectors of Ind(chi), S = tower at level m.

    ``tower`` is K or Kp for SL2 (chi a character of F^*) and Kbar or Kbarp
    for U(1,1) (chi a character of E^*).
    """
    flavor, _ = TOWERS[tower]
    ring = _ring_of(chi)
    C = alg_for(flavor, ring)
    if eta is None:
        eta = trivial_char(C, 0)
    M = required_precision(chi, eta, m)
    if M > ring.N:
        raise PrecisionError(f"need ring precision >= {M}")
    _check_central(flavor, chi, eta, M)
    model = ps_model(flavor, chi, eta, m)
    return FixedSpace(model, tower, model.basis_vectors())


def _dim_or_zero(chi, eta, m, tower) -> int:
    try:
        return fixed_space(chi, eta, m, tower).dim
    except CentralCharacterError:
        return 0


@dataclass
class ConductorSearch:
    table: dict  # eta label -> c_eta (None when the bound was reached)
    conductor: int | None
    achieving: list  # UnitChar objects achieving the minimum
    status: str


def eta_conductor_search(chi: FieldChar, flavor: str = "SL2", m_max: int = 3, rep: str = "ps",
                         etas: Iterable[UnitChar] | None = None) -> ConductorSearch:
    """c_eta for every admissible eta of conductor <= m_max, both towers.

    ``rep`` is ``ps`` (the full principal series) or ``steinberg``.
    """
    ring = _ring_of(chi)
    C = alg_for(flavor, ring)
    towers = ("K", "Kp") if flavor == "SL2" else ("Kbar", "Kbarp")
    if etas is None:
        etas = unit_group(C, m_max).chars()
    table, best, achieving = {}, None, []
    for eta in etas:
        ce = None
        for m in range(0, m_max + 1):
            if m < eta.conductor:
                continue
            try:
                if rep == "steinberg":
                    d = steinberg_subspace(ring, m, eta=eta).dim
                else:
                    d = max(fixed_space(chi, eta, m, t).dim for t in towers)
            except CentralCharacterError:
                break
            if d:
                ce = m
                break
        table[eta.label()] = ce
        if ce is not None:
            if best is None or ce < best:
                best, achieving = ce, [eta]
            elif ce == best:
                achieving.append(eta)
    status = "ok" if best is not None else "bound reached"
    return ConductorSearch(table, best, achieving, status)


def steinberg_subspace(ring: RingSpec, m: int, eta: UnitChar | None = None) -> FixedSpace:
    """St^{K_m} inside pi(|.|)^{K_m}: the kernel of f -> integral over K_0 of f.

    For eta non-trivial the averaging functional vanishes identically on the
    eta-space, so the whole space lies in the Steinberg constituent.
    """
    from .characters import abs_char

    chi = abs_char(ring)
    space = fixed_space(chi, eta, m, "K")
    model = space.model
    if eta is not None and not eta.is_trivial():
        return FixedSpace(model, "K", space.basis, "steinberg")
    # averaging functional: sum over all points of K_0/K_m of f(transversal)
    sk = model.skel
    weights = defaultdict(lambda: defaultdict(Fraction))
    for x, g in enumerate(sk.space.transversal):
        hit = model.root_at(g)
        if hit is None:
            continue
        r, z = hit
        weights[r][(z.order, z.exponent)] += 1
    row = [_histogram_value(weights[r]) for r in model.compatible]
    if not row:
        return FixedSpace(model, "K", [], "steinberg")
    ker = nullspace([row])
    return _sub_space(model, "K", ker, "steinberg")


def _histogram_value(hist: dict) -> Cyclotomic:
    if not hist:
        return Cyclotomic.rational(0)
    L = 1
    for (o, _), c in hist.items():
        if c:
            L = lcm(L, o)
    counts: dict[int, Fraction] = defaultdict(Fraction)
    for (o, e), c in hist.items():
        if c:
            counts[e * (L // o) % L] += c
    return Cyclotomic.from_exponents(L, counts)


# ---------------------------------------------------------------------------
# shell sums over n(x), x in F


def _chi_pi_power(chi: FieldChar, j: int) -> Cyclotomic:
    return (chi.at_pi ** j).to_cyclotomic() * Fraction(chi.q) ** (chi.grade * j)


def shell_functional(model: PSModel, g, scaling: tuple[int, object] | None, tail: bool = True):
    """Integral over x in F of f(w n(x) g) * conj(psi_a(x)) dx as a linear
    form in the values f(g_rep).

    ``scaling`` is (v, unit raw) for psi_a, or None for no character (the
    intertwining integral).  Returns (row dict rep -> Cyclotomic, radius).
    """
    R, C, M = model.ring, model.C, model.M
    chiF = restrict_char_to_F(model.chi)
    c = chiF.conductor
    q = R.q
    acc: dict[int, dict] = defaultdict(lambda: defaultdict(Fraction))
    out: dict[int, Cyclotomic] = defaultdict(lambda: Cyclotomic.rational(0))
    va = scaling[0] if scaling is not None else 0
    ua = scaling[1] if scaling is not None else None
    w = mat_reduce(C, w_mat(C), M)

    def psi_root(raw, shift):
        if scaling is None:
            return (1, 0)
        o, e = psi_exponent(R, R.mul(ua, raw), shift + va)
        return (o, (-e) % o)

    # x in O (mesh P^{M0}, psi_a of level max(-v(a), 0))
    M0 = max(M, -va)
    wt = Fraction(1, q**M0)
    for x in R.elements(M0):
        k = mat_reduce(C, mat_mul(C, w, mat_mul(C, n_mat(C, embed(C, R.reduce(x, M))), g)), M)
        hit = model.root_at(k)
        if hit is None:
            continue
        r, z = hit
        po, pe = psi_root(x, 0)
        zz = z * RootOfUnity(po, pe)
        acc[r][(zz.order, zz.exponent)] += wt
    for r, h in acc.items():
        out[r] = out[r] + _histogram_value(h)
    # shells x = pi^{-j} u
    radius = 0
    j = 1
    cap = M + max(c, 1) + 3 + max(va, 0)
    zero_run = 0
    while True:
        s = max(M - j, 0)
        kpsi = j - va if scaling is not None else 0
        shell_vanishes = False
        if scaling is not None and kpsi > max(s, c, 1):
            shell_vanishes = True  # inner additive character sum is zero
        elif scaling is None and c > max(s, 1):
            shell_vanishes = True  # chi non-trivial on the fibres of u -> f
        if scaling is None and j >= M:
            break  # handled by the closed tail below
        if not shell_vanishes:
            L = max(s, c, kpsi, 1)
            wt = Fraction(1, q**L)
            acc = defaultdict(lambda: defaultdict(Fraction))
            for u in R.units(L):
                ui = R.unit_inv(u)
                y = R.shift_up(ui, j) if j < R.N else R.zero()
                k = mat_reduce(C, mat_mul(C, nbar_mat(C, embed(C, R.reduce(y, M))), g), M)
                hit = model.root_at(k)
                if hit is None:
                    continue
                r, z = hit
                cz = _unit_value(chiF.unit, u).inverse()
                po, pe = psi_root(u, -j)
                zz = z * cz * RootOfUnity(po, pe)
                acc[r][(zz.order, zz.exponent)] += wt
            factor = _chi_pi_power(chiF, j)
            nonzero = False
            for r, h in acc.items():
                v = _histogram_value(h)
                if not v.is_zero():
                    nonzero = True
                    out[r] = out[r] + v * factor
            if nonzero:
                radius = j
                zero_run = 0
            else:
                zero_run += 1
        else:
            zero_run += 1
        if scaling is not None and j >= M and kpsi > max(c, 1) and zero_run >= 2:
            break
        j += 1
        if j > cap:
            raise RuntimeError("shell sum did not stabilise within the cap")
    if scaling is None and tail:
        # j >= M: f(nbar(.) g) = f(g); only unramified chi contributes,
        # summed by analytic continuation: sum_{j>=M} z^j = z^M / (1 - z)
        if c == 0:
            z = _chi_pi_power(chiF, 1)
            geo = _chi_pi_power(chiF, M) * (1 - z).inverse()
            hit = model.root_at(mat_reduce(C, g, M))
            if hit is not None:
                r, zr = hit
                out[r] = out[r] + geo * Fraction(q - 1, q) * zr.to_cyclotomic()
    return {r: v for r, v in out.items() if not v.is_zero()}, radius


def intertwiner_matrix(space: FixedSpace) -> list[list[Cyclotomic]]:
    """Matrix A of f -> integral f(w n(x) .) dx on the (K-model) basis
    coordinates: (Tf)(g_i) = sum_j A[i][j] f(g_j)."""
    model = space.model
    reps = model.compatible
    A = []
    for r in reps:
        row, _ = shell_functional(model, model.skel.g_rep[r], None)
        A.append([row.get(s, Cyclotomic.rational(0)) for s in reps])
    return A


def _apply(A, v):
    return [sum((a * x for a, x in zip(row, v)), Cyclotomic.rational(0)) for row in A]


def _matrix_on_subspace(A, vectors):
    return [_apply(A, v) for v in vectors]


def _is_quadratic(chi: FieldChar) -> bool:
    return (chi * chi).unit.is_trivial() and (chi.at_pi ** 2).is_one and chi.grade == 0


@dataclass
class PacketSplit:
    component1: FixedSpace
    component2: FixedSpace
    eigenvalues: tuple
    reference: str


def _eigenspaces(model: PSModel, A, lam: Cyclotomic):
    n = len(A)
    shifted = [[A[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return nullspace(shifted, n)


def _split_K_model(chi: FieldChar, eta: UnitChar | None, m: int, tower: str):
    space = fixed_space(chi, eta, m, tower)
    A = intertwiner_matrix(space)
    n = len(A)
    if n == 0:
        return space, A, None
    # T^2 is a scalar on the whole representation
    e0 = [Cyclotomic.rational(int(i == 0)) for i in range(n)]
    t2 = _apply(A, _apply(A, e0))
    csq = t2[0]
    assert all((t2[i] - (csq if i == 0 else 0)).is_zero() for i in range(n)), "T^2 is not scalar"
    lam = csq.sqrt()
    return space, A, lam


@lru_cache(maxsize=None)
def _reference_eigenvalue(chi: FieldChar, flavor: str) -> tuple[Cyclotomic, str]:
    """Eigenvalue of the intertwiner on component 1 in the K-model."""
    chiF = restrict_char_to_F(chi)
    ring = _ring_of(chi)
    if chiF.conductor == 0:
        # spherical vector of the SL2 restriction
        sp = fixed_space(chiF, None, 0, "K")
        A = intertwiner_matrix(sp)
        assert len(A) == 1
        return A[0][0], "spherical"
    # ramified: the psi-generic member, seen on K_1 with eta = chi on units
    from .whittaker import whittaker_row

    space, A, lam = _split_K_model(chiF, chiF.unit, chiF.conductor, "K")
    for mu in (lam, -lam):
        vecs = _eigenspaces(space.model, A, mu)
        row = whittaker_row(space.model, (0, ring.one()))
        vals = [sum((row.get(r, Cyclotomic.rational(0)) * x for r, x in zip(space.model.compatible, v)),
                    Cyclotomic.rational(0)) for v in vecs]
        if any(not x.is_zero() for x in vals):
            return mu, "psi-generic"
    raise AssertionError("no psi-generic eigenspace")


def packet_split(chi: FieldChar, eta: UnitChar | None, m: int, tower: str = "K") -> PacketSplit:
    """Split the fixed space of a reducible pi(chi) (chi quadratic on F^*) into
    the contributions of the two packet members.

    Component 1 is the member with a spherical vector (unramified chi) or the
    psi-generic member (ramified chi).  On primed towers, where vectors are
    transported by alpha, the intertwiner picks up chi(pi)^{-1}.
    """
    chiF = restrict_char_to_F(chi)
    if not _is_quadratic(chiF):
        raise ValueError("packet_split needs chi quadratic on F^*")
    flavor, primed = TOWERS[tower]
    space, A, lam = _split_K_model(chi, eta, m, tower)
    ref, how = _reference_eigenvalue(chi, flavor)
    if primed:
        ref = ref * chiF.at_pi.inverse().to_cyclotomic()
    if lam is None:
        empty = FixedSpace(space.model, tower, [], "member1")
        return PacketSplit(empty, FixedSpace(space.model, tower, [], "member2"), (ref, -ref), how)
    if lam.is_zero() or (lam - (-lam)).is_zero():
        raise RuntimeError("eigenvalue collision in packet split")
    assert (ref - lam).is_zero() or (ref + lam).is_zero(), "reference eigenvalue not an eigenvalue of T"
    v1 = _eigenspaces(space.model, A, ref)
    v2 = _eigenspaces(space.model, A, -ref)
    assert len(v1) + len(v2) == space.dim, "packet split is not a direct sum"
    return PacketSplit(_sub_space(space.model, tower, v1, "member1"), _sub_space(space.model, tower, v2, "member2"),
                       (ref, -ref), how)


# ---------------------------------------------------------------------------
# theta criterion


def theta_operator(sl2_space: FixedSpace, chibar: FieldChar) -> list[list[Cyclotomic]]:
    """Right translation by theta on an SL2 fixed space inside Ind(chibar):
    (theta f)(g) = chibar(eps_E) f(theta^{-1} g theta)."""
    model = sl2_space.model
    R, C, M = model.ring, model.C, model.M
    ext = alg_for("U11", R)
    eE = ext.eps_E_raw
    eps_inv = R.unit_inv(R.eps_raw)
    chi_e = _unit_value(chibar.unit, eE).to_cyclotomic()
    reps = model.compatible
    A = []
    for r in reps:
        a, b, c, d = model.skel.g_rep[r]
        g2 = mat_reduce(C, (a, R.mul(b, eps_inv), R.mul(c, R.eps_raw), d), M)
        hit = model.root_at(g2)
        row = [Cyclotomic.rational(0)] * len(reps)
        if hit is not None:
            s, z = hit
            row[reps.index(s)] = chi_e * z.to_cyclotomic()
        A.append(row)
    return A


@dataclass
class ThetaCheck:
    theta_space: FixedSpace
    direct_space: FixedSpace
    equal: bool
    eigenvalue: Cyclotomic


def theta_criterion_space(chibar: FieldChar, etabar: UnitChar, m: int) -> ThetaCheck:
    """The theta-eigenspace of the SL2 (eta, K_m)-space, compared with the
    direct (etabar, Kbar_m)-space restricted to SL2."""
    ext = chibar.unit.group.ring
    assert isinstance(ext, QuadExtSpec)
    R = ext.base
    chiF = restrict_char_to_F(chibar)
    etaF = restrict_char_to_F(FieldChar(etabar)).unit
    direct = fixed_space(chibar, etabar, m, "Kbar")
    sl2 = fixed_space(chiF, etaF, m, "K")
    lam = _unit_value(etabar, ext.unit_inv(ext.conj(ext.eps_E_raw))).to_cyclotomic()
    if sl2.dim == 0 or etabar.conductor > m:
        theta_vecs = []
    else:
        A = theta_operator(sl2, chibar)
        # coordinates are values at reps: (theta f)(g_i) = sum_j A[i][j] f(g_j)
        theta_vecs = _eigenspaces(sl2.model, A, lam)
    theta_space = _sub_space(sl2.model, "K", theta_vecs, "theta")
    # restrict the direct basis to SL2 and express it in SL2 coordinates
    direct_rows = []
    for v in direct.basis:
        direct_rows.append([v.value_raw(tuple(ext.from_base(x) for x in sl2.model.skel.g_rep[r]))
                            for r in sl2.model.compatible])
    if not direct_rows and not theta_vecs:
        equal = True
    else:
        equal = row_space_equal(direct_rows, theta_vecs) and len(direct_rows) == len(theta_vecs)
    if not equal:
        raise AssertionError("theta criterion disagrees with the direct unitary computation")
    return ThetaCheck(theta_space, direct, equal, lam)


# ---------------------------------------------------------------------------
# evaluation at arbitrary group elements


def _unit_part(x):
    """(v, raw unit u) with x = pi^v u."""
    v = valuation(x)

    def strip(y: RElem):
        s = y.shift - v
        R = y.ring
        return R.shift_up(y.raw, s) if s >= 0 else R.shift_down(y.raw, -s)

    if isinstance(x, QuadElem):
        return v, (strip(x.a), strip(x.b))
    return v, strip(x)


def evaluate(f: PSVector, g: GrpElem, transported: bool = False) -> QHalfGraded:
    """f(g) for g in G via g = b k.

    With ``transported`` the vector is read as a K'-vector: f(g) = h(alpha g alpha^{-1}).
    """
    model = f.model
    if transported:
        from .groups import constants

        al = constants(model.ring)["alpha"]
        g = _conj_alpha(g, al)
    res = iwasawa(g)
    v, u = _unit_part(res.t)
    chi = model.chi
    val = chi.value(v, u) * QHalfGraded(model.q, Fraction(model.q) ** (-res.q_power))
    k = res.k.raw(model.C)
    k = mat_reduce(model.C, k, model.M)
    return val * QHalfGraded(model.q, f.value_raw(k))


def _conj_alpha(g: GrpElem, al: GrpElem) -> GrpElem:
    """alpha g alpha^{-1} = (a, pi b; c / pi, d)."""
    a, b, c, d = g.entries
    R = al.a.ring
    pi = RElem(R, R.pi_power(1))
    pinv = invert(pi)
    if isinstance(a, QuadElem):
        ext = a.ext
        P = QuadElem(ext, pi, RElem(R, R.zero()))
        Pi = QuadElem(ext, pinv, RElem(R, R.zero()))
        return GrpElem(g.flavor, a, b * P, c * Pi, d)
    return GrpElem(g.flavor, a, b * pi, c * pinv, d)


# ---------------------------------------------------------------------------
# direct brute force: monomial systems on whole finite groups


def direct_fixed_dim(chi: FieldChar, eta: UnitChar | None, m: int, tower: str = "K") -> int:
    """Dimension by solving f(b g) = chi(b) f(g), f(g k) = eta(d_k) f(g) on all
    of K_0 / K(M) (resp. K'_0 / K'(M)), written with genuine F-entries.

    For the primed towers the group elements carry b in P^{-1} and c in P, and
    the subgroups are B cap K'_0 and K'_m = {c in P^{m+1}}.  Intended for small
    cases (q = 3, m <= 2).
    """
    from .groups import enumerate as enum_group, torus_mat

    flavor, primed = TOWERS[tower]
    ring = R = _ring_of(chi)
    C = alg_for(flavor, ring)
    if eta is None:
        eta = trivial_char(C, 0)
    if eta.conductor > m:
        return 0
    M = required_precision(chi, eta, m)
    if R.N < M + 2:
        raise PrecisionError(f"direct solver needs ring precision >= {M + 2}")
    pi = RElem(R, R.pi_power(1))
    pinv = invert(pi)
    lift = (lambda y: QuadElem(C, y, RElem(R, R.zero()))) if flavor == "U11" else (lambda y: y)
    P, Pi = lift(pi), lift(pinv)

    def to_F(g):
        ge = GrpElem.from_raw(flavor, C, g)
        if not primed:
            return ge
        a, b, c, d = ge.entries
        return GrpElem(flavor, a, b * Pi, c * P, d)

    def key(ge: GrpElem):
        a, b, c, d = ge.entries
        if primed:
            b, c = b * P, c * Pi
        return mat_key(C, GrpElem(flavor, a, b, c, d).raw(C), M)

    G = enum_group(flavor, ring, M)
    elements = [to_F(g) for g in G.elements]
    index = {key(e): i for i, e in enumerate(elements)}
    assert len(index) == len(elements)
    one, zero = lift(RElem(R, R.one())), lift(RElem(R, R.zero()))
    up = pinv if primed else RElem(R, R.one())
    low = pi ** (m + 1) if primed else (pi ** m if m else RElem(R, R.one()))
    lefts, rights = [], []
    for x in additive_generators(R, M):
        xr = lift(RElem(R, x) * up)
        lefts.append((GrpElem(flavor, one, xr, zero, one), RootOfUnity.one()))
        rights.append((GrpElem(flavor, one, xr, zero, one), RootOfUnity.one()))
        rights.append((GrpElem(flavor, one, zero, lift(RElem(R, x) * low), one), RootOfUnity.one()))
    for t in unit_generators(C, M):
        tm = torus_mat(C, t)
        ge = GrpElem.from_raw(flavor, C, tm)
        lefts.append((ge, _unit_value(chi.unit, tm[0])))
        rights.append((ge, _unit_value(eta, tm[3])))
    n = len(elements)
    adj: list[list] = [[] for _ in range(n)]
    for i, e in enumerate(elements):
        for b, z in lefts:
            adj[i].append((index[key(b * e)], z))
        for k, z in rights:
            adj[i].append((index[key(e * k)], z))
    val: list = [None] * n
    dim = 0
    for s in range(n):
        if val[s] is not None:
            continue
        val[s] = RootOfUnity.one()
        queue, ok = deque([s]), True
        while queue:
            i = queue.popleft()
            for j, z in adj[i]:
                target = val[i] * z
                if val[j] is None:
                    val[j] = target
                    queue.append(j)
                elif val[j] != target:
                    ok = False
        dim += ok
    return dim
