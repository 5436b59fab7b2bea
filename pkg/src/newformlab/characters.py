"""Multiplicative and additive characters with exact root-of-unity values.

Unit groups (O/P^n)^x are decomposed with a Smith normal form; a character is
a coefficient vector against the invariant factors.

>>> from newformlab.local_rings import make_ring
>>> R = make_ring("mixed", 3, 1, 4)
>>> chars = enumerate_unit_chars(R, 2)
>>> len(chars), sorted(conductor(c) for c in chars)
(6, [0, 1, 2, 2, 2, 2])
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .cyclotomic import Cyclotomic, QHalfGraded, RootOfUnity, lcm
from .local_rings import PrecisionError, QuadExtSpec, RElem, RingSpec

__all__ = [
    "RootOfUnity",
    "Cyclotomic",
    "QHalfGraded",
    "UnitGroup",
    "UnitChar",
    "FieldChar",
    "AdditivePsi",
    "unit_group",
    "enumerate_unit_chars",
    "conductor",
    "restrict_to_F",
    "restrict_to_norm_one",
    "enumerate_extensions",
    "psi_eval",
    "psi_exponent",
    "trivial_char",
    "unramified_char",
    "legendre_char",
    "omega_EF",
    "abs_char",
    "parse_char_literal",
    "SIZE_GUARD",
]

SIZE_GUARD = 10**6


class UnitGroup:
    """(O/P^n)^x for O = O_F (RingSpec) or O_E (QuadExtSpec).

    Elements are raw units reduced modulo P^n, indexed by ``ring.key(x, n)``.
    ``coords[i]`` are the Smith coordinates of element i in
    prod Z/invariants[j].
    """

    def __init__(self, ring: RingSpec | QuadExtSpec, n: int):
        base = ring.base if isinstance(ring, QuadExtSpec) else ring
        if n > base.N:
            raise PrecisionError(f"modulus {n} exceeds ring precision {base.N}")
        self.ring, self.n = ring, n
        if n == 0:
            self.elements = [ring.one()]
        else:
            size = (base.q**2 - 1) * base.q ** (2 * n - 2) if isinstance(ring, QuadExtSpec) else (base.q - 1) * base.q ** (n - 1)
            if size > SIZE_GUARD:
                raise MemoryError(f"unit group of order {size} exceeds the size guard")
            self.elements = ring.units(n)
        self.index = {self.key(x): i for i, x in enumerate(self.elements)}
        assert len(self.index) == len(self.elements)
        self._decompose()

    # -- raw helpers ------------------------------------------------------
    def key(self, x) -> int:
        return self.ring.key(x, self.n) if self.n else 0

    def idx(self, x) -> int:
        return self.index[self.key(x)]

    def mul(self, x, y):
        return self.ring.reduce(self.ring.mul(x, y), self.n)

    def order(self) -> int:
        return len(self.elements)

    # -- structure --------------------------------------------------------
    def _decompose(self) -> None:
        one = self.ring.one() if self.n == 0 else self.ring.reduce(self.ring.one(), self.n)
        vec: dict[int, tuple[int, ...]] = {self.key(one): ()}
        gens: list = []
        rel_rows: list[list[int]] = []
        for x in self.elements:
            if self.key(x) in vec:
                continue
            # powers of x until one lands in the current subgroup
            powers, y = [one], x
            while self.key(y) not in vec:
                powers.append(y)
                y = self.mul(y, x)
            o = len(powers)
            k = len(gens)
            gens.append(x)
            rel_rows.append(list(vec[self.key(y)]) + [0] * (k - len(vec[self.key(y)])))
            rel_rows[-1] = [-v for v in rel_rows[-1]] + [o]
            new: dict[int, tuple[int, ...]] = {}
            old = list(vec.items())
            for kk, v in old:
                h = self.elements[self.index[kk]]
                base_v = v + (0,) * (k - len(v))
                for t, pw in enumerate(powers):
                    new[self.key(self.mul(h, pw))] = base_v + (t,)
            vec = new
        assert len(vec) == len(self.elements)
        self.generators = gens
        k = len(gens)
        if k == 0:
            self.invariants: tuple[int, ...] = ()
            self.coords = [()] * len(self.elements)
            return
        R = Matrix([row + [0] * (k - len(row)) for row in rel_rows])
        D, U, V = smith_normal_decomp(R, domain=ZZ)
        assert U * R * V == D
        diag = [abs(int(D[i, i])) for i in range(k)]
        keep = [i for i in range(k) if diag[i] > 1]
        self.invariants = tuple(diag[i] for i in keep)
        Vl = [[int(V[r, c]) for c in keep] for r in range(k)]
        coords = [None] * len(self.elements)
        for kk, v in vec.items():
            v = v + (0,) * (k - len(v))
            coords[self.index[kk]] = tuple(
                sum(v[r] * Vl[r][j] for r in range(k)) % self.invariants[j] for j in range(len(keep))
            )
        self.coords = coords
        prod = 1
        for d in self.invariants:
            prod *= d
        assert prod == len(self.elements)

    @cached_property
    def coord_index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, c in enumerate(self.coords)}

    @cached_property
    def exponent(self) -> int:
        return lcm(*self.invariants) if self.invariants else 1

    def level_indices(self, k: int) -> list[int]:
        """Indices of U^k = {x = 1 mod P^k} (all units for k = 0)."""
        if k == 0:
            return list(range(len(self.elements)))
        if k >= self.n:
            return [self.idx(self.ring.one())]
        R = self.ring
        one = R.reduce(R.one(), k)
        return [i for i, x in enumerate(self.elements) if R.key(R.reduce(x, k), k) == R.key(one, k)]

    @cached_property
    def _level_gens(self) -> list[list[int]]:
        out = []
        for k in range(self.n + 1):
            out.append(self._subgroup_generators(self.level_indices(k)))
        return out

    def level_generators(self, k: int) -> list[int]:
        return self._level_gens[min(k, self.n)]

    def _subgroup_generators(self, members: Sequence[int]) -> list[int]:
        """Greedy generating set (indices) of a subgroup given by its members."""
        coords = self.coords
        inv = self.invariants
        span = {tuple(0 for _ in inv)}
        gens: list[int] = []
        for i in members:
            c = coords[i]
            if c in span:
                continue
            gens.append(i)
            new = set(span)
            frontier = list(span)
            while frontier:
                nxt = []
                for s in frontier:
                    t = tuple((a + b) % d for a, b, d in zip(s, c, inv))
                    if t not in new:
                        new.add(t)
                        nxt.append(t)
                frontier = nxt
            span = new
        return gens

    def chars(self) -> list["UnitChar"]:
        """All characters, lexicographic in the coefficient vector."""
        out: list[UnitChar] = []

        def rec(prefix: tuple[int, ...]) -> None:
            j = len(prefix)
            if j == len(self.invariants):
                out.append(UnitChar(self, prefix))
                return
            for c in range(self.invariants[j]):
                rec(prefix + (c,))

        rec(())
        return out

    def char_from_function(self, fn: Callable[[object], RootOfUnity], check: bool = True) -> "UnitChar":
        """The character agreeing with ``fn`` (verified on every element)."""
        basis = []
        for j in range(len(self.invariants)):
            e = tuple(int(i == j) for i in range(len(self.invariants)))
            basis.append(self.elements[self.coord_index[e]])
        cs = []
        for j, b in enumerate(basis):
            z = fn(b)
            d = self.invariants[j]
            assert d % z.order == 0, "value order does not divide the invariant factor"
            cs.append(z.exponent * (d // z.order) % d)
        chi = UnitChar(self, tuple(cs))
        if check:
            for x in self.elements:
                if chi(x) != fn(x):
                    raise ValueError("function is not a character of the unit group")
        return chi


@lru_cache(maxsize=None)
def unit_group(ring: RingSpec | QuadExtSpec, n: int) -> UnitGroup:
    return UnitGroup(ring, n)


@dataclass(frozen=True, eq=False)
class UnitChar:
    """Character of (O/P^n)^x given by Smith coefficients.

    ``exp_raw(x)`` returns the exponent of the value as a power of
    zeta_order; ``chi(x)`` returns a RootOfUnity.
    """

    group: UnitGroup
    coeffs: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.group.n

    @cached_property
    def order(self) -> int:
        o = 1
        for c, d in zip(self.coeffs, self.group.invariants):
            o = lcm(o, d // gcd(c, d))
        return o

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        M = self.order
        return tuple(c * M // d for c, d in zip(self.coeffs, self.group.invariants))

    @cached_property
    def table(self) -> list[int]:
        """Exponent (mod order) at each group element index."""
        M, w = self.order, self._weights
        return [sum(a * b for a, b in zip(w, y)) % M for y in self.group.coords]

    def exp_raw(self, x) -> int:
        g = self.group
        if g.n == 0:
            return 0
        return self.table[g.index[g.ring.key(x, g.n)]]

    def __call__(self, x) -> RootOfUnity:
        if isinstance(x, RElem):
            x = x.raw
        return RootOfUnity(self.order, self.exp_raw(x))

    def is_trivial(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other: "UnitChar") -> "UnitChar":
        assert other.group is self.group
        return UnitChar(self.group, tuple((a + b) % d for a, b, d in zip(self.coeffs, other.coeffs, self.group.invariants)))

    def __pow__(self, e: int) -> "UnitChar":
        return UnitChar(self.group, tuple((a * e) % d for a, d in zip(self.coeffs, self.group.invariants)))

    def inverse(self) -> "UnitChar":
        return self ** (-1)

    def __eq__(self, other):
        if not isinstance(other, UnitChar):
            return NotImplemented
        return self.group is other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.group), self.coeffs))

    @cached_property
    def conductor(self) -> int:
        g = self.group
        tab = self.table
        for k in range(g.n + 1):
            if all(tab[i] == 0 for i in g.level_generators(k)):
                return k
        raise AssertionError("character not trivial on U^n")

    def lift_to(self, n: int) -> "UnitChar":
        """The same character viewed on (O/P^n)^x, n >= modulus."""
        g2 = unit_group(self.group.ring, n)
        R = self.group.ring
        return g2.char_from_function(lambda x: self(R.reduce(x, self.modulus)), check=False)

    def label(self) -> str:
        return f"chi{list(self.coeffs)}@{self.modulus}"

    def __repr__(self):
        return f"UnitChar({self.label()}, cond={self.conductor})"


def enumerate_unit_chars(ring: RingSpec | QuadExtSpec, n: int) -> list[UnitChar]:
    """All characters of (O/P^n)^x in a stable order.

    >>> from newformlab.local_rings import make_ring
    >>> len(enumerate_unit_chars(make_ring("mixed", 5, 1, 2), 1))
    4
    """
    return unit_group(ring, n).chars()


# ---------------------------------------------------------------------------
# characters of F^x and E^x


@dataclass(frozen=True, eq=False)
class FieldChar:
    """chi(pi^v u) = (at_pi * q^grade)^v * unit(u).

    ``grade`` lets |.| (grade -1, at_pi = 1) live next to unitary characters.
    """

    unit: UnitChar
    at_pi: RootOfUnity = RootOfUnity(1, 0)
    grade: int = 0

    @property
    def q(self) -> int:
        r = self.unit.group.ring
        return (r.base if isinstance(r, QuadExtSpec) else r).q

    @property
    def is_unramified(self) -> bool:
        return self.unit.conductor == 0

    def value(self, v: int, u) -> QHalfGraded:
        z = self.at_pi**v * self.unit(u)
        return QHalfGraded(self.q, z.to_cyclotomic() * Fraction(self.q) ** (self.grade * v))

    def __mul__(self, other: "FieldChar") -> "FieldChar":
        return FieldChar(self.unit * other.unit, self.at_pi * other.at_pi, self.grade + other.grade)

    def inverse(self) -> "FieldChar":
        return FieldChar(self.unit.inverse(), self.at_pi.inverse(), -self.grade)

    def __pow__(self, e: int) -> "FieldChar":
        return FieldChar(self.unit**e, self.at_pi**e, self.grade * e)

    def __eq__(self, other):
        if not isinstance(other, FieldChar):
            return NotImplemented
        return self.unit == other.unit and self.at_pi == other.at_pi and self.grade == other.grade

    def __hash__(self):
        return hash((self.unit, self.at_pi, self.grade))

    def with_modulus(self, n: int) -> "FieldChar":
        return FieldChar(self.unit.lift_to(n), self.at_pi, self.grade)

    @property
    def conductor(self) -> int:
        return self.unit.conductor

    def __repr__(self):
        g = f", q^{self.grade}" if self.grade else ""
        return f"FieldChar({self.unit.label()}, pi->zeta{self.at_pi.order}^{self.at_pi.exponent}{g})"


def conductor(chi: UnitChar | FieldChar) -> int:
    """Least k with chi trivial on U^k.

    >>> from newformlab.local_rings import make_ring
    >>> R = make_ring("mixed", 3, 1, 3)
    >>> conductor(omega_EF(R)), conductor(legendre_char(R, 1))
    (0, 1)
    """
    return chi.conductor


def trivial_char(ring, n: int) -> UnitChar:
    g = unit_group(ring, n)
    return UnitChar(g, (0,) * len(g.invariants))


def unramified_char(ring, at_pi: RootOfUnity, n: int = 0) -> FieldChar:
    return FieldChar(trivial_char(ring, n), at_pi)


def abs_char(ring, n: int = 0) -> FieldChar:
    """|.|: trivial on units, pi -> q^{-1}."""
    return FieldChar(trivial_char(ring, n), RootOfUnity.one(), -1)


def omega_EF(ring: RingSpec, n: int = 0) -> FieldChar:
    """Quadratic character of the unramified extension: unit part trivial."""
    return FieldChar(trivial_char(ring, n), RootOfUnity(2, 1))


def legendre_char(ring: RingSpec, n: int = 1, at_pi: RootOfUnity = RootOfUnity(1, 0)) -> FieldChar:
    """The ramified quadratic character u -> (u mod P / q), with chi(pi) given."""
    g = unit_group(ring, n)
    sq = ring.field_.squares
    return FieldChar(g.char_from_function(lambda x: RootOfUnity(2, 0 if ring.residue(x) in sq else 1)), at_pi)


# ---------------------------------------------------------------------------
# restriction and extension


def restrict_to_F(chi: UnitChar, base_group: UnitGroup | None = None) -> UnitChar:
    """Restrict a character of (O_E/P^n)^x to (O_F/P^n)^x."""
    ext = chi.group.ring
    assert isinstance(ext, QuadExtSpec)
    g = base_group or unit_group(ext.base, chi.modulus)
    return g.char_from_function(lambda x: chi(ext.from_base(x)), check=False)


def norm_one_indices(group: UnitGroup) -> list[int]:
    """Indices of the kernel of the norm inside (O_E/P^n)^x."""
    return list(_norm_one_indices(group))


@lru_cache(maxsize=None)
def _norm_one_indices(group: UnitGroup) -> tuple[int, ...]:
    ext = group.ring
    assert isinstance(ext, QuadExtSpec)
    R = ext.base
    one = R.key(R.one(), group.n)
    return tuple(i for i, x in enumerate(group.elements) if R.key(ext.norm(x), group.n) == one)


def restrict_to_norm_one(chi: UnitChar) -> dict[int, RootOfUnity]:
    """Values of chi on the norm-one units, keyed by element index."""
    g = chi.group
    return {i: RootOfUnity(chi.order, chi.table[i]) for i in norm_one_indices(g)}


def enumerate_extensions(omega: Callable[[object], RootOfUnity], members: Sequence[int], group: UnitGroup) -> list[UnitChar]:
    """All characters of ``group`` restricting to ``omega`` on the subgroup
    with the given member indices.

    >>> from newformlab.local_rings import make_ring, make_quad_ext
    >>> E = make_quad_ext(make_ring("mixed", 3, 1, 2))
    >>> g = unit_group(E, 1)
    >>> len(enumerate_extensions(lambda x: RootOfUnity.one(), norm_one_indices(g), g))
    2
    """
    els = group.elements
    mset = set(members)
    gens = group._subgroup_generators(members)
    # omega must be a homomorphism on the subgroup
    for i in gens:
        for j in members:
            k = group.idx(group.mul(els[i], els[j]))
            if k not in mset or omega(els[k]) != omega(els[i]) * omega(els[j]):
                raise ValueError("omega is not a character of the subgroup")
    out = [c for c in group.chars() if all(c(els[i]) == omega(els[i]) for i in gens)]
    assert len(out) * len(members) == group.order()
    return out


# ---------------------------------------------------------------------------
# additive characters


@dataclass(frozen=True)
class AdditivePsi:
    """psi_a(x) = psi(a x) with psi trivial on O and not on P^{-1}.

    The scaling is pi^val times the unit with raw digits ``unit``.
    """

    ring: RingSpec
    val: int = 0
    unit: object = None

    @property
    def scaling(self) -> RElem:
        u = self.ring.one() if self.unit is None else self.unit
        return RElem(self.ring, self.ring.shift_up(u, max(self.val, 0)), min(self.val, 0))

    def __call__(self, x: RElem) -> RootOfUnity:
        return psi_eval(self, x)


def psi_exponent(ring: RingSpec, raw, shift: int, prec: int | None = None) -> tuple[int, int]:
    """psi(pi^shift * raw) as (order, exponent).

    Mixed backend: zeta_{p^j}^(raw mod p^j) for shift = -j.  Equal backend:
    zeta_p^Tr(coefficient of t^{-1}).
    """
    if shift >= 0:
        return (1, 0)
    j = -shift
    prec = ring.N if prec is None else prec
    if ring.mixed:
        if prec < j:
            raise PrecisionError("not enough digits to evaluate psi")
        M = ring.p**j
        return (M, raw % M)
    if prec < j:
        raise PrecisionError("not enough digits to evaluate psi")
    d = ring.digits(raw)[j - 1]
    return (ring.p, ring.field_.trace(d))


def psi_eval(psi: AdditivePsi, x: RElem) -> RootOfUnity:
    """Evaluate psi_a at x (x may have a negative shift).

    >>> from newformlab.local_rings import make_ring, invert
    >>> R = make_ring("mixed", 3, 1, 4)
    >>> psi_eval(AdditivePsi(R), invert(R.elem(3)))
    RootOfUnity(order=3, exponent=1)
    >>> psi_eval(AdditivePsi(R, 1), invert(R.elem(3))).is_one
    True
    """
    y = psi.scaling * x
    M, e = psi_exponent(y.ring, y.raw, y.shift, y.prec)
    return RootOfUnity(M, e)


# ---------------------------------------------------------------------------
# literals


def parse_char_literal(text: str, ring: RingSpec, n: int = 1, table: Sequence[FieldChar] | None = None) -> FieldChar:
    """Parse ``trivial``, ``unramified:zeta=M:a``, ``omega_EF``, ``legendre``,
    ``table:<id>``.

    >>> from newformlab.local_rings import make_ring
    >>> parse_char_literal("unramified:zeta=4:1", make_ring("mixed", 3, 1, 3)).at_pi
    RootOfUnity(order=4, exponent=1)
    """
    text = text.strip()
    if text == "trivial":
        return unramified_char(ring, RootOfUnity.one(), n)
    if text == "omega_EF":
        return omega_EF(ring, n)
    if text == "legendre":
        return legendre_char(ring, max(n, 1))
    if text == "abs":
        return abs_char(ring, n)
    if text.startswith("unramified:"):
        parts = text.split(":")
        if len(parts) != 3 or not parts[1].startswith("zeta="):
            raise ValueError(f"bad character literal {text!r}")
        return unramified_char(ring, RootOfUnity(int(parts[1][5:]), int(parts[2])), n)
    if text.startswith("table:"):
        idx = int(text[6:])
        chars = table if table is not None else [FieldChar(c) for c in enumerate_unit_chars(ring, n)]
        return chars[idx]
    raise ValueError(f"bad character literal {text!r}")
