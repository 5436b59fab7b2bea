"""Exact arithmetic in cyclotomic fields Q(zeta_M) and Q(zeta_M)[sqrt q].

Elements of Q(zeta_M) are coefficient vectors in the power basis modulo the
M-th cyclotomic polynomial.  Mixed orders are lifted to the lcm.

>>> z3 = Cyclotomic.root(3, 1)
>>> (1 + z3 + z3 * z3).is_zero()
True
>>> Cyclotomic.root(4, 1) ** 2 == -1
True
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from sympy import cyclotomic_poly, factorint, symbols, Poly, totient

__all__ = ["RootOfUnity", "Cyclotomic", "QHalfGraded", "lcm"]


def lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // gcd(out, n)
    return out


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_order^exponent, stored in lowest terms.

    >>> RootOfUnity(6, 3) == RootOfUnity(2, 1)
    True
    >>> RootOfUnity(4, 1) * RootOfUnity(4, 3)
    RootOfUnity(order=1, exponent=0)
    """

    order: int
    exponent: int

    def __post_init__(self):
        M, a = self.order, self.exponent % self.order
        g = gcd(M, a) if a else M
        object.__setattr__(self, "order", M // g)
        object.__setattr__(self, "exponent", a // g)

    @staticmethod
    def one() -> "RootOfUnity":
        return RootOfUnity(1, 0)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        L = lcm(self.order, other.order)
        return RootOfUnity(L, self.exponent * (L // self.order) + other.exponent * (L // other.order))

    def __pow__(self, e: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.exponent * e)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    conj = inverse

    @property
    def is_one(self) -> bool:
        return self.order == 1

    def to_cyclotomic(self) -> "Cyclotomic":
        return Cyclotomic.root(self.order, self.exponent)

    def __complex__(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.exponent / self.order)


@lru_cache(maxsize=None)
def _reduction_table(M: int) -> tuple[int, tuple[tuple[tuple[int, int], ...], ...]]:
    """phi(M) and, for k in range(M), x^k mod Phi_M as sparse (index, coeff)."""
    x = symbols("x")
    phi = int(totient(M))
    poly = Poly(cyclotomic_poly(M, x), x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]  # low to high, monic
    rows: list[tuple[tuple[int, int], ...]] = []
    cur = [0] * phi
    cur_full = [1] + [0] * (phi - 1) if phi > 0 else []
    cur = cur_full
    for k in range(M):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        # multiply by x and reduce
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            nxt = [nxt[i] - top * coeffs[i] for i in range(phi)]
        cur = nxt
    return phi, tuple(rows)


class Cyclotomic:
    """Element of Q(zeta_M) in the reduced power basis.

    >>> a = Cyclotomic.root(8, 1) + Cyclotomic.root(8, 7)
    >>> a * a == 2
    True
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable):
        self.order = order
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- constructors -----------------------------------------------------
    @staticmethod
    def from_exponents(M: int, counts: Mapping[int, object]) -> "Cyclotomic":
        """sum counts[k] * zeta_M^k, reduced once."""
        phi, rows = _reduction_table(M)
        out = [Fraction(0)] * phi
        for k, c in counts.items():
            if c:
                for i, r in rows[k % M]:
                    out[i] += r * c
        return Cyclotomic(M, out)

    @staticmethod
    def root(M: int, k: int) -> "Cyclotomic":
        return Cyclotomic.from_exponents(M, {k % M: 1})

    @staticmethod
    def rational(r) -> "Cyclotomic":
        return Cyclotomic(1, [Fraction(r)])

    @staticmethod
    def coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, RootOfUnity):
            return x.to_cyclotomic()
        if isinstance(x, (int, Fraction)):
            return Cyclotomic.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # -- order handling ---------------------------------------------------
    def lift(self, L: int) -> "Cyclotomic":
        if L == self.order:
            return self
        assert L % self.order == 0
        s = L // self.order
        return Cyclotomic.from_exponents(L, {i * s: c for i, c in enumerate(self.coeffs) if c})

    def _pair(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        other = Cyclotomic.coerce(other)
        L = lcm(self.order, other.order)
        return self.lift(L), other.lift(L)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-Cyclotomic.coerce(other))

    def __rsub__(self, other):
        return Cyclotomic.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, [c * other for c in self.coeffs])
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        if a.order == 1:
            return b * a.coeffs[0]
        if b.order == 1:
            return a * b.coeffs[0]
        counts: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        counts[i + j] = counts.get(i + j, 0) + x * y
        return Cyclotomic.from_exponents(a.order, counts)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Cyclotomic.rational(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.order, [c / other for c in self.coeffs])
        return self * Cyclotomic.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def inverse(self) -> "Cyclotomic":
        """Solve a*y = 1 with the multiplication matrix of a."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        M = self.order
        phi = len(self.coeffs)
        if phi == 1:
            return Cyclotomic(M, [1 / self.coeffs[0]])
        cols = [(self * Cyclotomic.root(M, j)).coeffs for j in range(phi)]
        # rows of the augmented system A y = e_0, with A[i][j] = cols[j][i]
        A = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if A[r][c])
            A[c], A[piv] = A[piv], A[c]
            inv = 1 / A[c][c]
            A[c] = [v * inv for v in A[c]]
            for r in range(phi):
                if r != c and A[r][c]:
                    f = A[r][c]
                    A[r] = [v - f * w for v, w in zip(A[r], A[c])]
        return Cyclotomic(M, [A[i][phi] for i in range(phi)])

    def conj(self) -> "Cyclotomic":
        return Cyclotomic.from_exponents(self.order, {-i % self.order: c for i, c in enumerate(self.coeffs) if c})

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None  # type: ignore[assignment]

    def rational_value(self) -> Fraction | None:
        """The value if it is rational, else None."""
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(complex(float(c)) * z**i for i, c in enumerate(self.coeffs) if c) + 0j

    def approx(self) -> complex:
        return complex(self)

    def __repr__(self):
        r = self.rational_value()
        if r is not None:
            return f"Cyclotomic({r})"
        terms = [f"{c}*z{self.order}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Cyclotomic(" + " + ".join(terms) + ")"

    def as_root_times_rational(self) -> tuple[Fraction, RootOfUnity] | None:
        """Write self = r * zeta if possible (r rational, zeta a root of unity)."""
        M = self.order
        L = 2 * M if M % 2 else M
        x = self.lift(L)
        for k in range(L):
            y = x * Cyclotomic.root(L, -k)
            r = y.rational_value()
            if r is not None and r > 0:
                return r, RootOfUnity(L, k)
        return None

    def sqrt(self) -> "Cyclotomic":
        """A square root when self is a rational times a root of unity.

        >>> (Cyclotomic.rational(-3).sqrt() ** 2) == -3
        True
        """
        if self.is_zero():
            return self
        rz = self.as_root_times_rational()
        if rz is None:
            raise ValueError("square root only supported for rational times a root of unity")
        r, z = rz
        root_z = Cyclotomic.root(2 * z.order, z.exponent)
        return _sqrt_rational(r) * root_z


def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return Cyclotomic.root(8, 1) + Cyclotomic.root(8, 7)
    # quadratic Gauss sum squares to (-1)^((p-1)/2) p
    g = Cyclotomic.from_exponents(p, {x: (1 if pow(x, (p - 1) // 2, p) == 1 else -1) for x in range(1, p)})
    return g if p % 4 == 1 else g * Cyclotomic.root(4, 3)


def _sqrt_rational(r: Fraction) -> Cyclotomic:
    assert r > 0
    num = r.numerator * r.denominator
    out = Cyclotomic.rational(Fraction(1, r.denominator))
    for p, e in factorint(num).items():
        out = out * Fraction(p ** (e // 2))
        if e % 2:
            out = out * _sqrt_prime(p)
    return out


class QHalfGraded:
    """c0 + c1 * s with s = sqrt(q), coefficients Cyclotomic.

    Integral powers of q fold into the coefficients, so the grade set is
    {0, 1/2}.

    >>> s = QHalfGraded.sqrt_q(3)
    >>> s * s == QHalfGraded.scalar(3, 3)
    True
    """

    __slots__ = ("q", "c0", "c1")

    def __init__(self, q: int, c0, c1=0):
        self.q = q
        self.c0 = Cyclotomic.coerce(c0)
        self.c1 = Cyclotomic.coerce(c1)

    @staticmethod
    def scalar(q: int, c) -> "QHalfGraded":
        return QHalfGraded(q, c, 0)

    @staticmethod
    def sqrt_q(q: int) -> "QHalfGraded":
        return QHalfGraded(q, 0, 1)

    @staticmethod
    def q_power(q: int, k: Fraction | int) -> "QHalfGraded":
        """q^k for a half-integer k."""
        k = Fraction(k)
        assert (2 * k).denominator == 1
        if k.denominator == 1:
            return QHalfGraded(q, Fraction(q) ** int(k))
        return QHalfGraded(q, 0, Fraction(q) ** int(k - Fraction(1, 2)))

    def _coerce(self, other) -> "QHalfGraded":
        if isinstance(other, QHalfGraded):
            assert other.q == self.q
            return other
        return QHalfGraded(self.q, other)

    def __add__(self, other):
        o = self._coerce(other)
        return QHalfGraded(self.q, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self):
        return QHalfGraded(self.q, -self.c0, -self.c1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QHalfGraded(self.q, self.c0 * o.c0 + self.c1 * o.c1 * self.q, self.c0 * o.c1 + self.c1 * o.c0)

    __rmul__ = __mul__

    def conj(self) -> "QHalfGraded":
        return QHalfGraded(self.q, self.c0.conj(), self.c1.conj())

    def inverse(self) -> "QHalfGraded":
        # (c0 + c1 s)^{-1} = (c0 - c1 s) / (c0^2 - q c1^2)
        d = self.c0 * self.c0 - self.c1 * self.c1 * self.q
        di = d.inverse()
        return QHalfGraded(self.q, self.c0 * di, -self.c1 * di)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return self.c0.is_zero() and self.c1.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __complex__(self) -> complex:
        return complex(self.c0) + complex(self.c1) * self.q**0.5

    def __repr__(self):
        if self.c1.is_zero():
            return f"QHalfGraded({self.c0!r})"
        return f"QHalfGraded({self.c0!r} + {self.c1!r}*sqrt({self.q}))"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "grade0": _cyc_json(self.c0),
            "grade_half": _cyc_json(self.c1),
            "approx": [complex(self).real, complex(self).imag],
        }


def _cyc_json(c: Cyclotomic) -> dict:
    return {"order": c.order, "coeffs": [str(x) for x in c.coeffs]}
