"""Exact arithmetic in truncations O/P^N of a non-Archimedean local field.

Two backends share one interface:

* ``mixed``: O = Z_p, an element is an int modulo p^N;
* ``equal``: O = F_q[[t]], an element is a tuple of N residue-field digits.

Residue-field elements are ints in ``range(q)`` (base-p coefficient vectors of
a polynomial basis of F_q over F_p).  The unramified quadratic extension is
realised as O[sqrt(eps)] with ``eps`` the chosen non-square unit.

>>> R = make_ring("mixed", 3, 1, 6)
>>> R.q, R.eps_raw
(3, 2)
>>> x = R.elem(18)
>>> valuation(x), is_square_unit(R.elem(4))
(2, True)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from sympy import isprime

__all__ = [
    "PrecisionError",
    "ResidueField",
    "RingSpec",
    "RElem",
    "QuadExtSpec",
    "QuadElem",
    "make_ring",
    "make_quad_ext",
    "valuation",
    "is_square_unit",
    "norm",
    "trace",
    "galois_conj",
    "invert",
]


class PrecisionError(ArithmeticError):
    """Raised when an operation needs more digits than are available."""


# ---------------------------------------------------------------------------
# residue field F_q = F_p[x]/(g)


def _poly_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility of a monic polynomial (low-to-high coeffs)."""
    deg = len(coeffs) - 1
    if deg <= 1:
        return True
    for a in range(p):
        if sum(c * a**i for i, c in enumerate(coeffs)) % p == 0:
            return False
    if deg <= 3:
        return True
    # degree >= 4: trial division by all monic polynomials of degree <= deg/2
    for d in range(2, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            div = list(low) + [1]
            rem = list(coeffs)
            for shift in range(deg - d, -1, -1):
                lead = rem[shift + d] % p
                if lead:
                    for i in range(d + 1):
                        rem[shift + i] = (rem[shift + i] - lead * div[i]) % p
            if not any(r % p for r in rem[:d]):
                return False
    return True


class ResidueField:
    """The finite field F_q with full addition and multiplication tables.

    >>> F = ResidueField(3, 2)
    >>> F.q, len(F.squares)
    (9, 4)
    >>> all(F.mul(a, F.inv[a]) == 1 for a in range(1, 9))
    True
    """

    def __init__(self, p: int, f: int):
        self.p, self.f, self.q = p, f, p**f
        if f == 1:
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            for low in product(range(p), repeat=f):
                cand = tuple(reversed(low)) + (1,)
                if cand[0] and _poly_irreducible(cand, p):
                    self.modulus = cand
                    break
        q = self.q
        vecs = [self._vec(a) for a in range(q)]
        self.add_t = [[self._enc([(x + y) % p for x, y in zip(vecs[a], vecs[b])]) for b in range(q)] for a in range(q)]
        self.neg = [self._enc([(-x) % p for x in vecs[a]]) for a in range(q)]
        self.mul_t = [[self._enc(self._polymul(vecs[a], vecs[b])) for b in range(q)] for a in range(q)]
        self.inv = [0] * q
        for a in range(1, q):
            self.inv[a] = next(b for b in range(1, q) if self.mul_t[a][b] == 1)
        self.squares = frozenset(self.mul_t[a][a] for a in range(1, q))
        self.sqrt_t = {self.mul_t[a][a]: a for a in range(q - 1, -1, -1)}
        # a generator of F_q^x, least in the int ordering
        self.generator = next(g for g in range(2 if q > 2 else 1, q) if self._order(g) == q - 1) if q > 2 else 1
        self.log = {}
        x = 1
        for k in range(q - 1):
            self.log[x] = k
            x = self.mul_t[x][self.generator]
        # image of the prime field inside the encoding
        self.frob = [self.pow(a, p) for a in range(q)]

    def _vec(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return out

    def _enc(self, vec: Sequence[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(vec))

    def _polymul(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        p, f = self.p, self.f
        prod_ = [0] * (2 * f - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    prod_[i + j] = (prod_[i + j] + x * y) % p
        for k in range(2 * f - 2, f - 1, -1):
            c = prod_[k]
            if c:
                for i in range(f + 1):
                    prod_[k - f + i] = (prod_[k - f + i] - c * self.modulus[i]) % p
        return prod_[:f]

    def _order(self, g: int) -> int:
        x, k = g, 1
        while x != 1:
            x, k = self.mul_t[x][g], k + 1
        return k

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return self.exp((self.log[a] * e) % (self.q - 1))

    def exp(self, k: int) -> int:
        x = 1
        g = self.generator
        for _ in range(k % (self.q - 1)):
            x = self.mul_t[x][g]
        return x

    def from_int(self, n: int) -> int:
        return n % self.p

    def trace(self, a: int) -> int:
        """Absolute trace F_q -> F_p, returned as an int mod p."""
        s, x = 0, a
        for _ in range(self.f):
            s = self.add_t[s][x]
            x = self.frob[x]
        assert s < self.p
        return s

    def legendre(self, a: int) -> int:
        if a == 0:
            return 0
        return 1 if a in self.squares else -1


@lru_cache(maxsize=None)
def _residue_field(p: int, f: int) -> ResidueField:
    return ResidueField(p, f)


# ---------------------------------------------------------------------------
# truncated rings of integers


@dataclass(frozen=True)
class RingSpec:
    """O/P^N for one of the two backends; holds raw arithmetic.

    Raw elements are ints (``mixed``) or length-N tuples of residue digits
    (``equal``).  All raw operations are exact modulo P^N.
    """

    backend: str
    p: int
    f: int
    N: int
    field_: ResidueField = field(repr=False, compare=False, hash=False)
    eps_raw: object = field(compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def mixed(self) -> bool:
        return self.backend == "mixed"

    @property
    def residue_field(self) -> ResidueField:
        return self.field_

    # -- construction -----------------------------------------------------
    def zero(self):
        return 0 if self.mixed else (0,) * self.N

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.mixed:
            return n % self.p**self.N
        # integers live in the prime field, which is digit 0 only
        return (n % self.p,) + (0,) * (self.N - 1)

    def from_digits(self, digits: Sequence[int]):
        ds = list(digits)[: self.N] + [0] * max(0, self.N - len(digits))
        if self.mixed:
            return sum(d * self.p**i for i, d in enumerate(ds)) % self.p**self.N
        return tuple(ds)

    def digits(self, x) -> tuple[int, ...]:
        if not self.mixed:
            return x
        out = []
        for _ in range(self.N):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def lift(self, r: int):
        """Constant-digit lift of a residue."""
        return r if self.mixed else (r,) + (0,) * (self.N - 1)

    def pi_power(self, k: int):
        assert k >= 0
        if k >= self.N:
            return self.zero()
        return self.p**k if self.mixed else (0,) * k + (1,) + (0,) * (self.N - k - 1)

    @property
    def eps(self) -> "RElem":
        return RElem(self, self.eps_raw)

    def elem(self, x) -> "RElem":
        """Wrap an int, a residue-digit sequence, or a raw value."""
        if isinstance(x, int):
            return RElem(self, self.from_int(x))
        return RElem(self, self.from_digits(x))

    # -- raw arithmetic ---------------------------------------------------
    def add(self, x, y):
        if self.mixed:
            return (x + y) % self.p**self.N
        t = self.field_.add_t
        return tuple(t[a][b] for a, b in zip(x, y))

    def neg(self, x):
        if self.mixed:
            return (-x) % self.p**self.N
        n = self.field_.neg
        return tuple(n[a] for a in x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.mixed:
            return (x * y) % self.p**self.N
        N = self.N
        mt, at = self.field_.mul_t, self.field_.add_t
        out = [0] * N
        for i, a in enumerate(x):
            if a:
                row = mt[a]
                for j in range(N - i):
                    b = y[j]
                    if b:
                        out[i + j] = at[out[i + j]][row[b]]
        return tuple(out)

    def val(self, x) -> int:
        if self.mixed:
            if x == 0:
                return self.N
            v = 0
            while x % self.p == 0:
                x //= self.p
                v += 1
            return v
        for i, d in enumerate(x):
            if d:
                return i
        return self.N

    def is_unit(self, x) -> bool:
        return self.residue(x) != 0

    def conj(self, x):
        return x

    def residue(self, x) -> int:
        return x % self.p if self.mixed else x[0]

    def unit_inv(self, x):
        if self.mixed:
            return pow(x, -1, self.p**self.N)
        r = self.residue(x)
        if r == 0:
            raise ZeroDivisionError("not a unit")
        y = self.lift(self.field_.inv[r])
        two = self.from_int(2)
        prec = 1
        while prec < self.N:
            y = self.mul(y, self.sub(two, self.mul(x, y)))
            prec *= 2
        return y

    def pow(self, x, e: int):
        if e < 0:
            x, e = self.unit_inv(x), -e
        out = self.one()
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def shift_up(self, x, k: int):
        """Multiply by pi^k (k >= 0)."""
        if k == 0:
            return x
        if self.mixed:
            return (x * self.p**k) % self.p**self.N
        return ((0,) * k + x)[: self.N] if k < self.N else self.zero()

    def shift_down(self, x, k: int):
        """Divide by pi^k, dropping the low k digits (top digits become 0)."""
        if k == 0:
            return x
        if self.mixed:
            return x // self.p**k
        return x[k:] + (0,) * min(k, self.N)

    def reduce(self, x, k: int):
        """Reduce modulo P^k (digits at positions >= k zeroed)."""
        if k >= self.N:
            return x
        if self.mixed:
            return x % self.p**k
        return x[:k] + (0,) * (self.N - k)

    def sqrt_unit(self, x):
        """Hensel square root of a square unit; the root with least residue."""
        F = self.field_
        r = self.residue(x)
        if r not in F.squares:
            raise ValueError("not a square unit")
        y = self.lift(F.sqrt_t[r])
        inv2 = self.unit_inv(self.from_int(2))
        for _ in range(self.N.bit_length() + 1):
            y = self.mul(inv2, self.add(y, self.mul(x, self.unit_inv(y))))
        assert self.mul(y, y) == x
        return y

    # -- enumeration ------------------------------------------------------
    def elements(self, k: int) -> list:
        """Raw representatives of O/P^k, ordered by digit vector (low first)."""
        if self.mixed:
            return list(range(self.p**k))
        tail = (0,) * (self.N - k)
        return [tuple(reversed(ds)) + tail for ds in product(range(self.q), repeat=k)]

    def units(self, k: int) -> list:
        return [x for x in self.elements(k) if self.is_unit(x)]

    def key(self, x, k: int | None = None):
        """Hashable canonical key of x mod P^k (an int in both backends)."""
        if k is None:
            k = self.N
        if self.mixed:
            return x % self.p**k
        q, out = self.q, 0
        for d in reversed(x[:k]):
            out = out * q + d
        return out

    def from_key(self, key: int, k: int | None = None):
        if self.mixed:
            return key
        ds = []
        for _ in range(self.N if k is None else k):
            ds.append(key % self.q)
            key //= self.q
        return self.from_digits(ds)


def _least_nonsquare(F: ResidueField) -> int:
    # ordering: least int encoding whose residue is a non-square
    return next(a for a in range(1, F.q) if a not in F.squares)


@lru_cache(maxsize=None)
def make_ring(backend: str, p: int, f: int, N: int) -> RingSpec:
    """Build O/P^N.

    ``eps`` is the constant-digit lift of the least non-square residue.

    >>> make_ring("equal", 3, 2, 4).q
    9
    >>> make_ring("mixed", 2, 1, 4)
    Traceback (most recent call last):
    ...
    ValueError: residue characteristic must be odd
    """
    backend = {"mixed-char": "mixed", "equal-char": "equal"}.get(backend, backend)
    if backend not in ("mixed", "equal"):
        raise ValueError(f"unknown backend {backend!r}")
    if p % 2 == 0:
        raise ValueError("residue characteristic must be odd")
    if not isprime(p):
        raise ValueError("p must be prime")
    if f < 1 or N < 1:
        raise ValueError("need f >= 1 and N >= 1")
    if backend == "mixed" and f != 1:
        raise ValueError("mixed-characteristic backend needs f = 1")
    F = _residue_field(p, f)
    r = _least_nonsquare(F)
    eps = r if backend == "mixed" else (r,) + (0,) * (N - 1)
    return RingSpec(backend, p, f, N, F, eps)


# ---------------------------------------------------------------------------
# public element type with tracked precision


@dataclass(frozen=True, eq=False)
class RElem:
    """pi^shift * u where ``raw`` holds ``prec`` significant digits.

    Elements of O/P^N have shift 0 and prec N.  Only division can produce a
    negative shift (and lowers ``prec``).
    """

    ring: RingSpec
    raw: object
    shift: int = 0
    prec: int | None = None

    def __post_init__(self):
        R = self.ring
        prec = R.N if self.prec is None else self.prec
        raw, shift = R.reduce(self.raw, prec), self.shift
        # pull factors of pi into a negative shift when possible
        while shift < 0 and raw != R.zero() and R.val(raw) > 0:
            raw, shift, prec = R.shift_down(raw, 1), shift + 1, prec - 1
        object.__setattr__(self, "raw", raw)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "prec", prec)

    @property
    def digits(self) -> tuple[int, ...]:
        return self.ring.digits(self.raw)

    @property
    def abs_prec(self) -> int:
        return self.shift + self.prec

    def _aligned(self, other: "RElem") -> tuple[object, object, int, int]:
        R = self.ring
        assert other.ring == R, "ring mismatch"
        s = min(self.shift, other.shift)
        x = R.shift_up(self.raw, self.shift - s)
        y = R.shift_up(other.raw, other.shift - s)
        prec = min(self.prec + self.shift - s, other.prec + other.shift - s, R.N)
        return x, y, s, prec

    def _coerce(self, other) -> "RElem":
        if isinstance(other, RElem):
            return other
        if isinstance(other, int):
            return RElem(self.ring, self.ring.from_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x, y, s, prec = self._aligned(other)
        return RElem(self.ring, self.ring.add(x, y), s, prec)

    __radd__ = __add__

    def __neg__(self):
        return RElem(self.ring, self.ring.neg(self.raw), self.shift, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        R = self.ring
        v1, v2 = R.val(self.raw), R.val(other.raw)
        prec = min(self.prec + v2, other.prec + v1, R.N)
        return RElem(R, R.mul(self.raw, other.raw), self.shift + other.shift, prec)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = RElem(self.ring, self.ring.one())
        base = self if e >= 0 else invert(self)
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x, y, _, prec = self._aligned(other)
        R = self.ring
        return R.reduce(R.sub(x, y), prec) == R.zero()

    def __hash__(self):
        return hash((self.ring.key(self.raw), self.shift, self.prec))

    def __repr__(self):
        body = "".join(str(d) if d < 10 else f"[{d}]" for d in reversed(self.digits[: self.prec]))
        return f"RElem({body}, shift={self.shift})" if self.shift else f"RElem({body})"


# ---------------------------------------------------------------------------
# unramified quadratic extension O_E = O[sqrt(eps)]


@dataclass(frozen=True)
class QuadExtSpec:
    """O_E/P^N with raw elements (a, b) meaning a + b sqrt(eps_F)."""

    base: RingSpec
    eps_E_raw: tuple = field(compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def eps_E(self) -> "QuadElem":
        a, b = self.eps_E_raw
        return QuadElem(self, RElem(self.base, a), RElem(self.base, b))

    def elem(self, a, b=0) -> "QuadElem":
        return QuadElem(self, self.base.elem(a) if not isinstance(a, RElem) else a,
                        self.base.elem(b) if not isinstance(b, RElem) else b)

    # -- raw arithmetic ---------------------------------------------------
    def zero(self):
        return (self.base.zero(), self.base.zero())

    def one(self):
        return (self.base.one(), self.base.zero())

    def from_base(self, x):
        return (x, self.base.zero())

    def add(self, x, y):
        R = self.base
        return (R.add(x[0], y[0]), R.add(x[1], y[1]))

    def sub(self, x, y):
        R = self.base
        return (R.sub(x[0], y[0]), R.sub(x[1], y[1]))

    def neg(self, x):
        R = self.base
        return (R.neg(x[0]), R.neg(x[1]))

    def mul(self, x, y):
        R = self.base
        a1, b1 = x
        a2, b2 = y
        a = R.add(R.mul(a1, a2), R.mul(R.eps_raw, R.mul(b1, b2)))
        b = R.add(R.mul(a1, b2), R.mul(b1, a2))
        return (a, b)

    def conj(self, x):
        return (x[0], self.base.neg(x[1]))

    def norm(self, x):
        R = self.base
        return R.sub(R.mul(x[0], x[0]), R.mul(R.eps_raw, R.mul(x[1], x[1])))

    def trace(self, x):
        return self.base.add(x[0], x[0])

    def val(self, x) -> int:
        return min(self.base.val(x[0]), self.base.val(x[1]))

    def is_unit(self, x) -> bool:
        return self.val(x) == 0

    def residue(self, x) -> tuple[int, int]:
        return (self.base.residue(x[0]), self.base.residue(x[1]))

    def unit_inv(self, x):
        n = self.base.unit_inv(self.norm(x))
        c = self.conj(x)
        return (self.base.mul(c[0], n), self.base.mul(c[1], n))

    def pow(self, x, e: int):
        if e < 0:
            x, e = self.unit_inv(x), -e
        out = self.one()
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def scale(self, r, x):
        """Multiply by a base-ring raw element."""
        return (self.base.mul(r, x[0]), self.base.mul(r, x[1]))

    def shift_up(self, x, k: int):
        return (self.base.shift_up(x[0], k), self.base.shift_up(x[1], k))

    def shift_down(self, x, k: int):
        return (self.base.shift_down(x[0], k), self.base.shift_down(x[1], k))

    def reduce(self, x, k: int):
        return (self.base.reduce(x[0], k), self.base.reduce(x[1], k))

    def key(self, x, k: int | None = None) -> int:
        R = self.base
        k = R.N if k is None else k
        return R.key(x[0], k) * R.q**k + R.key(x[1], k)

    def elements(self, k: int) -> list:
        els = self.base.elements(k)
        return [(a, b) for a in els for b in els]

    def units(self, k: int) -> list:
        return [x for x in self.elements(k) if self.is_unit(x)]

    def residue_is_square(self, x) -> bool:
        """Square class of a unit: x is a square iff N(x) is a square residue."""
        return self.base.residue(self.norm(x)) in self.base.field_.squares


@lru_cache(maxsize=None)
def make_quad_ext(ring: RingSpec) -> QuadExtSpec:
    """Adjoin sqrt(eps_F) and fix eps_E with N(eps_E) = eps_F.

    eps_E is the least residue solution (a0, b0) of a0^2 - eps b0^2 = eps
    (ordered by (b0, a0)), lifted with b constant and a Hensel-lifted; if
    a0 = 0 then a = 0 and b lifts sqrt(-1).  Any such solution is a
    non-square of the residue field of E, since its norm is a non-square.

    >>> E = make_quad_ext(make_ring("mixed", 3, 1, 5))
    >>> norm(E.eps_E) == E.base.eps
    True
    """
    R = ring
    F = R.field_
    e = _least_nonsquare(F)
    sol = None
    for b0 in range(F.q):
        for a0 in range(F.q):
            if F.sub(F.mul(a0, a0), F.mul(e, F.mul(b0, b0))) == e:
                sol = (a0, b0)
                break
        if sol:
            break
    assert sol is not None, "norm equation has no residue solution"
    a0, b0 = sol
    if a0 == 0:
        a = R.zero()
        b = R.sqrt_unit(R.neg(R.one()))
        if R.residue(b) != b0:
            b = R.neg(b)
    else:
        b = R.lift(b0)
        # a^2 = eps (1 + b^2)
        a = R.sqrt_unit(R.mul(R.eps_raw, R.add(R.one(), R.mul(b, b))))
        if R.residue(a) != a0:
            a = R.neg(a)
    ext = QuadExtSpec(R, (a, b))
    assert ext.norm((a, b)) == R.eps_raw
    assert not ext.residue_is_square((a, b))
    return ext


@dataclass(frozen=True, eq=False)
class QuadElem:
    """a + b sqrt(eps_F) with a, b RElem over the base ring."""

    ext: QuadExtSpec
    a: RElem
    b: RElem

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, RElem):
            return QuadElem(self.ext, other, RElem(other.ring, other.ring.zero()))
        if isinstance(other, int):
            return self.ext.elem(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.ext, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.ext, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e = self.ext.base.eps
        return QuadElem(self.ext, self.a * other.a + e * self.b * other.b, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    @property
    def raw(self):
        assert self.a.shift == 0 and self.b.shift == 0
        return (self.a.raw, self.b.raw)

    def __repr__(self):
        return f"QuadElem({self.a!r} + {self.b!r}*sqrt(eps))"


# ---------------------------------------------------------------------------
# polymorphic operations


def valuation(x: RElem | QuadElem) -> int:
    """Valuation, with ``abs_prec`` (N for ordinary elements) meaning zero.

    >>> R = make_ring("mixed", 3, 1, 4)
    >>> valuation(R.elem(9)), valuation(R.elem(0)), valuation(R.eps)
    (2, 4, 0)
    """
    if isinstance(x, QuadElem):
        return min(valuation(x.a), valuation(x.b))
    v = x.ring.val(x.raw)
    return x.shift + min(v, x.prec)


def is_square_unit(x: RElem | QuadElem) -> bool:
    """Square class of a unit, read off the residue.

    >>> R = make_ring("mixed", 3, 1, 4)
    >>> is_square_unit(R.eps), is_square_unit(R.elem(1))
    (False, True)
    """
    if valuation(x) != 0:
        raise ValueError("is_square_unit needs a unit")
    if isinstance(x, QuadElem):
        return x.ext.residue_is_square((x.a.raw, x.b.raw))
    return x.ring.residue(x.raw) in x.ring.field_.squares


def norm(x: QuadElem | RElem) -> RElem:
    """a^2 - eps b^2; on the base ring the norm from E is squaring.

    >>> E = make_quad_ext(make_ring("mixed", 3, 1, 4))
    >>> norm(E.elem(0, 1)) == -E.base.eps
    True
    """
    if isinstance(x, RElem):
        return x * x
    return x.a * x.a - x.ext.base.eps * x.b * x.b


def trace(x: QuadElem | RElem) -> RElem:
    """2a; on the base ring the trace from E is doubling."""
    if isinstance(x, RElem):
        return x + x
    return x.a + x.a


def galois_conj(x: QuadElem | RElem):
    if isinstance(x, RElem):
        return x
    return QuadElem(x.ext, x.a, -x.b)


def invert(x: RElem | QuadElem):
    """Inverse with precision reduced by the valuation.

    >>> R = make_ring("mixed", 3, 1, 5)
    >>> y = invert(R.elem(3 * 2))
    >>> y.shift, y.prec, (y * R.elem(6)) == 1
    (-1, 4, True)
    """
    if isinstance(x, QuadElem):
        n = norm(x)
        ni = invert(n)
        return QuadElem(x.ext, x.a * ni, -x.b * ni)
    R = x.ring
    v = R.val(x.raw)
    if v >= x.prec:
        raise PrecisionError("inverse of zero at this precision")
    u = R.shift_down(x.raw, v)
    prec = x.prec - v
    inv = R.unit_inv(R.reduce(u, prec) if prec < R.N else u)
    # the top v digits of u are unknown, so the inverse has prec - v... digits
    return RElem(R, inv, -(x.shift + v), prec)
