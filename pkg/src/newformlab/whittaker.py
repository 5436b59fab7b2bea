"""Whittaker functionals on finite principal-series models.

Lambda_{psi_a}(f) = integral over x in F of f(w n(x)) conj(psi_a(x)) dx,
evaluated as a finite sum of shells x in pi^{-j} O^x.  A shell vanishes
exactly when the additive character is non-trivial on the fibres of the
integrand, so the sum stops at a radius read off from the conductors; the
next shell is computed anyway and must vanish.

>>> from newformlab.local_rings import make_ring
>>> from newformlab.characters import trivial_char, FieldChar
>>> from newformlab.principal_series import fixed_space
>>> R = make_ring("mixed", 3, 1, 4)
>>> f = fixed_space(FieldChar(trivial_char(R, 0)), None, 0, "K").basis[0]
>>> whittaker_value(f).value.c0.rational_value()   # 1 - chi(pi)/q
Fraction(2, 3)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic, QHalfGraded
from .linalg import rank
from .local_rings import RingSpec

__all__ = [
    "WhittakerValue",
    "whittaker_row",
    "whittaker_value",
    "scalings",
    "genericity_profile",
    "kernel_quotient_dim",
]


def scalings(ring: RingSpec) -> dict[str, tuple[int, object]]:
    """The four classes F^x / (F^x)^2 as (valuation, raw unit): 1, eps, pi, eps pi."""
    return {"1": (0, ring.one()), "eps": (0, ring.eps_raw), "pi": (1, ring.one()), "eps*pi": (1, ring.eps_raw)}


def whittaker_row(model, scaling: tuple[int, object]) -> dict:
    """Lambda_{psi_a} as a linear form on the K-model coordinates."""
    from .principal_series import shell_functional

    row, _ = shell_functional(model, model.skel.space.identity, scaling)
    return row


@dataclass
class WhittakerValue:
    value: QHalfGraded
    radius: int
    scaling: tuple

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "radius": self.radius, "scaling_valuation": self.scaling[0]}


def whittaker_value(f, scaling: tuple[int, object] | None = None, transported: bool = False) -> WhittakerValue:
    """Lambda_{psi_a}(f).  With ``transported`` f is read as a K'-vector h,
    and Lambda_{psi_a}(f) = chi(pi) Lambda_{psi_{a/pi}}(h)."""
    from .principal_series import restrict_char_to_F, shell_functional, _chi_pi_power

    model = f.model
    R = model.ring
    if scaling is None:
        scaling = (0, R.one())
    sc = (scaling[0] - 1, scaling[1]) if transported else scaling
    row, radius = shell_functional(model, model.skel.space.identity, sc)
    total = Cyclotomic.rational(0)
    for r, c in f.coeffs.items():
        if r in row:
            total = total + row[r] * c
    if transported:
        total = total * _chi_pi_power(restrict_char_to_F(model.chi), 1)
    return WhittakerValue(QHalfGraded(model.q, total), radius, scaling)


def genericity_profile(space) -> dict[str, bool]:
    """For each square class a: is Lambda_{psi_a} non-zero on the space?"""
    out = {}
    for name, sc in scalings(space.model.ring).items():
        out[name] = any(not whittaker_value(v, sc, space.transported).is_zero() for v in space.basis)
    return out


def kernel_quotient_dim(space, scaling: tuple[int, object] | None = None) -> int:
    """dim of ker(Lambda_{psi_a}) on the space."""
    if not space.basis:
        return 0
    vals = [whittaker_value(v, scaling, space.transported).value for v in space.basis]
    r = rank([[v.c0, v.c1] for v in vals])
    return space.dim - r
