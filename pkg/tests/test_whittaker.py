from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from newformlab.characters import (
    AdditivePsi,
    legendre_char,
    omega_EF,
    parse_char_literal,
    psi_eval,
    unramified_char,
)
from newformlab.cli import choose_ram_chi, choose_u11_chi
from newformlab.cyclotomic import QHalfGraded, RootOfUnity
from newformlab.groups import GrpElem
from newformlab.local_rings import RElem, make_quad_ext, make_ring
from newformlab.principal_series import evaluate, fixed_space, packet_split, steinberg_subspace
from newformlab.whittaker import genericity_profile, kernel_quotient_dim, scalings, whittaker_value


@pytest.fixture(scope="module")
def R3():
    return make_ring("mixed", 3, 1, 9)


def brute_lambda(f, scaling, r, transported=False, y=None):
    """sum over x in P^{-r}/O of f(w n(x) n(y)) conj(psi_a(x)); f(w n(.)) is O-periodic."""
    model = f.model
    R = model.ring
    psi = AdditivePsi(R, scaling[0], scaling[1])
    one, zero = R.elem(1), R.elem(0)
    total = QHalfGraded(R.q, 0)
    for t in range(R.q**r):
        x = RElem(R, R.from_int(t), -r)
        g = GrpElem("SL2", zero, -one, one, x)
        if y is not None:
            g = g * GrpElem("SL2", one, y, zero, one)
        z = psi_eval(psi, x).inverse()
        total = total + evaluate(f, g, transported) * QHalfGraded(R.q, z.to_cyclotomic())
    return total


UNRAMIFIED = ["trivial", "unramified:zeta=4:1", "unramified:zeta=3:1", "unramified:zeta=6:5"]


@pytest.mark.parametrize("lit", UNRAMIFIED)
@pytest.mark.parametrize("q", [3, 5])
def test_unramified_newform_value(lit, q):
    R = make_ring("mixed", q, 1, 6)
    chi = parse_char_literal(lit, R, 0)
    f = fixed_space(chi, None, 0).basis[0]
    want = 1 - chi.at_pi.to_cyclotomic() * Fraction(1, q)
    assert whittaker_value(f).value == QHalfGraded(q, want)


def test_unramified_trivial_two_thirds(R3):
    v = whittaker_value(fixed_space(parse_char_literal("trivial", R3, 0), None, 0).basis[0]).value
    assert v.c1.is_zero() and v.c0.rational_value() == Fraction(2, 3)


def _spaces(R):
    legendre = legendre_char(R, 1)
    return [
        ("unram m=0", fixed_space(parse_char_literal("unramified:zeta=4:1", R, 0), None, 0)),
        ("unram m=1 Kp", fixed_space(parse_char_literal("trivial", R, 0), None, 1, "Kp")),
        ("steinberg m=1", steinberg_subspace(R, 1)),
        ("ramified m=1", fixed_space(legendre, legendre.unit, 1)),
        ("ramified m=2 Kp", fixed_space(legendre, legendre.unit, 2, "Kp")),
    ]


@pytest.mark.parametrize("idx", range(5))
def test_stabilization_against_brute_sum(R3, idx):
    name, space = _spaces(R3)[idx]
    for sc in scalings(R3).values():
        for f in space.basis:
            wv = whittaker_value(f, sc, space.transported)
            # alpha-transport rescales x by pi, so primed vectors reach one shell further
            r0 = max(wv.radius, 1) + int(space.transported)
            vals = [brute_lambda(f, sc, r, space.transported) for r in (r0, r0 + 1, r0 + 2)]
            assert vals[0] == vals[1] == vals[2], name
            assert vals[0] == wv.value, name


def test_equivariance(R3):
    chi = parse_char_literal("trivial", R3, 0)
    f = fixed_space(chi, None, 1).basis[0]
    psi = AdditivePsi(R3)
    base = brute_lambda(f, (0, R3.one()), 3)
    assert not base.is_zero()
    for t in range(1, 3):
        y = RElem(R3, R3.from_int(t), -1)
        shifted = brute_lambda(f, (0, R3.one()), 3, y=y)
        assert shifted == base * QHalfGraded(3, psi_eval(psi, y).to_cyclotomic())


@pytest.fixture(scope="module")
def unram_m2(R3):
    return fixed_space(parse_char_literal("trivial", R3, 0), None, 2)


coef = st.fractions(min_value=-5, max_value=5, max_denominator=3)


@given(coef, coef, st.integers(0, 3), st.integers(0, 3))
def test_linearity(unram_m2, c1, c2, i, j):
    f1, f2 = unram_m2.basis[i], unram_m2.basis[j]
    for sc in scalings(unram_m2.model.ring).values():
        lhs = whittaker_value(f1.scale(c1) + f2.scale(c2), sc).value
        rhs = whittaker_value(f1, sc).value * c1 + whittaker_value(f2, sc).value * c2
        assert lhs == rhs


# -- verdicts -------------------------------------------------------------

def test_steinberg_generic(R3):
    assert genericity_profile(steinberg_subspace(R3, 1)) == {"1": True, "eps": True, "pi": True, "eps*pi": True}


def test_ramified_newform(R3):
    R5 = make_ring("mixed", 5, 1, 6)
    chi = choose_ram_chi(R5, 1, False)
    sp = fixed_space(chi, chi.unit, 1)
    assert sp.dim == 1 and genericity_profile(sp)["1"]
    leg = legendre_char(R3, 1)
    assert genericity_profile(fixed_space(leg, leg.unit, 1))["1"]


def test_unramified_packet_profiles(R3):
    sp = packet_split(omega_EF(R3), None, 0)
    assert sp.component1.dim == 1
    assert genericity_profile(sp.component1) == {"1": True, "eps": True, "pi": False, "eps*pi": False}
    sp1 = packet_split(omega_EF(R3), None, 0, "Kp")
    assert genericity_profile(sp1.component2) == {"1": False, "eps": False, "pi": True, "eps*pi": True}


def test_ramified_packet_profiles(R3):
    leg = legendre_char(R3, 1)
    sp = packet_split(leg, leg.unit, 1)
    assert genericity_profile(sp.component1) == {"1": True, "eps": False, "pi": True, "eps*pi": False}
    assert genericity_profile(sp.component2) == {"1": False, "eps": True, "pi": False, "eps*pi": True}


def test_u11_exceptional_kernel(R3):
    chi = choose_u11_chi(R3, 0, exceptional=True)
    sp = fixed_space(chi, chi.unit, 1, "Kbar")
    assert sp.dim == 2
    assert kernel_quotient_dim(sp) == 1
    assert genericity_profile(sp)["1"]


def test_u11_packet_profiles(R3):
    E = make_quad_ext(R3)
    chi = unramified_char(E, RootOfUnity(2, 1))
    a = packet_split(chi, None, 0, "Kbar")
    b = packet_split(chi, None, 0, "Kbarp")
    assert (a.component1.dim, a.component2.dim, b.component1.dim, b.component2.dim) == (1, 0, 0, 1)
    assert genericity_profile(a.component1) == {"1": True, "eps": True, "pi": False, "eps*pi": False}
    assert genericity_profile(b.component2) == {"1": False, "eps": False, "pi": True, "eps*pi": True}


def test_empty_kernel(R3):
    leg = legendre_char(R3, 1)
    assert kernel_quotient_dim(fixed_space(leg, leg.unit, 0)) == 0
