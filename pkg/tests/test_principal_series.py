import itertools

import pytest

from newformlab.characters import (
    FieldChar,
    abs_char,
    legendre_char,
    omega_EF,
    parse_char_literal,
    unit_group,
    unramified_char,
)
from newformlab.cli import choose_ram_chi, choose_u11_chi
from newformlab.cyclotomic import Cyclotomic, RootOfUnity
from newformlab.groups import mat_reduce
from newformlab.linalg import rank
from newformlab.local_rings import PrecisionError, make_quad_ext, make_ring
from newformlab.principal_series import (
    CentralCharacterError,
    direct_fixed_dim,
    eta_conductor_search,
    fixed_space,
    packet_split,
    restrict_char_to_F,
    steinberg_subspace,
    theta_criterion_space,
)


@pytest.fixture(scope="module")
def R3():
    return make_ring("mixed", 3, 1, 6)


@pytest.fixture(scope="module")
def R5():
    return make_ring("mixed", 5, 1, 6)


def sl2_chars(R):
    """chi with c(chi) <= 1 and chi(pi) = +-1, plus |.|."""
    out = [abs_char(R)]
    for u in unit_group(R, 1).chars():
        for s in (0, 1):
            out.append(FieldChar(u, RootOfUnity(2, s)))
    return out


# -- dimensions -------------------------------------------------------------

@pytest.mark.parametrize("tower", ["K", "Kp"])
def test_unramified_trivial(R3, tower):
    chi = parse_char_literal("trivial", R3, 0)
    assert [fixed_space(chi, None, m, tower).dim for m in range(4)] == [1, 2, 4, 6]


def test_unramified_q5(R5):
    chi = parse_char_literal("unramified:zeta=3:1", R5, 0)
    assert [fixed_space(chi, None, m).dim for m in range(4)] == [1, 2, 4, 6]


def test_unramified_nontrivial_m0(R3):
    chi = parse_char_literal("unramified:zeta=4:1", R3, 0)
    assert fixed_space(chi, None, 0).dim == 1
    assert fixed_space(chi, None, 2).dim == 4


def test_steinberg(R3):
    assert [steinberg_subspace(R3, m).dim for m in range(4)] == [0, 1, 3, 5]


def test_ramified_q5(R5):
    chi = choose_ram_chi(R5, 1, False)
    assert chi.unit.order == 4
    assert [fixed_space(chi, chi.unit, m).dim for m in range(4)] == [0, 1, 3, 5]


def test_ramified_chi2_trivial_q3(R3):
    chi = legendre_char(R3, 1)
    assert [fixed_space(chi, chi.unit, m).dim for m in range(3)] == [0, 2, 4]


def test_u11_exceptional_m2(R3):
    chi = choose_u11_chi(R3, 0, exceptional=True)
    assert restrict_char_to_F(chi).conductor == 0 and chi.conductor >= 1
    assert fixed_space(chi, chi.unit, 2, "Kbar").dim == 3
    assert [fixed_space(chi, chi.unit, m, "Kbar").dim for m in (1, 3)] == [2, 4]


def test_u11_ps_generic(R3):
    for c in (0, 1):
        chi = choose_u11_chi(R3, c)
        eta = chi.unit if c else None
        want = [max(m - c + 1, 0) for m in range(3)]
        assert [fixed_space(chi, eta, m, "Kbar").dim for m in range(3)] == want
        assert [fixed_space(chi, eta, m, "Kbarp").dim for m in range(3)] == want


def test_precision_guard(R3):
    chi = parse_char_literal("trivial", make_ring("mixed", 3, 1, 2), 0)
    with pytest.raises(PrecisionError):
        fixed_space(chi, None, 3)


def test_central_obstruction_exhaustive(R3):
    """eta(-1) != chi(-1) forces the zero space: the solver refuses it."""
    minus = R3.neg(R3.one())
    for chi in sl2_chars(R3):
        for eta in unit_group(R3, 2).chars():
            if chi.unit(minus) != eta(minus):
                with pytest.raises(CentralCharacterError):
                    fixed_space(chi, eta, 2)
                assert direct_fixed_dim(chi, eta, 2) == 0


# -- transport versus the conjugated subgroup -------------------------------

@pytest.mark.parametrize("m", [0, 1, 2])
def test_transport_matches_direct(R3, m):
    minus = R3.neg(R3.one())
    for chi in sl2_chars(R3):
        for eta in unit_group(R3, max(m, 1)).chars():
            if chi.unit(minus) != eta(minus):
                continue
            for tower in ("K", "Kp"):
                assert fixed_space(chi, eta, m, tower).dim == direct_fixed_dim(chi, eta, m, tower), (chi, eta, tower)


def test_transport_matches_direct_u11(R3):
    chi = choose_u11_chi(R3, 0, exceptional=True)
    for m in (1, 2):
        for tower in ("Kbar", "Kbarp"):
            assert fixed_space(chi, chi.unit, m, tower).dim == direct_fixed_dim(chi, chi.unit, m, tower)


# -- monotone growth ----------------------------------------------------------

@pytest.mark.parametrize("m", [0, 1, 2])
def test_monotone_growth(R3, m):
    """Each level-m vector, read as a function on K_0, is a level-(m+1) vector."""
    for chi in sl2_chars(R3):
        eta = chi.unit if chi.conductor <= m else None
        if eta is None and chi.conductor:
            continue
        try:
            low = fixed_space(chi, eta, m)
        except CentralCharacterError:
            continue
        high = fixed_space(chi, eta, m + 1)
        assert low.dim <= high.dim
        hm, lm = high.model, low.model
        C = hm.C
        for v in low.basis:
            coords = {r: v.value_raw(mat_reduce(C, hm.skel.g_rep[r], lm.M)) for r in hm.compatible}
            for k in hm.skel.space.transversal:
                hit = hm.root_at(k)
                rebuilt = Cyclotomic.rational(0) if hit is None else coords[hit[0]] * hit[1].to_cyclotomic()
                assert v.value_raw(mat_reduce(C, k, lm.M)) == rebuilt
        rows = [[Cyclotomic.rational(int(r == s)) for s in hm.compatible] for r in hm.compatible]
        assert rank(rows) == high.dim


# -- conductor search -----------------------------------------------------------

def test_conductor_ramified_q5(R5):
    chi = choose_ram_chi(R5, 1, False)
    cs = eta_conductor_search(chi, "SL2", 2)
    assert cs.conductor == 1 and cs.status == "ok"
    want = {chi.unit.lift_to(2), chi.unit.inverse().lift_to(2)}
    assert set(cs.achieving) == want and len(want) == 2


def test_conductor_legendre_q3(R3):
    chi = legendre_char(R3, 1)
    cs = eta_conductor_search(chi, "SL2", 2)
    assert cs.conductor == 1
    assert set(cs.achieving) == {chi.unit.lift_to(2)}


def test_conductor_steinberg(R3):
    cs = eta_conductor_search(abs_char(R3), "SL2", 2, rep="steinberg")
    assert cs.conductor == 1


def test_conductor_bound_reached(R3):
    chi = legendre_char(R3, 1)
    cs = eta_conductor_search(chi, "SL2", 0)
    assert cs.conductor is None and cs.status == "bound reached"


def test_conductor_u11(R3):
    E = make_quad_ext(R3)
    chi = choose_u11_chi(R3, 1)
    cs = eta_conductor_search(chi, "U11", 1)
    u = chi.unit.lift_to(1)
    sconj_inv = u.group.char_from_function(lambda x: u(E.conj(x)).inverse(), check=False)
    assert cs.conductor == 1
    assert set(cs.achieving) == {u, sconj_inv}


# -- packets ----------------------------------------------------------------------

def test_ramified_packet_m2(R3):
    chi = legendre_char(R3, 1)
    sp = packet_split(chi, chi.unit, 2)
    assert (sp.component1.dim, sp.component2.dim) == (2, 2)
    assert [tuple(d.dim for d in (s.component1, s.component2))
            for s in (packet_split(chi, chi.unit, m) for m in range(4))] == [(0, 0), (1, 1), (2, 2), (3, 3)]


def test_unramified_packet(R3):
    chi = omega_EF(R3)
    assert (lambda s: (s.component1.dim, s.component2.dim))(packet_split(chi, None, 0)) == (1, 0)
    K = [(s.component1.dim, s.component2.dim) for s in (packet_split(chi, None, m, "K") for m in range(4))]
    Kp = [(s.component1.dim, s.component2.dim) for s in (packet_split(chi, None, m, "Kp") for m in range(4))]
    assert K == [(1, 0), (1, 1), (3, 1), (3, 3)]
    assert Kp == [(0, 1), (1, 1), (1, 3), (3, 3)]


def test_u11_packet_m3(R3):
    E = make_quad_ext(R3)
    chi = unramified_char(E, RootOfUnity(2, 1))
    sp = packet_split(chi, None, 3, "Kbar")
    assert (sp.component1.dim, sp.component2.dim) == (2, 2)
    for m in range(3):
        s1, s2 = packet_split(chi, None, m, "Kbar"), packet_split(chi, None, m, "Kbarp")
        assert (s1.component1.dim, s1.component2.dim) == ((m + 2) // 2, (m + 1) // 2)
        assert (s2.component1.dim, s2.component2.dim) == ((m + 1) // 2, (m + 2) // 2)


def test_packet_direct_sum(R3):
    for chi, eta in ((legendre_char(R3, 1), legendre_char(R3, 1).unit), (omega_EF(R3), None)):
        for m, tower in itertools.product(range(3), ("K", "Kp")):
            sp = packet_split(chi, eta, m, tower)
            total = fixed_space(chi, eta, m, tower)
            assert sp.component1.dim + sp.component2.dim == total.dim
            rows = sp.component1.matrix() + sp.component2.matrix()
            assert (rank(rows) if rows else 0) == total.dim


def test_packet_rejects_non_quadratic(R3):
    with pytest.raises(ValueError):
        packet_split(parse_char_literal("unramified:zeta=4:1", R3, 0), None, 1)


# -- theta criterion ----------------------------------------------------------------

@pytest.mark.parametrize("m", [0, 1, 2])
def test_theta_criterion(R3, m):
    E = make_quad_ext(R3)
    for chi in (choose_u11_chi(R3, 0), choose_u11_chi(R3, 1), choose_u11_chi(R3, 0, exceptional=True),
                unramified_char(E, RootOfUnity(2, 1))):
        eta = chi.unit if chi.unit.conductor else unit_group(E, 1).chars()[0]
        tc = theta_criterion_space(chi, eta, m)
        assert tc.equal
        assert tc.theta_space.dim == tc.direct_space.dim
