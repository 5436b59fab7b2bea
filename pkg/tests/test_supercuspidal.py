import itertools
from fractions import Fraction

import pytest

from newformlab.characters import unit_group
from newformlab.cli import admissible_etas
from newformlab.cyclotomic import Cyclotomic
from newformlab.formulas import ReprDescriptor, dim_formula
from newformlab.local_rings import make_ring
from newformlab.supercuspidal import (
    MackeyError,
    cuspidal_character,
    mackey_dims,
    packet_taxonomy,
    regular_thetas,
    residue_gl2,
)


def data_for(q, N=9):
    R = make_ring("mixed", q, 1, N)
    return R, [cuspidal_character(R, t) for t in regular_thetas(R)]


@pytest.fixture(scope="module")
def q3():
    return data_for(3)


def norm_sl2(G, values):
    total = sum((v * v.conj() for v in values if not v.is_zero()), Cyclotomic.rational(0))
    return total * Fraction(1, len(G.sl2))


# -- cuspidal data --------------------------------------------------------

@pytest.mark.parametrize("q,orbits,split", [(3, 3, 1), (5, 10, 2)])
def test_regular_theta_counts(q, orbits, split):
    _, data = data_for(q, 4)
    # regular characters of F_{q^2}^x modulo Frobenius: (q^2 - q) / 2
    assert len(data) == orbits == (q * q - q) // 2
    assert sum(d.splits for d in data) == split


@pytest.mark.parametrize("q", [3, 5])
def test_cuspidal_dimensions(q):
    R, data = data_for(q, 4)
    G = residue_gl2(R)
    ident = G.sl2_index[(1, 0, 0, 1)]
    for d in data:
        assert d.dimension == q - 1
        dims = sorted(int(c[ident].rational_value()) for c in d.constituents)
        assert dims == ([(q - 1) // 2] * 2 if d.splits else [q - 1])
        for c in d.constituents:
            assert norm_sl2(G, c) == 1
        if d.splits:
            assert sorted(d.generic_labels) == [0, 1]
            cross = sum((a * b.conj() for a, b in zip(*d.constituents)), Cyclotomic.rational(0))
            assert cross.is_zero()


def test_no_unipotent_invariants(q3):
    R, data = q3
    G = residue_gl2(R)
    for d in data:
        for c in d.constituents:
            s = sum((c[G.sl2_index[(1, b, 0, 1)]] for b in range(3)), Cyclotomic.rational(0))
            assert s.is_zero()


def test_json(q3):
    _, data = q3
    js = data[0].to_json()
    assert js["dimension"] == 2 and js["q"] == 3


# -- Mackey dimensions ----------------------------------------------------

def members(d):
    """(member, constituent, primed) for the packet cut out by d."""
    if not d.splits:
        return [("pi", 0, False), ("pip", 0, True)]
    gen = d.generic_labels.index(1)
    return [("pi1", gen, False), ("pi2", 1 - gen, False), ("pi1p", gen, True), ("pi2p", 1 - gen, True)]


def brute(d, eta, m, tower, constituent, primed, **kw):
    t = tower if not primed else {"K": "Kp", "Kp": "K"}[tower]
    return mackey_dims(d, eta, m, t, constituent, **kw).dim


def test_level_one_vanishes(q3):
    _, data = q3
    for d in data:
        for eta in admissible_etas(d):
            for mem, c, primed in members(d):
                for tower in ("K", "Kp"):
                    assert brute(d, eta, 1, tower, c, primed) == 0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_matches_formulas_q3(q3, m):
    _, data = q3
    for d in data:
        fam = "sc-unram4" if d.splits else "sc-unram2"
        for eta in admissible_etas(d):
            for mem, c, primed in members(d):
                params = (("member", mem),) if d.splits else (("l", 1), ("member", mem))
                desc = ReprDescriptor("SL2", fam, params)
                for tower in ("K", "Kp"):
                    assert brute(d, eta, m, tower, c, primed) == dim_formula(desc, m, tower)


def test_frozen_profiles(q3):
    _, data = q3
    irr = next(d for d in data if not d.splits)
    spl = next(d for d in data if d.splits)
    eta_i, eta_s = admissible_etas(irr)[0], admissible_etas(spl)[0]
    assert [mackey_dims(irr, eta_i, m, "K").dim for m in range(1, 5)] == [0, 0, 2, 2]
    assert [mackey_dims(irr, eta_i, m, "Kp").dim for m in range(1, 5)] == [0, 2, 2, 4]
    assert [mackey_dims(spl, eta_s, m, "K").dim for m in range(1, 5)] == [0, 0, 1, 1]
    assert [mackey_dims(spl, eta_s, m, "Kp").dim for m in range(1, 5)] == [0, 1, 1, 2]


def test_member_symmetry(q3):
    """Constituents share profiles; primed members swap the towers."""
    _, data = q3
    spl = next(d for d in data if d.splits)
    eta = admissible_etas(spl)[0]
    for m in range(1, 5):
        k = [mackey_dims(spl, eta, m, "K", c).dim for c in (0, 1)]
        kp = [mackey_dims(spl, eta, m, "Kp", c).dim for c in (0, 1)]
        assert k[0] == k[1] and kp[0] == kp[1]
        on_K = sorted(brute(spl, eta, m, "K", c, p) for _, c, p in members(spl))
        on_Kp = sorted(brute(spl, eta, m, "Kp", c, p) for _, c, p in members(spl))
        assert on_K == on_Kp


@pytest.mark.parametrize("q,ms", [(3, [1, 2, 3, 4]), (5, [2, 3])])
def test_explicit_tail_shells(q, ms):
    """Shells past m are summed cell by cell and vanish."""
    _, data = data_for(q)
    for d in data[:3]:
        eta = admissible_etas(d)[0]
        for m, tower in itertools.product(ms, ("K", "Kp")):
            a = mackey_dims(d, eta, m, tower)
            b = mackey_dims(d, eta, m, tower, explicit=True)
            assert a.dim == b.dim
            tail = [v for s, v in b.shells.items() if s >= m]
            assert len(tail) >= 2 and not any(tail)


def test_contributions_are_integers(q3):
    _, data = q3
    for d in data:
        eta = admissible_etas(d)[0]
        for c in range(len(d.constituents)):
            res = mackey_dims(d, eta, 4, "Kp", c)
            assert all(isinstance(x.contribution, int) and x.contribution >= 0 for x in res.cells)
            assert sum(x.contribution for x in res.cells) == res.dim
            assert all(x.image_order > 0 for x in res.cells)
            assert res.to_json()["dimension"] == res.dim


def test_errors(q3):
    R, data = q3
    d = data[0]
    eta = admissible_etas(d)[0]
    with pytest.raises(ValueError):
        mackey_dims(d, eta, 2, "Kbar")
    bad = [e for e in unit_group(R, 1).chars() if e not in admissible_etas(d)]
    with pytest.raises(ValueError):
        mackey_dims(d, bad[0], 2)
    high = [e for e in unit_group(R, 2).chars() if e.conductor == 2]
    with pytest.raises(ValueError):
        mackey_dims(d, high[0], 3)
    with pytest.raises(ValueError):
        mackey_dims(d, eta, 9)  # needs precision 10
    assert issubclass(MackeyError, RuntimeError)


def test_taxonomy(q3):
    _, data = q3
    spl = next(d for d in data if d.splits)
    irr = next(d for d in data if not d.splits)
    assert packet_taxonomy(spl)[0].family == "sc-unram4" and packet_taxonomy(spl)[1] == 2
    assert packet_taxonomy(irr)[0].family == "sc-unram2" and packet_taxonomy(irr)[1] == 2
    for l in (1, 2, 3):
        assert packet_taxonomy(ramified_level=l)[1] == 2 * l + 1
    with pytest.raises(ValueError):
        packet_taxonomy()
