"""Acceptance criteria 1-10, checked against the library with frozen values.

Each test prints one ``criterion N: PASS|FAIL (...)`` line.
"""
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from newformlab.characters import (
    abs_char,
    legendre_char,
    omega_EF,
    parse_char_literal,
    unit_group,
    unramified_char,
)
from newformlab.cli import admissible_etas, choose_ram_chi, choose_u11_chi, level_one_data
from newformlab.cyclotomic import QHalfGraded, RootOfUnity
from newformlab.formulas import (
    ReprDescriptor,
    conductor_formula,
    depth_relations,
    descriptor_sweep,
    dim_formula,
    first_nonzero,
    genericity_assignment,
)
from newformlab.local_rings import make_quad_ext, make_ring
from newformlab.principal_series import (
    eta_conductor_search,
    fixed_space,
    packet_split,
    steinberg_subspace,
    theta_criterion_space,
)
from newformlab.supercuspidal import mackey_dims
from newformlab.whittaker import genericity_profile, kernel_quotient_dim, whittaker_value

D = ReprDescriptor


@pytest.fixture
def report(capsys):
    """Run a criterion body, print its verdict line, then re-raise any failure."""

    def run(n, budget, body):
        t0 = time.perf_counter()
        err = None
        try:
            detail = body()
        except AssertionError as exc:
            err, detail = exc, f"assertion failed: {exc}"
        dt = time.perf_counter() - t0
        ok = err is None and dt < budget
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {dt:.1f}s of {budget}s)")
        if err is not None:
            raise err
        assert dt < budget, f"criterion {n} took {dt:.1f}s"

    return run


def pair(sp):
    return sp.component1.dim, sp.component2.dim


def test_criterion_1_unramified(report):
    def body():
        for q in (3, 5):
            R = make_ring("mixed", q, 1, 6)
            chi = parse_char_literal("trivial", R, 0)
            dims = [fixed_space(chi, None, m).dim for m in range(4)]
            assert dims == [1, 2, 4, 6]
            assert dims[1:] == [2 * m for m in range(1, 4)]
            assert dims == [dim_formula(D("SL2", "unram-ps"), m) for m in range(4)]
        return "q=3,5 dims 1,2,4,6"

    report(1, 30, body)


def test_criterion_2_steinberg(report):
    def body():
        R = make_ring("mixed", 3, 1, 6)
        dims = [steinberg_subspace(R, m).dim for m in range(4)]
        assert dims == [0, 1, 3, 5]
        assert dims[1:] == [2 * m - 1 for m in range(1, 4)]
        assert dims == [dim_formula(D("SL2", "steinberg"), m) for m in range(4)]
        return "q=3 dims 0,1,3,5"

    report(2, 30, body)


def test_criterion_3_ramified(report):
    def body():
        R5 = make_ring("mixed", 5, 1, 6)
        chi = choose_ram_chi(R5, 1, False)
        assert chi.unit.conductor == 1 and chi.unit.order == 4
        dims = [fixed_space(chi, chi.unit, m).dim for m in range(4)]
        assert dims == [0, 1, 3, 5]
        assert dims[1:] == [2 * (m - 1) + 1 for m in range(1, 4)]
        cs = eta_conductor_search(chi, "SL2", 2)
        assert cs.conductor == 1
        assert set(cs.achieving) == {chi.unit.lift_to(2), chi.unit.inverse().lift_to(2)}
        R3 = make_ring("mixed", 3, 1, 6)
        leg = legendre_char(R3, 1)
        dims2 = [fixed_space(leg, leg.unit, m).dim for m in range(3)]
        assert dims2 == [0, 2, 4]
        assert set(eta_conductor_search(leg, "SL2", 2).achieving) == {leg.unit.lift_to(2)}
        return "q=5 dims 0,1,3,5 eta={chi,chi^-1}; q=3 chi^2=1 dims 0,2,4"

    report(3, 120, body)


def test_criterion_4_sl2_packets(report):
    def body():
        R = make_ring("mixed", 3, 1, 6)
        leg = legendre_char(R, 1)
        assert [pair(packet_split(leg, leg.unit, m)) for m in range(4)] == [(0, 0), (1, 1), (2, 2), (3, 3)]
        w = omega_EF(R)
        for tower, spherical in (("K", 0), ("Kp", 1)):
            rows = [pair(packet_split(w, None, m, tower)) for m in range(4)]
            # the spherical member is the one with a fixed vector at m = 0
            assert rows[0][spherical] == 1 and rows[0][1 - spherical] == 0
            for r in range(1, 4):
                assert rows[r][spherical] == 2 * (r // 2) + 1
                assert rows[r][1 - spherical] == 2 * ((r - 1) // 2) + 1
        return "ramified (m,m); unramified floor formulas on K and Kp"

    report(4, 120, body)


def test_criterion_5_u11_principal_series(report):
    def body():
        R = make_ring("mixed", 3, 1, 6)
        E = make_quad_ext(R)
        exc = choose_u11_chi(R, 0, exceptional=True)
        rows = [fixed_space(exc, exc.unit, m, "Kbar").dim for m in range(4)]
        assert rows == [0, 2, 3, 4] and rows[1:] == [m + 1 for m in range(1, 4)]
        w = unramified_char(E, RootOfUnity(2, 1))
        for m in range(4):
            a, b = pair(packet_split(w, None, m, "Kbar")), pair(packet_split(w, None, m, "Kbarp"))
            assert a == ((m + 2) // 2, (m + 1) // 2)
            assert b == ((m + 1) // 2, (m + 2) // 2)
        for c in (0, 1):
            chi = choose_u11_chi(R, c)
            eta = chi.unit if c else None
            for tower in ("Kbar", "Kbarp"):
                assert [fixed_space(chi, eta, m, tower).dim for m in range(4)] == [max(m - c + 1, 0)
                                                                                  for m in range(4)]
        chi = choose_u11_chi(R, 1)
        u = chi.unit.lift_to(1)
        sinv = u.group.char_from_function(lambda x: u(E.conj(x)).inverse(), check=False)
        cs = eta_conductor_search(chi, "U11", 1)
        assert cs.conductor == 1 and set(cs.achieving) == {u, sinv}
        return "q=3 m=0..3 exceptional, packet, generic c=0,1; achieving set"

    report(5, 600, body)


def test_criterion_6_theta(report):
    def body():
        R = make_ring("mixed", 3, 1, 6)
        E = make_quad_ext(R)
        configs = [choose_u11_chi(R, 0), choose_u11_chi(R, 1), choose_u11_chi(R, 0, exceptional=True),
                   unramified_char(E, RootOfUnity(2, 1))]
        count = 0
        for chi in configs:
            eta = chi.unit if chi.unit.conductor else unit_group(E, 1).chars()[0]
            for m in range(4):
                tc = theta_criterion_space(chi, eta, m)
                assert tc.equal and tc.theta_space.dim == tc.direct_space.dim
                count += 1
        return f"{count} configurations, m=0..3, spans equal"

    report(6, 600, body)


def test_criterion_7_whittaker(report):
    def body():
        for q in (3, 5):
            R = make_ring("mixed", q, 1, 6)
            for lit in ("trivial", "unramified:zeta=4:1", "unramified:zeta=3:1"):
                chi = parse_char_literal(lit, R, 0)
                v = whittaker_value(fixed_space(chi, None, 0).basis[0]).value
                assert v == QHalfGraded(q, 1 - chi.at_pi.to_cyclotomic() * Fraction(1, q))
        R = make_ring("mixed", 3, 1, 9)
        assert genericity_profile(steinberg_subspace(R, 1))["1"]
        leg = legendre_char(R, 1)
        assert genericity_profile(fixed_space(leg, leg.unit, 1))["1"]
        R5 = make_ring("mixed", 5, 1, 6)
        rchi = choose_ram_chi(R5, 1, False)
        assert genericity_profile(fixed_space(rchi, rchi.unit, 1))["1"]

        def check(assignment, profiles):
            for a, mem in assignment.items():
                for name, prof in profiles.items():
                    assert prof[a] == (str(mem) == name), (a, name)

        sp = packet_split(leg, leg.unit, 1)
        check(genericity_assignment(D("SL2", "ram-packet", (("member", 1),))),
              {"1": genericity_profile(sp.component1), "2": genericity_profile(sp.component2)})
        w = omega_EF(R)
        check(genericity_assignment(D("SL2", "unram-packet", (("member", 1),))),
              {"1": genericity_profile(packet_split(w, None, 0, "K").component1),
               "2": genericity_profile(packet_split(w, None, 0, "Kp").component2)})
        E = make_quad_ext(R)
        u = unramified_char(E, RootOfUnity(2, 1))
        check(genericity_assignment(D("U11", "u11-packet", (("member", 1),))),
              {"1": genericity_profile(packet_split(u, None, 0, "Kbar").component1),
               "2": genericity_profile(packet_split(u, None, 0, "Kbarp").component2)})
        exc = choose_u11_chi(R, 0, exceptional=True)
        sp = fixed_space(exc, exc.unit, 1, "Kbar")
        assert sp.dim == 2 and kernel_quotient_dim(sp) == 1
        return "1-chi(pi)/q exact; packet assignments; exceptional kernel 1"

    report(7, 300, body)


def _sc_members(d):
    if not d.splits:
        return [("pi", 0, False), ("pip", 0, True)]
    gen = d.generic_labels.index(1)
    return [("pi1", gen, False), ("pi2", 1 - gen, False), ("pi1p", gen, True), ("pi2p", 1 - gen, True)]


def test_criterion_8_level_one_supercuspidals(report):
    def body():
        cells = 0
        for q in (3, 5):
            R = make_ring("mixed", q, 1, 9)
            for split in (False, True):
                d = level_one_data(R, split)
                fam = "sc-unram4" if split else "sc-unram2"
                for eta in admissible_etas(d):
                    for mem, c, primed in _sc_members(d):
                        params = (("member", mem),) if split else (("l", 1), ("member", mem))
                        desc = D("SL2", fam, params)
                        for tower in ("K", "Kp"):
                            t = tower if not primed else {"K": "Kp", "Kp": "K"}[tower]
                            assert mackey_dims(d, eta, 1, t, c).dim == 0
                            for m in range(2, 5):
                                got = mackey_dims(d, eta, m, t, c).dim
                                k = m - 1
                                ceil = (tower == "Kp") != primed
                                want = -(-k // 2) if ceil else k // 2
                                if not split:
                                    want *= 2
                                assert got == want == dim_formula(desc, m, tower), (q, mem, tower, m)
                                cells += 1
        return f"{cells} cells, q=3,5, m=2..4, both towers, all admissible eta"

    report(8, 600, body)


def test_criterion_9_formula_sweep(report):
    def body():
        sweep = descriptor_sweep(3, 3)
        for d in sweep:
            info = conductor_formula(d)
            assert first_nonzero(d, 8) == info.conductor, d.label()
            dr = depth_relations(d)
            c = dr.conductor
            if d.group == "SL2" and d.family.startswith("sc"):
                assert dr.depth == max(Fraction(c - 2, 2), 0)
            elif d.group == "SL2":
                assert dr.depth == max(c - 1, 0)
            elif d.family.startswith("u11-sc"):
                assert dr.minimal_depth == Fraction(c - 2, 2)
                assert dr.conductor_equal
        return f"{len(sweep)} descriptors, m<=8"

    report(9, 5, body)


PROPERTY_NODES = [
    "tests/test_local_rings.py::test_ring_axioms",
    "tests/test_characters.py::test_orthogonality_exhaustive_q3",
    "tests/test_characters.py::test_orthogonality_unitary_q3",
    "tests/test_whittaker.py::test_stabilization_against_brute_sum",
    "tests/test_principal_series.py::test_monotone_growth",
    "tests/test_principal_series.py::test_packet_direct_sum",
    "tests/test_supercuspidal.py::test_contributions_are_integers",
]


def test_criterion_10_property_suites(report):
    root = Path(__file__).resolve().parent.parent

    def body():
        res = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_NODES],
                             cwd=root, capture_output=True, text=True)
        tail = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else res.stderr[-200:]
        assert res.returncode == 0, tail
        assert "failed" not in tail
        return tail.strip("= ")

    report(10, 600, body)
