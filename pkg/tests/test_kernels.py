import random

import pytest
from hypothesis import given, strategies as st

from newformlab import _kernels_py, kernels
from newformlab.groups import SubgroupSpec, coset_space, subgroup_generators
from newformlab.local_rings import make_ring

_kernels_c = pytest.importorskip("newformlab._kernels")


def test_compiled_backend_selected():
    assert kernels.BACKEND == "cython"


def perms_strategy():
    return st.integers(1, 12).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.permutations(list(range(n))), min_size=0, max_size=3)))


@given(perms_strategy())
def test_orbit_bfs_agrees(data):
    n, perms = data
    a = _kernels_py.orbit_bfs(perms, n)
    b = _kernels_c.orbit_bfs(perms, n)
    assert tuple(map(list, a)) == tuple(map(list, b))
    label, parent, via = a
    for x in range(n):
        if parent[x] != -1:
            assert perms[via[x]][parent[x]] == x
        assert label[label[x]] == label[x]


def test_orbit_bfs_seeds_and_real_workload():
    R = make_ring("mixed", 3, 1, 4)
    space = coset_space("SL2", R, 2, 2)
    gens = subgroup_generators(SubgroupSpec("B0", 0), "SL2", R, 2)
    perms = [space.perm(g) for g in gens]
    n = len(space.transversal)
    full = _kernels_py.orbit_bfs(perms, n)
    assert len(set(full[0])) == 4
    for seeds in (None, [n - 1, 0]):
        a = _kernels_py.orbit_bfs(perms, n, seeds)
        b = _kernels_c.orbit_bfs(perms, n, seeds)
        assert tuple(map(list, a)) == tuple(map(list, b))
    # seeded runs cover exactly the orbits of the seeds
    want = {x for x in range(n) if full[0][x] in {full[0][n - 1], full[0][0]}}
    assert {x for x in range(n) if a[0][x] != -1} == want


@pytest.mark.parametrize("seed", range(5))
def test_subgroup_closure_agrees(seed):
    rng = random.Random(seed)
    na, nb = 6, 4
    # Z/6 x Z/4 with random generator pairs
    tab_a = [[(x + y) % na for y in range(na)] for x in range(na)]
    tab_b = [[(x + y) % nb for y in range(nb)] for x in range(nb)]
    ga = [rng.randrange(na) for _ in range(2)]
    gb = [rng.randrange(nb) for _ in range(2)]
    py = sorted(_kernels_py.subgroup_closure(ga, gb, tab_a, tab_b, 0, 0))
    cy = sorted(_kernels_c.subgroup_closure(ga, gb, _kernels_c.prepare_table(tab_a),
                                            _kernels_c.prepare_table(tab_b), 0, 0))
    assert py == cy
    assert (0, 0) in py and len(py) == len(set(py))
    assert (na * nb) % len(py) == 0
