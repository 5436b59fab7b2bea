"""Compiled vs pure-Python kernels on the workloads the library generates.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import timeit

from newformlab import _kernels_py
from newformlab.groups import SubgroupSpec, coset_space, subgroup_generators
from newformlab.local_rings import make_ring
from newformlab.supercuspidal import residue_gl2

try:
    from newformlab import _kernels as _kernels_c
except ImportError:  # pragma: no cover
    _kernels_c = None


def orbit_workload(q: int = 5, m: int = 5):
    """K_m acting on the lines of K_0 / K_M: the principal-series skeleton."""
    R = make_ring("mixed", q, 1, m + 2)
    space = coset_space("SL2", R, m, m)
    gens = subgroup_generators(SubgroupSpec("B0", 0), "SL2", R, m)
    perms = [space.perm(g) for g in gens]
    return perms, len(space.transversal)


def closure_workload(q: int = 7, ngens: int = 3, seed: int = 0):
    """Random generators in SL2(F_q) x F_q^x: the Mackey image groups."""
    R = make_ring("mixed", q, 1, 2)
    G = residue_gl2(R)
    F = G.F
    units = list(range(1, q))
    uidx = {x: i for i, x in enumerate(units)}
    utab = [[uidx[F.mul(x, y)] for y in units] for x in units]
    rng = random.Random(seed)
    ga = [rng.randrange(len(G.sl2)) for _ in range(ngens)]
    gb = [rng.randrange(len(units)) for _ in range(ngens)]
    return ga, gb, G.sl2_table, utab, G.sl2_index[(1, 0, 0, 1)], uidx[1]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    perms, n = orbit_workload()
    cl = closure_workload()
    mods = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    ref = None
    for name, mod in mods:
        cl_m = (cl[0], cl[1], mod.prepare_table(cl[2]), mod.prepare_table(cl[3]), cl[4], cl[5])
        out = (mod.orbit_bfs(perms, n), sorted(mod.subgroup_closure(*cl_m)))
        if ref is None:
            ref = out
        assert tuple(map(list, out[0])) == tuple(map(list, ref[0])) and out[1] == ref[1], "kernels disagree"
        t_orb = min(timeit.repeat(lambda: mod.orbit_bfs(perms, n), number=20, repeat=args.repeat)) / 20
        t_cl = min(timeit.repeat(lambda: mod.subgroup_closure(*cl_m), number=5, repeat=args.repeat)) / 5
        print(f"{name:7s} orbit_bfs({n} points, {len(perms)} gens) {t_orb * 1e3:8.3f} ms   "
              f"subgroup_closure(|H|={len(out[1])}) {t_cl * 1e3:8.3f} ms")
    if _kernels_c is None:
        print("compiled kernels not built; run `python3 -m pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
