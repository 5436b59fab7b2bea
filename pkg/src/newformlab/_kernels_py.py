"""Pure-Python versions of the hot kernels (fallback for the compiled core)."""
from __future__ import annotations

from collections import deque
from typing import Sequence


def orbit_bfs(perms: Sequence[Sequence[int]], n: int, seeds: Sequence[int] | None = None):
    """Orbits of the group generated by permutations of range(n).

    Returns (label, parent, via): ``label[x]`` is the least point of the
    orbit, ``parent[x]`` the BFS predecessor (-1 at orbit roots) and
    ``via[x]`` the generator index with perms[via[x]][parent[x]] == x.
    Points are visited in increasing order of orbit roots.  With ``seeds``
    only the orbits of those points are explored (others keep label -1).
    """
    label = [-1] * n
    parent = [-1] * n
    via = [-1] * n
    roots = range(n) if seeds is None else seeds
    for r in roots:
        if label[r] != -1:
            continue
        label[r] = r
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for s, perm in enumerate(perms):
                y = perm[x]
                if label[y] == -1:
                    label[y] = r
                    parent[y] = x
                    via[y] = s
                    queue.append(y)
    return label, parent, via


def prepare_table(tab):
    """Tables are used as nested lists here; nothing to convert."""
    return tab


def subgroup_closure(gens_a: Sequence[int], gens_b: Sequence[int],
                     tab_a: Sequence[Sequence[int]], tab_b: Sequence[Sequence[int]],
                     id_a: int, id_b: int):
    """Closure of pairs (a, b) in a direct product under componentwise
    multiplication given by the two tables.  Returns the member list."""
    nb = len(tab_b)
    start = id_a * nb + id_b
    seen = {start}
    out = [(id_a, id_b)]
    queue = deque([(id_a, id_b)])
    gens = list(zip(gens_a, gens_b))
    while queue:
        a, b = queue.popleft()
        for ga, gb in gens:
            na, nb_ = tab_a[a][ga], tab_b[b][gb]
            k = na * nb + nb_
            if k not in seen:
                seen.add(k)
                out.append((na, nb_))
                queue.append((na, nb_))
    return out
