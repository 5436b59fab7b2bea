# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled orbit and closure kernels; same contracts as _kernels_py."""
import numpy as np
cimport numpy as cnp


def prepare_table(tab):
    """Convert a multiplication table once so repeated closures skip the copy."""
    return np.ascontiguousarray(np.asarray(tab, dtype=np.int64))


def orbit_bfs(perms, Py_ssize_t n, seeds=None):
    cdef Py_ssize_t k = len(perms)
    cdef cnp.int64_t[:, ::1] P = np.ascontiguousarray(np.asarray(perms, dtype=np.int64).reshape(k, n))
    cdef cnp.int64_t[::1] label = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] via = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t head, tail, x, y, s, r, i
    cdef cnp.int64_t[::1] roots = (np.arange(n, dtype=np.int64) if seeds is None
                                   else np.asarray(seeds, dtype=np.int64))
    for i in range(roots.shape[0]):
        r = roots[i]
        if label[r] != -1:
            continue
        label[r] = r
        head = 0
        tail = 1
        queue[0] = r
        while head < tail:
            x = queue[head]
            head += 1
            for s in range(k):
                y = P[s, x]
                if label[y] == -1:
                    label[y] = r
                    parent[y] = x
                    via[y] = s
                    queue[tail] = y
                    tail += 1
    return np.asarray(label).tolist(), np.asarray(parent).tolist(), np.asarray(via).tolist()


def subgroup_closure(gens_a, gens_b, tab_a, tab_b, Py_ssize_t id_a, Py_ssize_t id_b):
    cdef cnp.int64_t[:, ::1] A = np.ascontiguousarray(np.asarray(tab_a, dtype=np.int64))
    cdef cnp.int64_t[:, ::1] B = np.ascontiguousarray(np.asarray(tab_b, dtype=np.int64))
    cdef cnp.int64_t[::1] ga = np.asarray(gens_a, dtype=np.int64)
    cdef cnp.int64_t[::1] gb = np.asarray(gens_b, dtype=np.int64)
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], ng = ga.shape[0]
    cdef cnp.uint8_t[::1] seen = np.zeros(na * nb, dtype=np.uint8)
    cdef cnp.int64_t[::1] qa = np.empty(na * nb, dtype=np.int64)
    cdef cnp.int64_t[::1] qb = np.empty(na * nb, dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 1, a, b, s, xa, xb
    qa[0] = id_a
    qb[0] = id_b
    seen[id_a * nb + id_b] = 1
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        for s in range(ng):
            xa = A[a, ga[s]]
            xb = B[b, gb[s]]
            if not seen[xa * nb + xb]:
                seen[xa * nb + xb] = 1
                qa[tail] = xa
                qb[tail] = xb
                tail += 1
    return list(zip(np.asarray(qa)[:tail].tolist(), np.asarray(qb)[:tail].tolist()))
