"""Kernel selection: the compiled core when built, else the Python fallback."""
try:
    from ._kernels import orbit_bfs, prepare_table, subgroup_closure

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    from ._kernels_py import orbit_bfs, prepare_table, subgroup_closure

    BACKEND = "python"

__all__ = ["orbit_bfs", "prepare_table", "subgroup_closure", "BACKEND"]
