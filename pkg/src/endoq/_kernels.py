"""Array kernels for the finite-chain monoid O_n.

Two interchangeable backends: numba-compiled loops, and plain numpy.
``ENDOQ_DISABLE_NUMBA=1`` (or numba failing to import) selects numpy.
Maps are rows of an int64 array, values 0..n-1; ``comp[i, j]`` is the
index of "first map i, then map j".
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "compose_table", "left_witnesses", "right_witnesses",
           "regular_witnesses", "backend_functions"]


def _encode_weights(n: int) -> np.ndarray:
    return n ** np.arange(n, dtype=np.int64)


# --- numpy backend ---------------------------------------------------------------

def compose_table_np(maps: np.ndarray, lookup: np.ndarray) -> np.ndarray:
    n = maps.shape[1]
    # composite[i, j, x] = maps[j, maps[i, x]]
    composite = maps[np.arange(len(maps))[None, :, None], maps[:, None, :]]
    return lookup[composite @ _encode_weights(n)]


def left_witnesses_np(comp: np.ndarray) -> np.ndarray:
    """w[h, g] = least u with comp[u, g] == h, else -1."""
    N = comp.shape[0]
    big = np.iinfo(np.int64).max
    w = np.full((N, N), big, dtype=np.int64)
    u = np.broadcast_to(np.arange(N)[:, None], (N, N))
    g = np.broadcast_to(np.arange(N)[None, :], (N, N))
    np.minimum.at(w, (comp, g), u)
    w[w == big] = -1
    return w


def right_witnesses_np(comp: np.ndarray) -> np.ndarray:
    """w[h, g] = least u with comp[g, u] == h, else -1."""
    return left_witnesses_np(comp.T)


def regular_witnesses_np(comp: np.ndarray) -> np.ndarray:
    """w[f] = least g with f g f == f, else -1."""
    N = comp.shape[0]
    f = np.arange(N)
    fgf = comp[comp, f[:, None]]
    hit = fgf == f[:, None]
    return np.where(hit.any(axis=1), hit.argmax(axis=1), -1)


# --- numba backend ---------------------------------------------------------------

def _numba_backend():
    from numba import njit

    @njit(cache=True)
    def compose_table_nb(maps, lookup):
        N, n = maps.shape
        out = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            for j in range(N):
                code = 0
                w = 1
                for x in range(n):
                    code += maps[j, maps[i, x]] * w
                    w *= n
                out[i, j] = lookup[code]
        return out

    @njit(cache=True)
    def left_witnesses_nb(comp):
        N = comp.shape[0]
        w = np.full((N, N), -1, dtype=np.int64)
        for g in range(N):
            for u in range(N):
                h = comp[u, g]
                if w[h, g] < 0:
                    w[h, g] = u
        return w

    @njit(cache=True)
    def right_witnesses_nb(comp):
        N = comp.shape[0]
        w = np.full((N, N), -1, dtype=np.int64)
        for g in range(N):
            for u in range(N):
                h = comp[g, u]
                if w[h, g] < 0:
                    w[h, g] = u
        return w

    @njit(cache=True)
    def regular_witnesses_nb(comp):
        N = comp.shape[0]
        w = np.full(N, -1, dtype=np.int64)
        for f in range(N):
            for g in range(N):
                if comp[comp[f, g], f] == f:
                    w[f] = g
                    break
        return w

    return compose_table_nb, left_witnesses_nb, right_witnesses_nb, regular_witnesses_nb


_NUMPY = (compose_table_np, left_witnesses_np, right_witnesses_np, regular_witnesses_np)


def backend_functions(name: str):
    """The four kernels of backend ``"numba"`` or ``"numpy"``."""
    if name == "numba":
        return _numba_backend()
    return _NUMPY


def _select():
    if os.environ.get("ENDOQ_DISABLE_NUMBA", "") not in ("", "0"):
        return "numpy", _NUMPY
    try:
        return "numba", _numba_backend()
    except ImportError:
        return "numpy", _NUMPY


BACKEND, (compose_table, left_witnesses, right_witnesses, regular_witnesses) = _select()
