"""Hot loops: row reduction and batched rank over F_p.

Each kernel has a numba implementation and a pure-numpy one.  The numba
path is used unless ``MINRANK_NO_NUMBA`` is set to a non-empty value other
than ``0`` or numba cannot be imported.  Both paths return identical
results; ``tests/test_kernels.py`` checks this.

All arrays are int64 holding residues in ``[0, p)`` with ``p < 2**31`` so
that a product of two residues fits in 63 bits.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("MINRANK_NO_NUMBA", "") not in ("", "0")

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None


# numpy path -----------------------------------------------------------


def rref_numpy(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Reduced row echelon form of ``a`` in place; returns (rank, pivot columns)."""
    nrows, ncols = a.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.flatnonzero(a[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = a[rank] * inv % p
        factors = a[:, col].copy()
        factors[rank] = 0
        rows = np.flatnonzero(factors)
        if rows.size:
            a[rows] = (a[rows] - np.outer(factors[rows], a[rank])) % p
        pivots[rank] = col
        rank += 1
    return rank, pivots[:rank].copy()


def batch_rank_numpy(mats: np.ndarray, p: int) -> np.ndarray:
    """Rank of each matrix in a stack of shape (N, m, n)."""
    a = np.array(mats, dtype=np.int64, copy=True) % p
    count, nrows, ncols = a.shape
    ranks = np.zeros(count, dtype=np.int64)
    idx = np.arange(count)
    for col in range(ncols):
        active = ranks < nrows
        if not active.any():
            break
        # first row at or below the current rank with a nonzero entry in col
        row_ids = np.arange(nrows)[None, :]
        cand = (a[:, :, col] != 0) & (row_ids >= ranks[:, None])
        has = cand.any(axis=1) & active
        if not has.any():
            continue
        sel = idx[has]
        piv = cand[sel].argmax(axis=1)
        r = ranks[sel]
        prow = a[sel, piv].copy()
        a[sel, piv] = a[sel, r]
        a[sel, r] = prow
        inv = _inv_vec(prow[:, col], p)
        prow = prow * inv[:, None] % p
        a[sel, r] = prow
        factors = a[sel, :, col].copy()
        below = row_ids[0][None, :] > r[:, None]
        factors = np.where(below, factors, 0)
        a[sel] = (a[sel] - factors[:, :, None] * prow[:, None, :]) % p
        ranks[sel] += 1
    return ranks


def _inv_vec(v: np.ndarray, p: int) -> np.ndarray:
    out = np.ones_like(v)
    base = v % p
    e = p - 2
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


# numba path -----------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _inv_mod_nb(a, p):
        r0, r1, s0, s1 = p, a % p, 0, 1
        while r1 != 0:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        return s0 % p

    @njit(cache=True)
    def _rref_nb(a, p):
        nrows, ncols = a.shape
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        rank = 0
        for col in range(ncols):
            if rank == nrows:
                break
            piv = -1
            for i in range(rank, nrows):
                if a[i, col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(ncols):
                    t = a[rank, j]
                    a[rank, j] = a[piv, j]
                    a[piv, j] = t
            inv = _inv_mod_nb(a[rank, col], p)
            for j in range(col, ncols):
                a[rank, j] = a[rank, j] * inv % p
            for i in range(nrows):
                if i == rank:
                    continue
                f = a[i, col]
                if f == 0:
                    continue
                for j in range(col, ncols):
                    v = a[rank, j]
                    if v != 0:
                        a[i, j] = (a[i, j] - f * v) % p
            pivots[rank] = col
            rank += 1
        return rank, pivots[:rank].copy()

    @njit(cache=True)
    def _batch_rank_nb(mats, p):
        count, nrows, ncols = mats.shape
        ranks = np.zeros(count, dtype=np.int64)
        a = np.empty((nrows, ncols), dtype=np.int64)
        for t in range(count):
            for i in range(nrows):
                for j in range(ncols):
                    a[i, j] = mats[t, i, j] % p
            rank = 0
            for col in range(ncols):
                if rank == nrows:
                    break
                piv = -1
                for i in range(rank, nrows):
                    if a[i, col] != 0:
                        piv = i
                        break
                if piv < 0:
                    continue
                if piv != rank:
                    for j in range(ncols):
                        tmp = a[rank, j]
                        a[rank, j] = a[piv, j]
                        a[piv, j] = tmp
                inv = _inv_mod_nb(a[rank, col], p)
                for i in range(rank + 1, nrows):
                    f = a[i, col] * inv % p
                    if f == 0:
                        continue
                    for j in range(col, ncols):
                        a[i, j] = (a[i, j] - f * a[rank, j]) % p
                rank += 1
            ranks[t] = rank
        return ranks

    def rref_numba(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
        rank, piv = _rref_nb(a, np.int64(p))
        return int(rank), piv

    def batch_rank_numba(mats: np.ndarray, p: int) -> np.ndarray:
        return _batch_rank_nb(np.ascontiguousarray(mats, dtype=np.int64), np.int64(p))

else:  # pragma: no cover
    rref_numba = rref_numpy
    batch_rank_numba = batch_rank_numpy


USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

rref = rref_numba if USE_NUMBA else rref_numpy
batch_rank = batch_rank_numba if USE_NUMBA else batch_rank_numpy


def rank_mod_p(a: np.ndarray, p: int) -> int:
    work = np.array(a, dtype=np.int64, copy=True) % p
    return rref(work, p)[0]


def warmup() -> None:
    """Trigger JIT compilation so that later timings exclude it."""
    a = np.eye(2, dtype=np.int64)
    rref(a, 3)
    batch_rank(np.ones((1, 2, 2), dtype=np.int64), 3)
