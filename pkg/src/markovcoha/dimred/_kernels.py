"""Fiber-counting kernels over F_p.

A fiber is an assignment of values to the free matrix entries.  Over each
fiber the relations form an affine linear system ``A b + c = 0`` in the
linear-family entries ``b``; the kernel returns a histogram of the ranks of
the consistent systems plus the number of inconsistent fibers.  The number
of solutions is then ``sum_r hist[r] * p^(n_b - r)``, assembled in Python to
keep exact integers.

Two interchangeable backends: a numba ``@njit`` loop and a batched numpy
version.  Setting ``MARKOVCOHA_NO_NUMBA=1`` forces the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("MARKOVCOHA_NO_NUMBA", "") not in ("1", "true", "yes")


def _py_count_fibers(t_eq, t_coef, t_b, t_f, n_f, n_b, n_eq, p):
    hist = np.zeros(n_b + 2, dtype=np.int64)  # last slot: inconsistent fibers
    n_terms = t_eq.shape[0]
    max_f = t_f.shape[1]
    vals = np.zeros(max(n_f, 1), dtype=np.int64)
    M = np.zeros((max(n_eq, 1), n_b + 1), dtype=np.int64)
    total = 1
    for _ in range(n_f):
        total *= p
    for _fiber in range(total):
        M[:, :] = 0
        for t in range(n_terms):
            v = t_coef[t]
            for j in range(max_f):
                k = t_f[t, j]
                if k < 0:
                    break
                v = (v * vals[k]) % p
            if v == 0:
                continue
            col = t_b[t] if t_b[t] >= 0 else n_b
            M[t_eq[t], col] = (M[t_eq[t], col] + v) % p
        rank = 0
        for col in range(n_b):
            piv = -1
            for r in range(rank, n_eq):
                if M[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for c in range(n_b + 1):
                    tmp = M[rank, c]
                    M[rank, c] = M[piv, c]
                    M[piv, c] = tmp
            # inverse by Fermat
            a = M[rank, col]
            inv = 1
            e = p - 2
            base = a
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for c in range(n_b + 1):
                M[rank, c] = (M[rank, c] * inv) % p
            for r in range(n_eq):
                if r != rank and M[r, col] != 0:
                    f = M[r, col]
                    for c in range(n_b + 1):
                        M[r, c] = (M[r, c] - f * M[rank, c]) % p
            rank += 1
        consistent = True
        for r in range(rank, n_eq):
            if M[r, n_b] != 0:
                consistent = False
                break
        if consistent:
            hist[rank] += 1
        else:
            hist[n_b + 1] += 1
        # next fiber (mixed radix increment)
        for k in range(n_f):
            vals[k] += 1
            if vals[k] < p:
                break
            vals[k] = 0
    return hist


if HAVE_NUMBA:
    _nb_count_fibers = numba.njit(cache=True)(_py_count_fibers)
else:  # pragma: no cover
    _nb_count_fibers = None


def count_fibers_numba(t_eq, t_coef, t_b, t_f, n_f, n_b, n_eq, p):
    if _nb_count_fibers is None:
        raise RuntimeError("numba is not available")
    return _nb_count_fibers(t_eq, t_coef, t_b, t_f, n_f, n_b, n_eq, p)


def count_fibers_numpy(t_eq, t_coef, t_b, t_f, n_f, n_b, n_eq, p, chunk=1 << 15):
    """Batched elimination over many fibers at once."""
    hist = np.zeros(n_b + 2, dtype=np.int64)
    total = p ** n_f
    inv_table = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
    powers = p ** np.arange(n_f, dtype=np.int64)
    rows = np.arange(max(n_eq, 1))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        nb = idx.size
        vals = (idx[:, None] // powers[None, :]) % p if n_f else np.zeros((nb, 0), dtype=np.int64)
        M = np.zeros((nb, max(n_eq, 1), n_b + 1), dtype=np.int64)
        for t in range(t_eq.shape[0]):
            v = np.full(nb, t_coef[t], dtype=np.int64)
            for k in t_f[t]:
                if k < 0:
                    break
                v = (v * vals[:, k]) % p
            col = t_b[t] if t_b[t] >= 0 else n_b
            M[:, t_eq[t], col] = (M[:, t_eq[t], col] + v) % p
        rank = np.zeros(nb, dtype=np.int64)
        for col in range(n_b):
            eligible = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
            has = eligible.any(axis=1)
            if not has.any():
                continue
            b = np.nonzero(has)[0]
            piv = eligible[b].argmax(axis=1)
            r = rank[b]
            tmp = M[b, r].copy()
            M[b, r] = M[b, piv]
            M[b, piv] = tmp
            inv = inv_table[M[b, r, col]]
            M[b, r] = (M[b, r] * inv[:, None]) % p
            factor = M[b, :, col].copy()
            factor[np.arange(b.size), r] = 0
            M[b] = (M[b] - factor[:, :, None] * M[b, r][:, None, :]) % p
            rank[b] += 1
        tail = (rows[None, :] >= rank[:, None]) & (M[:, :, n_b] != 0)
        bad = tail.any(axis=1)
        hist[n_b + 1] += int(bad.sum())
        hist[: n_b + 1] += np.bincount(rank[~bad], minlength=n_b + 1)[: n_b + 1]
    return hist


def count_fibers(*args, backend=None):
    """Dispatch to the selected backend (``"numba"``, ``"numpy"`` or auto)."""
    if backend is None:
        backend = "numba" if numba_enabled() else "numpy"
    if backend == "numba":
        return count_fibers_numba(*args)
    if backend == "numpy":
        return count_fibers_numpy(*args)
    raise ValueError(f"unknown backend {backend!r}")
