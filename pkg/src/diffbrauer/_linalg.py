"""Gaussian elimination over F_p on small integer matrices."""
from __future__ import annotations

import numpy as np


def rref(a: np.ndarray, p: int):
    """Return (reduced matrix, pivot columns) of ``a`` over F_p."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution x of ``a @ x = b`` over F_p (free variables set to 0), or None."""
    a = np.asarray(a, dtype=np.int64)
    aug = np.concatenate([a, np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    m, pivots = rref(aug, p)
    ncols = a.shape[1]
    if pivots and pivots[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = m[i, ncols]
    return x


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel of ``a`` over F_p, one vector per row."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    m, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for j, f in enumerate(free):
        basis[j, f] = 1
        for i, c in enumerate(pivots):
            basis[j, c] = (-m[i, f]) % p
    return basis


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])
