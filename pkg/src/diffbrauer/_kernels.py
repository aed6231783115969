"""Hot inner loops shared by every F_q[t] product.

A polynomial (or truncated series) over F_q = F_p[w]/(m) is stored as an
integer array of shape ``(n, k)``: row ``i`` holds the F_p-coordinates of the
coefficient of ``t**i``.  A product is then a 2-D convolution over (t, w)
followed by reduction of the w-axis modulo ``m`` (a matrix product).

The convolution is the only loop that dominates runtime.  It is compiled with
numba when available; setting ``DIFFBRAUER_NO_NUMBA=1`` selects the pure numpy
path instead (used by the benchmark and by CI to keep both paths honest).
"""
from __future__ import annotations

import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

_FLAG = os.environ.get("DIFFBRAUER_NO_NUMBA", "").strip().lower()
USE_NUMBA = _FLAG in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    USE_NUMBA = False


def _conv2d_numpy(a, b, rows):
    n, ka = a.shape
    m, kb = b.shape
    full = n + m - 1
    out = np.zeros((full, ka + kb - 1), dtype=np.int64)
    for i in range(ka):
        ai = a[:, i]
        if not ai.any():
            continue
        for j in range(kb):
            bj = b[:, j]
            if bj.any():
                out[:, i + j] += np.convolve(ai, bj)
    return out[:rows]


def _conv2d_loops(at, bt, rows):
    # at, bt are transposed (k, n) so the innermost loop runs over contiguous t
    ka, n = at.shape
    kb, m = bt.shape
    out = np.zeros((ka + kb - 1, rows), dtype=np.int64)
    for i in range(ka):
        for j in range(kb):
            row = out[i + j]
            bj = bt[j]
            for s in range(min(n, rows)):
                x = at[i, s]
                if x == 0:
                    continue
                top = min(m, rows - s)
                for r in range(top):
                    row[s + r] += x * bj[r]
    return out


if USE_NUMBA:
    numba_logger = logging.getLogger("numba")
    numba_logger.setLevel(logging.WARNING)
    _conv2d_jit = numba.njit(cache=True, nogil=True)(_conv2d_loops)
else:
    _conv2d_jit = None


def conv2d(a: np.ndarray, b: np.ndarray, rows: int | None = None) -> np.ndarray:
    """Integer 2-D convolution of ``a`` and ``b`` keeping the first ``rows`` rows."""
    n, m = a.shape[0], b.shape[0]
    if n == 0 or m == 0:
        return np.zeros((0, a.shape[1] + b.shape[1] - 1), dtype=np.int64)
    full = n + m - 1
    if rows is None or rows > full:
        rows = full
    if rows <= 0:
        return np.zeros((0, a.shape[1] + b.shape[1] - 1), dtype=np.int64)
    if _conv2d_jit is not None:
        out = _conv2d_jit(np.ascontiguousarray(a.T, dtype=np.int64),
                          np.ascontiguousarray(b.T, dtype=np.int64), rows)
        return out.T
    return _conv2d_numpy(a.astype(np.int64, copy=False), b.astype(np.int64, copy=False), rows)


def backend() -> str:
    return "numba" if _conv2d_jit is not None else "numpy"
