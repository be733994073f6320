"""Dense-box kernels for truncated power series in the affine root lattice.

A series sum_b P[b] x^b is stored as an integer array over the box
0 <= b_i < dims[i].  Truncation to a box is exact for products and quotients
by factors (1 - x^s) with s >= 0, because exponents only ever grow.

Two backends compute the same thing:

* a numba ``@njit`` loop over flat indices (int64 with an explicit overflow
  guard; on overflow the call is redone exactly with Python integers);
* a numpy path working layer by layer with slicing, which also handles
  ``dtype=object`` arrays.

Set ``KACMOODY_NUMBA=0`` to force the numpy path.  :func:`use_numba` switches
at run time.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_LIMIT = 1 << 62

_use_numba = numba is not None and os.environ.get("KACMOODY_NUMBA", "1") not in ("0", "false", "no")


def numba_enabled() -> bool:
    return _use_numba


def use_numba(flag: bool) -> None:
    global _use_numba
    _use_numba = bool(flag) and numba is not None


# --------------------------------------------------------------- numba path

if numba is not None:

    @numba.njit(cache=True)
    def _nb_apply(P, dims, shift, times, divide):
        nd = dims.shape[0]
        strides = np.empty(nd, dtype=np.int64)
        acc = 1
        for ax in range(nd - 1, -1, -1):
            strides[ax] = acc
            acc *= dims[ax]
        size = acc
        offset = 0
        for ax in range(nd):
            offset += shift[ax] * strides[ax]
        coord = np.empty(nd, dtype=np.int64)
        for _ in range(times):
            if divide:
                # increasing flat order: P[b] += P[b - s]
                for ax in range(nd):
                    coord[ax] = 0
                for f in range(size):
                    ok = True
                    for ax in range(nd):
                        if coord[ax] < shift[ax]:
                            ok = False
                            break
                    if ok:
                        v = P[f] + P[f - offset]
                        if v >= _LIMIT or v <= -_LIMIT:
                            return False
                        P[f] = v
                    ax = nd - 1
                    while ax >= 0:
                        coord[ax] += 1
                        if coord[ax] < dims[ax]:
                            break
                        coord[ax] = 0
                        ax -= 1
            else:
                # decreasing flat order: P[b] -= P[b - s]
                for ax in range(nd):
                    coord[ax] = dims[ax] - 1
                for f in range(size - 1, -1, -1):
                    ok = True
                    for ax in range(nd):
                        if coord[ax] < shift[ax]:
                            ok = False
                            break
                    if ok:
                        v = P[f] - P[f - offset]
                        if v >= _LIMIT or v <= -_LIMIT:
                            return False
                        P[f] = v
                    ax = nd - 1
                    while ax >= 0:
                        coord[ax] -= 1
                        if coord[ax] >= 0:
                            break
                        coord[ax] = dims[ax] - 1
                        ax -= 1
        return True


# --------------------------------------------------------------- numpy path


def _np_apply(P, shift, times, divide) -> bool:
    """In-place multiply (divide=False) or divide by (1 - x^shift)**times.

    Returns False if an int64 entry reaches the overflow guard; every update
    starts from entries below 2**62, so no wrap can happen before detection.
    """
    dims = P.shape
    if any(s >= d for s, d in zip(shift, dims)):
        return True
    exact = P.dtype == object
    hi = tuple(slice(s, None) for s in shift)
    lo = tuple(slice(0, d - s) for s, d in zip(shift, dims))
    if not divide:
        for _ in range(times):
            P[hi] = P[hi] - P[lo]
            if not exact and P[hi].size and np.abs(P[hi]).max() >= _LIMIT:
                return False
        return True
    ax = next(i for i, s in enumerate(shift) if s > 0)
    step = shift[ax]
    for _ in range(times):
        for t in range(step, dims[ax]):
            tgt = list(hi)
            src = list(lo)
            tgt[ax] = t
            src[ax] = t - step
            tgt = tuple(tgt)
            P[tgt] += P[tuple(src)]
            if not exact and P[tgt].size and np.abs(P[tgt]).max() >= _LIMIT:
                return False
    return True


def apply_factors(P: np.ndarray, factors, divide: bool) -> np.ndarray:
    """Return P times (or divided by) prod (1 - x^s)**m over ``factors``.

    ``factors`` is an iterable of (shift, m) with shift a non-negative integer
    vector.  The input array is not modified.  Entries of int64 inputs must be
    below 2**62 in absolute value.
    """
    factors = [(tuple(int(x) for x in s), int(m)) for s, m in factors]
    if P.dtype != object and _use_numba:
        out = np.ascontiguousarray(P, dtype=np.int64).copy()
        dims = np.array(out.shape, dtype=np.int64)
        flat = out.reshape(-1)
        for s, m in factors:
            if any(si >= di for si, di in zip(s, out.shape)):
                continue
            if not _nb_apply(flat, dims, np.array(s, dtype=np.int64), m, divide):
                return apply_factors(P.astype(object), factors, divide)
        return out
    out = P.copy()
    for s, m in factors:
        if not _np_apply(out, s, m, divide):
            return apply_factors(P.astype(object), factors, divide)
    return out


def unit_series(dims, dtype=np.int64) -> np.ndarray:
    P = np.zeros(tuple(dims), dtype=dtype)
    P[(0,) * len(dims)] = 1
    return P


def partition_table(dims, factors) -> np.ndarray:
    """Coefficients of prod (1 - x^s)^(-m) over the box ``dims``."""
    return apply_factors(unit_series(dims), factors, divide=True)


def product_table(dims, factors) -> np.ndarray:
    """Coefficients of prod (1 - x^s)^m over the box ``dims``."""
    return apply_factors(unit_series(dims), factors, divide=False)
