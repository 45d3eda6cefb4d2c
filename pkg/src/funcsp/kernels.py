"""Leaf-testing kernels for naive full-assignment enumeration.

Exhaustive generate-and-test over d^n assignments is the one dense
numeric loop in this package, so it is implemented twice: a numba
``@njit`` kernel and a pure-numpy chunk evaluator.  The active path is
chosen by the ``FUNCSP_KERNELS`` environment variable ("numba",
"numpy", or unset/"auto" to prefer numba when it imports).  Both paths
produce bit-identical results; ``benchmarks/gt_kernel_bench.py``
compares their throughput.

Assignments are indexed 0..total-1 in lexicographic (row-major) order;
entry i of an assignment k is ``(k // div[i]) % sizes[i]`` where div is
the suffix product of sizes.  Constraints are allowed-pair tables over
value indices, padded to a common square size.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

ENV_FLAG = "FUNCSP_KERNELS"

_numba_leaf_block = None
_resolved: str | None = None


def _try_numba():
    global _numba_leaf_block
    if _numba_leaf_block is not None:
        return _numba_leaf_block
    from numba import njit

    @njit(cache=True)
    def leaf_block_nb(k0, k1, sizes, div, cons_x, cons_y, allowed, out):  # pragma: no cover
        n = sizes.shape[0]
        m = cons_x.shape[0]
        vals = np.empty(n, np.int64)
        for idx in range(k1 - k0):
            k = k0 + idx
            for i in range(n):
                vals[i] = (k // div[i]) % sizes[i]
            ok = True
            for j in range(m):
                if not allowed[j, vals[cons_x[j]], vals[cons_y[j]]]:
                    ok = False
                    break
            out[idx] = ok

    _numba_leaf_block = leaf_block_nb
    return leaf_block_nb


def active_backend() -> str:
    """Resolve which kernel path is in use ("numba" or "numpy")."""
    global _resolved
    flag = os.environ.get(ENV_FLAG, "auto").lower() or "auto"
    if flag == "numpy":
        return "numpy"
    if flag == "numba":
        _try_numba()
        return "numba"
    if flag != "auto":
        raise ValueError(f"{ENV_FLAG} must be 'numba', 'numpy', or 'auto', got {flag!r}")
    if _resolved is None:
        try:
            _try_numba()
            _resolved = "numba"
        except Exception as exc:  # numba missing or failed to jit
            warnings.warn(f"numba kernel unavailable ({exc}); falling back to numpy")
            _resolved = "numpy"
    return _resolved


def make_divisors(sizes) -> tuple[np.ndarray, int]:
    """Suffix products of the domain sizes, plus the total leaf count."""
    n = len(sizes)
    div = np.ones(n, np.int64)
    for i in range(n - 2, -1, -1):
        div[i] = div[i + 1] * sizes[i + 1]
    total = int(div[0] * sizes[0]) if n else 1
    return div, total


def pack_tables(sizes, tables) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack per-constraint allowed matrices into one padded array.

    ``tables`` is a sequence of (x, y, matrix) with matrix shaped
    (len(sizes[x]), len(sizes[y])) boolean.
    """
    m = len(tables)
    dmax = max((max(sizes) if len(sizes) else 1), 1)
    cons_x = np.zeros(m, np.int32)
    cons_y = np.zeros(m, np.int32)
    allowed = np.zeros((max(m, 1), dmax, dmax), np.bool_)
    for j, (x, y, mat) in enumerate(tables):
        cons_x[j] = x
        cons_y[j] = y
        a = np.asarray(mat, np.bool_)
        allowed[j, : a.shape[0], : a.shape[1]] = a
    return cons_x, cons_y, allowed


def leaf_block(k0: int, k1: int, sizes: np.ndarray, div: np.ndarray,
               cons_x: np.ndarray, cons_y: np.ndarray, allowed: np.ndarray,
               impl: str | None = None) -> np.ndarray:
    """Test assignments k0..k1-1 against all constraints; True = satisfied."""
    impl = impl or active_backend()
    out = np.empty(k1 - k0, np.bool_)
    if impl == "numba":
        _try_numba()(k0, k1, sizes, div, cons_x, cons_y, allowed, out)
        return out
    if impl != "numpy":
        raise ValueError(f"unknown kernel implementation {impl!r}")
    ks = np.arange(k0, k1, dtype=np.int64)
    if len(sizes) == 0:
        out[:] = True
        return out
    vals = (ks[:, None] // div[None, :]) % sizes[None, :]
    np.copyto(out, True)
    for j in range(len(cons_x)):
        out &= allowed[j][vals[:, cons_x[j]], vals[:, cons_y[j]]]
    return out
