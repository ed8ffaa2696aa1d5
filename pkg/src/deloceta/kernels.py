"""Contraction kernel selection: compiled extension with numpy fallback.

The hot loop of every pairing is the multilinear contraction

    sum over (g_0..g_n)  tr(A_0(g_0) ... A_n(g_n)) * phi(g_0..g_n).

``contract_python`` builds the dense einsum tensor (fast for desk-scale
groups, memory-bound as |G|^(n+1) grows); the Cython kernel accumulates
on the fly. Set ``DELOCETA_FORCE_PY=1`` to force the fallback.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

try:  # pragma: no cover - exercised indirectly
    from . import _contract_cy as _ext
except ImportError:  # pragma: no cover
    _ext = None

_EINSUM_LETTERS = "abcdefghijklmnop"


def contract_python(
    supports: Sequence[np.ndarray],
    mats: Sequence[np.ndarray],
    phi_flat: np.ndarray,
    order: int,
    nmat: int,
) -> complex:
    slots = len(supports)
    if any(len(s) == 0 for s in supports):
        return 0j
    # trace of the product, batched over one free index per slot
    specs = []
    for i in range(slots):
        row = _EINSUM_LETTERS[i]
        col = _EINSUM_LETTERS[(i + 1) % slots]
        specs.append(f"{'ABCDEFGHIJKLMNOP'[i]}{row}{col}")
    spec = ",".join(specs) + "->" + "ABCDEFGHIJKLMNOP"[:slots]
    traces = np.einsum(spec, *mats, optimize=True)
    # gather phi over the support grid
    idx = np.zeros(tuple(len(s) for s in supports), dtype=np.int64)
    for i, sup in enumerate(supports):
        shape = [1] * slots
        shape[i] = len(sup)
        idx = idx * order + np.asarray(sup, dtype=np.int64).reshape(shape)
    vals = phi_flat[idx]
    return complex(np.sum(traces * vals))


def contract_compiled(supports, mats, phi_flat, order, nmat) -> complex:
    return _ext.contract(
        [np.ascontiguousarray(s, dtype=np.int32) for s in supports],
        [np.ascontiguousarray(m, dtype=np.complex128) for m in mats],
        np.ascontiguousarray(phi_flat, dtype=np.complex128),
        order,
        nmat,
    )


def _select():
    if _ext is not None and not os.environ.get("DELOCETA_FORCE_PY"):
        return contract_compiled, "compiled"
    return contract_python, "python"


contract, BACKEND = _select()
