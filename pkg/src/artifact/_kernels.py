"""Selects the compiled kernels when available, otherwise the pure-Python ones.

Set ``ARTIFACT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pycore

BACKEND = "python"
_core = None
if not os.environ.get("ARTIFACT_PURE_PYTHON"):
    try:
        from . import _core  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _core = None

_impl = _core if _core is not None else _pycore

# the compiled scan works in 64-bit integers; larger inputs stay in Python
_SAFE = 1 << 62


def reduced_forms(D: int) -> list:
    return _impl.reduced_forms(D)


def char_sum(chi, N: int, s: int) -> float:
    return _impl.char_sum(chi, N, s)


def residue_scan(f1, f2, h1, h2, target, mu_conj, nmu, p, q) -> list:
    args = (f1[0], f1[1], f2[0], f2[1], h1, h2, target[0], target[1], mu_conj[0], mu_conj[1], nmu, p, q)
    if _core is not None:
        reach = (h1 * (abs(f1[0]) + abs(f1[1])) + h2 * (abs(f2[0]) + abs(f2[1])) + 1)
        scale = reach * reach * (abs(q) + abs(p) + 2) + abs(target[0]) + abs(target[1])
        if scale * (abs(mu_conj[0]) + abs(mu_conj[1]) + 1) * (abs(q) + abs(p) + 2) < _SAFE:
            return _core.residue_scan(*args)
    return _pycore.residue_scan(*args)
