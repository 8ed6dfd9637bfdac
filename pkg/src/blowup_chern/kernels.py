"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``BLOWUP_CHERN_PURE=1`` forces the pure-Python kernels.
Compiled calls that overflow their 64-bit guard fall back per call.
"""

import os

from . import _core_py

BACKEND = "pure"
_compiled = None

if not os.environ.get("BLOWUP_CHERN_PURE"):
    try:
        from . import _core as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None
    else:
        BACKEND = "compiled"


def hnf_rows(rows):
    if _compiled is not None:
        try:
            return _compiled.hnf_rows(rows)
        except OverflowError:
            pass
    return _core_py.hnf_rows(rows)


def reduce_vector(vec, rows, pivot_cols):
    if _compiled is not None:
        try:
            return _compiled.reduce_vector(vec, rows, pivot_cols)
        except OverflowError:
            pass
    return _core_py.reduce_vector(vec, rows, pivot_cols)


# Rarely called; only the pure implementation exists.
smith_invariants = _core_py.smith_invariants
solve_in_rowspan = _core_py.solve_in_rowspan
