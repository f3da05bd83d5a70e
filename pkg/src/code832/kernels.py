"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementation.  Setting ``CODE832_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("CODE832_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

apply_matrix1 = _impl.apply_matrix1
apply_diag1 = _impl.apply_diag1
apply_x = _impl.apply_x
apply_cnot = _impl.apply_cnot
apply_cz = _impl.apply_cz
apply_ccz = _impl.apply_ccz
apply_pauli = _impl.apply_pauli
postselect_decode = _impl.postselect_decode
sample_cdf = _impl.sample_cdf

__all__ = [
    "BACKEND",
    "apply_matrix1",
    "apply_diag1",
    "apply_x",
    "apply_cnot",
    "apply_cz",
    "apply_ccz",
    "apply_pauli",
    "postselect_decode",
    "sample_cdf",
]
