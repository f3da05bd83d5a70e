"""Pure numpy implementations of the simulation kernels.

Used when the compiled ``_kernels`` extension is unavailable.  Statevectors are
flat complex128 arrays in which qubit ``q`` of an ``n``-qubit register is bit
``n - 1 - q`` of the amplitude index (qubit 0 is the most significant bit).
All gate kernels act in place.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _indices(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    idx.flags.writeable = False
    return idx


def _bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def apply_matrix1(psi, n, q, m00, m01, m10, m11):
    v = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m00 * a0 + m01 * a1
    v[:, 1, :] = m10 * a0 + m11 * a1


def apply_diag1(psi, n, q, d0, d1):
    v = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    if d0 != 1:
        v[:, 0, :] *= d0
    v[:, 1, :] *= d1


def apply_x(psi, n, q):
    v = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    v[:, [0, 1], :] = v[:, [1, 0], :]


def apply_cnot(psi, n, c, t):
    idx = _indices(n)
    cb, tb = _bit(n, c), _bit(n, t)
    src = idx ^ np.where(idx & cb, tb, 0)
    psi[:] = psi[src]


def apply_cz(psi, n, a, b):
    idx = _indices(n)
    m = _bit(n, a) | _bit(n, b)
    psi[(idx & m) == m] *= -1


def apply_ccz(psi, n, a, b, c):
    idx = _indices(n)
    m = _bit(n, a) | _bit(n, b) | _bit(n, c)
    psi[(idx & m) == m] *= -1


def apply_pauli(psi, n, xbits, zbits, phase):
    """psi <- phase * X^xbits Z^zbits psi, masks in amplitude-index bit order."""
    idx = _indices(n)
    if zbits:
        psi[np.bitwise_count(idx & zbits) & 1 == 1] *= -1
    if xbits:
        psi[:] = psi[idx ^ xbits]
    if phase != 1:
        psi *= phase


def postselect_decode(outcomes, check_masks, flag_mask, decode_masks):
    """Classify readout integers.

    Returns ``(status, decoded)``: status 0 accepted, 1 a flag bit was set,
    2 a parity check fired.  ``decoded`` packs the parity of each decode mask,
    first mask in the most significant position.
    """
    outcomes = np.asarray(outcomes, dtype=np.uint64)
    status = np.zeros(outcomes.shape, dtype=np.int8)
    parity_bad = np.zeros(outcomes.shape, dtype=bool)
    for m in check_masks:
        parity_bad |= (np.bitwise_count(outcomes & np.uint64(m)) & 1).astype(bool)
    status[parity_bad] = 2
    if flag_mask:
        status[(outcomes & np.uint64(flag_mask)) != 0] = 1
    decoded = np.zeros(outcomes.shape, dtype=np.int64)
    for m in decode_masks:
        decoded = (decoded << 1) | (np.bitwise_count(outcomes & np.uint64(m)) & 1).astype(np.int64)
    return status, decoded


def sample_cdf(cdf, u):
    """Inverse-CDF draw: smallest index i with u < cdf[i]."""
    out = np.searchsorted(cdf, u, side="right")
    return np.minimum(out, len(cdf) - 1).astype(np.int64)
