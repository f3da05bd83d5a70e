"""Dense statevector simulation, exact outcome distributions and distance metrics."""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .circuit import Circuit, Gate
from .pauli import PauliOperator

MAX_QUBITS = 14
DEFAULT_TOL = 1e-10
_SQRT_HALF = 1 / math.sqrt(2)
_PHASES = (1, 1j, -1, -1j)


class SimulationError(ValueError):
    pass


class StateVector:
    """Amplitudes of an ``n``-qubit state; qubit 0 is the most significant index bit."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: np.ndarray | None = None) -> None:
        if not 1 <= n <= MAX_QUBITS:
            raise SimulationError(f"width {n} outside 1..{MAX_QUBITS}")
        self.n = n
        if amps is None:
            amps = np.zeros(1 << n, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.ascontiguousarray(amps, dtype=np.complex128)
            if amps.shape != (1 << n,):
                raise SimulationError(f"expected {1 << n} amplitudes, got {amps.shape}")
        self.amps = amps

    def copy(self) -> StateVector:
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def apply_gate(self, g: Gate) -> None:
        psi, n = self.amps, self.n
        name, qs = g.name, g.qubits
        if name in ("PREPZ", "MZ", "MX"):
            # fresh qubits start in |0>; readout basis changes are handled at measurement time
            return
        if name in ("PREPX", "H"):
            kernels.apply_matrix1(psi, n, qs[0], _SQRT_HALF, _SQRT_HALF, _SQRT_HALF, -_SQRT_HALF)
        elif name == "X":
            kernels.apply_x(psi, n, qs[0])
        elif name == "Z":
            kernels.apply_diag1(psi, n, qs[0], 1.0, -1.0)
        elif name == "TPOW":
            if g.k:
                kernels.apply_diag1(psi, n, qs[0], 1.0, cmath.exp(1j * math.pi * g.k / 4))
        elif name == "CNOT":
            kernels.apply_cnot(psi, n, qs[0], qs[1])
        elif name == "CZ":
            kernels.apply_cz(psi, n, qs[0], qs[1])
        elif name == "CCZ":
            kernels.apply_ccz(psi, n, qs[0], qs[1], qs[2])
        else:  # pragma: no cover - Gate validates names
            raise SimulationError(f"cannot simulate {g}")

    def apply_pauli(self, p: PauliOperator) -> None:
        if p.width != self.n:
            raise SimulationError(f"Pauli width {p.width} != state width {self.n}")
        xb = _index_mask(p.x_mask, self.n)
        zb = _index_mask(p.z_mask, self.n)
        kernels.apply_pauli(self.amps, self.n, xb, zb, _PHASES[p.phase])

    def expectation(self, p: PauliOperator) -> complex:
        other = self.copy()
        other.apply_pauli(p)
        return complex(np.vdot(self.amps, other.amps))

    def is_stabilized_by(self, p: PauliOperator, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.expectation(p) - 1) <= tol


def _index_mask(qubit_mask: int, n: int) -> int:
    out = 0
    for q in range(n):
        if (qubit_mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def simulate(c: Circuit, faults: Mapping[int, PauliOperator] | None = None) -> StateVector:
    """Final state before readout.  ``faults`` maps a location to a register-wide
    Pauli applied after that location (before it, for measurements)."""
    if c.width > MAX_QUBITS:
        raise SimulationError(f"circuit width {c.width} exceeds {MAX_QUBITS}")
    state = StateVector(c.width)
    faults = faults or {}
    for loc, g in enumerate(c.gates):
        f = faults.get(loc)
        if f is not None and g.is_measurement:
            state.apply_pauli(f)
            f = None
        state.apply_gate(g)
        if f is not None:
            state.apply_pauli(f)
    return state


def measured_qubits(c: Circuit) -> list[int]:
    return sorted(c.measurement_bases())


def outcome_probabilities(state: StateVector, c: Circuit) -> np.ndarray:
    """Probabilities over readout integers of the measured qubits (ascending qubit
    order, lowest qubit in the most significant position)."""
    bases = c.measurement_bases()
    psi = state.amps.copy()
    for q, b in bases.items():
        if b == "X":
            kernels.apply_matrix1(psi, state.n, q, _SQRT_HALF, _SQRT_HALF, _SQRT_HALF, -_SQRT_HALF)
    probs = (psi.real ** 2 + psi.imag ** 2).reshape((2,) * state.n)
    unmeasured = tuple(q for q in range(state.n) if q not in bases)
    if unmeasured:
        probs = probs.sum(axis=unmeasured)
    return np.ascontiguousarray(probs.reshape(-1))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities keyed by bitstring, leftmost character = lowest measured qubit."""

    basis: str
    width: int
    probs: dict[str, float]

    @classmethod
    def from_array(cls, basis: str, probs: np.ndarray, width: int | None = None, cutoff: float = 0.0) -> OutcomeDistribution:
        width = width if width is not None else int(round(math.log2(len(probs))))
        d = {format(i, f"0{width}b"): float(p) for i, p in enumerate(probs) if p > cutoff}
        return cls(basis, width, d)

    def to_array(self) -> np.ndarray:
        arr = np.zeros(1 << self.width)
        for k, v in self.probs.items():
            arr[int(k, 2)] = v
        return arr

    def __getitem__(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def total(self) -> float:
        return sum(self.probs.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k in sorted(self.probs):
            buf.write(f"{k},{self.probs[k]!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, basis: str) -> OutcomeDistribution:
        probs = {}
        for line in text.splitlines():
            if line.strip():
                k, v = line.split(",")
                probs[k.strip()] = float(v)
        width = len(next(iter(probs)))
        return cls(basis, width, probs)


def run_exact(c: Circuit, faults: Mapping[int, PauliOperator] | None = None) -> tuple[StateVector, OutcomeDistribution]:
    state = simulate(c, faults)
    bases = c.measurement_bases()
    qs = sorted(bases)
    if not qs:
        raise SimulationError("circuit has no measurements")
    basis_set = {bases[q] for q in qs}
    basis = basis_set.pop() if len(basis_set) == 1 else "".join(bases[q] for q in qs)
    probs = outcome_probabilities(state, c)
    return state, OutcomeDistribution.from_array(basis, probs, len(qs), cutoff=1e-15)


def tvd(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    if p.basis != q.basis or p.width != q.width:
        raise ValueError(f"cannot compare {p.basis}/{p.width} with {q.basis}/{q.width}")
    keys = p.probs.keys() | q.probs.keys()
    return 0.5 * sum(abs(p[k] - q[k]) for k in keys)


def tvd_arrays(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise total variation distance; broadcasts over leading axes."""
    return 0.5 * np.abs(np.asarray(p) - np.asarray(q)).sum(axis=-1)


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = DEFAULT_TOL) -> bool:
    if a.n != b.n:
        raise SimulationError(f"width mismatch: {a.n} vs {b.n}")
    return abs(np.vdot(a.amps, b.amps)) >= 1 - tol


def sample(d: OutcomeDistribution, rng: np.random.Generator, shots: int) -> list[str]:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    keys = sorted(d.probs)
    cdf = np.cumsum([d.probs[k] for k in keys])
    cdf /= cdf[-1]
    idx = kernels.sample_cdf(cdf, rng.random(shots))
    return [keys[i] for i in idx]


def product_state(*factors: Sequence[complex]) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=np.complex128))
    return out
