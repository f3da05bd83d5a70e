"""Reference circuits: encoded and bare state preparation, gate layers, readout rules."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .circuit import (
    Circuit,
    Gate,
    PhaseVector,
    ccz,
    cnot,
    compile_ccz,
    cz,
    h,
    measure_x,
    measure_z,
    phase_pattern_circuit,
    prep_x,
    prep_z,
)
from .code import TargetState
from .statevector import OutcomeDistribution, outcome_probabilities, simulate

GATE_NAMES = ("CZ12", "CZ13", "CZ23", "CCZ")
BASES = ("X", "Z")
ENCODINGS = ("bare", "encoded")
CCZ_MODES = ("native", "compiled")

# T-power exponents on data qubits 0..7 for each transversal logical gate
GATE_PHASE_VECTORS = {
    "CCZ": PhaseVector((1, 7, 7, 1, 7, 1, 1, 7)),
    "CZ12": PhaseVector((2, 0, 6, 0, 6, 0, 2, 0)),
    "CZ13": PhaseVector((2, 6, 0, 0, 6, 2, 0, 0)),
    "CZ23": PhaseVector((2, 6, 6, 2, 0, 0, 0, 0)),
}

# logical-qubit pairs/triples (0-based) each gate acts on in the bare circuit
_BARE_SUPPORT = {"CZ12": (0, 1), "CZ13": (0, 2), "CZ23": (1, 2), "CCZ": (0, 1, 2)}

FLAG_QUBITS = (8, 9, 10)  # a0, a1, a2


def canonical_gates(gates: Iterable[str]) -> tuple[str, ...]:
    gs = set(gates) - {"I"}
    unknown = gs - set(GATE_NAMES)
    if unknown:
        raise ValueError(f"unknown gates {sorted(unknown)}; expected a subset of {GATE_NAMES}")
    return tuple(g for g in GATE_NAMES if g in gs)


def all_gate_subsets() -> list[tuple[str, ...]]:
    """The 16 gate products, ordered as in the post-selection tables."""
    return [tuple(g for j, g in enumerate(GATE_NAMES) if (i >> j) & 1) for i in range(16)]


def gate_label(gates: Sequence[str], sep: str = "") -> str:
    return sep.join(gates) if gates else "I"


@dataclass(frozen=True)
class ExperimentSpec:
    state: TargetState
    gates: tuple[str, ...] = ()
    basis: str = "X"
    encoding: str = "encoded"
    ccz_mode: str = "native"

    def __post_init__(self) -> None:
        object.__setattr__(self, "state", TargetState(self.state))
        object.__setattr__(self, "gates", canonical_gates(self.gates))
        if self.basis not in BASES:
            raise ValueError(f"basis must be X or Z, got {self.basis!r}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be bare or encoded, got {self.encoding!r}")
        if self.ccz_mode not in CCZ_MODES:
            raise ValueError(f"ccz_mode must be native or compiled, got {self.ccz_mode!r}")

    @property
    def id(self) -> str:
        s = f"{self.state.value}+{gate_label(self.gates, '.')}@{self.basis}/{self.encoding}"
        return s + "~compiled" if self.ccz_mode == "compiled" else s

    def __str__(self) -> str:
        return self.id

    @classmethod
    def parse(cls, text: str) -> ExperimentSpec:
        m = re.fullmatch(r"(GHZ|PLUS3)\+([A-Z0-9.]+)@([XZ])/(bare|encoded)(?:~(native|compiled))?", text.strip())
        if not m:
            raise ValueError(f"bad experiment spec {text!r}; expected e.g. GHZ+CZ12.CCZ@X/encoded")
        state, gates, basis, enc, mode = m.groups()
        return cls(TargetState(state), tuple(gates.split(".")), basis, enc, mode or "native")

    def with_encoding(self, encoding: str) -> ExperimentSpec:
        return ExperimentSpec(self.state, self.gates, self.basis, encoding, self.ccz_mode)


# state preparation ------------------------------------------------------------


def ghz_prep_encoded() -> Circuit:
    """Two identical 4-qubit GHZ fan-outs on the bipartite sets {0,3,5,6} and {1,2,4,7}."""
    gates: list[Gate] = [prep_x(0), prep_x(1)] + [prep_z(q) for q in range(2, 8)]
    gates += [cnot(0, 3), cnot(0, 5), cnot(0, 6)]
    gates += [cnot(1, 2), cnot(1, 4), cnot(1, 7)]
    return Circuit(8, gates)


# (target, controls in order, flag index or None)
_PLUS3_GROUPS = (
    (1, (0, 6, 7), 0),
    (2, (0, 5, 7), 1),
    (3, (0, 5, 6), 2),
    (4, (5, 7, 6), 2),
)


def plus3_prep_encoded(flags: Iterable[int] = (0, 1, 2)) -> Circuit:
    """Encoded |+++> with flag qubits a0, a1, a2 on qubits 8, 9, 10.

    Each target's CNOT group is bracketed by a pair of flag couplings placed after
    its first and second control; the pair cancels unless a Z fault lands on the
    target between them.  Flags missing from ``flags`` keep their qubit but lose
    their couplings.
    """
    flags = set(flags)
    gates: list[Gate] = []
    for q in range(8):
        gates.append(prep_x(q) if q in (0, 5, 6, 7) else prep_z(q))
    gates += [prep_x(a) for a in FLAG_QUBITS]
    for target, (c0, c1, c2), flag in _PLUS3_GROUPS:
        coupling = [cnot(FLAG_QUBITS[flag], target)] if flag in flags else []
        gates += [cnot(c0, target), *coupling, cnot(c1, target), cnot(c2, target), *coupling]
    return Circuit(11, gates, ("d",) * 8 + ("f",) * 3)


def prep_encoded(state: TargetState | str) -> Circuit:
    return ghz_prep_encoded() if TargetState(state) is TargetState.GHZ else plus3_prep_encoded()


def measurement_layer(c: Circuit, basis: str) -> list[Gate]:
    """Transversal readout: data qubits in ``basis``, flags always in X."""
    out = []
    for q, role in enumerate(c.roles):
        b = "X" if role == "f" else basis
        out.append(measure_x(q) if b == "X" else measure_z(q))
    return out


def with_readout(c: Circuit, basis: str) -> Circuit:
    return c.extend(measurement_layer(c, basis))


# gate layers ---------------------------------------------------------------------


def logical_phase_vector(gates: Iterable[str]) -> PhaseVector:
    v = PhaseVector()
    for g in canonical_gates(gates):
        v = v + GATE_PHASE_VECTORS[g]
    return v


def bare_gate_layer(gates: Iterable[str], ccz_mode: str = "native") -> list[Gate]:
    out: list[Gate] = []
    for g in canonical_gates(gates):
        qs = _BARE_SUPPORT[g]
        if g == "CCZ":
            out += compile_ccz(*qs) if ccz_mode == "compiled" else [ccz(*qs)]
        else:
            out.append(cz(*qs))
    return out


def bare_prep(state: TargetState | str) -> Circuit:
    gates: list[Gate] = [prep_z(q) for q in range(3)]
    if TargetState(state) is TargetState.GHZ:
        gates += [h(0), cnot(0, 1), cnot(0, 2)]
    else:
        gates += [h(q) for q in range(3)]
    return Circuit(3, gates, ("b",) * 3)


def bare_circuit(spec: ExperimentSpec) -> Circuit:
    if spec.encoding != "bare":
        raise ValueError(f"{spec} is not a bare experiment")
    c = bare_prep(spec.state).extend(bare_gate_layer(spec.gates, spec.ccz_mode))
    return with_readout(c, spec.basis)


def encoded_circuit(spec: ExperimentSpec) -> Circuit:
    if spec.encoding != "encoded":
        raise ValueError(f"{spec} is not an encoded experiment")
    c = prep_encoded(spec.state)
    c = c.extend(phase_pattern_circuit(logical_phase_vector(spec.gates)))
    return with_readout(c, spec.basis)


def experiment_circuit(spec: ExperimentSpec) -> Circuit:
    return encoded_circuit(spec) if spec.encoding == "encoded" else bare_circuit(spec)


# readout ---------------------------------------------------------------------------

_Z_FACES = ((0, 1, 2, 3), (4, 5, 6, 7), (0, 1, 4, 5), (0, 2, 4, 6))
_X_LOGICAL_SUPPORT = ((0, 1, 2, 3), (0, 1, 4, 5), (0, 2, 4, 6))
_Z_LOGICAL_SUPPORT = ((0, 4), (0, 2), (0, 1))


@dataclass(frozen=True)
class ReadoutRule:
    """Post-selection and decoding over readout integers.

    Readout integers hold one bit per measured qubit, the lowest qubit in the
    most significant position (so ``format(v, f"0{m}b")`` is the bitstring).
    """

    basis: str
    n_measured: int
    check_masks: tuple[int, ...]
    flag_mask: int
    decode_masks: tuple[int, ...]

    def _mask(self, positions: Iterable[int]) -> int:
        return _positions_mask(positions, self.n_measured)

    def status(self, value: int) -> str | None:
        """None if accepted, otherwise the rejection reason ``"flag"`` or ``"parity"``."""
        if value & self.flag_mask:
            return "flag"
        if any(bin(value & m).count("1") % 2 for m in self.check_masks):
            return "parity"
        return None

    def decode(self, value: int) -> int:
        out = 0
        for m in self.decode_masks:
            out = (out << 1) | (bin(value & m).count("1") & 1)
        return out

    def accepts(self, bits: str) -> bool:
        return self.status(int(bits, 2)) is None

    def decode_bits(self, bits: str) -> str:
        return format(self.decode(int(bits, 2)), f"0{len(self.decode_masks)}b")


def _positions_mask(positions: Iterable[int], m: int) -> int:
    out = 0
    for p in positions:
        out |= 1 << (m - 1 - p)
    return out


def readout_rule(spec: ExperimentSpec) -> ReadoutRule:
    if spec.encoding == "bare":
        return ReadoutRule(spec.basis, 3, (), 0, tuple(_positions_mask([q], 3) for q in range(3)))
    m = 11 if spec.state is TargetState.PLUS3 else 8
    if spec.basis == "X":
        checks = (_positions_mask(range(8), m),)
        decode = tuple(_positions_mask(s, m) for s in _X_LOGICAL_SUPPORT)
    else:
        checks = tuple(_positions_mask(f, m) for f in _Z_FACES)
        decode = tuple(_positions_mask(s, m) for s in _Z_LOGICAL_SUPPORT)
    flag_mask = _positions_mask(range(8, m), m)
    return ReadoutRule(spec.basis, m, checks, flag_mask, decode)


@lru_cache(maxsize=None)
def _ideal_array(state: TargetState, gates: tuple[str, ...], basis: str) -> np.ndarray:
    c = bare_circuit(ExperimentSpec(state, gates, basis, "bare"))
    out = outcome_probabilities(simulate(c), c)
    out.flags.writeable = False
    return out


def ideal_logical_array(spec: ExperimentSpec) -> np.ndarray:
    """Exact 3-bit logical outcome probabilities (index = decoded integer)."""
    return _ideal_array(spec.state, spec.gates, spec.basis)


def ideal_distribution(spec: ExperimentSpec) -> OutcomeDistribution:
    return OutcomeDistribution.from_array(spec.basis, ideal_logical_array(spec), 3, cutoff=1e-12)
