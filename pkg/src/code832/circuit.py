"""Gate-level circuits, location numbering and Clifford propagation of Pauli faults."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .pauli import PauliOperator

PREP_GATES = ("PREPZ", "PREPX")
MEASURE_GATES = ("MZ", "MX")
ONE_QUBIT_GATES = ("H", "X", "Z", "TPOW")
MULTI_QUBIT_GATES = {"CNOT": 2, "CZ": 2, "CCZ": 3}
ARITY = {**{g: 1 for g in PREP_GATES + MEASURE_GATES + ONE_QUBIT_GATES}, **MULTI_QUBIT_GATES}
ROLES = ("d", "f", "b")  # data, flag, bare


class CircuitError(ValueError):
    pass


class UnsupportedPropagation(Exception):
    """A fault reached a non-Clifford gate it does not commute with."""

    def __init__(self, location: int, gate: Gate, fault: PauliOperator) -> None:
        super().__init__(f"cannot propagate {fault} through non-Clifford {gate} at location {location}")
        self.location = location
        self.gate = gate
        self.fault = fault


@dataclass(frozen=True, slots=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    k: int = 0  # TPOW exponent: diag(1, exp(i*pi*k/4))

    def __post_init__(self) -> None:
        if self.name not in ARITY:
            raise CircuitError(f"unknown gate {self.name!r}")
        if len(self.qubits) != ARITY[self.name]:
            raise CircuitError(f"{self.name} takes {ARITY[self.name]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated qubit in {self.name} {self.qubits}")
        object.__setattr__(self, "k", self.k % 8)

    @property
    def is_prep(self) -> bool:
        return self.name in PREP_GATES

    @property
    def is_measurement(self) -> bool:
        return self.name in MEASURE_GATES

    @property
    def is_multi_qubit(self) -> bool:
        return self.name in MULTI_QUBIT_GATES

    @property
    def is_clifford(self) -> bool:
        if self.name == "TPOW":
            return self.k % 2 == 0
        return self.name != "CCZ"

    def to_text(self) -> str:
        args = " ".join(map(str, self.qubits))
        if self.name == "TPOW":
            return f"TPOW {args} {self.k}"
        return f"{self.name} {args}"

    def __str__(self) -> str:
        return self.to_text()


def prep_z(q: int) -> Gate:
    return Gate("PREPZ", (q,))


def prep_x(q: int) -> Gate:
    return Gate("PREPX", (q,))


def h(q: int) -> Gate:
    return Gate("H", (q,))


def tpow(q: int, k: int) -> Gate:
    return Gate("TPOW", (q,), k)


def cnot(c: int, t: int) -> Gate:
    return Gate("CNOT", (c, t))


def cz(a: int, b: int) -> Gate:
    return Gate("CZ", (a, b))


def ccz(a: int, b: int, c: int) -> Gate:
    return Gate("CCZ", (a, b, c))


def measure_z(q: int) -> Gate:
    return Gate("MZ", (q,))


def measure_x(q: int) -> Gate:
    return Gate("MX", (q,))


def compile_ccz(a: int, b: int, c: int) -> list[Gate]:
    """CCZ as 6 CNOTs and 7 T-type phase gates (Toffoli network without the Hadamards)."""
    return [
        cnot(b, c), tpow(c, 7),
        cnot(a, c), tpow(c, 1),
        cnot(b, c), tpow(c, 7),
        cnot(a, c), tpow(b, 1), tpow(c, 1),
        cnot(a, b), tpow(a, 1), tpow(b, 7),
        cnot(a, b),
    ]


@dataclass(frozen=True)
class Circuit:
    width: int
    roles: tuple[str, ...]
    gates: tuple[Gate, ...]

    def __init__(self, width: int, gates: Iterable[Gate] = (), roles: Sequence[str] | None = None) -> None:
        roles = tuple(roles) if roles is not None else ("d",) * width
        if len(roles) != width or any(r not in ROLES for r in roles):
            raise CircuitError(f"bad roles {roles} for width {width}")
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "gates", tuple(gates))
        self._validate()

    def _validate(self) -> None:
        prepared = [False] * self.width
        measured = [False] * self.width
        for loc, g in enumerate(self.gates):
            for q in g.qubits:
                if not 0 <= q < self.width:
                    raise CircuitError(f"location {loc}: qubit {q} out of range")
                if measured[q]:
                    raise CircuitError(f"location {loc}: qubit {q} used after its measurement")
                if g.is_prep:
                    if prepared[q]:
                        raise CircuitError(f"location {loc}: qubit {q} prepared twice")
                    prepared[q] = True
                elif not prepared[q]:
                    raise CircuitError(f"location {loc}: qubit {q} used before preparation")
                if g.is_measurement:
                    measured[q] = True

    # views --------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit | Sequence[Gate]) -> Circuit:
        gates = other.gates if isinstance(other, Circuit) else tuple(other)
        return Circuit(self.width, self.gates + gates, self.roles)

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.width, self.gates + tuple(gates), self.roles)

    def without(self, locations: Iterable[int]) -> Circuit:
        drop = set(locations)
        return Circuit(self.width, (g for i, g in enumerate(self.gates) if i not in drop), self.roles)

    def qubits_with_role(self, role: str) -> list[int]:
        return [q for q, r in enumerate(self.roles) if r == role]

    @property
    def data_qubits(self) -> list[int]:
        return [q for q, r in enumerate(self.roles) if r != "f"]

    @property
    def flag_qubits(self) -> list[int]:
        return self.qubits_with_role("f")

    def measurement_bases(self) -> dict[int, str]:
        """Qubit -> 'Z' or 'X' for every measured qubit."""
        return {g.qubits[0]: g.name[1] for g in self.gates if g.is_measurement}

    # text format ----------------------------------------------------------

    def to_text(self) -> str:
        lines = ["ROLES " + " ".join(self.roles)]
        lines += [g.to_text() for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Circuit:
        roles = None
        gates = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *args = line.split()
            head = head.upper()
            try:
                if head == "ROLES":
                    roles = tuple(args)
                elif head == "TPOW":
                    gates.append(tpow(int(args[0]), int(args[1])))
                else:
                    gates.append(Gate(head, tuple(int(a) for a in args)))
            except (IndexError, ValueError) as exc:
                raise CircuitError(f"line {lineno}: {exc}") from exc
        if roles is None:
            raise CircuitError("missing ROLES header")
        return cls(len(roles), gates, roles)


class PhaseVector(tuple):
    """Eight T-power exponents (mod 8), one per data qubit."""

    def __new__(cls, exps: Iterable[int] = (0,) * 8) -> PhaseVector:
        vals = tuple(int(e) % 8 for e in exps)
        if len(vals) != 8:
            raise ValueError(f"phase vector needs 8 entries, got {len(vals)}")
        return super().__new__(cls, vals)

    def __add__(self, other: Sequence[int]) -> PhaseVector:  # type: ignore[override]
        return PhaseVector(a + b for a, b in zip(self, other))

    @property
    def is_identity(self) -> bool:
        return not any(self)


def phase_pattern_circuit(v: Sequence[int], qubits: Sequence[int] = tuple(range(8))) -> list[Gate]:
    v = PhaseVector(v)
    return [tpow(q, k) for q, k in zip(qubits, v) if k]


class LocationCounts(NamedTuple):
    n_g: int
    n_m: int
    total: int


def count_locations(c: Circuit | Sequence[Gate], ccz_mode: str = "native") -> LocationCounts:
    if ccz_mode not in ("native", "compiled"):
        raise ValueError(f"ccz_mode must be 'native' or 'compiled', got {ccz_mode!r}")
    gates = c.gates if isinstance(c, Circuit) else tuple(c)
    if ccz_mode == "compiled":
        gates = tuple(x for g in gates for x in (compile_ccz(*g.qubits) if g.name == "CCZ" else (g,)))
    n_g = sum(g.is_multi_qubit for g in gates)
    n_m = sum(g.is_measurement for g in gates)
    return LocationCounts(n_g, n_m, len(gates))


# Clifford conjugation --------------------------------------------------------


def _op(width: int, x: int = 0, z: int = 0, phase: int = 0) -> PauliOperator:
    return PauliOperator(width, x, z, phase)


def _images(gate: Gate, width: int, loc: int, fault: PauliOperator) -> tuple[list, list]:
    """Images of X_q and Z_q (q in gate.qubits) under conjugation by the gate."""
    qs = gate.qubits
    b = [1 << q for q in qs]
    name = gate.name
    if name == "H":
        return [_op(width, z=b[0])], [_op(width, x=b[0])]
    if name == "X":
        return [_op(width, x=b[0])], [_op(width, z=b[0], phase=2)]
    if name == "Z":
        return [_op(width, x=b[0], phase=2)], [_op(width, z=b[0])]
    if name == "TPOW":
        k = gate.k
        if k % 2:
            if fault.x_mask & b[0]:
                raise UnsupportedPropagation(loc, gate, fault)
            return [None], [_op(width, z=b[0])]
        # S^m: X -> i^m X Z^m  (k = 2m)
        m = k // 2
        return [_op(width, x=b[0], z=b[0] if m % 2 else 0, phase=m)], [_op(width, z=b[0])]
    if name == "CNOT":
        c, t = b
        return (
            [_op(width, x=c | t), _op(width, x=t)],
            [_op(width, z=c), _op(width, z=c | t)],
        )
    if name == "CZ":
        a, bb = b
        return (
            [_op(width, x=a, z=bb), _op(width, x=bb, z=a)],
            [_op(width, z=a), _op(width, z=bb)],
        )
    if name == "CCZ":
        if fault.x_mask & (b[0] | b[1] | b[2]):
            raise UnsupportedPropagation(loc, gate, fault)
        return [None] * 3, [_op(width, z=m) for m in b]
    raise AssertionError(name)


def conjugate(gate: Gate, p: PauliOperator, loc: int = -1) -> PauliOperator:
    """Return ``U p U^dagger`` for the gate's unitary ``U``."""
    touched = 0
    for q in gate.qubits:
        touched |= 1 << q
    if not ((p.x_mask | p.z_mask) & touched) or gate.is_measurement:
        return p
    if gate.is_prep:
        # a preparation discards whatever acted on the qubit before
        return _op(p.width, p.x_mask & ~touched, p.z_mask & ~touched, p.phase)
    x_img, z_img = _images(gate, p.width, loc, p)
    out = _op(p.width, phase=p.phase)
    for q, img in zip(gate.qubits, x_img):
        if (p.x_mask >> q) & 1:
            out = out * img
    for q, img in zip(gate.qubits, z_img):
        if (p.z_mask >> q) & 1:
            out = out * img
    return out * _op(p.width, p.x_mask & ~touched, p.z_mask & ~touched)


def propagate_fault(c: Circuit, site: int, fault: PauliOperator, start_after: bool = True) -> PauliOperator:
    """Push a Pauli fault at location ``site`` to the end of the circuit.

    ``fault`` acts either on the site's qubits (width = gate arity, ordered as
    ``gate.qubits``) or on the whole register.  With ``start_after`` the fault
    occurs right after the site's gate, otherwise right before it.
    """
    gate = c.gates[site]
    if fault.width == c.width:
        p = fault
        touched = sum(1 << q for q in gate.qubits)
        if (p.x_mask | p.z_mask) & ~touched:
            raise ValueError(f"fault {fault} is not supported on location {site} qubits {gate.qubits}")
    elif fault.width == len(gate.qubits):
        p = fault.embed(c.width, gate.qubits)
    else:
        raise ValueError(f"fault width {fault.width} fits neither the site nor the register")
    start = site + 1 if start_after else site
    if not start_after and gate.is_prep:
        raise ValueError("a fault before a preparation has no effect")
    for loc in range(start, len(c.gates)):
        p = conjugate(c.gates[loc], p, loc)
    return p
