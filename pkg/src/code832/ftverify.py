"""Exhaustive single-fault enumeration for encoded circuits.

Every fault at every location is pushed to the end of the circuit.  The
residual is then judged the way the readout would judge it: flag flips and
fired parity checks reject the shot, components the measured basis cannot see
are dropped, and whatever survives is compared against the target state's
stabilizer group.  Faults that cannot be propagated as Paulis (they hit a
T-type gate) are judged by direct simulation instead.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from . import kernels
from .circuit import Circuit, Gate, UnsupportedPropagation, propagate_fault
from .code import CssCode, Residual, TargetStateGroup, classify_residual
from .pauli import Membership, PauliOperator, in_group, syndrome
from .reference import ReadoutRule
from .statevector import outcome_probabilities, simulate

PRECONDITION_TOL = 1e-10
_LOCAL = "IXYZ"


def location_paulis(w: int) -> list[PauliOperator]:
    """The ``4**w - 1`` non-identity Paulis on ``w`` qubits.

    Ordered by base-4 digits (I, X, Y, Z), first qubit most significant.
    """
    out = []
    for code in range(1, 4 ** w):
        chars = []
        for j in range(w):
            chars.append(_LOCAL[(code >> (2 * (w - 1 - j))) & 3])
        out.append(PauliOperator.from_string("+" + "".join(chars)))
    return out


@dataclass(frozen=True)
class FaultSite:
    location: int
    gate: Gate
    faults: tuple[PauliOperator, ...]  # local to gate.qubits
    start_after: bool


def site_faults(g: Gate) -> tuple[tuple[PauliOperator, ...], bool]:
    """Fault set of one location and whether faults act after (True) or before it."""
    if g.name == "PREPZ":
        return (PauliOperator.from_string("+X"),), True
    if g.name == "PREPX":
        return (PauliOperator.from_string("+Z"),), True
    if g.name == "MZ":
        return (PauliOperator.from_string("+X"),), False
    if g.name == "MX":
        return (PauliOperator.from_string("+Z"),), False
    return tuple(location_paulis(len(g.qubits))), True


def enumerate_fault_sites(c: Circuit) -> list[FaultSite]:
    sites = []
    for loc, g in enumerate(c.gates):
        faults, after = site_faults(g)
        sites.append(FaultSite(loc, g, faults, after))
    return sites


class Verdict(Enum):
    REJECTED_BY_FLAG = "RejectedByFlag"
    REJECTED_BY_POSTSELECTION = "RejectedByPostselection"
    ACCEPTED_TRIVIAL = "AcceptedTrivial"
    ACCEPTED_LOGICAL = "AcceptedLogical"

    @property
    def accepted(self) -> bool:
        return self in (Verdict.ACCEPTED_TRIVIAL, Verdict.ACCEPTED_LOGICAL)


@dataclass(frozen=True)
class FaultOutcome:
    location: int
    gate: str
    injected: PauliOperator
    residual: PauliOperator | None  # None when judged by simulation
    verdict: Verdict
    logical_action: str | None = None
    method: str = "propagation"

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "gate": self.gate,
            "injected": self.injected.to_string(),
            "residual": None if self.residual is None else self.residual.to_string(),
            "verdict": self.verdict.value,
            "logical_action": self.logical_action,
            "method": self.method,
        }


@dataclass
class FtReport:
    name: str
    basis: str
    state: str
    outcomes: list[FaultOutcome] = field(default_factory=list)
    n_sites: int = 0
    precondition_ok: bool = True
    diagnostic: str = ""

    @property
    def passed(self) -> bool:
        return self.precondition_ok and not any(o.verdict is Verdict.ACCEPTED_LOGICAL for o in self.outcomes)

    def counts(self) -> dict[str, int]:
        c = Counter(o.verdict.value for o in self.outcomes)
        return {v.value: c.get(v.value, 0) for v in Verdict}

    def logical_failures(self) -> list[FaultOutcome]:
        return [o for o in self.outcomes if o.verdict is Verdict.ACCEPTED_LOGICAL]

    def summary(self) -> dict:
        return {
            "name": self.name,
            "state": self.state,
            "basis": self.basis,
            "passed": self.passed,
            "precondition_ok": self.precondition_ok,
            "diagnostic": self.diagnostic,
            "sites": self.n_sites,
            "faults": len(self.outcomes),
            "counts": self.counts(),
        }

    def to_json(self, per_site: bool = True) -> str:
        d = self.summary()
        if per_site:
            d["outcomes"] = [o.to_dict() for o in self.outcomes]
        return json.dumps(d, indent=1, sort_keys=True)

    def summary_line(self) -> str:
        counts = ", ".join(f"{k}={v}" for k, v in self.counts().items())
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} [{self.state} @{self.basis}] sites={self.n_sites} faults={len(self.outcomes)} {counts}"


# verdict helpers --------------------------------------------------------------


def _readout_positions(c: Circuit) -> tuple[list[int], dict[int, str]]:
    bases = c.measurement_bases()
    return sorted(bases), bases


def readout_flips(c: Circuit, residual: PauliOperator) -> int:
    """Readout integer of bits the residual flips (X flips Z readout, Z flips X readout)."""
    qs, bases = _readout_positions(c)
    m = len(qs)
    flips = 0
    for j, q in enumerate(qs):
        bit = residual.x_mask if bases[q] == "Z" else residual.z_mask
        if (bit >> q) & 1:
            flips |= 1 << (m - 1 - j)
    return flips


def visible_data_part(c: Circuit, residual: PauliOperator, data: list[int], basis: str) -> PauliOperator:
    local = residual.restrict(data)
    return local.x_part() if basis == "Z" else local.z_part()


def _clifford_verdict(
    c: Circuit, residual: PauliOperator, t: TargetStateGroup, r: ReadoutRule, data: list[int]
) -> tuple[Verdict, str | None]:
    flips = readout_flips(c, residual)
    reason = r.status(flips)
    if reason == "flag":
        return Verdict.REJECTED_BY_FLAG, None
    if reason == "parity":
        return Verdict.REJECTED_BY_POSTSELECTION, None
    survivor = visible_data_part(c, residual, data, r.basis)
    kind = classify_residual(survivor, t)
    if kind is Residual.DETECTABLE:
        return Verdict.REJECTED_BY_POSTSELECTION, None
    action = t.code.logical_action(survivor).to_string()
    if kind is Residual.TRIVIAL:
        return Verdict.ACCEPTED_TRIVIAL, action
    return Verdict.ACCEPTED_LOGICAL, action


@lru_cache(maxsize=64)
def _readout_tables(r: ReadoutRule) -> tuple[np.ndarray, np.ndarray]:
    values = np.arange(1 << r.n_measured, dtype=np.uint64)
    return kernels.postselect_decode(values, np.array(r.check_masks, dtype=np.uint64), r.flag_mask, np.array(r.decode_masks, dtype=np.uint64))


def decoded_accepted(c: Circuit, r: ReadoutRule, faults: dict[int, PauliOperator] | None = None) -> tuple[float, float, np.ndarray]:
    """(acceptance probability, flag-rejection probability, decoded distribution of accepted shots)."""
    probs = outcome_probabilities(simulate(c, faults), c)
    status, decoded = _readout_tables(r)
    acc = status == 0
    p_acc = float(probs[acc].sum())
    p_flag = float(probs[status == 1].sum())
    dist = np.bincount(decoded[acc], weights=probs[acc], minlength=1 << len(r.decode_masks))
    if p_acc > 0:
        dist = dist / p_acc
    return p_acc, p_flag, dist


def simulated_verdict(
    c: Circuit, r: ReadoutRule, faults: dict[int, PauliOperator], ideal: np.ndarray | None = None, tol: float = 1e-9
) -> Verdict:
    """Judge an injected fault configuration by exact simulation of the whole circuit."""
    if ideal is None:
        ideal = decoded_accepted(c, r)[2]
    p_acc, p_flag, dist = decoded_accepted(c, r, faults)
    if p_acc < tol:
        return Verdict.REJECTED_BY_FLAG if p_flag > tol else Verdict.REJECTED_BY_POSTSELECTION
    if 0.5 * np.abs(dist - ideal).sum() < tol:
        return Verdict.ACCEPTED_TRIVIAL
    return Verdict.ACCEPTED_LOGICAL


def check_precondition(c: Circuit, t: TargetStateGroup) -> tuple[bool, str]:
    data = [q for q, role in enumerate(c.roles) if role == "d"]
    if len(data) != t.code.n:
        return False, f"circuit has {len(data)} data qubits, code needs {t.code.n}"
    state = simulate(c)
    for g in t.state_stabilizers:
        full = g.embed(c.width, data)
        ev = state.expectation(full)
        if abs(ev - 1) > PRECONDITION_TOL:
            return False, f"output is not a +1 eigenstate of {g} (expectation {ev.real:+.6f})"
    for q in c.flag_qubits:
        ev = state.expectation(PauliOperator.from_support(c.width, "X", [q]))
        if abs(ev - 1) > PRECONDITION_TOL:
            return False, f"flag qubit {q} does not end in |+> (expectation {ev.real:+.6f})"
    return True, ""


def verify_fault_tolerance(c: Circuit, t: TargetStateGroup, r: ReadoutRule, name: str = "") -> FtReport:
    """Classify every single fault of ``c`` (which must include its readout layer)."""
    report = FtReport(name or "circuit", r.basis, t.state.value)
    ok, diag = check_precondition(c, t)
    if not ok:
        report.precondition_ok = False
        report.diagnostic = diag
        return report
    data = [q for q, role in enumerate(c.roles) if role == "d"]
    sites = enumerate_fault_sites(c)
    report.n_sites = len(sites)
    ideal = None
    for site in sites:
        for f in site.faults:
            full = f.embed(c.width, site.gate.qubits)
            try:
                residual = propagate_fault(c, site.location, full, site.start_after)
            except UnsupportedPropagation:
                if ideal is None:
                    ideal = decoded_accepted(c, r)[2]
                # a fault "before" a measurement is what simulate applies at that location
                verdict = simulated_verdict(c, r, {site.location: full}, ideal)
                report.outcomes.append(FaultOutcome(site.location, site.gate.to_text(), f, None, verdict, None, "statevector"))
                continue
            verdict, action = _clifford_verdict(c, residual, t, r, data)
            report.outcomes.append(FaultOutcome(site.location, site.gate.to_text(), f, residual, verdict, action))
    return report


# witness lists ----------------------------------------------------------------


@dataclass(frozen=True)
class WitnessLine:
    residual: PauliOperator
    text: str
    annotation: str


def qubit_label(c: Circuit, q: int) -> str:
    if c.roles[q] == "f":
        return f"a{c.flag_qubits.index(q)}"
    return str(q)


def format_support(c: Circuit, p: PauliOperator) -> str:
    parts = []
    for q in p.support:
        xb, zb = (p.x_mask >> q) & 1, (p.z_mask >> q) & 1
        parts.append(f"{'IZXY'[xb * 2 + zb]}{qubit_label(c, q)}")
    return " ".join(parts) if parts else "I"


def format_logical(p: PauliOperator) -> str:
    parts = []
    for j in range(p.width):
        xb, zb = (p.x_mask >> j) & 1, (p.z_mask >> j) & 1
        if xb or zb:
            parts.append("IZXY"[xb * 2 + zb] + "\u0304" + str(j + 1))
    return "".join(parts) if parts else "I"


def annotate(c: Circuit, code: CssCode, p: PauliOperator) -> str:
    data = [q for q, role in enumerate(c.roles) if role == "d"]
    flag_bits = sum(1 << q for q in c.flag_qubits)
    if (p.x_mask | p.z_mask) & flag_bits:
        return "detectable"
    d = p.restrict(data)
    if any(syndrome(d, code.stabilizers)):
        return "detectable"
    if in_group(d, code.stabilizers) is not Membership.NOT_MEMBER:
        return "stabilizer"
    return format_logical(code.logical_action(d))


def witness_errors(c: Circuit, code: CssCode, qubit: int, kind: str) -> list[WitnessLine]:
    """Multi-qubit residuals of a single ``kind`` ('X' or 'Z') fault on ``qubit``.

    The fault is placed after the qubit's preparation and after each gate on it;
    lines are listed from the latest fault position to the earliest.
    """
    lines: list[WitnessLine] = []
    seen = set()
    positions = [loc for loc, g in enumerate(c.gates) if qubit in g.qubits and not g.is_measurement]
    for loc in reversed(positions):
        fault = PauliOperator.from_support(c.width, kind, [qubit])
        res = propagate_fault(c, loc, fault, True)
        part = res.x_part() if kind == "X" else res.z_part()
        if part.weight < 2 or (part.x_mask, part.z_mask) in seen:
            continue
        seen.add((part.x_mask, part.z_mask))
        lines.append(WitnessLine(part, format_support(c, part), annotate(c, code, part)))
    return lines


def gate_fault_witness(c: Circuit, code: CssCode, loc: int, local: str) -> WitnessLine:
    """Residual of a named two-qubit fault (e.g. ``"ZZ"``) right after location ``loc``."""
    fault = PauliOperator.from_string("+" + local)
    res = propagate_fault(c, loc, fault, True)
    return WitnessLine(res, format_support(c, res), annotate(c, code, res))
