"""The [[8,3,2]] color code, its target encoded states, and residual-error classification."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .pauli import (
    Membership,
    PauliGroup,
    PauliOperator,
    commutes,
    in_group,
    syndrome,
)

P = PauliOperator.from_string


@dataclass(frozen=True)
class CssCode:
    n: int
    k: int
    x_stabilizers: PauliGroup
    z_stabilizers: PauliGroup
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]

    @property
    def stabilizers(self) -> PauliGroup:
        return self.x_stabilizers.extended(self.z_stabilizers)

    def logical_action(self, e: PauliOperator) -> PauliOperator:
        """Logical Pauli (on k qubits, unsigned) that ``e`` implements modulo stabilizers."""
        x = z = 0
        for j in range(self.k):
            if not commutes(e, self.logical_z[j]):
                x |= 1 << j
            if not commutes(e, self.logical_x[j]):
                z |= 1 << j
        return PauliOperator(self.k, x, z).unsigned()

    def to_text(self) -> str:
        lines = []
        for header, ops in (
            ("XSTAB", self.x_stabilizers),
            ("ZSTAB", self.z_stabilizers),
            ("LOGX", self.logical_x),
            ("LOGZ", self.logical_z),
        ):
            lines.append(header)
            lines.extend(op.to_string() for op in ops)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CssCode:
        blocks: dict[str, list[PauliOperator]] = {}
        current = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line in ("XSTAB", "ZSTAB", "LOGX", "LOGZ"):
                current = blocks.setdefault(line, [])
            elif current is None:
                raise ValueError(f"Pauli string before any header: {line!r}")
            else:
                current.append(P(line))
        missing = {"XSTAB", "ZSTAB", "LOGX", "LOGZ"} - blocks.keys()
        if missing:
            raise ValueError(f"missing sections: {sorted(missing)}")
        lx, lz = tuple(blocks["LOGX"]), tuple(blocks["LOGZ"])
        if len(lx) != len(lz):
            raise ValueError("LOGX and LOGZ must have the same length")
        width = (blocks["XSTAB"] + blocks["ZSTAB"] + list(lx))[0].width
        return cls(width, len(lx), PauliGroup(blocks["XSTAB"]), PauliGroup(blocks["ZSTAB"]), lx, lz)


def code_832() -> CssCode:
    return CssCode(
        n=8,
        k=3,
        x_stabilizers=PauliGroup([P("+XXXXXXXX")]),
        z_stabilizers=PauliGroup(
            [
                P("+ZZZZIIII"),  # 0 1 2 3
                P("+IIIIZZZZ"),  # 4 5 6 7
                P("+ZZIIZZII"),  # 0 1 4 5
                P("+ZIZIZIZI"),  # 0 2 4 6
            ]
        ),
        logical_x=(P("+XXXXIIII"), P("+XXIIXXII"), P("+XIXIXIXI")),
        logical_z=(P("+ZIIIZIII"), P("+ZIZIIIII"), P("+ZZIIIIII")),
    )


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def validate_code(c: CssCode) -> ValidationReport:
    report = ValidationReport()
    fail = report.failures.append
    named = [(f"XSTAB[{i}]", g) for i, g in enumerate(c.x_stabilizers)]
    named += [(f"ZSTAB[{i}]", g) for i, g in enumerate(c.z_stabilizers)]
    lx = [(f"LOGX[{i}]", g) for i, g in enumerate(c.logical_x)]
    lz = [(f"LOGZ[{i}]", g) for i, g in enumerate(c.logical_z)]

    for name, op in named + lx + lz:
        if op.width != c.n:
            fail(f"{name} has width {op.width}, expected {c.n}")
    if report.failures:
        return report
    if len(lx) != c.k or len(lz) != c.k:
        fail(f"expected {c.k} logical X and Z operators, got {len(lx)} and {len(lz)}")
    for name, op in named:
        if op.x_mask and op.z_mask:
            fail(f"{name} is not CSS (mixed X and Z)")
    for i, (na, a) in enumerate(named):
        for nb, b in named[i + 1:]:
            if not commutes(a, b):
                fail(f"{na} anticommutes with {nb}")
    for nl, l in lx + lz:
        for ns, s in named:
            if not commutes(l, s):
                fail(f"{nl} anticommutes with {ns}")
    for i, (na, a) in enumerate(lx):
        for j, (nb, b) in enumerate(lz):
            if commutes(a, b) == (i == j):
                rel = "commutes" if i == j else "anticommutes"
                fail(f"{na} {rel} with {nb}")
    for group in (lx, lz):
        for i, (na, a) in enumerate(group):
            for nb, b in group[i + 1:]:
                if not commutes(a, b):
                    fail(f"{na} anticommutes with {nb}")
    stab = c.stabilizers
    if stab.rank() != len(stab):
        fail(f"stabilizer generators are dependent (rank {stab.rank()} < {len(stab)})")
    if len(stab) + c.k != c.n:
        fail(f"{len(stab)} generators and k={c.k} do not match n={c.n}")
    if in_group(PauliOperator(c.n, phase=2), stab) is Membership.PLUS:
        fail("-I is in the stabilizer group")
    for nl, l in lx + lz:
        if in_group(l, stab) is not Membership.NOT_MEMBER:
            fail(f"{nl} lies in the stabilizer group")
    return report


class TargetState(Enum):
    GHZ = "GHZ"
    PLUS3 = "PLUS3"


@dataclass(frozen=True)
class TargetStateGroup:
    code: CssCode
    state: TargetState
    state_stabilizers: PauliGroup


def target_state_group(c: CssCode, state: TargetState | str) -> TargetStateGroup:
    state = TargetState(state)
    lx, lz = c.logical_x, c.logical_z
    if state is TargetState.GHZ:
        extra = [lx[0] * lx[1] * lx[2], lz[0] * lz[1], lz[1] * lz[2]]
    else:
        extra = list(lx)
    extra = [e.unsigned() for e in extra]
    return TargetStateGroup(c, state, c.stabilizers.extended(extra))


class Residual(Enum):
    TRIVIAL = "TrivialOnTarget"
    DETECTABLE = "DetectableByCode"
    LOGICAL = "LogicalOnTarget"


def classify_residual(e: PauliOperator, t: TargetStateGroup) -> Residual:
    if e.width != t.code.n:
        raise ValueError(f"residual acts on {e.width} qubits; the code has {t.code.n} data qubits")
    if any(syndrome(e, t.code.stabilizers)):
        return Residual.DETECTABLE
    if in_group(e, t.state_stabilizers) is Membership.PLUS:
        return Residual.TRIVIAL
    return Residual.LOGICAL


def with_logical_z(c: CssCode, index: int, op: PauliOperator) -> CssCode:
    lz = list(c.logical_z)
    lz[index] = op
    return replace(c, logical_z=tuple(lz))
