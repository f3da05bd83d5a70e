"""Pauli operators on up to 16 qubits stored as a pair of bitmasks.

An operator is ``i**phase * X^x_mask * Z^z_mask`` where, on every qubit, the X
factor sits to the left of the Z factor.  With that ordering ``Y = iXZ``, so a
``Y`` on qubit ``q`` is stored as both mask bits set and one extra unit of
phase.  Bit ``q`` of a mask refers to qubit ``q``.

Text form: a phase prefix (``+``, ``-``, ``+i``, ``-i``) followed by one of
``IXYZ`` per qubit, qubit 0 leftmost, e.g. ``+ZIIIZIII`` is Z0 Z4.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

MAX_WIDTH = 16

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TEXT_PHASE = {v: k for k, v in _PHASE_TEXT.items()}


def _popcount(v: int) -> int:
    return bin(v).count("1")


class WidthMismatch(ValueError):
    """Raised when two Pauli objects of different widths are combined."""


@dataclass(frozen=True, slots=True)
class PauliOperator:
    width: int
    x_mask: int = 0
    z_mask: int = 0
    phase: int = 0  # exponent of i, mod 4

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        full = (1 << self.width) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits outside the operator width")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction -----------------------------------------------------

    @classmethod
    def identity(cls, width: int) -> PauliOperator:
        return cls(width)

    @classmethod
    def from_support(cls, width: int, kind: str, qubits: Iterable[int]) -> PauliOperator:
        """Hermitian X-, Y- or Z-type operator on ``qubits`` with sign +1."""
        mask = 0
        for q in qubits:
            mask |= 1 << q
        if kind == "X":
            return cls(width, mask, 0)
        if kind == "Z":
            return cls(width, 0, mask)
        if kind == "Y":
            return cls(width, mask, mask, _popcount(mask))
        raise ValueError(f"unknown Pauli kind {kind!r}")

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        text = text.strip()
        for prefix in ("+i", "-i", "+", "-"):
            if text.startswith(prefix):
                shown, body = _TEXT_PHASE[prefix], text[len(prefix):]
                break
        else:
            shown, body = 0, text
        x = z = 0
        n_y = 0
        for q, ch in enumerate(body):
            if ch == "X":
                x |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
                n_y += 1
            elif ch != "I":
                raise ValueError(f"bad Pauli character {ch!r} in {text!r}")
        return cls(len(body), x, z, shown + n_y)

    def to_string(self) -> str:
        y = self.x_mask & self.z_mask
        shown = (self.phase - _popcount(y)) % 4
        chars = []
        for q in range(self.width):
            xb = (self.x_mask >> q) & 1
            zb = (self.z_mask >> q) & 1
            chars.append("IZXY"[xb * 2 + zb])
        return _PHASE_TEXT[shown] + "".join(chars)

    __str__ = to_string

    # queries ------------------------------------------------------------

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    @property
    def support(self) -> list[int]:
        m = self.x_mask | self.z_mask
        return [q for q in range(self.width) if (m >> q) & 1]

    @property
    def is_identity(self) -> bool:
        return not (self.x_mask or self.z_mask)

    def unsigned(self) -> PauliOperator:
        """Hermitian representative with sign +1 (text phase ``+``)."""
        return PauliOperator(self.width, self.x_mask, self.z_mask, _popcount(self.x_mask & self.z_mask))

    def x_part(self) -> PauliOperator:
        return PauliOperator(self.width, self.x_mask, 0)

    def z_part(self) -> PauliOperator:
        return PauliOperator(self.width, 0, self.z_mask)

    def restrict(self, qubits: Sequence[int]) -> PauliOperator:
        """Unsigned operator on ``len(qubits)`` qubits taken from the listed positions."""
        x = z = 0
        for j, q in enumerate(qubits):
            x |= ((self.x_mask >> q) & 1) << j
            z |= ((self.z_mask >> q) & 1) << j
        return PauliOperator(len(qubits), x, z).unsigned()

    def embed(self, width: int, qubits: Sequence[int]) -> PauliOperator:
        """Place this operator on positions ``qubits`` of a wider register."""
        x = z = 0
        for j, q in enumerate(qubits):
            x |= ((self.x_mask >> j) & 1) << q
            z |= ((self.z_mask >> j) & 1) << q
        return PauliOperator(width, x, z, self.phase)

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.width, self.x_mask, self.z_mask, self.phase + 2)


def _check_widths(p: PauliOperator, q: PauliOperator) -> None:
    if p.width != q.width:
        raise WidthMismatch(f"width mismatch: {p.width} vs {q.width}")


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p @ q``.

    Moving ``X^{q.x}`` left past ``Z^{p.z}`` costs ``(-1)^{|p.z & q.x|}``.
    """
    _check_widths(p, q)
    sign = 2 * (_popcount(p.z_mask & q.x_mask) & 1)
    return PauliOperator(p.width, p.x_mask ^ q.x_mask, p.z_mask ^ q.z_mask, p.phase + q.phase + sign)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_widths(p, q)
    return (_popcount(p.x_mask & q.z_mask) + _popcount(p.z_mask & q.x_mask)) % 2 == 0


@dataclass(frozen=True)
class PauliGroup:
    generators: tuple[PauliOperator, ...]

    def __init__(self, generators: Iterable[PauliOperator]) -> None:
        gens = tuple(generators)
        if gens and len({g.width for g in gens}) != 1:
            raise WidthMismatch("group generators have different widths")
        object.__setattr__(self, "generators", gens)

    @property
    def width(self) -> int:
        if not self.generators:
            raise ValueError("empty group has no width")
        return self.generators[0].width

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def extended(self, extra: Iterable[PauliOperator]) -> PauliGroup:
        return PauliGroup(self.generators + tuple(extra))

    def is_abelian(self) -> bool:
        g = self.generators
        return all(commutes(a, b) for i, a in enumerate(g) for b in g[i + 1:])

    def rank(self) -> int:
        return len(_reduced_basis(self.generators))

    def elements(self) -> list[PauliOperator]:
        """All ``2**len(generators)`` products, by brute force."""
        out = []
        for bits in range(1 << len(self.generators)):
            acc = PauliOperator.identity(self.width)
            for j, g in enumerate(self.generators):
                if (bits >> j) & 1:
                    acc = multiply(acc, g)
            out.append(acc)
        return out


class Membership(Enum):
    NOT_MEMBER = "NotMember"
    PLUS = "MemberWithSign(+1)"
    MINUS = "MemberWithSign(-1)"


def _symplectic_vector(p: PauliOperator) -> int:
    return p.x_mask | (p.z_mask << p.width)


def _reduced_basis(gens: Sequence[PauliOperator]) -> list[tuple[int, int, PauliOperator]]:
    """GF(2) echelon basis as (pivot bit, vector, accumulated operator)."""
    basis: list[tuple[int, int, PauliOperator]] = []
    for g in gens:
        v, op = _symplectic_vector(g), g
        for pivot, bv, bop in basis:
            if (v >> pivot) & 1:
                v ^= bv
                op = multiply(op, bop)
        if v:
            pivot = v.bit_length() - 1
            # keep the basis fully reduced on pivots
            new_basis = []
            for p2, bv, bop in basis:
                if (bv >> pivot) & 1:
                    bv ^= v
                    bop = multiply(bop, op)
                new_basis.append((p2, bv, bop))
            basis = new_basis + [(pivot, v, op)]
            basis.sort(key=lambda t: -t[0])
    return basis


def in_group(p: PauliOperator, g: PauliGroup) -> Membership:
    """Decide whether ``p`` or ``-p`` lies in the group generated by ``g``."""
    if g.generators:
        _check_widths(p, g.generators[0])
    v = _symplectic_vector(p)
    acc = PauliOperator.identity(p.width)
    for pivot, bv, bop in _reduced_basis(g.generators):
        if (v >> pivot) & 1:
            v ^= bv
            acc = multiply(acc, bop)
    if v:
        return Membership.NOT_MEMBER
    # p = i**d * acc
    d = (p.phase - acc.phase) % 4
    if d == 0:
        return Membership.PLUS
    if d == 2:
        return Membership.MINUS
    return Membership.NOT_MEMBER


def syndrome(p: PauliOperator, checks: PauliGroup | Sequence[PauliOperator]) -> list[int]:
    return [0 if commutes(p, c) else 1 for c in checks]
