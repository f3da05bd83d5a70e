import numpy as np
import pytest

from code832.pauli import PauliOperator
from code832.statevector import StateVector

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense matrix of ``i**phase * prod_q X^x Z^z``, qubit 0 most significant."""
    out = np.array([[1.0 + 0j]])
    for q in range(p.width):
        m = _I
        if (p.x_mask >> q) & 1:
            m = m @ _X
        if (p.z_mask >> q) & 1:
            m = m @ _Z
        out = np.kron(out, m)
    return (1j ** p.phase) * out


def project(psi: np.ndarray, n: int, generators) -> np.ndarray:
    """Apply prod (1+g)/2 to ``psi`` and renormalize."""
    s = StateVector(n, psi.copy())
    for g in generators:
        t = s.copy()
        t.apply_pauli(g)
        s.amps = (s.amps + t.amps) / 2
    return s.amps / np.linalg.norm(s.amps)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def encoded_state(t, seed=7) -> np.ndarray:
    """Exact +1 eigenstate of a target group, built by projecting a random vector."""
    r = np.random.default_rng(seed)
    n = t.code.n
    psi = r.normal(size=1 << n) + 1j * r.normal(size=1 << n)
    return project(psi, n, list(t.state_stabilizers))


def oracle_residual(e: PauliOperator, t, psi: np.ndarray) -> str:
    """Classify ``e`` by acting on the encoded state: leaves the codespace,
    fixes the state exactly, or neither."""
    s = StateVector(e.width, psi.copy())
    s.apply_pauli(e)
    phi = s.amps
    p = StateVector(e.width, phi.copy())
    for g in t.code.stabilizers:
        q = p.copy()
        q.apply_pauli(g)
        p.amps = (p.amps + q.amps) / 2
    if np.linalg.norm(p.amps) < 1e-9:
        return "DetectableByCode"
    if abs(np.vdot(psi, phi) - 1) < 1e-9:
        return "TrivialOnTarget"
    return "LogicalOnTarget"


def low_weight_paulis(n=8, max_weight=2):
    import itertools

    out = []
    for w in range(1, max_weight + 1):
        for qs in itertools.combinations(range(n), w):
            for kinds in itertools.product("XYZ", repeat=w):
                chars = ["I"] * n
                for q, k in zip(qs, kinds):
                    chars[q] = k
                out.append(PauliOperator.from_string("+" + "".join(chars)))
    return out


_PAIRS = {"CZ12": (0, 1), "CZ13": (0, 2), "CZ23": (1, 2), "CCZ": (0, 1, 2)}


def logical_diagonal(gates) -> np.ndarray:
    """Phases of the 3-qubit diagonal gate on |x1 x2 x3>, index = x1 x2 x3 as bits."""
    d = np.ones(8, dtype=complex)
    for x in range(8):
        bits = [(x >> (2 - i)) & 1 for i in range(3)]
        for g in gates:
            if all(bits[i] for i in _PAIRS[g]):
                d[x] *= -1
    return d


def encoded_basis_states(code) -> list[np.ndarray]:
    """|x1 x2 x3> encoded, built from |0...0> by projection and logical X."""
    zero = np.zeros(1 << code.n, dtype=complex)
    zero[0] = 1
    base = project(zero, code.n, list(code.stabilizers))
    out = []
    for x in range(8):
        s = StateVector(code.n, base.copy())
        for i in range(3):
            if (x >> (2 - i)) & 1:
                s.apply_pauli(code.logical_x[i])
        out.append(s.amps)
    return out


def transversal_overlap(gates) -> float:
    """|tr(D^dag M)| / 8 where M is the phase-pattern unitary restricted to the codespace."""
    from code832.circuit import phase_pattern_circuit
    from code832.code import code_832
    from code832.reference import logical_phase_vector

    code = code_832()
    basis = encoded_basis_states(code)
    layer = phase_pattern_circuit(logical_phase_vector(gates))
    m = np.zeros((8, 8), dtype=complex)
    for x, psi in enumerate(basis):
        s = StateVector(8, psi.copy())
        for g in layer:
            s.apply_gate(g)
        for y, phi in enumerate(basis):
            m[y, x] = np.vdot(phi, s.amps)
    d = logical_diagonal(gates)
    return abs(np.vdot(np.diag(d), m)) / 8


_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(name, ok, detail)`` returns ``ok``."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        line = (name, "PASS" if ok else "FAIL", detail)
        _ACCEPTANCE.append(line)
        print(f"{line[1]} {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{status} {name}: {detail}")
