import itertools

import numpy as np
import pytest

from code832.circuit import Circuit, ccz, cnot, h, measure_x, measure_z, prep_x, prep_z, tpow
from code832.pauli import PauliOperator
from code832.reference import ghz_prep_encoded
from code832.statevector import (
    MAX_QUBITS,
    OutcomeDistribution,
    SimulationError,
    StateVector,
    equal_up_to_global_phase,
    product_state,
    run_exact,
    sample,
    simulate,
    tvd,
)


def bare(gates, basis):
    m = measure_x if basis == "X" else measure_z
    return Circuit(3, [prep_z(q) for q in range(3)] + gates + [m(q) for q in range(3)])


GHZ = [h(0), cnot(0, 1), cnot(0, 2)]
PLUS = [h(0), h(1), h(2)]


def test_ghz_z():
    _, d = run_exact(bare(GHZ, "Z"))
    assert d.basis == "Z"
    assert d.probs.keys() == {"000", "111"}
    assert d["000"] == pytest.approx(0.5) and d["111"] == pytest.approx(0.5)


def brute_ccz_plus_x():
    """<x| H^3 CCZ |+++> summed over computational basis states y."""
    out = {}
    for x in range(8):
        amp = 0
        for y in range(8):
            sign = -1 if y == 7 else 1
            amp += sign * (-1) ** bin(x & y).count("1") / 8
        out[format(x, "03b")] = amp ** 2
    return out


def test_ccz_plus_x():
    _, d = run_exact(bare(PLUS + [ccz(0, 1, 2)], "X"))
    ref = brute_ccz_plus_x()
    assert ref["000"] == pytest.approx(9 / 16)
    for k, v in ref.items():
        assert d[k] == pytest.approx(v, abs=1e-12)


def test_ccz_ghz_x_odd_parity():
    _, d = run_exact(bare(GHZ + [ccz(0, 1, 2)], "X"))
    for k in map("".join, itertools.product("01", repeat=3)):
        want = 0.25 if k.count("1") % 2 else 0.0
        assert d[k] == pytest.approx(want, abs=1e-12)


def test_tvd_examples():
    p = OutcomeDistribution("Z", 3, {"000": 0.5, "111": 0.5})
    u = OutcomeDistribution("Z", 3, {format(i, "03b"): 1 / 8 for i in range(8)})
    assert tvd(p, p) == 0
    assert tvd(p, u) == pytest.approx(0.75)
    assert tvd(OutcomeDistribution("Z", 1, {"0": 1}), OutcomeDistribution("Z", 1, {"1": 1})) == 1
    with pytest.raises(ValueError):
        tvd(p, OutcomeDistribution("X", 3, {"000": 1}))


def test_equal_up_to_global_phase():
    a = StateVector(3)
    b = StateVector(3, -a.amps)
    assert equal_up_to_global_phase(a, b)
    c = StateVector(3, np.eye(8)[1])
    assert not equal_up_to_global_phase(a, c)
    with pytest.raises(SimulationError):
        equal_up_to_global_phase(a, StateVector(2))


def test_encoded_ghz_factorizes():
    s = simulate(ghz_prep_encoded())
    ghz4 = np.zeros(16)
    ghz4[0] = ghz4[15] = 2 ** -0.5
    want = np.zeros(256, dtype=complex)
    groups = ((0, 3, 5, 6), (1, 2, 4, 7))
    for a, b in itertools.product(range(16), repeat=2):
        idx = 0
        for grp, val in zip(groups, (a, b)):
            for j, q in enumerate(grp):
                if (val >> (3 - j)) & 1:
                    idx |= 1 << (7 - q)
        want[idx] += ghz4[a] * ghz4[b]
    assert equal_up_to_global_phase(s, StateVector(8, want))


def test_norm_preserved(rng):
    gates = [prep_x(q) for q in range(4)]
    for _ in range(40):
        k = rng.integers(4)
        a, b, c = rng.permutation(4)[:3]
        gates.append([h(a), tpow(a, int(rng.integers(8))), cnot(a, b), ccz(a, b, c)][k])
    s = StateVector(4)
    for g in gates:
        s.apply_gate(g)
        assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_pauli_expectations():
    s = simulate(Circuit(2, [prep_x(0), prep_z(1), cnot(0, 1)]))
    assert s.is_stabilized_by(PauliOperator.from_string("+XX"))
    assert s.is_stabilized_by(PauliOperator.from_string("+ZZ"))
    assert s.expectation(PauliOperator.from_string("-YY")).real == pytest.approx(1)


def test_width_limits():
    with pytest.raises(SimulationError):
        StateVector(MAX_QUBITS + 1)
    with pytest.raises(SimulationError):
        run_exact(Circuit(1, [prep_z(0)]))


def test_csv_round_trip():
    _, d = run_exact(bare(PLUS + [ccz(0, 1, 2)], "X"))
    text = d.to_csv()
    lines = text.splitlines()
    assert lines == sorted(lines) and lines[0].startswith("000,")
    back = OutcomeDistribution.from_csv(text, "X")
    assert back == d


def test_mixed_bases_and_marginals():
    c = Circuit(3, [prep_x(0), prep_z(1), prep_z(2), cnot(0, 1), measure_x(0), measure_z(2)])
    _, d = run_exact(c)
    assert d.basis == "XZ" and d.width == 2
    assert d["00"] == pytest.approx(0.5) and d["10"] == pytest.approx(0.5)


def test_sample_point_and_determinism():
    point = OutcomeDistribution("Z", 2, {"10": 1.0})
    assert set(sample(point, np.random.default_rng(0), 50)) == {"10"}
    _, d = run_exact(bare(GHZ, "Z"))
    a = sample(d, np.random.default_rng(99), 1000)
    b = sample(d, np.random.default_rng(99), 1000)
    assert a == b
    with pytest.raises(ValueError):
        sample(d, np.random.default_rng(0), 0)


def test_fair_coin():
    coin = OutcomeDistribution("Z", 1, {"0": 0.5, "1": 0.5})
    freqs = [sample(coin, np.random.default_rng(s), 10**6).count("0") / 10**6 for s in range(3)]
    assert abs(np.mean(freqs) - 0.5) < 0.002


def test_product_state():
    plus = [2 ** -0.5, 2 ** -0.5]
    assert np.allclose(product_state(plus, [1, 0]), [0.5 ** 0.5, 0, 0.5 ** 0.5, 0])
