import json
import time

import numpy as np
import pytest

from code832.circuit import Circuit, count_locations
from code832.code import code_832, target_state_group
from code832.ftverify import (
    Verdict,
    decoded_accepted,
    enumerate_fault_sites,
    gate_fault_witness,
    location_paulis,
    simulated_verdict,
    verify_fault_tolerance,
    witness_errors,
)
from code832.pauli import PauliOperator
from code832.reference import (
    ExperimentSpec,
    experiment_circuit,
    ghz_prep_encoded,
    plus3_prep_encoded,
    readout_rule,
    with_readout,
)

CASES = [(s, b) for s in ("GHZ", "PLUS3") for b in ("X", "Z")]


def setup(state, basis, prep=None):
    if prep is None:
        prep = ghz_prep_encoded() if state == "GHZ" else plus3_prep_encoded()
    c = with_readout(prep, basis)
    t = target_state_group(code_832(), state)
    r = readout_rule(ExperimentSpec(state, (), basis, "encoded"))
    return c, t, r


def test_location_paulis():
    assert [str(p) for p in location_paulis(1)] == ["+X", "+Y", "+Z"]
    two = location_paulis(2)
    assert len(two) == 15 and str(two[0]) == "+IX" and str(two[-1]) == "+ZZ"


def test_site_counts():
    c, _, _ = setup("GHZ", "Z")
    sites = enumerate_fault_sites(c)
    assert len(sites) == 22 == count_locations(c).total
    assert enumerate_fault_sites(Circuit(1)) == []
    c, _, _ = setup("PLUS3", "X")
    assert len(enumerate_fault_sites(c)) == count_locations(c).total


@pytest.mark.parametrize("state,basis", CASES)
def test_reference_circuits_pass(state, basis):
    c, t, r = setup(state, basis)
    start = time.perf_counter()
    report = verify_fault_tolerance(c, t, r, state)
    assert time.perf_counter() - start < 1.0
    assert report.passed, report.summary_line()
    assert len(report.outcomes) == sum(len(s.faults) for s in enumerate_fault_sites(c))


@pytest.mark.parametrize("basis", ["X", "Z"])
def test_ghz_weight_four_residuals_trivial(basis):
    c, t, r = setup("GHZ", basis)
    report = verify_fault_tolerance(c, t, r)
    trivial = {o.residual.restrict(range(8)).unsigned() for o in report.outcomes if o.verdict is Verdict.ACCEPTED_TRIVIAL}
    if basis == "Z":
        for s in ("+XIIXIXXI", "+IXXIXIIX"):
            assert PauliOperator.from_string(s) in trivial


def test_plus3_zz_on_cnot_7_1_flagged():
    c, t, r = setup("PLUS3", "X")
    loc = [i for i, g in enumerate(c.gates) if g.name == "CNOT" and g.qubits == (7, 1)][0]
    report = verify_fault_tolerance(c, t, r)
    o = [o for o in report.outcomes if o.location == loc and str(o.injected) == "+ZZ"][0]
    assert o.verdict is Verdict.REJECTED_BY_FLAG
    assert gate_fault_witness(c, code_832(), loc, "ZZ").text == "Z1 Z7 Za0"


def test_ablation_fails_with_z1z7():
    c, t, r = setup("PLUS3", "X", plus3_prep_encoded(flags=(1, 2)))
    report = verify_fault_tolerance(c, t, r, "no-a0")
    assert not report.passed
    residuals = {o.residual.restrict(range(8)).z_part().to_string() for o in report.logical_failures()}
    assert "+IZIIIIIZ" in residuals


def test_precondition_failure():
    c, t, r = setup("PLUS3", "X")
    ghz = target_state_group(code_832(), "GHZ")
    report = verify_fault_tolerance(c, ghz, r)
    assert not report.precondition_ok and not report.passed
    assert report.diagnostic and not report.outcomes


@pytest.mark.parametrize("state,basis", CASES)
def test_oracle_agreement(state, basis):
    c, t, r = setup(state, basis)
    report = verify_fault_tolerance(c, t, r)
    ideal = decoded_accepted(c, r)[2]
    rng = np.random.default_rng(2024)
    for i in rng.choice(len(report.outcomes), size=50, replace=False):
        o = report.outcomes[i]
        full = o.injected.embed(c.width, c.gates[o.location].qubits)
        assert simulated_verdict(c, r, {o.location: full}, ideal) is o.verdict, o.to_dict()


@pytest.mark.parametrize("state", ["GHZ", "PLUS3"])
def test_basis_consistency(state):
    c, t, r = setup(state, "Z")
    faces = [s.z_mask for s in code_832().z_stabilizers]
    for o in verify_fault_tolerance(c, t, r).outcomes:
        if o.verdict is Verdict.REJECTED_BY_POSTSELECTION:
            x = o.residual.x_mask & 0xFF
            assert any(bin(x & f).count("1") % 2 for f in faces)


def test_phase_layer_uses_statevector_fallback():
    spec = ExperimentSpec("GHZ", ("CZ12", "CCZ"), "X", "encoded")
    c = experiment_circuit(spec)
    report = verify_fault_tolerance(c, target_state_group(code_832(), "GHZ"), readout_rule(spec))
    assert report.passed
    assert any(o.method == "statevector" for o in report.outcomes)


def test_witness_lists():
    code = code_832()
    c = plus3_prep_encoded()
    x = [(w.text, w.annotation) for w in witness_errors(c, code, 0, "X")]
    assert x == [("X0 X3", "detectable"), ("X0 X2 X3", "detectable"), ("X0 X1 X2 X3", "X̄1")]
    z = {(w.text, w.annotation) for w in witness_errors(c, code, 1, "Z")}
    assert z == {
        ("Z1 Za0", "detectable"),
        ("Z1 Z7 Za0", "detectable"),
        ("Z1 Z6 Z7", "detectable"),
        ("Z1 Z6 Z7 Za0", "detectable"),
        ("Z0 Z1 Z6 Z7", "stabilizer"),
    }


def test_report_json():
    c, t, r = setup("GHZ", "X")
    report = verify_fault_tolerance(c, t, r, "ghz")
    d = json.loads(report.to_json())
    assert d["passed"] and d["faults"] == len(d["outcomes"]) == 106
    assert report.summary_line().startswith("PASS ghz")
