import pytest

from code832.code import (
    CssCode,
    Residual,
    TargetState,
    classify_residual,
    code_832,
    target_state_group,
    validate_code,
    with_logical_z,
)
from code832.pauli import Membership, PauliOperator, in_group

from conftest import encoded_state, low_weight_paulis, oracle_residual

P = PauliOperator.from_string


def test_code_definition():
    c = code_832()
    assert (c.n, c.k) == (8, 3)
    assert P("+ZZZZIIII") in c.z_stabilizers.generators
    assert [str(z) for z in c.logical_z] == ["+ZIIIZIII", "+ZIZIIIII", "+ZZIIIIII"]
    assert validate_code(c).ok


def test_validate_rejects_single_z_logical():
    bad = with_logical_z(code_832(), 0, P("+ZIIIIIII"))
    report = validate_code(bad)
    assert not report.ok
    assert "LOGZ[0] anticommutes with XSTAB[0]" in report.failures


def test_validate_rejects_extra_generator():
    c = code_832()
    bad = CssCode(8, 3, c.x_stabilizers, c.z_stabilizers.extended([P("+ZZIIIIII")]), c.logical_x, c.logical_z)
    assert not validate_code(bad).ok


def test_text_round_trip():
    c = code_832()
    text = c.to_text()
    for header in ("XSTAB", "ZSTAB", "LOGX", "LOGZ"):
        assert header in text
    back = CssCode.from_text(text)
    assert back.to_text() == text
    assert validate_code(back).ok


@pytest.mark.parametrize("state", list(TargetState))
def test_target_group_is_full_stabilizer_state(state):
    t = target_state_group(code_832(), state)
    g = t.state_stabilizers
    assert g.is_abelian() and g.rank() == 8
    assert -PauliOperator.identity(8) not in set(g.elements())


def test_target_group_examples():
    c = code_832()
    ghz = target_state_group(c, "GHZ").state_stabilizers
    plus = target_state_group(c, "PLUS3").state_stabilizers
    assert in_group(P("+IZZIIIII"), ghz) is Membership.PLUS
    assert in_group(P("+XIIXIXXI"), ghz) is Membership.PLUS
    assert in_group(P("+XXXXIIII"), plus) is Membership.PLUS


def test_classify_examples():
    t = target_state_group(code_832(), "PLUS3")
    assert classify_residual(P("+XIXXIIII"), t) is Residual.DETECTABLE
    assert classify_residual(P("+ZZIIIIZZ"), t) is Residual.TRIVIAL
    assert classify_residual(P("+IZIIIIIZ"), t) is Residual.LOGICAL
    with pytest.raises(ValueError):
        classify_residual(P("+ZIIIIIIIIII"), t)


def test_z1z7_equals_logical_z1z2():
    c = code_832()
    z17 = P("+IZIIIIIZ")
    zbar = c.logical_z[0] * c.logical_z[1]
    assert in_group(z17 * zbar, c.stabilizers) is Membership.PLUS
    assert str(c.logical_action(z17)) == "+ZZI"


def test_minus_sign_member_is_logical():
    t = target_state_group(code_832(), "PLUS3")
    assert classify_residual(-P("+XXXXIIII"), t) is Residual.LOGICAL


def test_single_qubit_errors_detectable():
    t = target_state_group(code_832(), "GHZ")
    for p in low_weight_paulis(max_weight=1):
        assert classify_residual(p, t) is Residual.DETECTABLE


def test_trivial_logicals():
    c = code_832()
    ghz = target_state_group(c, "GHZ")
    lz, lx = c.logical_z, c.logical_x
    for i in range(3):
        for j in range(i + 1, 3):
            assert classify_residual(lz[i] * lz[j], ghz) is Residual.TRIVIAL
    assert classify_residual((lx[0] * lx[1] * lx[2]).unsigned(), ghz) is Residual.TRIVIAL
    plus = target_state_group(c, "PLUS3")
    for x in lx:
        assert classify_residual(x, plus) is Residual.TRIVIAL


@pytest.mark.parametrize("state", list(TargetState))
def test_low_weight_oracle(state):
    t = target_state_group(code_832(), state)
    psi = encoded_state(t)
    ops = low_weight_paulis()
    assert len(ops) == 276
    for p in ops:
        assert classify_residual(p, t).value == oracle_residual(p, t, psi), str(p)
