import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from code832.code import code_832
from code832.pauli import (
    Membership,
    PauliGroup,
    PauliOperator,
    WidthMismatch,
    commutes,
    in_group,
    multiply,
    syndrome,
)

from conftest import pauli_matrix

P = PauliOperator.from_string


def paulis(width=4):
    full = (1 << width) - 1
    return st.builds(
        PauliOperator,
        st.just(width),
        st.integers(0, full),
        st.integers(0, full),
        st.integers(0, 3),
    )


def test_text_round_trip():
    for text in ("+ZIIIZIII", "-iXYZI", "+iY", "-XXXXXXXX", "+IIII"):
        assert P(text).to_string() == text


def test_x_times_z_is_minus_i_y():
    p = multiply(P("+X"), P("+Z"))
    assert (p.x_mask, p.z_mask) == (1, 1)
    assert p.to_string() == "-iY"
    assert np.allclose(pauli_matrix(p), -1j * pauli_matrix(P("+Y")))


def test_logical_z_product():
    p = P("+ZIIIZIII") * P("+ZIZIIIII")
    assert p == P("+IIZIZIII")


@given(paulis())
def test_square_is_plus_minus_identity(p):
    sq = p * p
    assert sq.is_identity and sq.phase in (0, 2)


@given(paulis(), paulis(), paulis())
def test_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(paulis(), paulis())
def test_commutes_iff_products_equal(p, q):
    assert commutes(p, q) == (p * q == q * p)


@given(paulis(3), paulis(3))
@settings(max_examples=50)
def test_multiply_matches_matrices(p, q):
    assert np.allclose(pauli_matrix(p * q), pauli_matrix(p) @ pauli_matrix(q))


def test_width_mismatch():
    with pytest.raises(WidthMismatch):
        multiply(P("+XX"), P("+X"))
    with pytest.raises(WidthMismatch):
        commutes(P("+XX"), P("+XXX"))


def test_commutation_examples():
    assert commutes(P("+XXXXXXXX"), P("+ZZZZIIII"))
    assert not commutes(P("+IZIIIIII"), P("+XXXXXXXX"))
    assert not commutes(P("+IIIIZIIZ"), P("+XXIIXXII"))


def test_weight_and_support():
    p = P("+XIYZ")
    assert p.weight == 3 and p.support == [0, 2, 3]


def test_membership_examples():
    s = code_832().stabilizers
    assert in_group(P("+ZZIIIIZZ"), s) is Membership.PLUS
    assert in_group(P("+IZZIZIIZ"), s) is Membership.PLUS
    assert in_group(P("+IIIIZIIZ"), s) is Membership.NOT_MEMBER
    assert in_group(P("-ZZIIIIZZ"), s) is Membership.MINUS
    assert in_group(P("+iZZIIIIZZ"), s) is Membership.NOT_MEMBER


def test_z_span_min_weight_is_four():
    zs = code_832().z_stabilizers
    elems = zs.elements()
    assert len(elems) == 16
    assert min(e.weight for e in elems if not e.is_identity) == 4


@st.composite
def stabilizer_groups(draw):
    """Independent commuting Hermitian generators with random signs."""
    width = draw(st.integers(2, 4))
    kept: list[PauliOperator] = []
    for cand in draw(st.lists(paulis(width), min_size=1, max_size=10)):
        g = cand.unsigned()
        if g.is_identity or not all(commutes(g, k) for k in kept):
            continue
        if PauliGroup(kept + [g]).rank() == len(kept) + 1:
            kept.append(-g if draw(st.booleans()) else g)
    return PauliGroup(kept or [PauliOperator.from_support(width, "Z", [0])])


@given(stabilizer_groups(), st.data())
@settings(max_examples=60, deadline=None)
def test_in_group_matches_brute_force(g, data):
    elems = set(g.elements())
    cand = [data.draw(paulis(g.width)) for _ in range(6)] + list(elems)[:4]
    for p in cand:
        m = in_group(p, g)
        if p in elems:
            assert m is Membership.PLUS
        elif -p in elems:
            assert m is Membership.MINUS
        else:
            assert m is Membership.NOT_MEMBER


def test_syndrome_examples():
    code = code_832()
    assert any(syndrome(P("+XIIXIIII"), code.z_stabilizers))
    assert syndrome(PauliOperator.identity(8), code.stabilizers) == [0] * 5
    assert syndrome(P("+IZIIIIIZ"), code.stabilizers) == [0] * 5


def test_syndrome_invariant_under_checks():
    code = code_832()
    checks = list(code.stabilizers)
    for bits in itertools.product("IXYZ", repeat=2):
        for a, b in itertools.combinations(range(8), 2):
            s = ["I"] * 8
            s[a], s[b] = bits
            p = P("+" + "".join(s))
            for c in checks:
                assert syndrome(p * c, checks) == syndrome(p, checks)


def test_restrict_and_embed():
    p = P("+IXIZ")
    r = p.restrict([1, 3])
    assert r == P("+XZ")
    assert r.embed(4, [1, 3]) == p
