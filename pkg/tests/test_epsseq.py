import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from frozen import COMPUTED_EPSILON_E8, PRINTED_EPSILON, TABLE_TYPES
from qaffine.cartan import affine_cartan
from qaffine.epsseq import (UNSPECIFIED, SequenceError, a_constant, builtin_sequence,
                            partial_pairings, remark_check, search_sequence, validate_sequence)
from qaffine.scalar import Scalar, parse_scalar, q_int


@pytest.mark.parametrize("t", TABLE_TYPES)
def test_builtin_sequence_is_admissible(t):
    c = affine_cartan(t)
    seq = builtin_sequence(t)
    assert validate_sequence(seq.indices, c).ok
    assert len(seq.indices) == c.h - 1
    assert seq.theta == c.theta
    assert all(lab <= 0 for lab in seq.labels)


@pytest.mark.parametrize("t", TABLE_TYPES)
def test_epsilon_totals(t):
    seq = builtin_sequence(t)
    if t == "E8^1":
        assert seq.epsilon == COMPUTED_EPSILON_E8
        assert any("ε column" in d["citation"] for d in seq.discrepancies)
    else:
        assert seq.epsilon == PRINTED_EPSILON[t]


@pytest.mark.parametrize("t", TABLE_TYPES)
def test_theta_against_enumeration(t):
    c = affine_cartan(t)
    expected = oracles.highest_root(t[0], int(t[1:t.index("^")])) if t.endswith("^1") \
        else oracles.twisted_theta(c)
    assert builtin_sequence(t).theta == tuple(expected)


@pytest.mark.parametrize("t", ["A3^1", "D4^1", "D5^1", "E6^1", "E7^1", "E8^1"])
def test_remark_for_simply_laced(t):
    eps, expected = remark_check(t)
    assert eps == expected


def test_labels_are_partial_pairings():
    c = affine_cartan("C3^1")
    seq = builtin_sequence("C3^1")
    pairs, acc = partial_pairings(seq.indices, c)
    assert list(seq.labels) == pairs and acc == c.theta


def test_validation_rejects_positive_pairing():
    c = affine_cartan("A3^1")
    rep = validate_sequence([1, 1, 2], c)
    assert not rep.ok and rep.position == 1


def test_validation_rejects_wrong_labels():
    c = affine_cartan("A2^1")
    assert validate_sequence([1, 2], c, labels=[-1]).ok
    assert not validate_sequence([1, 2], c, labels=[0]).ok
    assert not validate_sequence([1, 2], c, labels=[-1, 0]).ok


def test_validation_rejects_bad_index():
    rep = validate_sequence([1, 5], affine_cartan("A2^1"))
    assert not rep.ok and "outside" in rep.reason


@given(st.sampled_from(["A3^1", "A4^1", "C3^1", "D4^1", "F4^1", "A4^2", "D4^3"]),
       st.integers(1, 6))
def test_search_results_validate(t, limit):
    c = affine_cartan(t)
    for seq in search_sequence(c, limit=limit):
        assert validate_sequence(seq, c).ok
        assert partial_pairings(seq, c)[1] == c.theta


def test_search_respects_epsilon_constraint():
    c = affine_cartan("D5^1")
    with pytest.raises(SequenceError):
        search_sequence(c, epsilon=-5)
    assert search_sequence(c, epsilon=-6)


def test_g2_has_no_root_prefix_sequence():
    # the printed G2 row validates but its partial sums pass through 2a1 + 2a2
    c = affine_cartan("G2^1")
    assert validate_sequence(builtin_sequence("G2^1").indices, c).ok
    with pytest.raises(SequenceError):
        search_sequence(c)


def test_a_constants():
    assert a_constant("A2^1") == Scalar.const(1)
    assert a_constant("E7^1") == Scalar.const(1)
    assert a_constant("C3^1") == q_int(2, Fraction(1, 2))
    assert a_constant("A3^2") == Scalar.const(-2)
    assert a_constant("D4^3") == Scalar.const(3)
    assert a_constant("A4^2") == -(q_int(2) ** 2)
    assert a_constant("F4^1") is UNSPECIFIED
    with pytest.raises(SequenceError):
        a_constant("B3^1")
    assert a_constant("B3^1", [2, 1]) == q_int(2)


def test_json_roundtrip():
    data = json.loads(json.dumps(builtin_sequence("A4^2").to_json()))
    assert data["status"] == "reconstructed"
    assert parse_scalar(data["a"]) == a_constant("A4^2")
    assert data["discrepancies"]
