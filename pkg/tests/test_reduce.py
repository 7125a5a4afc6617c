import pytest
from hypothesis import given, strategies as st

from qaffine.drinfeld import GHALF, GHALF_INV, QD, DrinfeldAlgebra, K, a, gen, x, xm, xp
from qaffine.freealg import Element, bracket, nested_bracket
from qaffine.reduce import Reducer, ReductionConfig, certify_zero, out_of_order, trace_sum
from qaffine.scalar import ONE, Q, q_int

ALG = DrinfeldAlgebra("A2^1")
RED = Reducer(ALG)

letters = st.one_of(
    st.builds(lambda i, e: K(i, e), st.integers(1, 2), st.sampled_from([1, -1])),
    st.builds(lambda i, k: a(i, k), st.integers(1, 2), st.sampled_from([-1, 1])),
    st.builds(lambda s, i, k: x(s, i, k), st.sampled_from([1, -1]), st.integers(1, 2),
              st.integers(-1, 1)),
    st.sampled_from([GHALF, GHALF_INV]),
)
words = st.lists(letters, min_size=1, max_size=3)


def is_normal(w):
    return all(not out_of_order(s1, s2) for s1, s2 in zip(w, w[1:]))


@given(words)
def test_trace_is_sound(w):
    out = RED.reduce(gen(*w))
    assert out.status in ("zero", "normal_form")
    assert out.check_trace()
    assert trace_sum(out.trace) == out.start - out.result


@given(words)
def test_result_is_normally_ordered(w):
    res = RED.reduce(gen(*w)).result
    for word in res.terms:
        # pure same-sign x blocks may keep any order; everything else is sorted
        if not all(s.kind == "x" for s in word):
            assert is_normal(word)


@given(words)
def test_reduction_is_idempotent(w):
    once = RED.reduce(gen(*w)).result
    assert RED.reduce(once).result == once


def test_inverse_pairs_cancel():
    assert RED.reduce(gen(K(1), K(1, -1))).result == Element.scalar(1)
    assert RED.reduce(gen(GHALF_INV, GHALF)).result == Element.scalar(1)


def test_q_commutation_with_k():
    res = RED.reduce(gen(xp(1, 0), K(1))).result
    assert res == gen(K(1), xp(1, 0), coeff=Q ** -2)


def test_mixed_commutator_gives_cartan_part():
    el = bracket(gen(xp(1, 0)), gen(xm(1, 0)))
    res = RED.reduce(el).result
    expected = (gen(K(1)) - gen(K(1, -1))).scale(ONE / (Q - Q.inverse()))
    assert res == expected


def test_ax_shift():
    res = RED.reduce(bracket(gen(a(1, 1)), gen(xp(2, 0)))).result
    expected = (gen(GHALF_INV, xp(2, 1))).scale(q_int(-1))
    assert res == expected


def test_serre_instance_certifies():
    serre = ALG.relation("serre", 1, 1, 2, (0, 0), 0).element
    out = RED.reduce(serre)
    assert out.is_zero and out.check_trace()


def test_quadratic_instance_certifies():
    R = ALG.relation("xx-same", -1, 1, 2, 0, 0).element
    assert RED.reduce(R).is_zero


def test_nonzero_bracket_stays():
    out = RED.reduce(bracket(gen(xp(1, 0)), gen(xp(2, 0))))
    assert out.status == "normal_form" and out.result


def test_serre_needs_serre_family():
    serre = ALG.relation("serre", 1, 1, 2, (0, 0), 0).element
    quad_only = Reducer(ALG, ReductionConfig(families=("quadratic",)))
    assert not quad_only.reduce(serre).is_zero


def test_a13_commutation_needs_serre():
    alg = DrinfeldAlgebra("A3^1")
    el = bracket(gen(xm(1, 0)), gen(xm(3, 0)))
    assert not Reducer(alg, ReductionConfig(families=("quadratic",))).reduce(el).is_zero
    assert Reducer(alg).reduce(el).is_zero


def test_budget_exhaustion_reported():
    el = nested_bracket([gen(xp(1, 0)), gen(xm(1, 0)), gen(xp(1, 0))], [Q, Q])
    out = Reducer(ALG, ReductionConfig(budget=1)).reduce(el)
    assert out.status == "budget"


def test_kinds_filter_leaves_disallowed_pairs():
    el = gen(xp(1, 0), xm(1, 0), K(1))
    red = Reducer(ALG, ReductionConfig(kinds=frozenset({"Kx"})))
    res = red.reduce(el).result
    pair = (xp(1, 0), xm(1, 0))
    assert all(any(w[p:p + 2] == pair for p in range(len(w) - 1)) for w in res.terms)
    # the K letter still moved left
    assert all(w[0] == K(1) for w in res.terms)


def test_grading_operator_moves_left():
    res = RED.reduce(gen(xp(1, 2), QD)).result
    assert res == gen(QD, xp(1, 2), coeff=Q ** -2)


def test_certify_zero_wrapper():
    assert certify_zero(Element(), ALG).is_zero


@pytest.mark.parametrize("margin", [0, 1])
def test_margins_agree_on_certified_zero(margin):
    R = ALG.relation("serre", -1, 2, 1, (0, 1), 0).element
    out = Reducer(ALG, ReductionConfig(margin=margin)).reduce(R)
    assert out.is_zero and out.margin >= margin
