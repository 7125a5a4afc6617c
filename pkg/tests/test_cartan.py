from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from frozen import COXETER, TABLE_TYPES, TWISTED_TYPES
from qaffine.cartan import (AffineType, affine_cartan, coxeter_number, diagram_automorphism,
                            finite_form, highest_root, orbit, positive_roots)

FINITE = [("A", n) for n in range(1, 7)] + [("B", 2), ("B", 3), ("C", 2), ("C", 3), ("C", 4),
                                            ("D", 4), ("D", 5), ("E", 6), ("E", 7), ("E", 8),
                                            ("F", 4), ("G", 2)]
ROOT_COUNT = {"A": lambda n: n * (n + 1) // 2, "B": lambda n: n * n, "C": lambda n: n * n,
              "D": lambda n: n * (n - 1), "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
              "F": lambda n: 24, "G": lambda n: 6}


@pytest.mark.parametrize("letter,n", FINITE)
def test_highest_root_matches_enumeration(letter, n):
    assert highest_root(letter, n) == oracles.highest_root(letter, n)


@pytest.mark.parametrize("letter,n", FINITE)
def test_positive_root_count(letter, n):
    B = finite_form(letter, n)
    roots = positive_roots(B, range(1, n + 1))
    assert len(roots) == ROOT_COUNT[letter](n)
    assert sorted(roots) == oracles.enumerate_roots(B, range(1, n + 1))


@pytest.mark.parametrize("name,h", COXETER.items())
def test_coxeter_number(name, h):
    assert coxeter_number(name[0], int(name[1:])) == h


@pytest.mark.parametrize("t", TABLE_TYPES)
def test_affine_cartan_is_generalized_cartan_matrix(t):
    c = affine_cartan(t)
    A = c.matrix()
    for i in range(len(A)):
        assert A[i][i] == 2
        for j in range(len(A)):
            if i != j:
                assert A[i][j] <= 0 and A[i][j] == int(A[i][j])
                assert (A[i][j] == 0) == (A[j][i] == 0)
    # δ spans the kernel of the symmetric form
    for j in c.nodes:
        assert sum(x * c.form[(i, j)] for i, x in zip(c.nodes, c.null_root)) == 0


@pytest.mark.parametrize("t", TWISTED_TYPES)
def test_twisted_theta_matches_enumeration(t):
    c = affine_cartan(t)
    assert c.theta == oracles.twisted_theta(c)


@pytest.mark.parametrize("t", TWISTED_TYPES)
def test_sigma_is_diagram_automorphism(t):
    c = affine_cartan(t)
    letter, N = c.simply_laced
    B = finite_form(letter, N)
    s = c.sigma
    assert sorted(s.values()) == list(range(1, N + 1))
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            assert B[s[i]][s[j]] == B[i][j]
    # orbits of representatives partition the nodes
    seen = [v for i in range(1, c.n + 1) for v in set(c.orbit(i))]
    assert sorted(seen) == list(range(1, N + 1))


def test_sigma_for_a_type_reverses_the_chain():
    assert diagram_automorphism("A", 3, 2) == {1: 3, 2: 2, 3: 1}
    assert orbit(diagram_automorphism("D", 4, 3), 1, 3) == [1, 3, 4]


@given(st.sampled_from(TABLE_TYPES))
def test_form_symmetric(t):
    c = affine_cartan(t)
    for i in c.nodes:
        for j in c.nodes:
            assert c.form[(i, j)] == c.form[(j, i)]
        assert c.d[i] == c.form[(i, i)] / 2 > 0


def test_symmetrizers_c2():
    c = affine_cartan("C2^1")
    assert [c.d[i] for i in c.nodes] == [1, Fraction(1, 2), 1]


@pytest.mark.parametrize("bad", ["A0^1", "D3^1", "E9^1", "B3^2", "A3^3", "X2", "A^1"])
def test_unsupported_types(bad):
    with pytest.raises(ValueError):
        AffineType.parse(bad)
