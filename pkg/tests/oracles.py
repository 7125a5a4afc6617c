"""Independent reference computations used to cross-check the package.

Nothing here calls the code under test for the quantity being checked; the
only shared inputs are the finite bilinear forms and scalar arithmetic.
"""
from fractions import Fraction
import math

from qaffine.cartan import finite_form, form_on
from qaffine.scalar import ONE, Scalar, ZERO


# ---------------------------------------------------------------------------
# roots by height descent

def _pairing(B, nodes, v, i):
    """<v, alpha_i^vee> over the listed nodes."""
    return sum(2 * v[s] * B[j][i] for s, j in enumerate(nodes)) / B[i][i]


def is_positive_root(B, nodes, v):
    """Descend by simple reflections that lower the height; a positive root
    ends at a simple root, anything else gets stuck or turns negative."""
    v = list(v)
    while True:
        if any(c < 0 for c in v):
            return False
        if sum(v) == 1:
            return True
        for s, i in enumerate(nodes):
            p = _pairing(B, nodes, v, i)
            if p > 0:
                v[s] -= p
                if v[s] != int(v[s]):
                    return False
                v[s] = int(v[s])
                break
        else:
            return False


def enumerate_roots(B, nodes):
    """Grow candidates one simple root at a time and keep those that pass the
    descent test. Every positive root of height k+1 is a root of height k plus
    a simple root, so nothing is missed."""
    nodes = list(nodes)
    k = len(nodes)
    unit = [tuple(int(s == t) for t in range(k)) for s in range(k)]
    layer = set(unit)
    roots = set(layer)
    while layer:
        cands = {tuple(a + b for a, b in zip(v, e)) for v in layer for e in unit}
        layer = {v for v in cands if v not in roots and is_positive_root(B, nodes, v)}
        roots |= layer
    return sorted(roots)


def highest_root(letter, n):
    B = finite_form(letter, n)
    roots = enumerate_roots(B, range(1, n + 1))
    return max(roots, key=sum)


def _folded_form(letter, rank, sigma, reps, r):
    n = len(reps)
    B = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    slB = finite_form(letter, rank)

    def power(i, s):
        for _ in range(s):
            i = sigma[i]
        return i

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            B[i][j] = sum((slB[power(reps[i], s)][reps[j]] for s in range(r)), Fraction(0))
    return B


def twisted_theta(cartan):
    """Dominant-side maximal element of the roots of the required length,
    with doubled short roots admitted when the underlying type is A_even."""
    t = cartan.type
    n = t.n
    nodes = range(1, n + 1)
    B = _folded_form(t.letter, t.rank, cartan.sigma, cartan.reps, t.twist)
    roots = enumerate_roots(B, nodes)
    pool = list(roots)
    if t.letter == "A" and t.rank % 2 == 0:
        short = min(form_on(B, nodes, v, v) for v in roots)
        pool += [tuple(2 * c for c in v) for v in roots if form_on(B, nodes, v, v) == short]
    target = 2 * cartan.d[0]
    cands = [v for v in pool if form_on(B, nodes, v, v) == target]
    return max(cands, key=sum)


# ---------------------------------------------------------------------------
# psi field by truncated series multiplication
#
# A commutative polynomial in the modes a_i(1), a_i(2), ... is a dict from a
# sorted tuple of modes to a Scalar.

def _poly_mul(p, r):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in r.items():
            key = tuple(sorted(m1 + m2))
            out[key] = out.get(key, ZERO) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _series_mul(s1, s2, top):
    out = [dict() for _ in range(top + 1)]
    for d1 in range(top + 1):
        for d2 in range(top + 1 - d1):
            for key, c in _poly_mul(s1[d1], s2[d2]).items():
                out[d1 + d2][key] = out[d1 + d2].get(key, ZERO) + c
    return [{k: c for k, c in d.items() if c} for d in out]


def psi_series(qdiff, top):
    """Coefficients of exp(qdiff * sum_k a(k) z^-k) up to z^-top, as a list
    indexed by degree."""
    S = [dict() for _ in range(top + 1)]
    for k in range(1, top + 1):
        S[k] = {(k,): qdiff}
    total = [dict() for _ in range(top + 1)]
    total[0] = {(): ONE}
    power = [dict(d) for d in total]
    for n in range(1, top + 1):
        power = _series_mul(power, S, top)
        for deg in range(top + 1):
            for key, c in power[deg].items():
                total[deg][key] = total[deg].get(key, ZERO) + c / math.factorial(n)
    return [{k: c for k, c in d.items() if c} for d in total]


def psi_element_as_poly(el, i):
    """Read psi_i(m) (K_i times a word in a_i(k > 0)) back as a polynomial."""
    out = {}
    for w, c in el.terms.items():
        assert w[0].kind == "K" and w[0].i == i and w[0].e == 1
        assert all(s.kind == "a" and s.i == i and s.k > 0 for s in w[1:])
        key = tuple(sorted(s.k for s in w[1:]))
        out[key] = out.get(key, ZERO) + c
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# numeric evaluation of scalars

def evaluate(s: Scalar, t_value: Fraction):
    """Value of a rational-coefficient Scalar at t = t_value."""
    def ev(poly):
        acc = Fraction(0)
        for e, c in poly.items():
            assert not c.y, "only rational coefficients are supported"
            acc += Fraction(int(c.x.numerator), int(c.x.denominator)) * t_value ** e
        return acc

    return ev(s.num) / ev(s.den)
