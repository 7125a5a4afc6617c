"""Finite and affine Cartan data, root enumeration and diagram folding.

Node labels follow the conventions the ε-sequence tables are written in:
finite nodes 1..n, affine node 0.  Exceptional diagrams are chains with one
branch node (E6: 6 hangs off 3, E7: 7 off 3, E8: 8 off 5).  Bilinear forms
are stored symmetric with (α_i|α_i) = 2 d_i, and a_ij = (α_i|α_j)/d_i.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

F = Fraction

_UNTWISTED = {"A", "B", "C", "D", "E", "F", "G"}


@dataclass(frozen=True)
class AffineType:
    letter: str
    rank: int  # N in X_N^(r)
    twist: int = 1

    def __post_init__(self):
        key = (self.letter, self.rank, self.twist)
        if self.twist == 1:
            ok = self.letter in _UNTWISTED and {
                "A": self.rank >= 1, "B": self.rank >= 2, "C": self.rank >= 2,
                "D": self.rank >= 4, "E": self.rank in (6, 7, 8),
                "F": self.rank == 4, "G": self.rank == 2,
            }[self.letter]
        elif self.twist == 2:
            ok = (self.letter == "A" and self.rank >= 2) or \
                 (self.letter == "D" and self.rank >= 3) or key == ("E", 6, 2)
        elif self.twist == 3:
            ok = key == ("D", 4, 3)
        else:
            ok = False
        if not ok:
            raise ValueError(f"unsupported affine type {self}")

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r"\s*([A-G])(\d+)(?:\^(\d))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse affine type {text!r}; expected e.g. 'A3^1'")
        return cls(m.group(1), int(m.group(2)), int(m.group(3) or 1))

    @property
    def n(self):
        """Number of finite nodes of the (folded) diagram."""
        if self.twist == 1:
            return self.rank
        if self.letter == "A":
            return (self.rank + 1) // 2
        if self.letter == "D":
            return self.rank - 1 if self.twist == 2 else 2
        return 4  # E6^(2)

    def __str__(self):
        return f"{self.letter}{self.rank}^{self.twist}"


# ---------------------------------------------------------------------------
# finite types


def _chain_form(n, branch=None, lengths=None):
    """Symmetric form for a chain 1..n (optionally node n attached to `branch`)."""
    lengths = lengths or {}
    B = [[F(0)] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        B[i][i] = F(2 * lengths.get(i, 1))
    edges = [(i, i + 1) for i in range(1, n - (1 if branch else 0))]
    if branch:
        edges.append((branch, n))
    for i, j in edges:
        # (α_i|α_j) = -max(d_i, d_j) for a single/double/triple bond
        v = -max(lengths.get(i, 1), lengths.get(j, 1))
        B[i][j] = B[j][i] = F(v)
    return B


def finite_form(letter, n):
    """Symmetric form (1-indexed; row/col 0 unused) of the finite type X_n."""
    if letter == "A":
        return _chain_form(n)
    if letter == "B":
        return _chain_form(n, lengths={n: F(1, 2)})
    if letter == "C":
        return _chain_form(n, lengths={i: F(1, 2) for i in range(1, n)})
    if letter == "D":
        B = _chain_form(n - 1)
        B = [row + [F(0)] for row in B] + [[F(0)] * (n + 1)]
        B[n][n] = F(2)
        B[n - 2][n] = B[n][n - 2] = F(-1)
        return B
    if letter == "E":
        return _chain_form(n, branch={6: 3, 7: 3, 8: 5}[n])
    if letter == "F":
        return _chain_form(4, lengths={3: F(1, 2), 4: F(1, 2)})
    if letter == "G":
        return _chain_form(2, lengths={2: F(1, 3)})
    raise ValueError(f"unknown finite type {letter}{n}")


def _cartan_from_form(B, nodes):
    return {(i, j): B[i][j] / (B[i][i] / 2) for i in nodes for j in nodes}


def positive_roots(B, nodes):
    """All positive roots (coefficient tuples over `nodes`) by closing the simple
    roots under simple reflections."""
    nodes = list(nodes)
    k = len(nodes)
    a = _cartan_from_form(B, nodes)
    simple = [tuple(1 if t == s else 0 for t in range(k)) for s in range(k)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for s, i in enumerate(nodes):
                pair = sum(beta[t] * a[(i, nodes[t])] for t in range(k))
                img = list(beta)
                img[s] -= pair
                img = tuple(int(x) for x in img)
                if all(x >= 0 for x in img) and any(img) and img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(seen, key=lambda v: (sum(v), v))


def form_on(B, nodes, u, v):
    nodes = list(nodes)
    return sum(u[s] * v[t] * B[i][j] for s, i in enumerate(nodes) for t, j in enumerate(nodes)
               if u[s] and v[t])


def maximal_roots(roots):
    """Roots not dominated coefficientwise by any other root."""
    return [r for r in roots
            if not any(o != r and all(x >= y for x, y in zip(o, r)) for o in roots)]


_COXETER = {"A": lambda n: n + 1, "B": lambda n: 2 * n, "C": lambda n: 2 * n,
            "D": lambda n: 2 * n - 2, "E": lambda n: {6: 12, 7: 18, 8: 30}[n],
            "F": lambda n: 12, "G": lambda n: 6}


def highest_root(letter, n):
    """Coefficient vector (over nodes 1..n) of the highest root of X_n."""
    B = finite_form(letter, n)
    top = maximal_roots(positive_roots(B, range(1, n + 1)))
    if len(top) != 1:
        raise AssertionError(f"highest root of {letter}{n} not unique: {top}")
    return top[0]


def coxeter_number(letter, n):
    h = _COXETER[letter](n)
    computed = 1 + sum(highest_root(letter, n))
    if h != computed:
        raise AssertionError(f"Coxeter number mismatch for {letter}{n}: {h} vs {computed}")
    return h


# ---------------------------------------------------------------------------
# diagram automorphisms and folding

def diagram_automorphism(letter, N, r):
    """σ on the finite simply-laced diagram X_N as a dict node -> node."""
    if r == 2 and letter == "A" and N >= 2:
        return {i: N + 1 - i for i in range(1, N + 1)}
    if r == 2 and letter == "D" and N >= 3:
        s = {i: i for i in range(1, N - 1)}
        s.update({N - 1: N, N: N - 1})
        return s
    if r == 2 and letter == "E" and N == 6:
        s = {i: 6 - i for i in range(1, 6)}
        s[6] = 6
        return s
    if r == 3 and letter == "D" and N == 4:
        return {1: 3, 2: 2, 3: 4, 4: 1}
    raise ValueError(f"no order-{r} diagram automorphism for {letter}{N}")


def sigma_power(sigma, i, s):
    for _ in range(s):
        i = sigma[i]
    return i


def orbit(sigma, i, r):
    return [sigma_power(sigma, i, s) for s in range(r)]


_REPS = {"A": lambda N: list(range(1, (N + 1) // 2 + 1)),
         "D": lambda N: list(range(1, N)),
         "E": lambda N: [1, 2, 3, 6]}


# ---------------------------------------------------------------------------
# CartanData


@dataclass(frozen=True)
class CartanData:
    type: AffineType
    nodes: tuple            # 0..n
    form: dict              # (i, j) -> (α_i|α_j)
    d: dict                 # i -> d_i
    null_root: tuple        # δ as coefficients over nodes
    theta: tuple            # over finite nodes 1..n
    h: int                  # length of an ε-sequence plus one
    sigma: dict | None = None       # σ on the simply-laced finite diagram
    reps: tuple | None = None       # twisted index i -> orbit representative node
    simply_laced: tuple | None = None
    roots: tuple = field(default=(), repr=False)

    @property
    def n(self):
        return len(self.nodes) - 1

    @property
    def r(self):
        return self.type.twist

    def a(self, i, j):
        return self.form[(i, j)] / self.d[i]

    def matrix(self):
        return [[self.a(i, j) for j in self.nodes] for i in self.nodes]

    def bilinear(self, i, j):
        return self.form[(i, j)]

    def pair(self, u, v):
        """(u|v) for coefficient vectors over all nodes 0..n (or 1..n)."""
        if len(u) == self.n:
            u = (0,) + tuple(u)
        if len(v) == self.n:
            v = (0,) + tuple(v)
        return sum(x * y * self.form[(i, j)] for i, x in zip(self.nodes, u) if x
                   for j, y in zip(self.nodes, v) if y)

    def finite_pair(self, u, v):
        return self.pair((0,) + tuple(u), (0,) + tuple(v))

    def orbit(self, i):
        """Simply-laced nodes in the σ-orbit of twisted finite index i."""
        return orbit(self.sigma, self.reps[i], self.r)


def affine_cartan(t):
    if isinstance(t, str):
        t = AffineType.parse(t)
    n = t.n
    fin = range(1, n + 1)
    sigma = reps = sl = None
    if t.twist == 1:
        B = finite_form(t.letter, n)
        roots = positive_roots(B, fin)
        theta = maximal_roots(roots)
        assert len(theta) == 1
        theta = theta[0]
        d0 = None
    else:
        sl = (t.letter, t.rank)
        sigma = diagram_automorphism(t.letter, t.rank, t.twist)
        slB = finite_form(t.letter, t.rank)
        reps = {i: rep for i, rep in enumerate(_REPS[t.letter](t.rank), start=1)}
        if t.twist == 3:
            reps = {1: 1, 2: 2}
        B = [[F(0)] * (n + 1) for _ in range(n + 1)]
        for i in fin:
            for j in fin:
                B[i][j] = sum((slB[sigma_power(sigma, reps[i], s)][reps[j]]
                               for s in range(t.twist)), F(0))
        roots = positive_roots(B, fin)
        pool = list(roots)
        if t.letter == "A" and t.rank % 2 == 0:
            shortest = min(form_on(B, fin, v, v) for v in roots)
            pool += [tuple(2 * x for x in v) for v in roots if form_on(B, fin, v, v) == shortest]
        d0 = {("A", 0): F(2), ("A", 1): F(1), ("D", 0): F(1), ("D", 1): F(1),
              ("E", 0): F(1)}[(t.letter, t.rank % 2 if t.letter == "A" else 0)]
        cands = [v for v in pool if form_on(B, fin, v, v) == 2 * d0]
        top = maximal_roots(cands)
        if len(top) != 1:
            raise AssertionError(f"ambiguous θ for {t}: {top}")
        theta = top[0]
    # affine node: α_0 = δ - θ
    nodes = tuple(range(n + 1))
    form = {}
    for i in fin:
        for j in fin:
            form[(i, j)] = B[i][j]
    tt = form_on(B, fin, theta, theta)
    form[(0, 0)] = tt
    for j in fin:
        v = -sum(theta[s] * B[i][j] for s, i in enumerate(fin))
        form[(0, j)] = form[(j, 0)] = v
    d = {i: form[(i, i)] / 2 for i in nodes}
    if d0 is not None and d[0] != d0:
        raise AssertionError(f"{t}: d_0 = {d[0]}, expected {d0}")
    null = (1,) + tuple(theta)
    h = 1 + sum(theta)
    return CartanData(t, nodes, form, d, null, tuple(theta), h, sigma, reps, sl, tuple(roots))
