"""Drinfeld generators and the defining relations as Elements equal to zero.

Generator tokens in text form::

    x+_i(k)  x-_i(k)  a_i(l)  K_i  K_i^-1  g^(1/2)  g^(-1/2)  D  D^-1

where g^(±1/2) is γ^(±1/2) and D^(±1) is q^(±d).
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from .cartan import AffineType, CartanData, affine_cartan, finite_form, sigma_power
from .freealg import Element, parse_element
from .scalar import ONE, ZERO, Scalar, q_binomial, q_int

F = Fraction

# class ranks of the layered normal order
RANK_D, RANK_G, RANK_K, RANK_ANEG, RANK_X, RANK_APOS = range(6)


@dataclass(frozen=True)
class UGen:
    """kind in {'D', 'g', 'K', 'a', 'x'}; e is the sign/exponent (±1) for
    D, g, K and x, and unused (0) for a."""

    kind: str
    i: int = 0
    k: int = 0
    e: int = 1

    def __post_init__(self):
        if self.kind == "a" and self.k == 0:
            raise ValueError("a_i(0) is not a generator")
        # words are hashed constantly during elimination
        object.__setattr__(self, "_h", hash((self.kind, self.i, self.k, self.e)))

    def __hash__(self):
        return self._h

    @property
    def rank(self):
        if self.kind == "a":
            return RANK_ANEG if self.k < 0 else RANK_APOS
        return {"D": RANK_D, "g": RANK_G, "K": RANK_K, "x": RANK_X}[self.kind]

    def sort_key(self):
        if self.kind == "x":
            return (RANK_X, -self.e, self.k, self.i)
        if self.kind == "a":
            return (self.rank, 0, self.k, self.i)
        return (self.rank, self.i, -self.e, 0)

    def token(self):
        if self.kind == "x":
            return f"x{'+' if self.e > 0 else '-'}_{self.i}({self.k})"
        if self.kind == "a":
            return f"a_{self.i}({self.k})"
        if self.kind == "K":
            return f"K_{self.i}" + ("" if self.e > 0 else "^-1")
        if self.kind == "g":
            return "g^(1/2)" if self.e > 0 else "g^(-1/2)"
        return "D" if self.e > 0 else "D^-1"

    def inverse(self):
        if self.kind in ("K", "g", "D"):
            return UGen(self.kind, self.i, 0, -self.e)
        raise ValueError(f"{self.token()} has no inverse generator")


def xp(i, k):
    return UGen("x", i, k, 1)


def xm(i, k):
    return UGen("x", i, k, -1)


def x(sign, i, k):
    return UGen("x", i, k, sign)


def a(i, l):
    return UGen("a", i, l, 0)


def K(i, e=1):
    return UGen("K", i, 0, e)


GHALF = UGen("g", 0, 0, 1)
GHALF_INV = UGen("g", 0, 0, -1)
QD = UGen("D", 0, 0, 1)
QD_INV = UGen("D", 0, 0, -1)

_TOK = re.compile(r"x([+-])_(\d+)\((-?\d+)\)|a_(\d+)\((-?\d+)\)|K_(\d+)(\^-1)?|"
                  r"g\^\((-?)1/2\)|D(\^-1)?")


def resolve_token(tok):
    m = _TOK.fullmatch(tok.strip())
    if not m:
        raise ValueError(f"unknown generator token {tok!r}")
    if m.group(1):
        return x(1 if m.group(1) == "+" else -1, int(m.group(2)), int(m.group(3)))
    if m.group(4):
        return a(int(m.group(4)), int(m.group(5)))
    if m.group(6):
        return K(int(m.group(6)), -1 if m.group(7) else 1)
    if tok.strip().startswith("g"):
        return GHALF_INV if m.group(8) == "-" else GHALF
    return QD_INV if m.group(9) else QD


def parse_u(text):
    return parse_element(text, resolve_token)


# ---------------------------------------------------------------------------
# small element builders


def gen(*syms, coeff=ONE):
    return Element.gen(*syms, coeff=coeff)


def gamma_pow(half_steps):
    """γ^(half_steps/2) as a word in g^(±1/2)."""
    s = GHALF if half_steps >= 0 else GHALF_INV
    return Element.gen(*([s] * abs(half_steps)))


def k_monomial(exps):
    """Product of K_i^(exps[i]) in ascending index order."""
    syms = []
    for i in sorted(exps):
        e = exps[i]
        syms += [K(i, 1 if e > 0 else -1)] * abs(e)
    return Element.gen(*syms)


def qpow(e):
    return Scalar.q_pow(e)


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class RelationInstance:
    kind: str
    params: tuple
    element: Element

    def text(self):
        return f"{self.kind}{self.params}: {self.element.text()} = 0"

    def to_json(self):
        return {"kind": self.kind, "params": list(self.params), "element": self.element.text()}


class RelationError(ValueError):
    pass


class DrinfeldAlgebra:
    """The untwisted algebra U attached to one CartanData (finite nodes 1..n)."""

    def __init__(self, cartan):
        if isinstance(cartan, str):
            cartan = affine_cartan(cartan)
        self.cartan = cartan
        self.n = cartan.n
        self._cache = {}

    # data -------------------------------------------------------------
    def form(self, i, j):
        return self.cartan.form[(i, j)]

    def d(self, i):
        return self.cartan.d[i]

    def a_ij(self, i, j):
        return self.cartan.a(i, j)

    def qi_diff(self, i):
        """q_i - q_i^-1."""
        return qpow(self.d(i)) - qpow(-self.d(i))

    def check_index(self, *idx):
        for i in idx:
            if not 1 <= i <= self.n:
                raise RelationError(f"index {i} outside 1..{self.n}")

    # ψ / φ ------------------------------------------------------------
    def psi_mode(self, i, m):
        """ψ_i(m): K_i times the z^-m coefficient of exp((q_i - q_i^-1) Σ a_i(k) z^-k)."""
        if m < 0:
            return Element()
        return gen(K(i)) * self._exp_coeff(i, m, 1)

    def phi_mode(self, i, m):
        """φ_i(m) for m <= 0: K_i^-1 times the z^|m| coefficient of
        exp(-(q_i - q_i^-1) Σ a_i(-k) z^k)."""
        if m > 0:
            return Element()
        return gen(K(i, -1)) * self._exp_coeff(i, -m, -1)

    def _exp_coeff(self, i, m, sign):
        key = ("exp", i, m, sign)
        if key in self._cache:
            return self._cache[key]
        self._cache[key] = out = exp_coefficient(i, m, sign, self.qi_diff(i))
        return out


    # individual relation families --------------------------------------
    def relation(self, kind, *params):
        key = (kind, params)
        hit = self._cache.get(key)
        if hit is None:
            el = getattr(self, "_rel_" + kind.replace("-", "_"))(*params)
            hit = RelationInstance(kind, tuple(params), el)
            self._cache[key] = hit
        return hit

    def _rel_central(self, s_token):
        """γ^(±1/2) u - u γ^(±1/2) for a generator u (given by token)."""
        u = resolve_token(s_token) if isinstance(s_token, str) else s_token
        return gen(GHALF, u) - gen(u, GHALF)

    def _rel_central_inv(self, s_token):
        u = resolve_token(s_token) if isinstance(s_token, str) else s_token
        return gen(GHALF_INV, u) - gen(u, GHALF_INV)

    def _rel_inverse(self, s_token, order=1):
        """u u^-1 - 1 (order=1) or u^-1 u - 1 (order=-1) for K_i, γ^(1/2), q^d."""
        u = resolve_token(s_token) if isinstance(s_token, str) else s_token
        if u.kind == "K":
            self.check_index(u.i)
        pair = (u, u.inverse()) if order == 1 else (u.inverse(), u)
        return gen(*pair) - Element.scalar(1)

    def _rel_KK(self, i, e, j, f):
        self.check_index(i, j)
        return gen(K(i, e), K(j, f)) - gen(K(j, f), K(i, e))

    def _rel_aK(self, i, k, j, e):
        self.check_index(i, j)
        return gen(a(i, k), K(j, e)) - gen(K(j, e), a(i, k))

    def _rel_dK(self, j, e, de=1):
        self.check_index(j)
        D = QD if de > 0 else QD_INV
        return gen(D, K(j, e)) - gen(K(j, e), D)

    def _rel_dg(self, ge=1, de=1):
        D = QD if de > 0 else QD_INV
        g = GHALF if ge > 0 else GHALF_INV
        return gen(D, g) - gen(g, D)

    def _rel_dx(self, sign, i, k, de=1):
        """q^(±d) x_i(k) - q^(±k) x_i(k) q^(±d)."""
        self.check_index(i)
        D = QD if de > 0 else QD_INV
        return gen(D, x(sign, i, k)) - gen(x(sign, i, k), D, coeff=qpow(de * k))

    def _rel_da(self, i, l, de=1):
        self.check_index(i)
        D = QD if de > 0 else QD_INV
        return gen(D, a(i, l)) - gen(a(i, l), D, coeff=qpow(de * l))

    def _rel_Kx(self, i, e, sign, j, k):
        """K_i^e x_j^±(k) - q^(±e(α_i|α_j)) x_j^±(k) K_i^e."""
        self.check_index(i, j)
        return gen(K(i, e), x(sign, j, k)) - \
            gen(x(sign, j, k), K(i, e), coeff=qpow(sign * e * self.form(i, j)))

    def _rel_aa(self, i, k, j, l):
        """[a_i(k), a_j(l)] - δ_{k+l,0} [a_ij k]_i/k (γ^k - γ^-k)/(q_j - q_j^-1)."""
        self.check_index(i, j)
        out = gen(a(i, k), a(j, l)) - gen(a(j, l), a(i, k))
        if k + l == 0:
            c = q_int(self.a_ij(i, j) * k, self.d(i)) / k / self.qi_diff(j)
            out = out - (gamma_pow(2 * k) - gamma_pow(-2 * k)).scale(c)
        return out

    def ax_coeff(self, i, k, j):
        return q_int(self.a_ij(i, j) * k, self.d(i)) / k

    def _rel_ax(self, i, k, sign, j, l):
        """[a_i(k), x_j^±(l)] ∓ [a_ij k]_i/k γ^(∓|k|/2) x_j^±(k+l)."""
        self.check_index(i, j)
        out = gen(a(i, k), x(sign, j, l)) - gen(x(sign, j, l), a(i, k))
        c = self.ax_coeff(i, k, j) * sign
        return out - (gamma_pow(-sign * abs(k)) * gen(x(sign, j, k + l))).scale(c)

    def _rel_xx_same(self, sign, i, j, k, l):
        """x_i(k+1)x_j(l) - q^(±(α_i|α_j)) x_j(l)x_i(k+1)
        - q^(±(α_i|α_j)) x_i(k)x_j(l+1) + x_j(l+1)x_i(k)."""
        self.check_index(i, j)
        c = qpow(sign * self.form(i, j))
        return (gen(x(sign, i, k + 1), x(sign, j, l)) - gen(x(sign, j, l), x(sign, i, k + 1), coeff=c)
                - gen(x(sign, i, k), x(sign, j, l + 1), coeff=c)
                + gen(x(sign, j, l + 1), x(sign, i, k)))

    def mixed_rhs(self, i, j, k, l):
        """δ_ij/(q_i - q_i^-1) (γ^((k-l)/2) ψ_i(k+l) - γ^((l-k)/2) φ_i(k+l))."""
        if i != j:
            return Element()
        m = k + l
        out = gamma_pow(k - l) * self.psi_mode(i, m) - gamma_pow(l - k) * self.phi_mode(i, m)
        return out.scale(ONE / self.qi_diff(i))

    def _rel_xx_mixed(self, i, j, k, l):
        self.check_index(i, j)
        return gen(xp(i, k), xm(j, l)) - gen(xm(j, l), xp(i, k)) - self.mixed_rhs(i, j, k, l)

    def serre_m(self, i, j):
        return int(1 - self.a_ij(i, j))

    def _rel_serre(self, sign, i, j, ls, n):
        """Sym over ls of Σ_s (-1)^s [m s]_i x_i(l_1)..x_i(l_s) x_j(n) x_i(l_{s+1})..x_i(l_m)."""
        self.check_index(i, j)
        if i == j:
            raise RelationError("Serre relation needs i != j")
        m = self.serre_m(i, j)
        ls = tuple(ls)
        if len(ls) != m:
            raise RelationError(f"Serre relation for a_ij={self.a_ij(i, j)} needs {m} modes")
        out = Element()
        for perm in itertools.permutations(ls):
            for s in range(m + 1):
                syms = [x(sign, i, l) for l in perm[:s]] + [x(sign, j, n)] + \
                       [x(sign, i, l) for l in perm[s:]]
                out = out + gen(*syms, coeff=q_binomial(m, s, self.d(i)) * (-1) ** s)
        return out

    def _rel_serre_215(self, sign, i, j, mode, n):
        """[x_i(m), x_i(m), x_j(n)]_{q_i, q_i^-1} (a_ij = -1)."""
        from .freealg import nested_bracket
        if self.a_ij(i, j) != -1:
            raise RelationError("the nested-bracket Serre form needs a_ij = -1")
        qi = qpow(self.d(i))
        return nested_bracket([gen(x(sign, i, mode)), gen(x(sign, i, mode)), gen(x(sign, j, n))],
                              [qi, qi.inverse()])

    # commutation data used by the reducer ------------------------------
    def swap_factor(self, left, right):
        """c with left·right = c·right·left when `right` is a Cartan-type symbol
        (D, g, K) and `left` anything; None if they do not q-commute."""
        if right.kind == "g" or left.kind == "g":
            return ONE
        if right.kind == "D":
            if left.kind in ("K", "D"):
                return ONE
            # D u = q^(deg u) u D  =>  u D^e = q^(-e deg u) D^e u
            return qpow(-right.e * left.k)
        if right.kind == "K":
            if left.kind in ("K", "a", "D"):
                return ONE
            if left.kind == "x":
                # K_i^e x_j^± = q^(±e(α_i|α_j)) x_j^± K_i^e
                return qpow(-left.e * right.e * self.form(right.i, left.i))
        return None


def _partitions(m):
    """Partitions of m as {part: multiplicity}."""
    out = []

    def rec(rem, maxp, acc):
        if rem == 0:
            out.append(dict(acc))
            return
        for p in range(min(rem, maxp), 0, -1):
            acc[p] = acc.get(p, 0) + 1
            rec(rem - p, p, acc)
            acc[p] -= 1
            if not acc[p]:
                del acc[p]

    rec(m, m, {})
    return out


def exp_coefficient(i, m, sign, qdiff):
    """Degree-m coefficient of exp(sign·qdiff·Σ_k a_i(sign·k) z^(∓k)), commuting a's."""
    c = qdiff * sign
    out = Element()
    for parts in _partitions(m):
        # parts: {k: multiplicity}; exp of a commuting sum factorizes
        coeff = ONE
        syms = []
        for k in sorted(parts, key=lambda k: sign * k):
            mult = parts[k]
            coeff = coeff * (c ** mult) / math.factorial(mult)
            syms += [a(i, sign * k)] * mult
        syms.sort(key=lambda s: s.k)
        out = out + gen(*syms, coeff=coeff)
    return out


# ---------------------------------------------------------------------------
# twisted algebra (generators indexed by the simply-laced nodes 1..N)


class TwistedAlgebra(DrinfeldAlgebra):
    """The algebra U_σ: x_i(k), a_i(l), K_i for every node i of X_N.

    Bilinear data on nodes: (α_i|α_j) = Σ_s a'_{σ^s i, j}; q_i = q^(d_i) with
    d_i the folded value of the orbit of i.
    """

    def __init__(self, cartan):
        if isinstance(cartan, str):
            cartan = affine_cartan(cartan)
        if cartan.r == 1:
            raise RelationError(f"{cartan.type} is not a twisted type")
        super().__init__(cartan)
        self.r = cartan.r
        self.sigma = cartan.sigma
        self.N = cartan.type.rank
        self.n = self.N
        self.sl = finite_form(cartan.type.letter, self.N)
        self.omega = Scalar.omega(self.r)
        self.node_index = {}
        for t in range(1, cartan.n + 1):
            for j in cartan.orbit(t):
                self.node_index[j] = t

    def sigma_pow(self, i, s):
        return sigma_power(self.sigma, i, s)

    def a_prime(self, i, j):
        return self.sl[i][j]

    def form(self, i, j):
        return sum((self.a_prime(self.sigma_pow(i, s), j) for s in range(self.r)), F(0))

    def d(self, i):
        return self.cartan.d[self.node_index[i]]

    def a_ij(self, i, j):
        return self.form(i, j) / self.d(i)

    def w(self, k):
        return Scalar.omega(self.r, k)

    def pair_coeff(self, i, j, k):
        """Σ_s [k a'_{i,σ^s j}/d_i]_i / k · ω^(ks)."""
        di = self.d(i)
        out = ZERO
        for s in range(self.r):
            ap = self.a_prime(i, self.sigma_pow(j, s))
            out = out + q_int(F(k) * ap / di, di) * self.w(k * s)
        return out / k

    # Theorem-level relation lines ---------------------------------------
    def _rel_sigma_eigen(self, sign, i, k):
        self.check_index(i)
        return gen(x(sign, self.sigma[i], k)) - gen(x(sign, i, k), coeff=self.w(k))

    def _rel_sigma_eigen_a(self, i, l):
        self.check_index(i)
        return gen(a(self.sigma[i], l)) - gen(a(i, l), coeff=self.w(l))

    def _rel_aa(self, i, k, j, l):
        self.check_index(i, j)
        out = gen(a(i, k), a(j, l)) - gen(a(j, l), a(i, k))
        if k + l == 0:
            c = self.pair_coeff(i, j, k) / self.qi_diff(j)
            out = out - (gamma_pow(2 * k) - gamma_pow(-2 * k)).scale(c)
        return out

    def ax_coeff(self, i, k, j):
        return self.pair_coeff(i, j, k)

    def _rel_xx_same(self, *args):
        raise RelationError("use the 'product' series relation in the twisted algebra")

    def _rel_serre(self, *args):
        raise RelationError("use 'serre-P' or 'serre-cubic' in the twisted algebra")

    def mixed_rhs(self, i, j, k, l):
        out = Element()
        for s in range(self.r):
            if self.sigma_pow(i, s) == j:
                m = k + l
                part = gamma_pow(k - l) * self.psi_mode(i, m) - gamma_pow(l - k) * self.phi_mode(i, m)
                out = out + part.scale(self.w(s * l) / self.qi_diff(i))
        return out

    def series(self, kind, params, window):
        """All coefficient instances of a series relation on the mode window [-M, M]."""
        if window <= 0:
            raise RelationError("window must be positive")
        expr, nvars = getattr(self, "_series_" + kind.replace("-", "_"))(*params)
        rng = range(-window, window + 1)
        out = []
        for target in itertools.product(rng, repeat=nvars):
            el = series_coefficient(expr, target)
            out.append(RelationInstance(kind, tuple(params) + (target,), el))
        return out

    def _series_product(self, sign, i, j):
        """Π_s(z - ω^s q^(±a'_s) w) x_i(z)x_j(w) - Π_s(z q^(±a'_s) - ω^s w) x_j(w)x_i(z);
        variables (z, w) = (0, 1)."""
        self.check_index(i, j)
        left = {(0, 0): ONE}
        right = {(0, 0): ONE}
        for s in range(self.r):
            qa = qpow(sign * self.a_prime(i, self.sigma_pow(j, s)))
            ws = self.w(s)
            left = poly_mul(left, {(1, 0): ONE, (0, 1): -(ws * qa)})
            right = poly_mul(right, {(1, 0): qa, (0, 1): -ws})
        return [(left, [(sign, i, 0), (sign, j, 1)], ONE),
                (right, [(sign, j, 1), (sign, i, 0)], -ONE)], 2

    def serre_case(self, i, j):
        """(P polynomial in (z, w) for one sign, d_ij) per the four-way case table."""
        si, sj = self.sigma[i], self.sigma[j]
        r = self.r

        def P(sign):
            if si == i:
                return {(0, 0): ONE}
            if self.a_prime(i, si) == 0 and sj == j:
                # (z^r q^(2r) - w^r)/(z q^2 - w) = Σ_k (z q^2)^(r-1-k) w^k
                return {(r - 1 - k, k): qpow(sign * 2 * (r - 1 - k)) for k in range(r)}
            if self.a_prime(i, si) == 0:
                return {(0, 0): ONE}
            return {(1, 0): qpow(sign * F(r, 2)), (0, 1): ONE}

        if si == i or (self.a_prime(i, si) == 0 and sj == j):
            dij = F(r)
        elif self.a_prime(i, si) == 0:
            dij = F(1, 2)
        else:
            dij = F(r, 4)
        return P, dij

    def _series_serre_P(self, sign, i, j):
        """Sym_{z1,z2} P(z1,z2) Σ_s (-1)^s [2 s]_{q^d_ij} x_i(z1)..x_j(w)..x_i(z2);
        variables (z1, z2, w) = (0, 1, 2)."""
        self.check_index(i, j)
        if self.a_prime(i, j) != -1 or self.sigma[i] == j:
            raise RelationError("serre-P needs A_ij = -1 and σ(i) != j")
        P, dij = self.serre_case(i, j)
        p = P(sign)
        terms = []
        for z1, z2 in ((0, 1), (1, 0)):
            poly = {_place(e, (z1, z2), 3): c for e, c in p.items()}
            for s in range(3):
                zs = [z1, z2]
                pattern = [(sign, i, v) for v in zs[:s]] + [(sign, j, 2)] + [(sign, i, v) for v in zs[s:]]
                terms.append((poly, pattern, q_binomial(2, s, dij) * (-1) ** s))
        return terms, 3

    def _series_serre_cubic(self, sign, i):
        """Sym_{z1,z2,z3} (q^(∓3r/4) z1 - (q^(r/4)+q^(-r/4)) z2 + q^(±3r/4) z3) x_i(z1)x_i(z2)x_i(z3)."""
        self.check_index(i)
        if self.a_prime(i, self.sigma[i]) != -1:
            raise RelationError("serre-cubic needs A_{i,σ(i)} = -1")
        r = F(self.r)
        base = [qpow(-sign * 3 * r / 4), -(qpow(r / 4) + qpow(-r / 4)), qpow(sign * 3 * r / 4)]
        terms = []
        for perm in itertools.permutations(range(3)):
            poly = {}
            for pos, v in enumerate(perm):
                e = [0, 0, 0]
                e[v] = 1
                poly[tuple(e)] = base[pos]
            terms.append((poly, [(sign, i, v) for v in perm], ONE))
        return terms, 3


def _place(exps, slots, nvars):
    out = [0] * nvars
    for e, v in zip(exps, slots):
        out[v] += e
    return tuple(out)


def poly_mul(p1, p2):
    out = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            c = out.get(e, ZERO) + c1 * c2
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def series_coefficient(expr, target):
    """Coefficient of Π_v z_v^(target_v) in Σ c·poly(z)·x(z_v1)x(z_v2)...

    x_i(z) = Σ_k x_i(k) z^-k, so a monomial z^e in variable v forces the mode
    of that variable's generator to be e_v - target_v.
    """
    out = Element()
    for poly, pattern, c in expr:
        for e, pc in poly.items():
            syms = [x(sign, i, e[v] - target[v]) for sign, i, v in pattern]
            out = out + gen(*syms, coeff=c * pc)
    return out


# ---------------------------------------------------------------------------
# folding


@dataclass(frozen=True)
class RootR:
    """even + √r·odd with (√r)² = r; both parts are Elements of the primed algebra."""

    r: int
    even: Element
    odd: Element

    @classmethod
    def of(cls, r, el=None):
        return cls(r, el if el is not None else Element(), Element())

    def __add__(self, o):
        return RootR(self.r, self.even + o.even, self.odd + o.odd)

    def __sub__(self, o):
        return RootR(self.r, self.even - o.even, self.odd - o.odd)

    def __mul__(self, o):
        if not isinstance(o, RootR):
            return RootR(self.r, self.even.scale(o), self.odd.scale(o))
        return RootR(self.r, self.even * o.even + (self.odd * o.odd).scale(self.r),
                     self.even * o.odd + self.odd * o.even)

    def is_zero(self):
        return not self.even and not self.odd

    def map(self, f):
        return RootR(self.r, f(self.even), f(self.odd))

    def text(self):
        parts = []
        if self.even:
            parts.append(self.even.text())
        if self.odd:
            parts.append(f"sqrt({self.r})*({self.odd.text()})")
        return " + ".join(parts) or "0"


class Folding:
    """The embedding U_σ -> U(X_N^(1)) given by the σ-eigencombinations."""

    def __init__(self, twisted):
        if isinstance(twisted, (str, AffineType, CartanData)):
            twisted = TwistedAlgebra(twisted)
        self.tw = twisted
        self.r = twisted.r
        t = twisted.cartan.type
        self.primed = DrinfeldAlgebra(AffineType(t.letter, t.rank, 1).__str__())
        self._cache = {}

    def image(self, g):
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        tw, r = self.tw, self.r
        if g.kind in ("g", "D"):
            img = RootR.of(r, gen(g))
        elif g.kind == "K":
            tw.check_index(g.i)
            img = RootR.of(r, gen(*[K(tw.sigma_pow(g.i, s), g.e) for s in range(r)]))
        else:
            tw.check_index(g.i)
            mode = g.k
            # 1/([d_i]√r) = √r/(r[d_i])
            c = ONE / (q_int(tw.d(g.i)) * r)
            odd = Element()
            for s in range(r):
                node = tw.sigma_pow(g.i, s)
                sym = x(g.e, node, mode) if g.kind == "x" else a(node, mode)
                odd = odd + gen(sym, coeff=c * tw.w(-mode * s))
            img = RootR(r, Element(), odd)
        self._cache[g] = img
        return img

    def fold(self, el):
        out = RootR.of(self.r)
        for w, c in el.terms.items():
            term = RootR.of(self.r, Element.scalar(c))
            for s in w:
                term = term * self.image(s)
            out = out + term
        return out


def fold(untwisted_type, sigma, twisted_gen, twisted_type=None):
    """Image of one twisted generator; `twisted_type` names the folded algebra."""
    f = Folding(twisted_type)
    if sigma is not None and dict(sigma) != dict(f.tw.sigma):
        raise RelationError("σ does not match the twisted type")
    if str(AffineType.parse(untwisted_type) if isinstance(untwisted_type, str) else untwisted_type) \
            != str(f.primed.cartan.type):
        raise RelationError("untwisted type does not match the twisted type")
    return f.image(twisted_gen)
