"""Exact coefficients: rational functions in t = q^(1/12) over Q(omega_r).

Every fractional power of q that shows up in the algebras we handle
(q^(1/2), q^(1/3), q^(r/4), q^(3r/4) with r <= 3) is an integral power of
t = q^(1/12), so a single Laurent variable suffices.

Coefficients live in Q(omega) with omega a primitive cube root of unity,
written x + y*omega and reduced with omega^2 = -1 - omega.  The fields
Q(omega_1) = Q(omega_2) = Q are the y == 0 slice, since omega_2 = -1.
"""
from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

UNIT = 12  # t-exponents per unit power of q


class CycRat:
    """Element x + y*omega of Q(omega_3); y == 0 covers orders 1 and 2."""

    __slots__ = ("x", "y")

    def __init__(self, x=0, y=0):
        self.x = mpq(x)
        self.y = mpq(y)

    @property
    def order(self):
        return 3 if self.y else 1

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __eq__(self, other):
        if not isinstance(other, CycRat):
            other = CycRat(other)
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __add__(self, o):
        return CycRat(self.x + o.x, self.y + o.y)

    def __sub__(self, o):
        return CycRat(self.x - o.x, self.y - o.y)

    def __neg__(self):
        return CycRat(-self.x, -self.y)

    def __mul__(self, o):
        if not self.y and not o.y:
            return CycRat(self.x * o.x)
        bd = self.y * o.y
        return CycRat(self.x * o.x - bd, self.x * o.y + self.y * o.x - bd)

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(omega)")
        if not self.y:
            return CycRat(1 / self.x)
        a, b = self.x, self.y
        n = a * a - a * b + b * b
        return CycRat((a - b) / n, -b / n)

    def __truediv__(self, o):
        return self * o.inverse()

    def is_one(self):
        return self.x == 1 and not self.y

    def __repr__(self):
        return f"CycRat({self.x}, {self.y})"

    def text(self):
        def r(v):
            return str(Fraction(int(v.numerator), int(v.denominator)))

        if not self.y:
            return r(self.x)
        if not self.x:
            return f"{r(self.y)}*w"
        return f"({r(self.x)} + {r(self.y)}*w)"


_ZERO = CycRat(0)
_ONE = CycRat(1)
OMEGA3 = CycRat(0, 1)


# ---------------------------------------------------------------------------
# dense ordinary polynomial helpers (coefficient lists, low degree first)


def _trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _pdivmod(a, b):
    a = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    inv = b[-1].inverse()
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - c * bc
        a.pop()
    return _trim(q), a


def _pgcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b)[1]
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _to_dense(d):
    lo = min(d)
    out = [_ZERO] * (max(d) - lo + 1)
    for e, c in d.items():
        out[e - lo] = c
    return lo, out


def _from_dense(lo, p):
    return {lo + i: c for i, c in enumerate(p) if c}


# ---------------------------------------------------------------------------
# sparse Laurent polynomial helpers (dict exponent -> CycRat)


def _ladd(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        v = (c if sign > 0 else -c) if v is None else (v + c if sign > 0 else v - c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _lmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            v = out.get(e)
            p = c1 * c2
            out[e] = p if v is None else v + p
    return {e: c for e, c in out.items() if c}


def _lscale(a, c, shift=0):
    return {e + shift: v * c for e, v in a.items()}


_ONE_POLY = {0: _ONE}


class Scalar:
    """Normalized quotient num/den of Laurent polynomials in t = q^(1/12).

    The denominator has lowest exponent 0 and leading coefficient 1, and
    shares no factor with the numerator; zero is 0/1.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=None, den=None, _normalized=False):
        num = {} if num is None else num
        den = _ONE_POLY if den is None else den
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c):
        if isinstance(c, Scalar):
            return c
        if not isinstance(c, CycRat):
            if isinstance(c, Fraction):
                c = mpq(c.numerator, c.denominator)
            c = CycRat(c)
        return cls({0: c} if c else {}, _ONE_POLY, True)

    @classmethod
    def q_pow(cls, e):
        """q^e for rational e with 12*e integral."""
        k = Fraction(e) * UNIT
        if k.denominator != 1:
            raise ValueError(f"q^{e} is not an integral power of q^(1/12)")
        return cls({int(k): _ONE}, _ONE_POLY, True)

    @classmethod
    def t_pow(cls, k):
        return cls({int(k): _ONE}, _ONE_POLY, True)

    @classmethod
    def omega(cls, r, k=1):
        """omega_r^k for r in {1, 2, 3}."""
        k %= r
        if r == 1 or k == 0:
            return ONE
        if r == 2:
            return cls.const(-1)
        if r == 3:
            return cls({0: OMEGA3 if k == 1 else CycRat(-1, -1)}, _ONE_POLY, True)
        raise ValueError(f"unsupported cyclotomic order {r}")

    # predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_poly(self):
        return self.den is _ONE_POLY or self.den == _ONE_POLY

    def is_monomial(self):
        return self.is_poly() and len(self.num) == 1

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.const(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # arithmetic -------------------------------------------------------
    def __add__(self, o):
        o = _coerce(o)
        if self.den == o.den:
            num = _ladd(self.num, o.num)
            if self.is_poly():
                return Scalar(num, _ONE_POLY, True)
            return Scalar(num, self.den)
        return Scalar(
            _ladd(_lmul(self.num, o.den), _lmul(o.num, self.den)), _lmul(self.den, o.den)
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar({e: -c for e, c in self.num.items()}, self.den, True)

    def __sub__(self, o):
        return self + (-_coerce(o))

    def __rsub__(self, o):
        return _coerce(o) - self

    def __mul__(self, o):
        o = _coerce(o)
        if not self.num or not o.num:
            return ZERO
        if self.is_poly() and o.is_poly():
            return Scalar(_lmul(self.num, o.num), _ONE_POLY, True)
        if len(o.num) == 1 and o.is_poly():
            (e, c), = o.num.items()
            return Scalar(_lscale(self.num, c, e), self.den, True)
        if len(self.num) == 1 and self.is_poly():
            return o * self
        return Scalar(_lmul(self.num, o.num), _lmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("division by zero Scalar")
        if len(self.num) == 1:
            (e, c), = self.num.items()
            return Scalar(_lscale(self.den, c.inverse(), -e), _ONE_POLY, True) if self.is_poly() \
                else Scalar(_lscale(self.den, c.inverse(), -e), _ONE_POLY)
        return Scalar(self.den, self.num)

    def __truediv__(self, o):
        return self * _coerce(o).inverse()

    def __rtruediv__(self, o):
        return _coerce(o) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        base = self if n >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def bar(self):
        """Invert t (q -> q^-1), leaving omega fixed."""
        return Scalar({-e: c for e, c in self.num.items()}, {-e: c for e, c in self.den.items()})

    def normalize(self):
        return Scalar(self.num, self.den)

    def subs_t(self, k):
        """Substitute t -> t^k (k a nonzero integer)."""
        return Scalar({e * k: c for e, c in self.num.items()}, {e * k: c for e, c in self.den.items()})

    def __repr__(self):
        return f"Scalar({self.text()!r})"

    def __str__(self):
        return self.text()

    def text(self):
        if self.is_poly():
            return _poly_text(self.num)
        return f"({_poly_text(self.num)})/({_poly_text(self.den)})"


def _coerce(o):
    return o if isinstance(o, Scalar) else Scalar.const(o)


def _normalize(num, den):
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, _ONE_POLY
    lo = min(den)
    if len(den) == 1:
        inv = den[lo].inverse()
        return _lscale(num, inv, -lo), _ONE_POLY
    den = {e - lo: c for e, c in den.items()}
    num = {e - lo: c for e, c in num.items()}
    nlo, ndense = _to_dense(num)
    _, ddense = _to_dense(den)
    g = _pgcd(ndense, ddense)
    if len(g) > 1:
        ndense = _pdivmod(ndense, g)[0]
        ddense = _pdivmod(ddense, g)[0]
    inv = ddense[-1].inverse()
    num = _from_dense(nlo, [c * inv for c in ndense])
    den = _from_dense(0, [c * inv for c in ddense])
    if len(den) == 1:
        return num, _ONE_POLY
    return num, den


def _exp_text(e):
    f = Fraction(e, UNIT)
    if f.denominator == 1:
        return f"q^{f.numerator}" if f != 1 else "q"
    return f"q^({f.numerator}/{f.denominator})"


def _poly_text(p):
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        ct = c.text()
        neg = False
        if not c.y and c.x < 0:
            neg, ct = True, (-c).text()
        if e == 0:
            body = ct
        elif ct == "1":
            body = _exp_text(e)
        else:
            body = f"{ct}*{_exp_text(e)}"
        parts.append(("- " if neg else "+ ", body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "- " else "") + first
    for sign, body in parts[1:]:
        out += f" {sign}{body}"
    return out


ZERO = Scalar({}, _ONE_POLY, True)
ONE = Scalar({0: _ONE}, _ONE_POLY, True)
Q = Scalar.q_pow(1)


# ---------------------------------------------------------------------------
# q-numbers


def q_int(k, d=1):
    """Symmetric quantum integer (q_i^k - q_i^-k)/(q_i - q_i^-1), q_i = q^d.

    k may be rational as long as every exponent is integral in q^(1/12).
    """
    k, d = Fraction(k), Fraction(d)
    if k == 0:
        return ZERO
    if k < 0:
        return -q_int(-k, d)
    if k.denominator == 1:
        n = int(k)
        return sum((Scalar.q_pow(d * (n - 1 - 2 * j)) for j in range(n)), ZERO)
    qi = Scalar.q_pow(d)
    return (Scalar.q_pow(d * k) - Scalar.q_pow(-d * k)) / (qi - qi.inverse())


def q_int_printed(k, d=1):
    """The variant with the fixed denominator q - q^-1 (not a Laurent polynomial for d != 1)."""
    k, d = Fraction(k), Fraction(d)
    return (Scalar.q_pow(d * k) - Scalar.q_pow(-d * k)) / (Q - Q.inverse())


def q_factorial(m, d=1):
    out = ONE
    for k in range(1, m + 1):
        out = out * q_int(k, d)
    return out


def q_binomial(m, s, d=1):
    if not 0 <= s <= m:
        raise ValueError(f"q_binomial needs 0 <= s <= m, got m={m}, s={s}")
    return q_factorial(m, d) / (q_factorial(s, d) * q_factorial(m - s, d))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


class _Parser:
    def __init__(self, text):
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.toks.append(("num", int(m.group(1))))
            elif m.group(2).strip():
                self.toks.append(("op", m.group(2)))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ValueError(f"expected {value!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            out = out * rhs if op == "*" else out / rhs
        return out

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def exponent(self):
        if self.peek()[1] == "(":
            self.take("(")
            sign = -1 if self.peek()[1] == "-" and self.take() else 1
            num = self.take()[1]
            den = 1
            if self.peek()[1] == "/":
                self.take("/")
                den = self.take()[1]
            self.take(")")
            return sign * Fraction(num, den)
        sign = -1 if self.peek()[1] == "-" and self.take() else 1
        return sign * Fraction(self.take()[1])

    def power(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            base = Scalar.const(val)
        elif val == "q":
            self.take()
            if self.peek()[1] == "^":
                self.take()
                return Scalar.q_pow(self.exponent())
            return Q
        elif val == "w":
            self.take()
            base = Scalar.omega(3)
        elif val == "(":
            self.take()
            base = self.expr()
            self.take(")")
        else:
            raise ValueError(f"unexpected token {val!r}")
        if self.peek()[1] == "^":
            self.take()
            e = self.exponent()
            if e.denominator != 1:
                raise ValueError("fractional powers are only allowed on q")
            base = base ** int(e)
        return base


def parse_scalar(text):
    p = _Parser(text)
    out = p.expr()
    if p.i != len(p.toks):
        raise ValueError(f"trailing input in {text!r}")
    return out
