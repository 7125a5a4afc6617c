"""Free associative algebra with Scalar coefficients and twisted q-brackets.

Symbols are any hashable objects exposing ``sort_key()`` and ``token()``.
Words are interned tuples of symbols; an Element maps words to nonzero
Scalars.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .scalar import ONE, ZERO, Scalar, parse_scalar

_WORDS: dict = {}


def intern_word(w):
    w = tuple(w)
    return _WORDS.setdefault(w, w)


EMPTY = intern_word(())


@dataclass(frozen=True, order=True)
class GenSym:
    """Abstract generator: a class tag, an index and an optional mode."""

    cls: str
    index: int = 0
    mode: int | None = None

    def sort_key(self):
        return (self.cls, self.index, -10**9 if self.mode is None else self.mode)

    def token(self):
        s = self.cls if not self.index else f"{self.cls}{self.index}"
        return s if self.mode is None else f"{s}({self.mode})"


def word_key(w):
    return (len(w), tuple(s.sort_key() for s in w))


class Element:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms

    # constructors -----------------------------------------------------
    @classmethod
    def gen(cls, *syms, coeff=ONE):
        return cls({intern_word(syms): Scalar.const(coeff)} if coeff else {})

    @classmethod
    def scalar(cls, c):
        c = Scalar.const(c)
        return cls({EMPTY: c} if c else {})

    @classmethod
    def from_terms(cls, pairs):
        out = {}
        for w, c in pairs:
            _acc(out, intern_word(w), Scalar.const(c))
        return cls(out)

    # basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))

    def coeff(self, w):
        return self.terms.get(tuple(w), ZERO)

    def symbols(self):
        return {s for w in self.terms for s in w}

    # arithmetic -------------------------------------------------------
    def __add__(self, o):
        o = _el(o)
        out = dict(self.terms)
        for w, c in o.terms.items():
            _acc(out, w, c)
        return Element(out)

    __radd__ = __add__

    def __neg__(self):
        return Element({w: -c for w, c in self.terms.items()})

    def __sub__(self, o):
        o = _el(o)
        out = dict(self.terms)
        for w, c in o.terms.items():
            _acc(out, w, -c)
        return Element(out)

    def __rsub__(self, o):
        return _el(o) - self

    def __mul__(self, o):
        if isinstance(o, Element):
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in o.terms.items():
                    _acc(out, intern_word(w1 + w2), c1 * c2)
            return Element(out)
        return self.scale(o)

    def __rmul__(self, o):
        if isinstance(o, Element):
            return o * self
        return self.scale(o)

    def scale(self, c):
        c = Scalar.const(c)
        if not c:
            return Element()
        return Element({w: v * c for w, v in self.terms.items()})

    def __pow__(self, n):
        out = Element.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    # structure maps ---------------------------------------------------
    def substitute(self, images, anti=False, bar=False):
        """Apply the (anti)homomorphism fixed by symbol images.

        Symbols missing from `images` are kept.  With bar=True coefficients
        are sent through q -> q^-1.
        """
        out = Element()
        cache = {}
        for w, c in self.terms.items():
            term = Element.scalar(c.bar() if bar else c)
            seq = reversed(w) if anti else w
            for s in seq:
                img = cache.get(s)
                if img is None:
                    img = images.get(s)
                    img = Element.gen(s) if img is None else _el(img)
                    cache[s] = img
                term = term * img
            out = out + term
        return out

    def text(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            ws = "·".join(s.token() for s in w)
            if not w:
                parts.append(f"[{c.text()}]")
            elif c == ONE:
                parts.append(ws)
            else:
                parts.append(f"[{c.text()}] {ws}")
        return " + ".join(parts)

    __str__ = text

    def __repr__(self):
        return f"Element({self.text()!r})"


def _acc(out, w, c):
    v = out.get(w)
    if v is None:
        if c:
            out[w] = c
        return
    v = v + c
    if v:
        out[w] = v
    else:
        del out[w]


def _el(x):
    return x if isinstance(x, Element) else Element.scalar(x)


def parse_element(text, resolve):
    """Inverse of Element.text(); `resolve` maps a token string to a symbol."""
    text = text.strip()
    if text == "0":
        return Element()
    out = Element()
    for part in _split_terms(text):
        part = part.strip()
        coeff = ONE
        if part.startswith("["):
            depth, end = 0, None
            for k, ch in enumerate(part):
                depth += ch == "["
                depth -= ch == "]"
                if depth == 0:
                    end = k
                    break
            coeff = parse_scalar(part[1:end])
            part = part[end + 1:].strip()
        syms = [resolve(tok.strip()) for tok in part.split("·")] if part else []
        out = out + Element.gen(*syms, coeff=coeff)
    return out


def _split_terms(text):
    parts, depth, cur = [], 0, ""
    k = 0
    while k < len(text):
        ch = text[k]
        depth += ch in "[("
        depth -= ch in "])"
        if depth == 0 and text.startswith(" + ", k):
            parts.append(cur)
            cur = ""
            k += 3
            continue
        cur += ch
        k += 1
    parts.append(cur)
    return parts


# ---------------------------------------------------------------------------
# twisted brackets


def bracket(a, b, v=ONE):
    """[a, b]_v = ab - v ba."""
    a, b = _el(a), _el(b)
    return a * b - (b * a).scale(v)


def nested_bracket(items, vs):
    """[b_1, ..., b_n]_{v_1...v_{n-1}} = [b_1, [b_2, ..., b_n]_{v_1...v_{n-2}}]_{v_{n-1}}.

    v_1 is the innermost parameter.
    """
    items = list(items)
    vs = list(vs)
    if len(vs) != len(items) - 1:
        raise ValueError(f"{len(items)} items need {len(items) - 1} parameters, got {len(vs)}")
    acc = _el(items[-1])
    for k, b in enumerate(reversed(items[:-1])):
        acc = bracket(b, acc, vs[k])
    return acc


def nested_bracket_primed(items, vs):
    """[b_1, ..., b_n]'_{v_1...v_{n-1}} = [[b_1, ..., b_{n-1}]'_{v_1...v_{n-2}}, b_n]_{v_{n-1}}."""
    items = list(items)
    vs = list(vs)
    if len(vs) != len(items) - 1:
        raise ValueError(f"{len(items)} items need {len(items) - 1} parameters, got {len(vs)}")
    acc = _el(items[0])
    for k, b in enumerate(items[1:]):
        acc = bracket(acc, b, vs[k])
    return acc


def omega(e, images):
    """Anti-involution: reverse words, map symbols through `images`, q -> q^-1."""
    missing = {s for s in e.symbols() if s not in images}
    if missing:
        raise KeyError(f"omega has no image for {sorted(s.token() for s in missing)}")
    return e.substitute(images, anti=True, bar=True)


# ---------------------------------------------------------------------------
# identity layer


class PreconditionError(ValueError):
    pass


def _need_nonzero(x):
    if not Scalar.const(x):
        raise PreconditionError("identity requires x != 0")


def identity_sides(name, b):
    """(lhs, rhs) of a named bracket identity under bindings `b`."""
    if name == "2.13":
        a, bb, c, u, v, x = b["a"], b["b"], b["c"], b["u"], b["v"], b["x"]
        _need_nonzero(x)
        lhs = bracket(a, bracket(bb, c, u), v)
        rhs = bracket(bracket(a, bb, x), c, u * v / x) + \
            bracket(bb, bracket(a, c, v / x), u / x).scale(x)
        return lhs, rhs
    if name == "2.13-printed":
        a, bb, c, u, v, x = b["a"], b["b"], b["c"], b["u"], b["v"], b["x"]
        _need_nonzero(x)
        lhs = bracket(a, bracket(bb, c, u), v)
        rhs = bracket(bracket(a, bb, x), c, u * v / x) + \
            bracket(bb, bracket(a, c, v / x), v / x).scale(x)
        return lhs, rhs
    if name == "2.14":
        a, bb, c, u, v, x = b["a"], b["b"], b["c"], b["u"], b["v"], b["x"]
        _need_nonzero(x)
        lhs = bracket(bracket(a, bb, u), c, v)
        rhs = bracket(a, bracket(bb, c, x), u * v / x) + \
            bracket(bracket(a, c, v / x), bb, u / x).scale(x)
        return lhs, rhs
    if name == "product-left":
        a, bb, c, v, x = b["a"], b["b"], b["c"], b["v"], b["x"]
        _need_nonzero(x)
        lhs = bracket(a, bb * c, v)
        rhs = bracket(a, bb, x) * c + (bb * bracket(a, c, v / x)).scale(x)
        return lhs, rhs
    if name == "product-right":
        a, bb, c, v, x = b["a"], b["b"], b["c"], b["v"], b["x"]
        _need_nonzero(x)
        lhs = bracket(a * bb, c, v)
        rhs = a * bracket(bb, c, x) + (bracket(a, c, v / x) * bb).scale(x)
        return lhs, rhs
    if name == "leibniz-bracket":
        a, items, vs = b["a"], b["items"], b["vs"]
        lhs = bracket(a, nested_bracket(items, vs))
        rhs = Element()
        for k in range(len(items)):
            mod = list(items)
            mod[k] = bracket(a, items[k])
            rhs = rhs + nested_bracket(mod, vs)
        return lhs, rhs
    if name == "2.15-sym":
        a, bb, u, v = b["a"], b["b"], b["u"], b["v"]
        lhs = nested_bracket([a, a, bb], [u, v])
        rhs = nested_bracket([a, a, bb], [v, u])
        return lhs, rhs
    if name == "2.15-expand":
        a, bb, u, v = _el(b["a"]), _el(b["b"]), b["u"], b["v"]
        lhs = nested_bracket([a, a, bb], [u, v])
        rhs = a * a * bb - (a * bb * a).scale(Scalar.const(u) + v) + (bb * a * a).scale(u * v)
        return lhs, rhs
    if name == "antimorphism-law":
        items, vs, images = b["items"], b["vs"], b["images"]
        n = len(items)
        lhs = omega(nested_bracket(items, vs), images)
        mapped = [omega(_el(x), images) for x in items]
        rhs = nested_bracket(mapped, vs)
        scale = Scalar.const((-1) ** (n - 1))
        for v in vs:
            scale = scale / v
        return lhs, rhs.scale(scale)
    if name == "antimorphism-primed":
        items, vs, images = b["items"], b["vs"], b["images"]
        lhs = omega(nested_bracket(items, vs), images)
        mapped = [omega(_el(x), images) for x in reversed(items)]
        rhs = nested_bracket_primed(mapped, [Scalar.const(v).bar() for v in vs])
        return lhs, rhs
    raise KeyError(f"unknown identity {name!r}")


@dataclass
class IdentityResult:
    name: str
    ok: bool
    difference: Element


def check_identity(name, bindings):
    lhs, rhs = identity_sides(name, bindings)
    diff = lhs - rhs
    return IdentityResult(name, diff.is_zero(), diff)


IDENTITIES = ("2.13", "2.14", "product-left", "product-right", "2.15-sym", "2.15-expand",
              "leibniz-bracket", "antimorphism-law", "antimorphism-primed")

ALPHABET = (GenSym("a"), GenSym("b"), GenSym("c"))


def random_monomial(rng, span=6):
    c = rng.choice([1, -1, 2, -3])
    return Scalar.q_pow(rng.randint(-span, span) / 2) * c


def random_element(rng, alphabet=ALPHABET, max_terms=3, max_len=2):
    out = Element()
    for _ in range(rng.randint(1, max_terms)):
        w = [rng.choice(alphabet) for _ in range(rng.randint(1, max_len))]
        out = out + Element.gen(*w, coeff=random_monomial(rng))
    return out if out else Element.gen(alphabet[0])


def random_bindings(name, rng):
    a, b, c = (random_element(rng) for _ in range(3))
    u, v, x = (random_monomial(rng) for _ in range(3))
    if name in ("leibniz-bracket", "antimorphism-law", "antimorphism-primed"):
        n = rng.randint(2, 4)
        items = [random_element(rng, max_terms=2) for _ in range(n)]
        vs = [Scalar.q_pow(rng.randint(-6, 6) / 2) for _ in range(n - 1)]
        # involutive images: swap a <-> b, fix c
        images = {ALPHABET[0]: Element.gen(ALPHABET[1]), ALPHABET[1]: Element.gen(ALPHABET[0]),
                  ALPHABET[2]: Element.gen(ALPHABET[2])}
        return {"a": a, "items": items, "vs": vs, "images": images}
    return {"a": a, "b": b, "c": c, "u": u, "v": v, "x": x}


def run_identity_suite(n=100, seed=0, names=IDENTITIES):
    """Check each identity on n random instances; returns {name: (passed, total)}."""
    rng = random.Random(seed)
    out = {}
    for name in names:
        passed = 0
        for _ in range(n):
            if check_identity(name, random_bindings(name, rng)).ok:
                passed += 1
        out[name] = (passed, n)
    return out
