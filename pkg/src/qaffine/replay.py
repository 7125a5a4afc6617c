"""Replay of derivation scripts with certificates.

A derivation starts from an Element (inline expression or a named goal) and
lists steps, each claiming the next Element.  A step is accepted only if the
difference `current - next` is accounted for by the relation family the step
cites:

* ExpandDefinition, CollectTerms, ApplyBracketIdentity: the two Elements are
  equal in the free algebra (bracket identities are checked on their
  bindings as well);
* ApplySerre: the difference reduces to zero using only the cited Serre
  index pairs (plus the quadratic relations when `quadratic` is set);
* ApplyDrinfeldRelation: the difference reduces to zero using only the
  cited relation classes;
* SubstituteEqualByPriorGoal: the difference is coeff·left·G·right for an
  earlier derivation G of the same run (start - expect of G).

The certificate lists every relation instance used and is re-summed against
start - end.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .cartan import affine_cartan
from .drinfeld import gamma_pow, resolve_token
from .freealg import (Element, PreconditionError, _acc, check_identity,
                      nested_bracket, nested_bracket_primed)
from .isomap import chevalley_images, goal_relations
from .reduce import ReductionConfig, Reducer
from .scalar import ONE, Scalar, parse_scalar

# relation classes by rule group
CLASSES = {
    "R1": {"inverse", "central", "central_inv", "KK", "aK", "dK", "dg", "dx", "da", "Kx"},
    "R2": {"aa"},
    "R3": {"ax"},
    "R4": {"xx-mixed"},
    "quadratic": {"xx-same"},
    "serre": {"serre"},
}
ALL_CLASSES = tuple(CLASSES)


class ReplayError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expression language
#
#   expr   := ['-'] term (('+' | '-') term)*
#   term   := factor ('*' factor)*
#   factor := '{' scalar '}' | '(' expr ')' | bracket | atom
#   bracket:= '[' expr (',' expr)* ']' ["'"] ['_{' scalar (',' scalar)* '}']
#   atom   := generator token | macro name | integer

_ATOM = re.compile(r"x[+-]_\d+\(-?\d+\)|a_\d+\(-?\d+\)|K_\d+(?:\^-1)?|g\^\(-?1/2\)|"
                   r"psi_\d+\(-?\d+\)|phi_\d+\(-?\d+\)|[A-Za-z][A-Za-z0-9]*(?:\^-1)?|\d+")


class ExprParser:
    def __init__(self, text, macros, alg=None):
        self.s = text
        self.pos = 0
        self.macros = macros
        self.alg = alg

    def error(self, msg):
        raise ReplayError(f"{msg} at offset {self.pos} in {self.s!r}")

    def peek(self):
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        e = self.expr()
        if self.peek():
            self.error("trailing input")
        return e

    def expr(self):
        neg = False
        if self.peek() == "-":
            self.pos += 1
            neg = True
        out = self.term()
        if neg:
            out = -out
        while self.peek() in ("+", "-"):
            op = self.s[self.pos]
            self.pos += 1
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        out = self.factor()
        while self.peek() == "*":
            self.pos += 1
            out = out * self.factor()
        return out

    def _balanced(self, open_, close):
        self.take(open_)
        depth, start = 1, self.pos
        while self.pos < len(self.s):
            ch = self.s[self.pos]
            if ch == open_:
                depth += 1
            elif ch == close:
                depth -= 1
                if depth == 0:
                    body = self.s[start:self.pos]
                    self.pos += 1
                    return body
            self.pos += 1
        self.error(f"unbalanced {open_!r}")

    def factor(self):
        ch = self.peek()
        if ch == "{":
            return Element.scalar(parse_scalar(self._balanced("{", "}")))
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.take(")")
            return e
        if ch == "[":
            return self.bracket()
        m = _ATOM.match(self.s, self.pos)
        if not m:
            self.error("expected a factor")
        self.pos = m.end()
        return self.atom(m.group(0))

    def bracket(self):
        self.take("[")
        items = [self.expr()]
        while self.peek() == ",":
            self.pos += 1
            items.append(self.expr())
        self.take("]")
        primed = False
        if self.peek() == "'":
            self.pos += 1
            primed = True
        vs = [ONE] * (len(items) - 1)
        if self.peek() == "_":
            self.pos += 1
            body = self._balanced("{", "}")
            parts = _split_top(body)
            if len(parts) != len(items) - 1:
                self.error(f"{len(items)}-fold bracket needs {len(items) - 1} subscripts")
            vs = [parse_scalar(p) for p in parts]
        if len(items) < 2:
            self.error("a bracket needs at least two entries")
        return (nested_bracket_primed if primed else nested_bracket)(items, vs)

    def atom(self, tok):
        if tok.isdigit():
            return Element.scalar(int(tok))
        if tok in self.macros:
            return self.macros[tok]
        m = re.fullmatch(r"(psi|phi)_(\d+)\((-?\d+)\)", tok)
        if m:
            if self.alg is None:
                self.error("ψ/φ need an algebra")
            f = self.alg.psi_mode if m.group(1) == "psi" else self.alg.phi_mode
            return f(int(m.group(2)), int(m.group(3)))
        try:
            return Element.gen(resolve_token(tok))
        except ValueError:
            self.error(f"unknown name {tok!r}")


def _split_top(body):
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_expr(text, macros=None, alg=None):
    return ExprParser(text, macros or {}, alg).parse()


# ---------------------------------------------------------------------------
# derivations


@dataclass
class Step:
    kind: str
    params: dict
    result: str
    position: list = field(default_factory=list)
    cite: str = ""


@dataclass
class Derivation:
    name: str
    type: str
    start: dict
    steps: list
    expect: str
    paper_expect: str | None = None
    paper_citation: str = ""
    a: str | None = None          # override of the F_0 constant for macros
    reconstructed: bool = False
    note: str = ""

    @classmethod
    def from_json(cls, d):
        steps = [Step(s["kind"], dict(s.get("params", {})), s["result"],
                      list(s.get("position", [])), s.get("cite", "")) for s in d["steps"]]
        return cls(d["name"], d["type"], d["start"], steps, d["expect"],
                   d.get("paper_expect"), d.get("paper_citation", ""), d.get("a"),
                   d.get("reconstructed", False), d.get("note", ""))

    def to_json(self):
        return {"name": self.name, "type": self.type, "start": self.start,
                "steps": [{"kind": s.kind, "params": s.params, "result": s.result,
                           "position": s.position, "cite": s.cite} for s in self.steps],
                "expect": self.expect, "paper_expect": self.paper_expect,
                "paper_citation": self.paper_citation, "a": self.a,
                "reconstructed": self.reconstructed, "note": self.note}


@dataclass
class CertEntry:
    step: int
    kind: str
    coeff: Scalar
    left: tuple
    relation: object        # RelationInstance, or ("goal", name, Element)
    right: tuple

    def element(self):
        rel = self.relation[2] if isinstance(self.relation, tuple) else self.relation.element
        return Element.gen(*self.left) * rel * Element.gen(*self.right)

    def to_json(self):
        if isinstance(self.relation, tuple):
            rel = {"goal": self.relation[1]}
        else:
            rel = self.relation.to_json()
        return {"step": self.step, "kind": self.kind, "coeff": self.coeff.text(),
                "left": [s.token() for s in self.left], "relation": rel,
                "right": [s.token() for s in self.right]}


@dataclass
class Certificate:
    name: str
    status: str                    # certified | failed
    start: Element
    end: Element
    entries: list
    failed_step: int | None = None
    message: str = ""
    discrepancies: list = field(default_factory=list)
    identity_checks: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status == "certified"

    def resum(self):
        out = {}
        for e in self.entries:
            for w, c in e.element().terms.items():
                _acc(out, w, e.coeff * c)
        return Element(out)

    def check(self):
        """Mechanical re-check: Σ entries = start - end."""
        return self.resum() == self.start - self.end

    def to_json(self):
        return {"name": self.name, "status": self.status, "failed_step": self.failed_step,
                "message": self.message, "start": self.start.text(), "end": self.end.text(),
                "instances": [e.to_json() for e in self.entries],
                "identity_checks": self.identity_checks,
                "discrepancies": self.discrepancies}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


class Context:
    """Per-run state: images/macros per type and derivations certified so far."""

    def __init__(self, config=None):
        self.config = config or ReductionConfig()
        self._types = {}
        self.proved = {}          # derivation name -> start - expect (certified zero)
        self._reducers = {}

    def images(self, t, a=None):
        key = (t, a)
        if key not in self._types:
            cartan = affine_cartan(t)
            img = chevalley_images(cartan=cartan, a=parse_scalar(a) if a else None)
            self._types[key] = img
        return self._types[key]

    def macros(self, t, a=None):
        img = self.images(t, a)
        m = {"gamma": gamma_pow(2), "gamma^-1": gamma_pow(-2),
             "Ktheta": img.k_theta_element(1), "Ktheta^-1": img.k_theta_element(-1),
             "Xm": img.x_minus, "Xp": img.x_plus, "D": img.D, "D^-1": img.Dinv}
        for i in img.E:
            m[f"E{i}"] = img.E[i]
            m[f"F{i}"] = img.F[i]
            m[f"T{i}"] = img.T[i]
            m[f"T{i}^-1"] = img.Tinv[i]
        return m

    def reducer(self, t, families, kinds=None):
        key = (t, families, kinds)
        if key not in self._reducers:
            cfg = ReductionConfig(budget=self.config.budget, margin=self.config.margin,
                                  max_margin=self.config.max_margin, families=families,
                                  kinds=kinds)
            self._reducers[key] = Reducer(self.images(t).alg, cfg)
        return self._reducers[key]


def _allowed_kinds(classes):
    out = set()
    for c in classes:
        if c not in CLASSES:
            raise ReplayError(f"unknown relation class {c!r}")
        out |= CLASSES[c]
    return out


def _certify_difference(ctx, d, k, diff, classes, serre_pairs=None, sign=None):
    """Reduce diff to zero with the allowed classes; returns cert entries."""
    families = []
    if "quadratic" in classes:
        families.append("quadratic")
    if serre_pairs is not None:
        families += [("serre", int(i), int(j)) for i, j in serre_pairs]
    elif "serre" in classes:
        families.append("serre")
    allowed = _allowed_kinds(classes)
    red = ctx.reducer(d.type, tuple(families), frozenset(allowed))
    out = red.reduce(diff)
    if not out.is_zero:
        raise ReplayError(f"step {k}: difference does not reduce to zero "
                          f"(remainder {out.result.text()[:400]})")
    for st in out.trace:
        kind = st.relation.kind
        if kind not in allowed:
            raise ReplayError(f"step {k}: needs relation {kind!r}, outside the cited classes")
        if kind == "serre" and serre_pairs is not None:
            s, i, j = st.relation.params[:3]
            if [i, j] not in [list(map(int, p)) for p in serre_pairs]:
                raise ReplayError(f"step {k}: uses Serre({i},{j}), not cited")
            if sign is not None and s != sign:
                raise ReplayError(f"step {k}: uses a Serre relation of the other sign")
    return [CertEntry(k, st.relation.kind, st.coeff, st.left, st.relation, st.right)
            for st in out.trace]


def replay(d, ctx=None):
    """Replay one derivation; returns a Certificate (status failed on the first bad step)."""
    ctx = ctx or Context()
    macros = ctx.macros(d.type, d.a)
    alg = ctx.images(d.type, d.a).alg
    parse = lambda text: parse_expr(text, macros, alg)
    if "goal" in d.start:
        goals = {g.name: g.element for g in goal_relations(ctx.images(d.type, d.a),
                                                           only={d.start["goal"]})}
        if d.start["goal"] not in goals:
            raise ReplayError(f"unknown goal {d.start['goal']!r}")
        start = goals[d.start["goal"]]
    else:
        start = parse(d.start["expr"])
    cur = start
    entries = []
    checks = []
    cert = Certificate(d.name, "certified", start, start, entries, identity_checks=checks)
    k = None
    try:
        for k, st in enumerate(d.steps, start=1):
            nxt = parse(st.result)
            p = st.params
            if st.kind in ("ExpandDefinition", "CollectTerms", "ApplyBracketIdentity"):
                if st.kind == "ApplyBracketIdentity":
                    b = {key: parse(v) if key in "abc" else parse_scalar(v)
                         for key, v in p.get("bindings", {}).items()}
                    try:
                        res = check_identity(p["id"], b)
                    except PreconditionError as exc:
                        raise ReplayError(f"step {k}: {exc}") from exc
                    if not res.ok:
                        raise ReplayError(f"step {k}: identity {p['id']} fails on its bindings")
                    checks.append({"step": k, "id": p["id"], "ok": True})
                if cur != nxt:
                    raise ReplayError(f"step {k}: claimed equal Elements differ by "
                                      f"{(cur - nxt).text()[:400]}")
            elif st.kind == "ApplySerre":
                classes = ["serre"] + (["quadratic"] if p.get("quadratic", True) else [])
                entries += _certify_difference(ctx, d, k, cur - nxt, classes,
                                               p.get("pairs"), p.get("sign"))
            elif st.kind == "ApplyDrinfeldRelation":
                classes = p.get("classes", list(ALL_CLASSES))
                entries += _certify_difference(ctx, d, k, cur - nxt, classes)
            elif st.kind == "SubstituteEqualByPriorGoal":
                name = p["name"]
                if name not in ctx.proved:
                    raise ReplayError(f"step {k}: {name!r} is not certified earlier in this run")
                G = ctx.proved[name]
                coeff = parse_scalar(p.get("coeff", "1"))
                left, lc = _monomial(parse(p.get("left", "1")), k)
                right, rc = _monomial(parse(p.get("right", "1")), k)
                coeff = coeff * lc * rc
                e = CertEntry(k, "goal", coeff, left, ("goal", name, G), right)
                if cur - nxt != e.element().scale(coeff):
                    raise ReplayError(f"step {k}: difference is not {coeff.text()}·u·{name}·v")
                entries.append(e)
            else:
                raise ReplayError(f"step {k}: unknown step kind {st.kind!r}")
            cur = nxt
        expect = parse(d.expect)
        if cur != expect:
            raise ReplayError(f"final Element differs from the expected one by "
                              f"{(cur - expect).text()[:400]}")
    except ReplayError as exc:
        cert.status = "failed"
        cert.failed_step = k
        cert.message = str(exc)
        cert.end = cur
        return cert
    cert.end = cur
    if d.paper_expect is not None:
        paper = parse(d.paper_expect)
        if paper != cur:
            cert.discrepancies.append({
                "citation": f"{d.name}: {d.paper_citation}" if d.paper_citation else d.name,
                "paper_value": d.paper_expect, "computed_value": d.expect,
                "note": "printed endpoint differs from the certified endpoint"})
    ctx.proved[d.name] = start - cur
    return cert


def _monomial(el, k):
    if len(el) != 1:
        raise ReplayError(f"step {k}: context factor must be a single monomial")
    (w, c), = el.items()
    return w, c


# ---------------------------------------------------------------------------
# corpus


def corpus_dir():
    return Path(str(resources.files("qaffine") / "corpus"))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return Derivation.from_json(json.load(fh))


def bundled_corpus():
    """Derivations in dependency order (the index file fixes the order)."""
    root = corpus_dir()
    with open(root / "index.json", encoding="utf-8") as fh:
        names = json.load(fh)
    return [load(root / f"{n}.json") for n in names]


def replay_all(derivations=None, ctx=None):
    ctx = ctx or Context()
    return [replay(d, ctx) for d in (derivations or bundled_corpus())]
