"""Normal ordering in U and certification of zero.

Words are brought to the layered order

    q^d-part · γ-part · K-part · a(l<0) · x⁺ · x⁻ · a(l>0)

by adjacent rewrites, each one subtracting a multiple u·R·v of a concrete
relation instance R (R1 Cartan/central, R2 a-a, R3 a-x, R4 x⁻x⁺).  The
same-sign x blocks are then reduced modulo the quadratic and Serre relations
by exact elimination on a finite mode window.  Every subtraction is logged, so
`start - result = Σ coeff·u·R·v` can be re-checked independently.
"""
from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass, field

from .drinfeld import RANK_D, RANK_G, RANK_K, RANK_X, DrinfeldAlgebra, RelationInstance, x
from .freealg import Element, _acc, intern_word
from .scalar import ONE, Scalar


class BudgetExhausted(RuntimeError):
    pass


@dataclass
class ReductionConfig:
    budget: int = 500_000        # adjacent rewrites allowed per call
    margin: int = 0              # first mode-window margin for the x blocks
    max_margin: int = 2          # widest margin tried before giving up
    trace: bool = True
    certify_x: bool = True
    families: tuple = ("quadratic", "serre")   # relation families allowed in x blocks
    kinds: frozenset | None = None   # rewrite kinds allowed outside x blocks (None = all)


@dataclass
class TraceStep:
    coeff: Scalar
    left: tuple
    relation: RelationInstance
    right: tuple

    def element(self):
        return Element.gen(*self.left) * self.relation.element * Element.gen(*self.right)

    def to_json(self):
        return {"coeff": self.coeff.text(), "left": [s.token() for s in self.left],
                "relation": self.relation.to_json(), "right": [s.token() for s in self.right]}


@dataclass
class ReductionOutcome:
    status: str                   # zero | normal_form | budget
    start: Element
    result: Element
    trace: list = field(default_factory=list)
    steps: int = 0
    margin: int | None = None
    seconds: float = 0.0

    @property
    def is_zero(self):
        return self.status == "zero"

    def check_trace(self):
        """Re-sum the trace: start - result must equal Σ coeff·u·R·v."""
        return trace_sum(self.trace) == self.start - self.result

    def to_json(self, with_trace=False):
        out = {"status": self.status, "result": self.result.text(), "steps": self.steps,
               "trace_length": len(self.trace), "margin": self.margin,
               "seconds": round(self.seconds, 3)}
        if with_trace:
            out["trace"] = [t.to_json() for t in self.trace]
        return out


def trace_sum(trace):
    out = {}
    for st in trace:
        for w, c in st.relation.element.terms.items():
            _acc(out, intern_word(st.left + w + st.right), st.coeff * c)
    return Element(out)


# ---------------------------------------------------------------------------
# adjacent rules


def out_of_order(s1, s2):
    r1, r2 = s1.rank, s2.rank
    if r1 != r2:
        return r1 > r2
    if r1 in (RANK_D, RANK_G):
        return s1.e != s2.e
    if r1 == RANK_K:
        if s1.i == s2.i and s1.e != s2.e:
            return True
        return (s1.i, -s1.e) > (s2.i, -s2.e)
    if r1 == RANK_X:
        return s1.e < 0 < s2.e
    return (s1.k, s1.i) > (s2.k, s2.i)


class Reducer:
    def __init__(self, alg, config=None):
        if not isinstance(alg, DrinfeldAlgebra):
            alg = DrinfeldAlgebra(alg)
        self.alg = alg
        self.config = config or ReductionConfig()
        self._rules = {}
        self._ideals = {}

    # -- rule table -----------------------------------------------------
    def rule(self, s1, s2):
        """(instance R, coefficient of the word s1·s2 in R) for an out-of-order pair."""
        key = (s1, s2)
        hit = self._rules.get(key)
        if hit is None:
            R = self._make_rule(s1, s2)
            lead = R.element.coeff((s1, s2))
            if not lead:
                raise AssertionError(f"rule for {s1.token()}·{s2.token()} lacks its lead word")
            hit = self._rules[key] = (R, lead)
        return hit

    def _make_rule(self, s1, s2):
        U = self.alg
        if s1.kind == s2.kind and s1.kind in ("D", "g", "K") and s1.e != s2.e and s1.i == s2.i:
            u = s1 if s1.e > 0 else s2
            return U.relation("inverse", u.token(), 1 if s1.e > 0 else -1)
        if s1.kind == "g" or s2.kind == "g":
            g, u = (s2, s1) if s2.kind == "g" else (s1, s2)
            return U.relation("central" if g.e > 0 else "central_inv", u.token())
        if s2.kind == "D":
            if s1.kind == "K":
                return U.relation("dK", s1.i, s1.e, s2.e)
            if s1.kind == "x":
                return U.relation("dx", s1.e, s1.i, s1.k, s2.e)
            return U.relation("da", s1.i, s1.k, s2.e)
        if s2.kind == "K":
            if s1.kind == "K":
                return U.relation("KK", s1.i, s1.e, s2.i, s2.e)
            if s1.kind == "x":
                return U.relation("Kx", s2.i, s2.e, s1.e, s1.i, s1.k)
            return U.relation("aK", s1.i, s1.k, s2.i, s2.e)
        if s1.kind == "a" and s2.kind == "a":
            return U.relation("aa", s1.i, s1.k, s2.i, s2.k)
        if s2.kind == "a":          # x · a(l<0)
            return U.relation("ax", s2.i, s2.k, s1.e, s1.i, s1.k)
        if s1.kind == "a":          # a(l>0) · x
            return U.relation("ax", s1.i, s1.k, s2.e, s2.i, s2.k)
        # x⁻ · x⁺
        return U.relation("xx-mixed", s2.i, s1.i, s2.k, s1.k)

    def _allowed(self, s1, s2):
        kinds = self.config.kinds
        return kinds is None or self.rule(s1, s2)[0].kind in kinds

    # -- R1–R4 ------------------------------------------------------------
    def normal_order(self, el, trace=None, budget=None):
        """Rewrite until every word is in layered order (x blocks untouched)."""
        budget = self.config.budget if budget is None else budget
        pending = dict(el.terms)
        done = {}
        steps = 0
        while pending:
            w, c = pending.popitem()
            pos = None
            for p in range(len(w) - 1):
                if out_of_order(w[p], w[p + 1]) and self._allowed(w[p], w[p + 1]):
                    pos = p
                    break
            if pos is None:
                _acc(done, w, c)
                continue
            steps += 1
            if steps > budget:
                _acc(pending, w, c)
                raise BudgetExhausted(steps)
            R, lead = self.rule(w[pos], w[pos + 1])
            m = c / lead
            u, v = w[:pos], w[pos + 2:]
            lw = (w[pos], w[pos + 1])
            for rw, rc in R.element.terms.items():
                if rw == lw:
                    continue
                nw = intern_word(u + rw + v)
                # the word may already be finished; move it back to pending
                if nw in done:
                    _acc(pending, nw, done.pop(nw))
                _acc(pending, nw, -m * rc)
            if trace is not None:
                trace.append(TraceStep(m, u, R, v))
        return Element(done), steps

    # -- x blocks ---------------------------------------------------------
    def ideal(self, sign, lo, hi):
        key = (sign, lo, hi, self.config.families)
        hit = self._ideals.get(key)
        if hit is None:
            hit = self._ideals[key] = XIdeal(self.alg, sign, lo, hi, self.config.families)
        return hit

    def reduce_x_blocks(self, el, margin, trace=None):
        modes = [s.k for w in el.terms for s in w if s.kind == "x"]
        if not modes:
            return el
        lo, hi = min(modes) - margin, max(modes) + margin
        out = {}
        rem_cache = {}

        def rem(sign, word):
            k = (sign, word)
            if k not in rem_cache:
                rem_cache[k] = self.ideal(sign, lo, hi).remainder(word)
            return rem_cache[k]

        for w, c in el.terms.items():
            p = 0
            while p < len(w) and w[p].rank < RANK_X:
                p += 1
            q = p
            while q < len(w) and w[q].rank == RANK_X and w[q].e > 0:
                q += 1
            r = q
            while r < len(w) and w[r].rank == RANK_X:
                r += 1
            head, xp, xm, tail = w[:p], w[p:q], w[q:r], w[r:]
            rp, combos_p = rem(1, xp) if len(xp) > 1 else ({xp: ONE}, [])
            rm, combos_m = rem(-1, xm) if len(xm) > 1 else ({xm: ONE}, [])
            # xp = rp + Σ λ u R v ;  xm = rm + Σ μ u R v
            if trace is not None:
                for lam, u, R, v in combos_p:
                    trace.append(TraceStep(c * lam, head + u, R, v + xm + tail))
                for pw, pc in rp.items():
                    for mu, u, R, v in combos_m:
                        trace.append(TraceStep(c * pc * mu, head + pw + u, R, v + tail))
            for pw, pc in rp.items():
                for mw, mc in rm.items():
                    _acc(out, intern_word(head + pw + mw + tail), c * pc * mc)
        return Element(out)

    # -- driver -----------------------------------------------------------
    def reduce(self, el, budget=None):
        t0 = time.perf_counter()
        cfg = self.config
        trace = [] if cfg.trace else None
        try:
            nf, steps = self.normal_order(el, trace, budget)
        except BudgetExhausted as exc:
            return ReductionOutcome("budget", el, Element(), trace or [], exc.args[0], None,
                                    time.perf_counter() - t0)
        result, used = nf, None
        if cfg.certify_x and nf:
            for margin in range(cfg.margin, cfg.max_margin + 1):
                sub = [] if trace is not None else None
                cand = self.reduce_x_blocks(nf, margin, sub)
                result, used = cand, margin
                if not cand or margin == cfg.max_margin:
                    if trace is not None:
                        trace.extend(sub)
                    break
        status = "zero" if not result else "normal_form"
        return ReductionOutcome(status, el, result, trace or [], steps, used,
                                time.perf_counter() - t0)


def certify_zero(el, alg, config=None):
    return Reducer(alg, config).reduce(el)


# ---------------------------------------------------------------------------
# same-sign x blocks


@functools.lru_cache(maxsize=None)
def _word_order(w):
    letters = [(s.k, s.i) for s in w]
    inv = sum(1 for p in range(len(letters)) for q in range(p + 1, len(letters))
              if letters[p] > letters[q])
    return (inv, tuple(letters))


class XIdeal:
    """Span of two-sided multiples of the quadratic and Serre instances inside
    one mode window, kept in semi-echelon form per homogeneous component."""

    def __init__(self, alg, sign, lo, hi, families=("quadratic", "serre")):
        self.alg = alg
        self.sign = sign
        self.lo, self.hi = lo, hi
        self.families = families
        self._serre_any = any(f == "serre" or (isinstance(f, tuple) and f[0] == "serre")
                              for f in families)
        self._components = {}

    def serre_allowed(self, i, j):
        return "serre" in self.families or ("serre", i, j) in self.families

    def component_key(self, word):
        return (tuple(sorted(s.i for s in word)), sum(s.k for s in word))

    def words(self, key):
        idx, total = key
        d = len(idx)
        rng = range(self.lo, self.hi + 1)
        out = []
        for perm in sorted(set(itertools.permutations(idx))):
            for modes in itertools.product(rng, repeat=d - 1):
                last = total - sum(modes)
                if self.lo <= last <= self.hi:
                    out.append(intern_word(tuple(x(self.sign, i, k)
                                                 for i, k in zip(perm, modes + (last,)))))
        return out

    def instances(self, key):
        """Embedded instances (u, R, v) spanning the windowed component."""
        U, sign = self.alg, self.sign
        inwin = lambda k: self.lo <= k <= self.hi
        seen = set()
        out = []
        for w in self.words(key):
            for p in range(len(w) - 1):
                s1, s2 = w[p], w[p + 1]
                # quadratic: generated by its term x_i(k+1) x_j(l)
                if "quadratic" in self.families and inwin(s1.k - 1) and inwin(s2.k + 1):
                    R = U.relation("xx-same", sign, s1.i, s2.i, s1.k - 1, s2.k)
                    tag = (w[:p], R.params, w[p + 2:])
                    if tag not in seen:
                        seen.add(tag)
                        out.append((w[:p], R, w[p + 2:]))
            if not self._serre_any:
                continue
            for p in range(len(w)):
                i = w[p].i
                for j in range(1, U.n + 1):
                    if j == i or not self.serre_allowed(i, j):
                        continue
                    m = U.serre_m(i, j)
                    end = p + m
                    if end >= len(w) or w[end].i != j:
                        continue
                    run = w[p:end]
                    if any(s.i != i for s in run):
                        continue
                    ls = tuple(s.k for s in run)
                    if list(ls) != sorted(ls):
                        continue
                    R = U.relation("serre", sign, i, j, ls, w[end].k)
                    tag = (w[:p], R.params, w[end + 1:])
                    if tag not in seen:
                        seen.add(tag)
                        out.append((w[:p], R, w[end + 1:]))
        return out

    def component(self, key):
        hit = self._components.get(key)
        if hit is not None:
            return hit
        insts = self.instances(key)
        pivots = {}
        for n, (u, R, v) in enumerate(insts):
            row = {}
            for rw, rc in R.element.terms.items():
                _acc(row, intern_word(u + rw + v), rc)
            combo = {n: ONE}
            while row:
                lead = max(row, key=_word_order)
                if lead in pivots:
                    prow, pcombo = pivots[lead]
                    f = row[lead]
                    for pw, pc in prow.items():
                        _acc(row, pw, -f * pc)
                    for pk, pc in pcombo.items():
                        _acc(combo, pk, -f * pc)
                else:
                    inv = ONE / row[lead]
                    pivots[lead] = ({w: c * inv for w, c in row.items()},
                                    {k: c * inv for k, c in combo.items()})
                    break
        hit = self._components[key] = (pivots, insts)
        return hit

    def remainder(self, word):
        """(remainder dict, [(λ, u, R, v)]) with word = remainder + Σ λ·u·R·v."""
        pivots, insts = self.component(self.component_key(word))
        row = {word: ONE}
        combo = {}
        while True:
            hits = [w for w in row if w in pivots]
            if not hits:
                break
            lead = max(hits, key=_word_order)
            f = row[lead]
            prow, pcombo = pivots[lead]
            for pw, pc in prow.items():
                _acc(row, pw, -f * pc)
            for pk, pc in pcombo.items():
                _acc(combo, pk, f * pc)
        steps = [(lam, insts[k][0], insts[k][1], insts[k][2]) for k, lam in combo.items()]
        return row, steps
