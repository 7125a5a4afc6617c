"""Command-line entry point: `qaffine <subcommand> [flags]`.

Every subcommand produces a report (text on stdout, JSON with --json PATH)
whose goals carry one of the statuses certified, failed, inconclusive or
unspecified-constant.  Exit code 0 unless a goal failed; with --strict,
inconclusive and unspecified-constant goals and discrepancy records also
count as failures.  Argument errors exit with code 2.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import metadata
from pathlib import Path

from .cartan import AffineType, affine_cartan
from .drinfeld import DrinfeldAlgebra, RelationError, TwistedAlgebra
from .epsseq import SequenceError, builtin_sequence, remark_check
from .freealg import IDENTITIES, run_identity_suite
from .isomap import FOLD_TYPES, GOAL_STATUSES, certify_goals, folding_checks
from .reduce import ReductionConfig, Reducer
from .replay import Context, ReplayError, bundled_corpus, load, parse_expr, replay

SCHEMA_PATH = Path(__file__).with_name("schema") / "report.schema.json"


def tool_version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


class Report:
    def __init__(self, command, type_=None):
        self.command = command
        self.type = type_
        self.goals = []
        self.discrepancies = []
        self.details = {}
        self.timings = {}

    def goal(self, name, status, seconds=0.0, detail="", family=""):
        if status not in GOAL_STATUSES:
            raise ValueError(f"bad status {status!r}")
        self.goals.append({"name": name, "family": family, "status": status,
                           "seconds": round(seconds, 4), "detail": detail})

    def discrepancy(self, rec, citation_default=""):
        rec = dict(rec)
        rec.setdefault("citation", citation_default)
        rec.setdefault("note", "")
        rec["paper_value"] = _text(rec.get("paper_value"))
        rec["computed_value"] = _text(rec.get("computed_value"))
        self.discrepancies.append(rec)

    def failed(self, strict):
        bad = {"failed"} | ({"inconclusive", "unspecified-constant"} if strict else set())
        return any(g["status"] in bad for g in self.goals) or (strict and self.discrepancies)

    def to_json(self, strict=False):
        self.goals.sort(key=lambda g: g["name"])
        return {"tool": "qaffine", "version": tool_version(), "command": self.command,
                "type": self.type, "strict": strict,
                "status": "fail" if self.failed(strict) else "ok",
                "goals": self.goals, "discrepancies": self.discrepancies,
                "timings": {k: round(v, 4) for k, v in self.timings.items()},
                "details": self.details}

    def text(self, strict=False):
        d = self.to_json(strict)
        lines = [f"qaffine {d['version']} {self.command}" + (f" --type {self.type}" if self.type else "")]
        for g in d["goals"]:
            extra = f"  {g['detail']}" if g["detail"] else ""
            lines.append(f"  {g['status']:<21} {g['name']}  ({g['seconds']:.2f}s){extra}")
        for rec in d["discrepancies"]:
            lines.append(f"  discrepancy [{rec['citation']}]: printed {rec['paper_value']}, "
                         f"computed {rec['computed_value']}")
        counts = {s: sum(1 for g in d["goals"] if g["status"] == s) for s in GOAL_STATUSES}
        summary = ", ".join(f"{v} {k}" for k, v in counts.items() if v)
        lines.append(f"{d['status'].upper()}: {summary or 'no goals'}; "
                     f"{len(d['discrepancies'])} discrepancies")
        return "\n".join(lines)


def _text(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return json.dumps([str(x) for x in v])
    return str(v)


def _config(args):
    cfg = ReductionConfig()
    if args.budget is not None:
        cfg.budget = args.budget
    if args.window is not None:
        cfg.max_margin = args.window
    return cfg


# ---------------------------------------------------------------------------
# subcommands


def cmd_identities(args, rep):
    names = IDENTITIES
    base, extra = divmod(args.count, len(names))
    t0 = time.perf_counter()
    total = 0
    for k, name in enumerate(names):
        n = base + (1 if k < extra else 0)
        s = time.perf_counter()
        passed, tot = run_identity_suite(n, seed=args.seed + k, names=(name,))[name]
        total += tot
        rep.goal(f"identity:{name}", "certified" if passed == tot else "failed",
                 time.perf_counter() - s, f"{passed}/{tot} random instances", "identity")
    rep.details["identities"] = {"seed": args.seed, "checks": total}
    rep.timings["identities"] = time.perf_counter() - t0


def cmd_cartan(args, rep):
    c = affine_cartan(args.type)
    rep.details["cartan"] = {
        "type": str(c.type), "nodes": list(c.nodes),
        "form": [[str(c.form[(i, j)]) for j in c.nodes] for i in c.nodes],
        "d": {str(i): str(c.d[i]) for i in c.nodes}, "theta": list(c.theta), "h": c.h,
        "sigma": {str(k): v for k, v in (c.sigma or {}).items()},
        "reps": list(c.reps) if c.reps else None}
    if not args.json:
        print("\n".join(f"  {row}" for row in rep.details["cartan"]["form"]))


def cmd_epsilon(args, rep):
    t0 = time.perf_counter()
    try:
        seq = builtin_sequence(args.type)
    except SequenceError as exc:
        rep.goal(f"epsilon:{args.type}", "failed", time.perf_counter() - t0, str(exc), "epsilon")
        return
    rep.goal(f"epsilon:{seq.type}", "certified", time.perf_counter() - t0,
             f"validated, status {seq.status}", "epsilon")
    for rec in seq.discrepancies:
        rep.discrepancy(rec)
    info = seq.to_json()
    if seq.type.twist == 1 and seq.type.letter in "ADE":
        eps, expected = remark_check(seq.type)
        info["remark_minus_h_plus_2"] = str(expected)
        if eps != expected:
            rep.discrepancy({"citation": f"ε = -h + 2 for {seq.type}", "paper_value": expected,
                             "computed_value": eps})
    rep.details["epsilon"] = info


def _relation_list(t, window):
    cartan = affine_cartan(t)
    twisted = cartan.r > 1
    alg = TwistedAlgebra(cartan) if twisted else DrinfeldAlgebra(cartan)
    nodes = range(1, alg.n + 1)
    modes = range(-window, window + 1)
    out = []

    def add(kind, *params):
        try:
            out.append(alg.relation(kind, *params))
        except RelationError:
            pass

    for i in nodes:
        for j in nodes:
            for k in range(1, window + 1):
                add("aa", i, k, j, -k)
            for sign in (1, -1):
                for k in modes:
                    if k:
                        for l in modes:
                            add("ax", i, k, sign, j, l)
            for k in modes:
                for l in modes:
                    add("xx-mixed", i, j, k, l)
    if twisted:
        for sign in (1, -1):
            for i in nodes:
                for j in nodes:
                    out += alg.series("product", (sign, i, j), window)
    else:
        for sign in (1, -1):
            for i in nodes:
                for j in nodes:
                    for k in modes:
                        for l in modes:
                            add("xx-same", sign, i, j, k, l)
                    if i != j:
                        add("serre", sign, i, j, (0,) * alg.serre_m(i, j), 0)
    return out


def cmd_relations(args, rep):
    t0 = time.perf_counter()
    window = 1 if args.window is None else args.window
    rels = _relation_list(args.type, window)
    rep.timings["relations"] = time.perf_counter() - t0
    kinds = {}
    for R in rels:
        kinds[R.kind] = kinds.get(R.kind, 0) + 1
    rep.details["relations"] = {"window": window, "counts": kinds,
                                "instances": [R.to_json() for R in rels] if args.json else []}
    if not args.json:
        for R in rels:
            print(f"  {R.text()}")


def cmd_map(args, rep, step2=True):
    t0 = time.perf_counter()
    r = certify_goals(args.type, _config(args), step2=step2)
    rep.timings["map"] = time.perf_counter() - t0
    for g in r["goals"]:
        rep.goal(g.name, g.status, g.seconds, g.detail, g.family)
    for rec in r["discrepancies"]:
        rep.discrepancy(rec)
    rep.details["map"] = {k: v for k, v in r.items() if k not in ("goals", "discrepancies")}
    if args.type in FOLD_TYPES:
        checks = folding_checks(args.type)
        for name, c in checks.items():
            rep.goal(f"fold:{name}", "certified" if c.ok else "failed", c.seconds,
                     f"{c.passed}/{c.total} folded instances vanish", "folding")
        rep.details["folding"] = {k: c.to_json() for k, c in checks.items()}


def cmd_reduce(args, rep):
    ctx = Context(_config(args))
    try:
        el = parse_expr(args.expr, ctx.macros(args.type), ctx.images(args.type).alg)
    except ReplayError as exc:
        raise UsageError(str(exc)) from exc
    red = Reducer(ctx.images(args.type).alg, _config(args))
    out = red.reduce(el)
    status = "certified" if out.is_zero else "inconclusive"
    rep.goal("reduce", status, out.seconds,
             "reduces to zero" if out.is_zero else f"normal form ({out.status})", "reduce")
    rep.details["reduce"] = {"input": el.text(), "result": out.result.text(),
                             "status": out.status, "steps": out.steps, "margin": out.margin,
                             "trace_length": len(out.trace), "trace_sound": out.check_trace()}
    if not args.json:
        print(f"  normal form: {out.result.text() or '0'}")


def _replay_into(rep, derivations, cert_dir=None):
    ctx = Context()
    certs = {}
    for d in derivations:
        t0 = time.perf_counter()
        c = replay(d, ctx)
        dt = time.perf_counter() - t0
        ok = c.ok and c.check()
        detail = (f"{len(c.entries)} instances" if ok else
                  f"step {c.failed_step}: {c.message[:300]}")
        if d.reconstructed:
            detail += "; reconstructed"
        rep.goal(f"replay:{d.name}", "certified" if ok else "failed", dt, detail, "replay")
        for rec in c.discrepancies:
            rep.discrepancy(rec)
        certs[d.name] = c
        if cert_dir:
            Path(cert_dir).mkdir(parents=True, exist_ok=True)
            (Path(cert_dir) / f"{d.name}.cert.json").write_text(c.dumps() + "\n")
    return certs


def cmd_replay(args, rep):
    if args.file:
        ds = [load(f) for f in args.file]
    else:
        ds = bundled_corpus()
        if args.type:
            want = str(AffineType.parse(args.type))
            ds = [d for d in ds if str(AffineType.parse(d.type)) == want]
    t0 = time.perf_counter()
    _replay_into(rep, ds, args.certificates)
    rep.timings["replay"] = time.perf_counter() - t0


def cmd_suite(args, rep):
    cmd_identities(args, rep)
    cmd_epsilon(args, rep)
    cmd_map(args, rep)
    want = str(AffineType.parse(args.type))
    ds = [d for d in bundled_corpus() if str(AffineType.parse(d.type)) == want]
    t0 = time.perf_counter()
    _replay_into(rep, ds, args.certificates)
    rep.timings["replay"] = time.perf_counter() - t0


COMMANDS = {"identities": cmd_identities, "cartan": cmd_cartan, "epsilon": cmd_epsilon,
            "relations": cmd_relations, "map": cmd_map, "reduce": cmd_reduce,
            "replay": cmd_replay, "suite": cmd_suite}
NEEDS_TYPE = {"cartan", "epsilon", "relations", "map", "reduce", "suite"}


class UsageError(Exception):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="affine type such as A2^1, C2^1, D4^3")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' = stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--budget", type=int, help="rewrite budget per reduction")
    common.add_argument("--window", type=int, help="mode window (relations) / max x-block margin")
    common.add_argument("--strict", action="store_true",
                        help="treat inconclusive goals and discrepancies as failures")
    p = argparse.ArgumentParser(prog="qaffine", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qaffine {tool_version()}")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("identities", parents=[common], help="randomized bracket identity checks")
    s.add_argument("--count", type=int, default=500, help="total number of random instances")
    sub.add_parser("cartan", parents=[common], help="Cartan data of an affine type")
    sub.add_parser("epsilon", parents=[common], help="built-in ε-sequence and its validation")
    sub.add_parser("relations", parents=[common], help="list defining relation instances")
    sub.add_parser("map", parents=[common], help="certify the Chevalley-image goals")
    s = sub.add_parser("reduce", parents=[common], help="reduce an expression to normal form")
    s.add_argument("expr", help="expression, e.g. '[E0, F1]' or 'x+_1(0)*x-_1(0)'")
    s = sub.add_parser("replay", parents=[common], help="replay derivation files")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--file", nargs="+", help="derivation JSON files")
    g.add_argument("--all", action="store_true", help="the bundled corpus")
    s.add_argument("--certificates", metavar="DIR", help="write certificates into DIR")
    s = sub.add_parser("suite", parents=[common], help="identities + epsilon + map + replays")
    s.add_argument("--count", type=int, default=500, help="random identity instances")
    s.add_argument("--certificates", metavar="DIR", help="write certificates into DIR")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in NEEDS_TYPE and not args.type:
        parser.error(f"{args.command} needs --type")
    if args.type:
        try:
            args.type = str(affine_cartan(args.type).type)
        except ValueError as exc:
            parser.error(str(exc))
    if not hasattr(args, "certificates"):
        args.certificates = None
    rep = Report(args.command, args.type)
    t0 = time.perf_counter()
    try:
        COMMANDS[args.command](args, rep)
    except UsageError as exc:
        parser.error(str(exc))
    except (ReplayError, OSError, json.JSONDecodeError) as exc:
        parser.error(f"{type(exc).__name__}: {exc}")
    rep.timings["total"] = time.perf_counter() - t0
    data = rep.to_json(args.strict)
    if args.json == "-":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        if args.json:
            Path(args.json).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(rep.text(args.strict))
    return 1 if rep.failed(args.strict) else 0


if __name__ == "__main__":
    sys.exit(main())
