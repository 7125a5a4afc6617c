#!/usr/bin/env python3
"""Regenerate the rank-parametrised derivation files and the corpus index.

The three A3 cases are hand-written JSON files and are left untouched; the
A_n chains and the [e_0, f_0] endpoints are produced here for n = 1, 2, 3.
Endpoint constants are computed by the reducer, never copied in.
"""
import argparse
import json
from pathlib import Path

from qaffine.cartan import affine_cartan
from qaffine.isomap import chevalley_images, checkpoint, paper_checkpoint_scalar

ROOT = Path(__file__).resolve().parents[1] / "src" / "qaffine" / "corpus"
HAND_WRITTEN = ["a3_case1", "a3_case2", "a3_case3_chain", "a3_case3"]
ALL_SERRE_PAIRS = [[2, 1], [2, 3], [3, 2], [1, 3], [3, 1]]


def chain(items, vs):
    if len(items) == 1:
        return items[0]
    return "[" + ", ".join(items) + "]_{" + ", ".join(vs) + "}"


def serre_e0_f(n):
    inner = [f"x-_{j}(0)" for j in range(n, 1, -1)]
    v = ["q^-1"] * (n - 1)
    tail = "*gamma*Ktheta^-1"
    return {
        "name": f"an_serre_e0_f_n{n}", "type": f"A{n}^1", "start": {"goal": "serre(E1,E0)"},
        "paper_citation": "e_0 e_1^2 - (q+q^-1) e_1 e_0 e_1 + e_1^2 e_0 chain",
        "note": "the collected bracket carries subscripts (1, q^-2) and no prefactor",
        "steps": [
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1"]},
             "cite": "move gamma K_theta^-1 to the right",
             "result": "{q^-2}*(Xm*x+_1(0)*x+_1(0) - {q^2+1}*x+_1(0)*Xm*x+_1(0)"
                       " + {q^2}*x+_1(0)*x+_1(0)*Xm)" + tail},
            {"kind": "CollectTerms", "params": {},
             "result": "[x+_1(0), x+_1(0), Xm]_{1, q^-2}" + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1", "R4"]},
             "cite": "[x+_1(0), x-_1(1)] = g^(-1/2) K_1 a_1(1); x+_1 commutes with x-_j, j > 1",
             "result": chain(["x+_1(0)"] + inner + ["K_1*a_1(1)"], v + ["q^-2"])
                       + "*g^(-1/2)" + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1", "R3"]},
             "cite": "a_1(1) shifts x-_2(0) to x-_2(1)",
             "result": "-" + chain(["x+_1(0)"] + inner[:-1] + ["x-_2(1)*K_1"], v[:-1] + ["q^-2"])
                       + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1"]},
             "cite": "pull K_1 out of the bracket",
             "result": "-" + chain(["x+_1(0)"] + inner[:-1] + ["x-_2(1)"], v[:-1] + ["1"])
                       + "*K_1" + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1", "R4"]},
             "cite": "x+_1(0) commutes with x-_j, j > 1", "result": "0"},
        ],
        "expect": "0"}


def e0_x2_operand(n):
    inner = [f"x-_{j}(0)" for j in range(n, 2, -1)]
    return chain(inner + ["x-_2(1)"], ["q^-1"] * (n - 2))


def e0_x2(n):
    pairs = [[2, 1]] if n == 2 else ALL_SERRE_PAIRS
    return {
        "name": f"an_e0_x2_n{n}", "type": f"A{n}^1", "reconstructed": True,
        "note": "auxiliary identity [e_0, x_2(1)] = 0 behind the e_1 e_0^2 chain; "
                "not spelled out in the source, certified here directly",
        "start": {"expr": f"[Xm, {e0_x2_operand(n)}]_{{q}}"},
        "steps": [{"kind": "ApplySerre", "params": {"pairs": pairs, "sign": -1, "quadratic": True},
                   "result": "0"}],
        "expect": "0"}


def e1e0e0(n):
    inner = [f"x-_{j}(0)" for j in range(n, 1, -1)]
    v = ["q^-1"] * (n - 1)
    Y = e0_x2_operand(n)
    tail = "*gamma*gamma*Ktheta^-1*Ktheta^-1"
    YK = chain(inner[:-1] + ["x-_2(1)*K_1"], v[:-1])
    return {
        "name": f"an_e1e0e0_n{n}", "type": f"A{n}^1", "start": {"goal": "serre(E0,E1)"},
        "paper_citation": "e_1 e_0^2 - (q+q^-1) e_0 e_1 e_0 + e_0^2 e_1 chain",
        "note": "the R1 step gives q times the printed first line; the result is zero either way",
        "steps": [
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1"]},
             "cite": "move gamma K_theta^-1 to the right",
             "result": "({q^2}*x+_1(0)*Xm*Xm - {q^2+1}*Xm*x+_1(0)*Xm + Xm*Xm*x+_1(0))" + tail},
            {"kind": "CollectTerms", "params": {}, "result": "[Xm, Xm, x+_1(0)]_{1, q^2}" + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1", "R4"]},
             "result": "-[Xm, " + chain(inner + ["K_1*a_1(1)"], v) + "]_{q^2}*g^(-1/2)" + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1", "R3"]},
             "result": f"[Xm, {YK}]_{{q^2}}" + tail},
            {"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1"]},
             "result": f"[Xm, {Y}]_{{q}}*K_1" + tail},
            {"kind": "SubstituteEqualByPriorGoal",
             "params": {"name": f"an_e0_x2_n{n}", "right": "K_1" + tail},
             "cite": "[e_0, x_2(1)] = 0", "result": "0"},
        ],
        "expect": "0"}


def endpoint(name, t, citation):
    img = chevalley_images(cartan=affine_cartan(t))
    lam = checkpoint(img)["lambda"]
    paper = paper_checkpoint_scalar(img)[0]
    body = "*(gamma*Ktheta^-1 - gamma^-1*Ktheta)*{1/(q - q^-1)}"
    expect = "{" + lam.text() + "}" + body
    return {
        "name": name, "type": t, "start": {"expr": "[Xm, Xp]"},
        "paper_citation": citation,
        "steps": [{"kind": "ApplyDrinfeldRelation", "params": {"classes": ["R1", "R2", "R3", "R4",
                                                                           "quadratic", "serre"]},
                   "cite": "normal ordering of the commutator", "result": expect}],
        "expect": expect,
        "paper_expect": "{" + paper.text() + "}" + body}


def build():
    docs = []
    for n in (2, 3):
        docs += [serre_e0_f(n), e0_x2(n), e1e0e0(n)]
    for n in (1, 2, 3):
        docs.append(endpoint(f"an_e0f0_n{n}", f"A{n}^1",
                             "(-q)^(-n) (gamma K_theta^-1 - gamma^-1 K_theta)/(q - q^-1)"))
    docs.append(endpoint("c2_e0f0", "C2^1",
                         "q^-1 [2]_1 (gamma K_theta^-1 - gamma^-1 K_theta)/(q - q^-1)"))
    return docs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ROOT)
    args = ap.parse_args()
    docs = build()
    for d in docs:
        (args.out / f"{d['name']}.json").write_text(json.dumps(d, indent=2) + "\n")
    names = HAND_WRITTEN + [d["name"] for d in docs]
    (args.out / "index.json").write_text(json.dumps(names, indent=2) + "\n")
    print(f"wrote {len(docs)} derivations, index of {len(names)}")


if __name__ == "__main__":
    main()
