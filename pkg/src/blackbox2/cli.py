"""Command-line entry point.

Subcommands: field-size | sym4 | subfield | bench | verify.
Exit codes: 0 success, 1 Las Vegas failure, 2 invalid input,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time

from . import recog, verify
from .blackbox import BlackBox
from .errors import (BlackBox2Error, ExceedsKMax, InvalidSubfieldDegree,
                     Overflow, RetryBudgetExhausted)
from .ff import FieldCtx
from .matgrp import Flavor, Mat2

EXIT_OK = 0
EXIT_LAS_VEGAS = 1
EXIT_INVALID = 2
EXIT_MISMATCH = 3


def _mat_json(m: Mat2) -> dict:
    return m.to_json()


def _result_json(res: recog.ConstructionResult, ctx: FieldCtx) -> dict:
    out = {
        "flavor": res.flavor.value,
        "p": res.p,
        "k": res.k,
        "target": res.target,
        "field": ctx.to_json(),
        "generators": [_mat_json(g) for g in res.generators],
        "witness": {
            "g": _mat_json(res.witness.g),
            "h1": _mat_json(res.witness.h1),
            "n1": _mat_json(res.witness.n1),
            "h2": _mat_json(res.witness.h2),
            "n2": _mat_json(res.witness.n2),
            "x": _mat_json(res.witness.x),
        },
        "torus_order": res.torus_order,
        "counters": res.counters,
        "seed": res.seed,
        "retries": res.retries,
        "stage_counters": res.stage_counters,
    }
    if res.a is not None:
        out["a"] = res.a
    if res.s is not None:
        out["s"] = _mat_json(res.s)
    if res.r is not None:
        out["r"] = _mat_json(res.r)
    return out


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if getattr(args, "json", False):
        print(text)
    else:
        _summarize(report)


def _summarize(report: dict) -> None:
    cmd = report["command"]
    if cmd == "field-size":
        print(f"field-size: recovered k = {report['result']['recovered_k']} "
              f"(true k = {report['inputs']['k']}, "
              f"match = {report['result']['match']})")
    elif cmd in ("sym4", "subfield"):
        res = report["result"]
        print(f"{cmd}: target {res['target']} over GF({res['p']}^{res['k']}), "
              f"{len(res['generators'])} generators, "
              f"retries {res['retries']}, verified = {report['verified']}")
    elif cmd == "verify":
        print(f"verify: target {report['inputs']['target']}, "
              f"verified = {report['verified']}")
    print(f"counters: {report['counters']}  "
          f"wall_time_ms: {report['wall_time_ms']}")


def _verify_result(res: recog.ConstructionResult) -> bool | str:
    expected_order = verify.expected_order(res.target, res.p, res.a or 1)
    if expected_order > verify.DEFAULT_CAP:
        return "skipped"
    try:
        # exceeding twice the expected order is already a mismatch
        elements = verify.closure_enumerate(res.generators, res.flavor,
                                            cap=2 * expected_order)
    except Overflow:
        return False
    bb = BlackBox(res.flavor, res.generators[0].ctx, res.generators,
                  seed=0, burnin=0)
    obs = verify.fingerprint(bb, elements)
    ref = verify.reference_fingerprint(res.target, res.p, res.a or 1)
    return verify.assert_type(obs, ref)


def cmd_field_size(args) -> int:
    flavor = Flavor(args.flavor)
    t0 = time.perf_counter()
    bb = BlackBox.create(flavor, args.p, args.k, args.seed)
    budget = args.samples or recog.default_sample_budget(args.p, args.kmax)
    try:
        recovered = recog.find_field_size(bb, args.p, args.kmax, budget)
    except ExceedsKMax as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LAS_VEGAS
    report = {
        "command": "field-size",
        "inputs": {"flavor": flavor.value, "p": args.p, "k": args.k,
                   "kmax": args.kmax, "seed": args.seed, "samples": budget},
        "result": {"recovered_k": recovered, "match": recovered == args.k},
        "verified": recovered == args.k,
        "counters": bb.counters.snapshot(),
        "wall_time_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    _emit(report, args)
    return EXIT_OK


def _run_construction(args, command: str) -> int:
    flavor = Flavor(args.flavor)
    t0 = time.perf_counter()
    bb = BlackBox.create(flavor, args.p, args.k, args.seed)
    try:
        if command == "subfield":
            res = recog.construct_subfield(bb, args.p, args.k, args.a)
        elif flavor is Flavor.SL2:
            res = recog.construct_sl2_normalizer(bb, args.p, args.k)
        else:
            res = recog.construct_sym4(bb, args.p, args.k)
    except InvalidSubfieldDegree as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RetryBudgetExhausted, BlackBox2Error) as exc:
        print(f"Las Vegas failure: {exc}", file=sys.stderr)
        return EXIT_LAS_VEGAS
    verified: bool | str = "skipped"
    if args.verify:
        try:
            verified = _verify_result(res)
        except Overflow:
            verified = "skipped"
    report = {
        "command": command,
        "inputs": {"flavor": flavor.value, "p": args.p, "k": args.k,
                   "seed": args.seed,
                   **({"a": args.a} if command == "subfield" else {})},
        "result": _result_json(res, bb.ctx),
        "verified": verified,
        "counters": bb.counters.snapshot(),
        "wall_time_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    _emit(report, args)
    if verified is False:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_sym4(args) -> int:
    return _run_construction(args, "sym4")


def cmd_subfield(args) -> int:
    return _run_construction(args, "subfield")


def cmd_bench(args) -> int:
    flavor = Flavor(args.flavor)
    klist = [int(tok) for tok in args.k_list.split(",") if tok]
    rows = []
    for k in klist:
        rand_counts, mul_counts, inv_counts, eq_counts = [], [], [], []
        stage_rand: dict[str, list] = {}
        stage_mul: dict[str, list] = {}
        for trial in range(args.trials):
            bb = BlackBox.create(flavor, args.p, k, args.seed + trial)
            try:
                if flavor is Flavor.SL2:
                    res = recog.construct_sl2_normalizer(bb, args.p, k)
                else:
                    res = recog.construct_sym4(bb, args.p, k)
            except RetryBudgetExhausted as exc:
                print(f"Las Vegas failure at k={k} trial={trial}: {exc}",
                      file=sys.stderr)
                return EXIT_LAS_VEGAS
            c = res.counters
            rand_counts.append(c["rand"])
            mul_counts.append(c["mul"])
            inv_counts.append(c["inv"])
            eq_counts.append(c["eq"])
            for name, sc in res.stage_counters.items():
                stage_rand.setdefault(name, []).append(sc["rand"])
                stage_mul.setdefault(name, []).append(sc["mul"])
        row = {
            "p": args.p, "k": k, "q": args.p ** k, "trials": args.trials,
            "median_rand": statistics.median(rand_counts),
            "median_mul": statistics.median(mul_counts),
            "median_inv": statistics.median(inv_counts),
            "median_eq": statistics.median(eq_counts),
        }
        for name in sorted(stage_rand):
            row[f"rand_{name}"] = statistics.median(stage_rand[name])
            row[f"mul_{name}"] = statistics.median(stage_mul[name])
        rows.append(row)
        print(f"k={k:>3}  q={row['q']:<12} median rand={row['median_rand']:<8} "
              f"median mul={row['median_mul']}")
    fields = sorted({key for row in rows for key in row},
                    key=lambda s: (s not in ("p", "k", "q", "trials"), s))
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, restval="")
        writer.writeheader()
        writer.writerows(rows)
    fig_path = args.fig or (args.out.rsplit(".", 1)[0] + ".png")
    from .plotting import render_bench_figure
    render_bench_figure(rows, fig_path)
    print(f"wrote {args.out} and {fig_path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.input) as fh:
        report = json.load(fh)
    res = report["result"] if "result" in report else report
    flavor = Flavor(res["flavor"])
    ctx = FieldCtx.from_json(res["field"])
    gens = [Mat2.from_json(ctx, g) for g in res["generators"]]
    target = res["target"]
    p, a = res["p"], res.get("a", 1)
    t0 = time.perf_counter()
    expected_order = verify.expected_order(target, p, a)
    if expected_order > verify.DEFAULT_CAP:
        verified: bool | str = "skipped"
    else:
        try:
            elements = verify.closure_enumerate(gens, flavor,
                                                cap=2 * expected_order)
            bb = BlackBox(flavor, ctx, gens, seed=0, burnin=0)
            obs = verify.fingerprint(bb, elements)
            ref = verify.reference_fingerprint(target, p, a)
            verified = verify.assert_type(obs, ref)
        except (Overflow, BlackBox2Error):
            verified = False
    out_report = {
        "command": "verify",
        "inputs": {"input": args.input, "target": target, "p": p, "a": a},
        "result": {"verified": verified},
        "verified": verified,
        "counters": res.get("counters", {}),
        "wall_time_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    _emit(out_report, args)
    if verified is False:
        return EXIT_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blackbox2",
        description="Black-box PGL2/PSL2/SL2 subgroup constructions")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, need_k=True):
        sp.add_argument("--flavor", choices=[f.value for f in Flavor],
                        required=True)
        sp.add_argument("--p", type=int, required=True)
        if need_k:
            sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true",
                        help="print the full JSON report")
        sp.add_argument("--out", help="write the JSON report to a file")

    sp = sub.add_parser("field-size", help="recover k from the oracle")
    common(sp)
    sp.add_argument("--kmax", type=int, default=8)
    sp.add_argument("--samples", type=int, default=None)
    sp.set_defaults(func=cmd_field_size)

    sp = sub.add_parser("sym4", help="construct Sym4 (or Alt4 / quaternion "
                                     "normalizer, by flavor)")
    common(sp)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_sym4)

    sp = sub.add_parser("subfield", help="construct a subfield subgroup")
    common(sp)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_subfield)

    sp = sub.add_parser("bench", help="seeded scaling benchmark with CSV "
                                      "and figure output")
    sp.add_argument("--flavor", choices=[f.value for f in Flavor],
                    required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k-list", required=True,
                    help="comma-separated extension degrees")
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="bench.csv")
    sp.add_argument("--fig", default=None)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("verify", help="re-check a stored result file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlackBox2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LAS_VEGAS


if __name__ == "__main__":
    sys.exit(main())
