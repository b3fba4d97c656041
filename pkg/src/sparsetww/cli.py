"""Command-line interface: ``sparsetww <command> ...``.

Exit status is 0 on success, 1 on a domain error (bad input, failed
verification) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from .density import mad_exact
from .errors import TwwError
from .formats import read_edge_list, read_sequence, write_edge_list, write_sequence
from .graph import Graph, replay
from .lower_bounds import CountingConstants, bound_report, exponent
from .oracle import DEFAULT_NODE_BUDGET, stww_exact
from .pipeline import (
    DEFAULT_Q_CAP,
    DEFAULT_RETRIES,
    build_pipeline,
    greedy_contract,
    manual_params,
    select_params,
    verify,
)
from .lower_bounds import extract_partition
from .random_models import derive_seed, gen_gnm, gen_gnp, gen_regular


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _make_graph(model: str, n: int, seed: int, d=None, m=None, p=None) -> tuple[Graph, object]:
    """Graph from a model spec; returns the graph and its d_or_m value."""
    if model == "regular":
        if d is None:
            raise TwwError("regular model needs --d")
        return gen_regular(n, int(d), seed), int(d)
    if model == "gnm":
        if m is None:
            if d is None:
                raise TwwError("gnm model needs --m or --d (average degree)")
            m = round(float(d) * n / 2)
        return gen_gnm(n, int(m), seed), int(m)
    if model == "gnp":
        if p is None:
            if d is None:
                raise TwwError("gnp model needs --p or --d (expected average degree)")
            p = float(d) / max(n - 1, 1)
        return gen_gnp(n, float(p), seed), float(p)
    raise TwwError(f"unknown model {model!r}")


# ---------------------------------------------------------------- commands


def cmd_gen(args) -> int:
    g, _ = _make_graph(args.model, args.n, args.seed, d=args.d, m=args.m, p=args.p)
    out, close = _open_out(args.out)
    try:
        write_edge_list(g, out)
    finally:
        if close:
            out.close()
    return 0


def cmd_mad(args) -> int:
    g = read_edge_list(args.graph)
    value, witness = mad_exact(g)
    print(_fraction_text(value))
    if args.witness:
        print(" ".join(map(str, sorted(witness))))
    return 0


def _contract(g: Graph, seed: int, auto: bool, a=None, b=None, r=None, q=None,
              retries: int = DEFAULT_RETRIES, q_cap: int = DEFAULT_Q_CAP) -> dict:
    """Run the pipeline (or the greedy fallback) and return sequence plus stats."""
    if auto:
        d = mad_exact(g)[0] if g.n else Fraction(0)
        if d <= 2 or g.n < 16:
            s = greedy_contract(g)
            return {"sequence": s, "width": replay(g, s).width, "method": "greedy",
                    "out_of_theory": True, "a": None, "b": None, "r": None, "q": None,
                    "m_phi": None, "r_clamped": False, "q_clamped": False, "retries_used": 0}
        p = select_params(g.n, d, q_cap=q_cap, max_retries=retries)
    else:
        if None in (a, b, r, q):
            raise TwwError("manual mode needs --a --b --r --q (or use --auto)")
        p = manual_params(g, a, b, r, q, max_retries=retries)
    rep = build_pipeline(g, p, seed)
    return {"sequence": rep.sequence, "width": rep.width, "method": "pipeline",
            "out_of_theory": False, "a": p.a, "b": p.b, "r": p.r, "q": p.q, "m_phi": rep.m_phi,
            "r_clamped": p.r_clamped, "q_clamped": p.q_clamped, "retries_used": rep.retries_used}


def cmd_contract(args) -> int:
    g = read_edge_list(args.graph)
    res = _contract(g, args.seed, args.auto, args.a, args.b, args.r, args.q, args.retries, args.q_cap)
    check = verify(g, res["sequence"], res["width"])
    if not check:
        print(f"error: produced sequence failed verification: {check.reason}", file=sys.stderr)
        return 1
    if args.out:
        write_sequence(res["sequence"], args.out)
    stats = {k: v for k, v in res.items() if k != "sequence"}
    stats.update(n=g.n, m=g.m, max_degree=g.max_degree, merges=len(res["sequence"]))
    if args.format == "json":
        print(json.dumps(stats, sort_keys=True))
    else:
        keys = sorted(stats)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        w.writerow(["" if stats[k] is None else stats[k] for k in keys])
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    s = read_sequence(args.sequence)
    bound = args.width if args.width is not None else max(g.n, 1)
    res = verify(g, s, bound)
    if not res:
        print(f"error: {res.reason}", file=sys.stderr)
        return 1
    print(f"ok width={res.width}")
    return 0


def cmd_exact(args) -> int:
    g = read_edge_list(args.graph)
    res = stww_exact(g, args.budget)
    print(res.stww)
    if args.out:
        write_sequence(res.witness, args.out)
    return 0


def cmd_extract_partition(args) -> int:
    g = read_edge_list(args.graph)
    s = read_sequence(args.sequence)
    part = extract_partition(g, s, args.K)
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["part", "size", "vertices"])
        for i, blk in enumerate(part.blocks):
            w.writerow([i, len(blk), " ".join(map(str, sorted(blk)))])
    finally:
        if close:
            out.close()
    return 0


def cmd_bounds(args) -> int:
    d = Fraction(args.d)
    rep = bound_report(args.n, d, eps=args.eps, C=args.C)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "d", "exponent", "exponent_float", "lower", "upper"])
    w.writerow([rep.n, str(rep.d), str(rep.exponent), float(rep.exponent),
                "" if rep.lower is None else rep.lower, "" if rep.upper is None else rep.upper])
    return 0


# ------------------------------------------------------------- experiment


@dataclass
class ExperimentRecord:
    model: str
    n: int | str
    d_or_m: object
    seed: int | str
    trial: int | str
    a: object
    b: object
    r: object
    q: object
    m_phi: object
    width: int | str
    theory_exponent: object
    bound_value: object
    runtime_ms: object
    out_of_theory: object
    r_clamped: object
    q_clamped: object
    slope: object = ""


RECORD_FIELDS = [f.name for f in fields(ExperimentRecord)]


def _trial(job: dict) -> dict:
    n, trial = job["n"], job["trial"]
    gseed = derive_seed(job["seed"], n, trial)
    start = time.perf_counter()
    g, d_or_m = _make_graph(job["model"], n, gseed, d=job["d"], m=job["m"], p=job["p"])
    res = _contract(g, derive_seed(job["seed"], n, trial, 1), job["auto"], job["a"], job["b"],
                    job["r"], job["q"], job["retries"], job["q_cap"])
    runtime = (time.perf_counter() - start) * 1000
    # independent re-verification of the stored sequence
    check = verify(g, res["sequence"], res["width"])
    if not check or check.width != res["width"]:
        return {"error": f"n={n} trial={trial}: {check.reason}"}
    avg = Fraction(2 * g.m, g.n) if g.n else Fraction(0)
    d_model = Fraction(job["d"]) if job["model"] == "regular" else avg
    try:
        e = exponent(d_model)
        theory, bound = float(e), float(n) ** float(e)
    except TwwError:
        theory, bound = "", ""
    out_of_theory = res["out_of_theory"] or (job["model"] == "gnm" and g.m < n) or d_model <= 2
    return asdict(ExperimentRecord(
        model=job["model"], n=n, d_or_m=d_or_m, seed=gseed, trial=trial,
        a=res["a"] if res["a"] is not None else "", b=res["b"] if res["b"] is not None else "",
        r=res["r"] if res["r"] is not None else "", q=res["q"] if res["q"] is not None else "",
        m_phi=res["m_phi"] if res["m_phi"] is not None else "", width=res["width"],
        theory_exponent=theory, bound_value=bound, runtime_ms=round(runtime, 3),
        out_of_theory=int(bool(out_of_theory)), r_clamped=int(res["r_clamped"]),
        q_clamped=int(res["q_clamped"]),
    ))


def fit_slope(ns, widths) -> float | None:
    """Least-squares slope of log(width) against log(n); None with fewer than 2 distinct n."""
    pts = [(math.log(n), math.log(w)) for n, w in zip(ns, widths) if w > 0]
    if len({x for x, _ in pts}) < 2:
        return None
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def run_experiment(model: str, ns, trials: int, seed: int, d=None, m=None, p=None, auto=True,
                   a=None, b=None, r=None, q=None, retries=DEFAULT_RETRIES, q_cap=DEFAULT_Q_CAP,
                   jobs: int = 1) -> tuple[list[dict], float | None]:
    """Rows in (n, trial) order and the fitted slope; raises TwwError on any failed verification."""
    base = dict(model=model, seed=seed, d=d, m=m, p=p, auto=auto, a=a, b=b, r=r, q=q,
                retries=retries, q_cap=q_cap)
    grid = [dict(base, n=n, trial=t) for n in ns for t in range(trials)]
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_trial, grid))
    else:
        rows = [_trial(job) for job in grid]
    for row in rows:
        if "error" in row:
            raise TwwError(f"verification failed: {row['error']}")
    slope = fit_slope([row["n"] for row in rows], [row["width"] for row in rows])
    return rows, slope


def _parse_grid(text: str | None) -> list[int]:
    if not text:
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        out.append(2 ** int(tok[2:]) if tok.startswith("2^") else int(tok))
    return out


def cmd_experiment(args) -> int:
    ns = _parse_grid(args.n_grid)
    rows, slope = run_experiment(
        args.model, ns, args.trials, args.seed, d=args.d, m=args.m, p=args.p, auto=not args.manual,
        a=args.a, b=args.b, r=args.r, q=args.q, retries=args.retries, q_cap=args.q_cap, jobs=args.jobs,
    )
    out, close = _open_out(args.out)
    try:
        w = csv.DictWriter(out, fieldnames=RECORD_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)
        if rows:
            summary = {k: "" for k in RECORD_FIELDS}
            summary.update(model="summary", slope="" if slope is None else slope)
            w.writerow(summary)
    finally:
        if close:
            out.close()
    return 0


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    parser = argparse.ArgumentParser(prog="sparsetww", description="Sparse twin-width contraction toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(sp):
        sp.add_argument("--model", choices=["gnp", "gnm", "regular"], required=True)
        sp.add_argument("--d", type=float, help="degree (regular) or average degree (gnm, gnp)")
        sp.add_argument("--m", type=int, help="edge count for gnm")
        sp.add_argument("--p", type=float, help="edge probability for gnp")

    def add_params(sp):
        sp.add_argument("--a", type=int)
        sp.add_argument("--b", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
        sp.add_argument("--q-cap", type=int, default=DEFAULT_Q_CAP)

    sp = sub.add_parser("gen", parents=[common], help="generate a random graph (edge list)")
    add_model_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("mad", parents=[common], help="exact maximum average degree")
    sp.add_argument("graph")
    sp.add_argument("--witness", action="store_true", help="also print a densest vertex set")
    sp.set_defaults(func=cmd_mad)

    sp = sub.add_parser("contract", parents=[common], help="build a contraction sequence")
    sp.add_argument("graph")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--auto", action="store_true", help="choose a, b, r, q from n and mad")
    add_params(sp)
    sp.add_argument("--format", choices=["json", "csv"], default="json", help="stats record format")
    sp.set_defaults(func=cmd_contract)

    sp = sub.add_parser("verify", parents=[common], help="check a contraction sequence")
    sp.add_argument("graph")
    sp.add_argument("sequence")
    sp.add_argument("--width", type=int, help="fail if the width exceeds this")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("exact", parents=[common], help="exact sparse twin-width (n <= 10)")
    sp.add_argument("graph")
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("extract-partition", parents=[common], help="balanced partition from a sequence")
    sp.add_argument("graph")
    sp.add_argument("sequence")
    sp.add_argument("--K", type=int, required=True)
    sp.set_defaults(func=cmd_extract_partition)

    sp = sub.add_parser("bounds", parents=[common], help="exponent and bound values")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=str, required=True, help="degree, e.g. 3 or 7/2")
    sp.add_argument("--eps", type=float, help="constant of the lower bound")
    sp.add_argument("--C", type=float, help="constant of the upper bound")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("experiment", parents=[common], help="scaling experiment, CSV rows")
    add_model_args(sp)
    sp.add_argument("--n-grid", default="", help="comma list of n, e.g. 2^10,2^12,5000")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--manual", action="store_true", help="use --a --b --r --q instead of auto params")
    add_params(sp)
    sp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TwwError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
