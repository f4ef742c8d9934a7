"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 size limit exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from sacq import __version__, circuits, complexity, estimators, qsim
from sacq.boolfn import (
    BooleanFunction,
    ParseError,
    SizeLimitError,
    check_distance_bound,
    parse_function,
    read_truth_table_file,
    sac_report,
    walsh_spectrum,
)

EXIT_OK, EXIT_USAGE, EXIT_SIZE, EXIT_INTERNAL = 0, 2, 3, 4
MAX_QUANTUM_N = 14


class UsageError(Exception):
    pass


# --- function sources ------------------------------------------------------

def _source_from_args(args) -> dict:
    given = [(k, getattr(args, k)) for k in ("fn_file", "anf", "bits", "hex")
             if getattr(args, k, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --fn-file, --anf, --bits, --hex")
    kind, value = given[0]
    return {"kind": {"fn_file": "file"}.get(kind, kind), "value": value, "n": args.n}


def load_source(source: dict) -> BooleanFunction:
    kind, value, n = source["kind"], source["value"], source.get("n")
    if kind == "file":
        f = read_truth_table_file(value)
        if n is not None and f.n != n:
            raise ParseError(f"--n {n} disagrees with the file header n={f.n}")
        return f
    return parse_function(value, {"anf": "anf", "bits": "bits", "hex": "hex"}[kind], n)


def _parse_plan(text: str) -> tuple[float, float]:
    try:
        t, delta = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--plan expects 't,delta', got {text!r}") from None
    if not t > 0 or not 0 < delta < 1:
        raise UsageError("--plan needs t > 0 and 0 < delta < 1")
    return t, delta


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


# --- reports ---------------------------------------------------------------

def build_manifest(command: str, source: dict, f: BooleanFunction, algorithm: str | None,
                   t, delta, shots, seed, exhaustive: bool) -> dict:
    return {
        "command": command,
        "source": source,
        "algorithm": algorithm,
        "n": f.n,
        "t": t,
        "delta": delta,
        "shots": shots,
        "seed": seed,
        "exhaustive": exhaustive,
        "prng": qsim.PRNG_NAME,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def report_payload(report: dict) -> dict:
    """The report with the timestamp removed; equal manifests give equal payloads."""
    out = json.loads(json.dumps(report))
    out.get("manifest", {}).pop("timestamp", None)
    return out


def estimate_report(manifest: dict) -> dict:
    f = load_source(manifest["source"])
    cfg = estimators.ExperimentConfig(
        algorithm=manifest["algorithm"], t=manifest["t"], delta=manifest["delta"],
        m=manifest["shots"], seed=manifest["seed"], exhaustive=manifest["exhaustive"])
    if cfg.algorithm != estimators.CLASSICAL and f.n > MAX_QUANTUM_N:
        raise SizeLimitError(f"quantum simulation limited to n <= {MAX_QUANTUM_N}")
    est = estimators.estimate(f, cfg).to_dict()
    per_direction = est.pop("directions")
    return {
        "manifest": manifest,
        "per_direction": per_direction,
        "aggregate": {"epsilon_estimate": est["aggregate"],
                      "margin": est["aggregate_margin"],
                      "m": est["m"], "planned_m": est["planned_m"],
                      "oracle_calls": est["oracle_calls"]},
        "intervals": {"delta": cfg.delta, "method": "Hoeffding, squared-range form",
                      "per_direction": [d["interval"] for d in per_direction]},
        "verdict": {"sac_consistent": est["verdict"]},
        "notes": est["notes"],
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _estimate_csv(report: dict) -> str:
    buf = io.StringIO()
    cols = ["i", "direction", "sample_mean", "bias_estimate", "interval_lo", "interval_hi",
            "oracle_calls"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "seed", "m"] + cols)
    man = report["manifest"]
    for d in report["per_direction"]:
        w.writerow([man["algorithm"], man["seed"], report["aggregate"]["m"], d["i"],
                    d["direction"], repr(d["sample_mean"]), d["bias_estimate"],
                    repr(d["interval"][0]), repr(d["interval"][1]), d["oracle_calls"]])
    return buf.getvalue()


def _estimate_text(report: dict) -> str:
    man, agg = report["manifest"], report["aggregate"]
    lines = [f"algorithm {man['algorithm']}  n={man['n']}  m={agg['m']}  seed={man['seed']}"
             + ("  (exhaustive)" if man["exhaustive"] else "")]
    for d in report["per_direction"]:
        b = "-" if d["bias_estimate"] is None else f"{d['bias_estimate']:.6g}"
        lo, hi = d["interval"]
        lines.append(f"  i={d['i']}  mean={d['sample_mean']:.6f}  bias={b}  "
                     f"interval=[{lo:.6f}, {hi:.6f}]")
    if agg["epsilon_estimate"] is not None:
        margin = "" if agg["margin"] is None else f" +/- {agg['margin']:.6g}"
        lines.append(f"epsilon estimate {agg['epsilon_estimate']:.6g}{margin}")
    verdict = report["verdict"]["sac_consistent"]
    if verdict is not None:
        lines.append("verdict " + ("consistent with SAC" if verdict else "not SAC"))
    lines.append(f"oracle calls {agg['oracle_calls']}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands --------------------------------------------------------------

def analyze_data(f: BooleanFunction) -> dict:
    rep = sac_report(f)
    spec = walsh_spectrum(f)
    rows = []
    for i in range(1, f.n + 1):
        low, high = spec.half_sums(i)
        rows.append({"i": i, "autocorrelation": rep.directional[i],
                     "spectral_half_w_i_0": low, "spectral_half_w_i_1": high})
    return {"n": f.n, "per_direction": rows, "is_sac": rep.is_sac,
            "epsilon_exact": rep.epsilon_exact}


def cmd_analyze(args) -> int:
    f = load_source(_source_from_args(args))
    data = analyze_data(f)
    if args.format == "json":
        text = _dump_json(data)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(data["per_direction"][0]), lineterminator="\n")
        w.writeheader()
        w.writerows(data["per_direction"])
        text = buf.getvalue()
    else:
        lines = [f"n={f.n}",
                 f"{'i':>3}  {'autocorr':>10}  {'sum w_i=0':>10}  {'sum w_i=1':>10}"]
        for r in data["per_direction"]:
            lines.append(f"{r['i']:>3}  {r['autocorrelation']:>10}  "
                         f"{r['spectral_half_w_i_0']:>10.6g}  {r['spectral_half_w_i_1']:>10.6g}")
        lines.append("verdict " + ("SAC" if data["is_sac"] else "not SAC"))
        lines.append(f"epsilon {data['epsilon_exact']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    source = _source_from_args(args)
    f = load_source(source)
    t, delta = (None, args.delta)
    if args.plan:
        t, delta = _parse_plan(args.plan)
    if args.shots is None and t is None and not args.exhaustive:
        raise UsageError("give --shots, --plan t,delta or --exhaustive")
    algorithm = args.algorithm.upper()
    manifest = build_manifest("estimate", source, f, algorithm, t, delta, args.shots,
                              args.seed, args.exhaustive)
    report = estimate_report(manifest)
    _write_report(report, args.format, args.out)
    return EXIT_OK


def _write_report(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        _emit(_dump_json(report), out)
    elif fmt == "csv":
        _emit(_estimate_csv(report), out)
    else:
        _emit(_estimate_text(report), out)


def cmd_rerun(args) -> int:
    original = json.loads(Path(args.report).read_text())
    manifest = dict(original["manifest"])
    manifest["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    report = estimate_report(manifest)
    if args.check:
        same = report_payload(report) == report_payload(original)
        sys.stdout.write("payload identical\n" if same else "payload differs\n")
        return EXIT_OK if same else EXIT_INTERNAL
    _write_report(report, args.format, args.out)
    return EXIT_OK


def cmd_plan(args) -> int:
    t, delta = args.t, args.delta
    if not t > 0 or not 0 < delta < 1:
        raise UsageError("need t > 0 and 0 < delta < 1")
    ns = args.n
    variants = [("QSAC / autocorrelation", "QSAC"), ("classical", "CLASSICAL"),
                ("direct / Forrelation", "NQUBIT")]
    if args.format == "json":
        data = {"t": t, "delta": delta, "plans": {
            v: {str(n): estimators.plan_samples(t, delta, v, n) for n in ns} for _, v in variants}}
        _emit(_dump_json(data), args.out)
        return EXIT_OK
    rows = [[label] + [str(estimators.plan_samples(t, delta, v, n)) for n in ns]
            for label, v in variants]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["variant"] + [f"n={n}" for n in ns])
        w.writerows(rows)
        _emit(buf.getvalue(), args.out)
        return EXIT_OK
    header = ["variant"] + [f"n={n}" for n in ns]
    widths = [max(len(r[k]) for r in rows + [header]) for k in range(len(header))]
    lines = ["  ".join(c.rjust(w) if k else c.ljust(w) for k, (c, w) in
                       enumerate(zip(r, widths))) for r in [header] + rows]
    lines.append(f"t={t} delta={delta}, natural log; the QSAC count does not depend on n")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    rows = complexity.table1(args.n, args.t, args.delta)
    _emit(complexity.render_table(rows, args.format, args.n, args.t, args.delta), args.out)
    return EXIT_OK


def cmd_audit(args) -> int:
    f = load_source(_source_from_args(args))
    entries = complexity.audit_against_simulation(f, args.i)
    lines = []
    for e in entries:
        status = "match" if e.match else "MISMATCH"
        lines.append(f"{e.algorithm:<12} expected {e.expected}  observed {e.observed}  "
                     f"{status}  gates {e.gates}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(e.match for e in entries) else EXIT_INTERNAL


def cmd_bound(args) -> int:
    res = check_distance_bound(args.n)
    data = {"n": res.n, "functions": res.functions_checked, "sac_functions": res.sac_count,
            "min_slack": res.max_slack, "holds": res.holds,
            "counterexamples": res.counterexamples}
    _emit(_dump_json(data), args.out)
    return EXIT_OK


# --- argument parsing ------------------------------------------------------

def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("function source (exactly one)")
    g.add_argument("--fn-file", metavar="PATH", help="truth-table file: 'n=<k>' then table")
    g.add_argument("--anf", metavar="EXPR", help="ANF, e.g. 'x1*x2 + x3*x4'")
    g.add_argument("--bits", metavar="STR", help="binary truth table, x1 most significant")
    g.add_argument("--hex", metavar="STR", help="hex truth table")
    p.add_argument("--n", type=int, help="number of variables (needed for short ANF/hex)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sacq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sacq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt_choices = ("text", "csv", "json")

    p = sub.add_parser("analyze", help="exact autocorrelations, spectral halves, SAC verdict")
    _add_source(p)
    p.add_argument("--format", choices=fmt_choices, default="text")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("estimate", help="run an estimator and write a report")
    _add_source(p)
    p.add_argument("--algorithm", required=True,
                   choices=("classical", "qsac", "direct", "forrelation"), type=str.lower)
    size = p.add_mutually_exclusive_group()
    size.add_argument("--shots", type=int, metavar="M", help="samples per direction")
    size.add_argument("--plan", metavar="T,DELTA", help="plan M from margin and uncertainty")
    p.add_argument("--delta", type=float, default=0.05,
                   help="uncertainty for intervals when --shots is given")
    p.add_argument("--exhaustive", action="store_true",
                   help="classical: sweep all inputs; quantum: exact distributions")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--format", choices=fmt_choices, default="json")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("rerun", help="re-execute the manifest embedded in a JSON report")
    p.add_argument("report")
    p.add_argument("--check", action="store_true", help="compare payloads, exit 4 on mismatch")
    p.add_argument("--format", choices=fmt_choices, default="json")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_rerun)

    p = sub.add_parser("plan", help="Hoeffding sample sizes for every variant")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=int, nargs="+", default=[4])
    p.add_argument("--format", choices=fmt_choices, default="text")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("table", help="complexity comparison of the five algorithms")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--t", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--format", choices=fmt_choices, default="text")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("audit", help="count gates and oracle calls in the built circuits")
    _add_source(p)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bound", help="exhaustive check of the SAC distance bound")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as e:
        print(f"sacq: size limit: {e}", file=sys.stderr)
        return EXIT_SIZE
    except (UsageError, ParseError, ValueError, OSError) as e:
        print(f"sacq: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (qsim.NormDriftError, ArithmeticError, AssertionError) as e:
        print(f"sacq: internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
