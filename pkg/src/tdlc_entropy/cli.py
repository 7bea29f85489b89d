"""``tdlc-entropy``: instance files in, exact reports out.

Exit codes: 0 success, 2 invalid instance, 3 a sequence did not stabilize,
4 an oracle disagreed with the engine, 5 a property check failed, 1 anything
else (an internal error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

from .engine import (
    DEFAULT_BASE_BUDGET,
    DEFAULT_MAX_STEPS,
    entropy_global,
    entropy_local,
    scale_estimate,
    trace_rows,
)
from .errors import CrossCheckMismatch, EntropyError, InvalidInstance, NotStabilized
from .exact import EntropyValue
from .instances import OPS, Instance, load_instance
from .oracles import modulus_oracle_padic
from .padic import MatrixAutomorphism
from .universe import modulus
from .verify import SUITES, verify_properties

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_UNSTABLE, EXIT_MISMATCH, EXIT_VERIFY = 0, 1, 2, 3, 4, 5
TRACE_HEADER = ["n", "c_n", "alpha_n", "d_index"]

log = logging.getLogger("tdlc_entropy")


def _setup_logging():
    level = os.environ.get("TDLC_ENTROPY_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


# -- evaluation ----------------------------------------------------------------


def _params(inst: Instance, args) -> dict:
    def pick(flag, key, default):
        v = getattr(args, flag, None)
        return v if v is not None else inst.param(key, default)

    return {
        "window": pick("window", "window", None),
        "max_steps": pick("max_steps", "max_steps", DEFAULT_MAX_STEPS),
        "base_budget": pick("base_budget", "base_budget", DEFAULT_BASE_BUDGET),
        "seed": pick("seed", "seed", 0),
        "count": pick("count", "count", None),
        "suite": pick("suite", "suite", "all"),
    }


def _rows_json(rows) -> list:
    return [dict(zip(TRACE_HEADER, r.csv_fields())) for r in rows]


def evaluate(inst: Instance, op: str, params: dict) -> Tuple[int, dict]:
    """Run one operation; returns (exit code, report). Engine errors propagate."""
    phi, U = inst.automorphism, inst.subgroup
    u = inst.universe
    window, max_steps = params["window"], params["max_steps"]
    report = {"op": op, "instance": inst.to_json()}
    code = EXIT_OK
    if op == "entropy":
        algorithms = inst.param("algorithms") or ["limit", "limitfree", "corollary"]
        reports = entropy_local(phi, U, algorithms=algorithms, window=window, max_steps=max_steps)
        first = next(iter(reports.values()))
        checks = sorted({c for r in reports.values() for c in r.cross_checks})
        report["result"] = {
            **first.value.to_json(),
            "alpha": str(first.alpha),
            "modulus": str(first.modulus),
            "cross_checks": [list(c) for c in checks] + [["algorithms", "agree"]],
            "algorithms": {
                name: {
                    "value": str(r.value),
                    "stabilized_at": r.stabilized_at,
                    "stop_rule": r.stop_rule,
                    **({"first_constant_at": r.first_constant_at} if r.first_constant_at is not None else {}),
                }
                for name, r in reports.items()
            },
        }
    elif op == "entropy-global":
        report["result"] = entropy_global(phi, params["base_budget"], window=window, max_steps=max_steps).to_json()
    elif op == "modulus":
        delta = modulus(phi, U)
        result = {"value": str(delta), "factors": delta.to_json(), "log": EntropyValue(delta).to_json()["display"]}
        if isinstance(phi, MatrixAutomorphism):
            oracle = modulus_oracle_padic(phi.matrix, phi.p)
            if oracle != delta:
                raise CrossCheckMismatch(f"modulus {delta} disagrees with determinant oracle {oracle}")
            result["cross_checks"] = [["oracle:determinant", "agree"]]
        report["result"] = result
    elif op == "scale":
        est = scale_estimate(phi, inst.candidates, params["base_budget"], window=window, max_steps=max_steps)
        report["result"] = est.to_json(u)
    elif op == "trace":
        rows, stabilized = trace_rows(phi, U, window=window, max_steps=max_steps)
        report["result"] = {"stabilized_at": stabilized, "rows": _rows_json(rows)}
    elif op == "verify":
        vr = verify_properties(params["suite"], params["seed"], params["count"])
        report["result"] = vr.to_json()
        if not vr.passed:
            code = EXIT_VERIFY
    else:  # pragma: no cover - guarded by the instance parser
        raise InvalidInstance(f"unknown op {op!r}")
    return code, report


def _classify(exc: BaseException) -> int:
    if isinstance(exc, InvalidInstance):
        return EXIT_INVALID
    if isinstance(exc, NotStabilized):
        return EXIT_UNSTABLE
    if isinstance(exc, CrossCheckMismatch):
        return EXIT_MISMATCH
    return EXIT_INTERNAL


def _error_report(exc: BaseException, path=None) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    if path is not None:
        out["instance_path"] = str(path)
    if isinstance(exc, NotStabilized) and exc.partial:
        out["partial_trace"] = _rows_json(exc.partial)
    return out


# -- formatting ----------------------------------------------------------------


def _flatten(obj, prefix="") -> List[Tuple[str, str]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    if isinstance(obj, list):
        return [(prefix, json.dumps(obj))]
    return [(prefix, "" if obj is None else str(obj).lower() if isinstance(obj, bool) else str(obj))]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    body = report.get("result", report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if isinstance(body, dict) and "rows" in body:
            w.writerow(TRACE_HEADER)
            for r in body["rows"]:
                w.writerow([r[k] for k in TRACE_HEADER])
        else:
            w.writerow(["key", "value"])
            w.writerows(_flatten(body))
        return buf.getvalue()
    pairs = _flatten(body)
    width = max((len(k) for k, _ in pairs), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trace_csv(rows, path: Optional[Path], incomplete: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    if incomplete:
        buf.write("# INCOMPLETE\n")
    text = buf.getvalue()
    if path is not None:
        _write_atomic(path, text)
    return text


# -- subcommands -----------------------------------------------------------------


def cmd_run(args) -> int:
    try:
        inst = load_instance(args.instance)
        op = args.op or inst.op
        if op not in OPS:
            raise InvalidInstance(f"unknown op {op!r}")
        code, report = evaluate(inst, op, _params(inst, args))
    except EntropyError as exc:
        sys.stdout.write(render(_error_report(exc, args.instance), args.format))
        log.error("%s: %s", type(exc).__name__, exc)
        return _classify(exc)
    sys.stdout.write(render(report, args.format))
    return code


def cmd_trace(args) -> int:
    out = Path(args.trace_out) if args.trace_out else None
    try:
        inst = load_instance(args.instance)
        p = _params(inst, args)
        rows, stabilized = trace_rows(inst.automorphism, inst.subgroup, window=p["window"], max_steps=p["max_steps"])
    except NotStabilized as exc:
        text = write_trace_csv(exc.partial, out, incomplete=True)
        if out is None:
            sys.stdout.write(text)
        log.error("%s", exc)
        return EXIT_UNSTABLE
    except EntropyError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return _classify(exc)
    text = write_trace_csv(rows, out)
    if out is None:
        sys.stdout.write(text)
    else:
        sys.stdout.write(f"wrote {len(rows)} rows to {out} (stabilized at n={stabilized})\n")
    return EXIT_OK


_STATUS = {EXIT_OK: "pass", EXIT_INVALID: "invalid", EXIT_UNSTABLE: "not-stabilized",
           EXIT_MISMATCH: "mismatch", EXIT_VERIFY: "fail", EXIT_INTERNAL: "error"}


def _batch_one(path: str, out_dir: str, fmt: str) -> Tuple[str, int, str]:
    name = Path(path).stem
    try:
        inst = load_instance(path)
        code, report = evaluate(inst, inst.op, _params(inst, argparse.Namespace()))
        result = report["result"]
        value = result.get("value", "") if isinstance(result, dict) else ""
    except EntropyError as exc:
        code, report, value = _classify(exc), _error_report(exc, Path(path).name), ""
    ext = {"json": "json", "csv": "csv", "table": "txt"}[fmt]
    _write_atomic(Path(out_dir) / f"{name}.report.{ext}", render(report, fmt))
    return name, code, str(value)


def cmd_batch(args) -> int:
    src = Path(args.dir)
    if not src.is_dir():
        sys.stderr.write(f"not a directory: {src}\n")
        return EXIT_INVALID
    out_dir = Path(args.out) if args.out else src / "reports"
    files = sorted(str(p) for p in src.glob("*.json"))
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, files, [str(out_dir)] * len(files), [args.format] * len(files)))
    else:
        results = [_batch_one(f, str(out_dir), args.format) for f in files]
    results.sort()
    counts = {s: 0 for s in _STATUS.values()}
    for _, code, _ in results:
        counts[_STATUS[code]] += 1
    summary = {
        "total": len(results),
        "counts": {k: v for k, v in counts.items() if v or k in ("pass", "fail", "not-stabilized")},
        "instances": [{"name": n, "status": _STATUS[c], "value": v} for n, c, v in results],
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    else:
        width = max((len(n) for n, _, _ in results), default=4)
        sys.stdout.write(f"{'name'.ljust(width)}  {'status':<14}  value\n")
        for n, c, v in results:
            sys.stdout.write(f"{n.ljust(width)}  {_STATUS[c]:<14}  {v}\n")
        sys.stdout.write(" ".join(f"{k}={v}" for k, v in summary["counts"].items()) + "\n")
    failed = sorted(c for _, c, _ in results if c != EXIT_OK)
    return failed[0] if failed else EXIT_OK


def cmd_verify(args) -> int:
    report = verify_properties(args.suite, args.seed, args.count)
    if args.witness_dir:
        for r in report.results:
            if r.witness is not None:
                _write_atomic(Path(args.witness_dir) / f"{r.suite}-{r.check}.json", json.dumps(r.witness, indent=2) + "\n")
    if args.format == "json":
        sys.stdout.write(json.dumps(report.to_json(), indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(report.lines()) + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _window(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("must be at least 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdlc-entropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_flags(p):
        p.add_argument("--window", type=_window, help="consecutive equal terms that declare stabilization")
        p.add_argument("--max-steps", type=_positive, dest="max_steps", help=f"step cap (default {DEFAULT_MAX_STEPS})")

    run = sub.add_parser("run", help="evaluate one instance file")
    run.add_argument("--instance", required=True)
    run.add_argument("--op", choices=OPS, help="override the instance's op")
    engine_flags(run)
    run.add_argument("--base-budget", type=_positive, dest="base_budget")
    run.add_argument("--seed", type=int)
    run.add_argument("--count", type=_positive)
    run.add_argument("--suite", choices=SUITES + ("all",))
    run.add_argument("--format", choices=("json", "table", "csv"), default="json")
    run.set_defaults(func=cmd_run)

    tr = sub.add_parser("trace", help="write the trace rows n,c_n,alpha_n,d_index as CSV")
    tr.add_argument("--instance", required=True)
    tr.add_argument("--trace-out", dest="trace_out", help="output CSV path (default: standard output)")
    engine_flags(tr)
    tr.set_defaults(func=cmd_trace)

    ba = sub.add_parser("batch", help="evaluate every *.json instance in a directory")
    ba.add_argument("dir")
    ba.add_argument("--jobs", type=_positive, default=1)
    ba.add_argument("--out", help="report directory (default: DIR/reports)")
    ba.add_argument("--format", choices=("json", "table", "csv"), default="table")
    ba.set_defaults(func=cmd_batch)

    ve = sub.add_parser("verify", help="run the seeded property suites")
    ve.add_argument("--suite", choices=SUITES + ("all",), default="all")
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--count", type=_positive, help="cases per suite (default: per-suite)")
    ve.add_argument("--format", choices=("json", "table"), default="table")
    ve.add_argument("--witness-dir", dest="witness_dir", help="write failing witnesses here as instance files")
    ve.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EntropyError as exc:  # anything not already mapped by the subcommand
        log.error("%s: %s", type(exc).__name__, exc)
        return _classify(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
