"""Command-line interface: ``analyze``, ``simulate``, ``validate``, ``filter``.

Exit codes: 0 success, 1 failed validation check, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from math import pi

import numpy as np

from . import __version__
from .hp import DEFAULT_LAMBDAS, hp_decompose
from .pipeline import PipelineConfig, run
from .series import InputError, read_csv, write_csv
from .synth import SyntheticSpec, generate, truth

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def canonicalize(obj, digits: int = 12):
    """Round every float to ``digits`` significant digits (for golden comparisons)."""
    if isinstance(obj, float):
        if obj == 0 or not np.isfinite(obj):
            return 0.0 if obj == 0 else obj
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: canonicalize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonicalize(v, digits) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(command: str, config: dict, digest: str | None, seed, outputs: list[str]) -> dict:
    return {
        "command": command,
        "config": config,
        "input_sha256": digest,
        "version": __version__,
        "seed": seed,
        "outputs": outputs,
    }


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _lam_name(lam: float) -> str:
    return f"{lam:g}"


# -- analyze ------------------------------------------------------------------

def cmd_analyze(args) -> int:
    series = read_csv(args.input)
    config = PipelineConfig(
        log_transform=args.log,
        p=args.p,
        gammas=args.gammas,
        scan_gamma=args.scan_gamma,
        grid_step=args.grid_step,
        band_hi=args.band_hi,
        b_override=args.b,
        lambdas=tuple(args.lam),
        min_phase_months=args.min_phase,
    )
    rep = run(series, config)
    doc = rep.to_dict()
    outputs = ["report.json", "scan.csv", "hp_cycles.csv"]
    doc["manifest"] = _manifest("analyze", config.to_dict(), _file_digest(args.input), None, outputs)

    out = args.out
    atomic_write(os.path.join(out, "report.json"), dumps(doc))
    atomic_write(os.path.join(out, "scan.csv"), _scan_csv(doc["scan"]))
    atomic_write(os.path.join(out, "hp_cycles.csv"), _hp_csv(rep))

    print(f"series {series.label!r}: n={len(series)}, b={rep.scan.b}, "
          f"{len(rep.intervals)} significant interval(s) at gamma={config.scan_gamma:g}")
    for c in doc["cycles"]:
        print(f"  psi={c['psi']:.6f}  period={c['period_months']:.2f} months "
              f"({c['period_years']:.2f} years)  amplitude={c['amplitude']:.6f}  [{c['band']}]")
    print(f"wrote {', '.join(os.path.join(out, o) for o in outputs)}")
    return EXIT_OK


def _scan_csv(scan_doc: dict) -> str:
    pts = scan_doc["points"]
    cols = list(pts[0].keys())
    lines = [",".join(cols)]
    for rec in pts:
        lines.append(",".join(
            str(int(v)) if isinstance(v, bool) else repr(float(v)) for v in rec.values()))
    return "\n".join(lines) + "\n"


def _hp_csv(rep) -> str:
    Y = rep.stages["Y"]
    lams = list(rep.hp)
    header = ["date", "y"] + [f"cycle_{_lam_name(lam)}" for lam in lams]
    lines = [",".join(header)]
    for k, d in enumerate(Y.dates()):
        row = [d, repr(float(Y.values[k]))] + [repr(float(rep.hp[lam].cycle[k])) for lam in lams]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# -- simulate -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    if args.spec == "fixture":
        from .synth import fixture_spec
        spec = fixture_spec()
        digest = None
    else:
        try:
            spec = SyntheticSpec.from_json(args.spec)
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise InputError(f"cannot read spec {args.spec!r}: {exc}") from None
        digest = _file_digest(args.spec)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    start = tuple(int(v) for v in args.start.split("-"))
    series = generate(spec, args.n, start=start)
    outputs = ["series.csv", "truth.json"]
    sidecar = {
        "spec": spec.to_dict(),
        "n": args.n,
        "start": args.start,
        "scale": "log" if spec.exponentiate else "level",
        "harmonics": truth(spec),
        "manifest": _manifest("simulate", spec.to_dict(), digest, spec.seed, outputs),
    }
    atomic_write(os.path.join(args.out, "series.csv"), write_csv(series))
    atomic_write(os.path.join(args.out, "truth.json"), dumps(sidecar))
    print(f"wrote {args.n} rows to {os.path.join(args.out, 'series.csv')} (seed {spec.seed})")
    return EXIT_OK


# -- validate -----------------------------------------------------------------

def cmd_validate(args) -> int:
    from .validation import FAST, SUITES

    chosen = [name for name in SUITES if getattr(args, name.replace("-", "_"))]
    if args.all:
        chosen = list(SUITES)
    if not chosen:
        chosen = list(FAST)
    checks = []
    for name in chosen:
        checks.extend(SUITES[name]())
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if args.out:
        doc = {"checks": [c.to_dict() for c in checks],
               "manifest": _manifest("validate", {"suites": chosen}, None, None, ["validate.json"])}
        atomic_write(os.path.join(args.out, "validate.json"), dumps(doc))
    return EXIT_FAIL if failed else EXIT_OK


# -- filter -------------------------------------------------------------------

def cmd_filter(args) -> int:
    series = read_csv(args.input)
    lams = tuple(args.lam)
    decs = [hp_decompose(series.values, lam) for lam in lams]
    header = ["date", "input"]
    for lam in lams:
        header += [f"trend_{_lam_name(lam)}", f"cycle_{_lam_name(lam)}"]
    lines = [",".join(header)]
    for k, d in enumerate(series.dates()):
        row = [d, repr(float(series.values[k]))]
        for dec in decs:
            row += [repr(float(dec.trend[k])), repr(float(dec.cycle[k]))]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclescope",
        description="Identify significant business-cycle frequencies in monthly series.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the identification pipeline on a date,value CSV")
    a.add_argument("input")
    a.add_argument("--log", action=argparse.BooleanOptionalAction, default=True,
                   help="take logarithms before filtering (default: on)")
    a.add_argument("--p", type=int, default=1, help="trend order / difference order")
    a.add_argument("--gammas", type=_floats, default=(0.92, 0.95, 0.99))
    a.add_argument("--scan-gamma", type=float, default=0.99)
    a.add_argument("--grid-step", type=float, default=pi / 720)
    a.add_argument("--band-hi", type=float, default=0.35)
    a.add_argument("--b", type=int, default=None, help="block length (default round(2.5 sqrt n))")
    a.add_argument("--lambda", dest="lam", type=float, nargs="+", default=list(DEFAULT_LAMBDAS))
    a.add_argument("--min-phase", type=int, default=9)
    a.add_argument("--seed", type=int, default=None, help="accepted for symmetry; analysis is deterministic")
    a.add_argument("--out", default=".")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="generate a synthetic series and its ground truth")
    s.add_argument("spec", help="spec JSON file, or 'fixture' for the bundled fixture spec")
    s.add_argument("--n", type=int, default=180)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--start", default="1995-01")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", help="run oracle and Monte Carlo self-checks")
    from .validation import SUITES
    for name in SUITES:
        v.add_argument(f"--{name}", action="store_true")
    v.add_argument("--all", action="store_true", help="every suite, including slow Monte Carlo")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_validate)

    f = sub.add_parser("filter", help="HP decomposition for one or more smoothing parameters")
    f.add_argument("input")
    f.add_argument("--lambda", dest="lam", type=float, nargs="+", default=list(DEFAULT_LAMBDAS))
    f.add_argument("--out", default=None)
    f.set_defaults(func=cmd_filter)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
