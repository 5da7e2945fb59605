"""Command-line surface: eval, valence, heatmap, verify, gallery.

Exit codes: 0 success (or expected verdict), 1 suite failures, 2 usage
errors, 3 I/O errors.  All randomized suites take an explicit --seed so
identical invocations emit identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .errors import BlaschkeLabError, MapSpecError
from .gallery import GALLERY_NAMES
from .mapspec import gallery_spec, parse_map_spec
from .valence import (
    ERROR_MARK,
    OUTSIDE_MARK,
    heatmap_to_csv,
    heatmap_to_pgm,
    valence_at,
    valence_heatmap,
)
from .verifier import (
    PipelineVerdict,
    check_theorem_3_1,
    check_theorem_3_2,
    check_theorem_A,
    check_theorem_B,
    check_theorem_C,
    demo_hurwitz_escape,
    hurwitz_table_csv,
    report_jsonl,
)

USAGE_ERROR = 2
IO_ERROR = 3

SUITES = ("theorem-a", "theorem-b", "theorem-c", "theorem-3-1", "theorem-3-2",
          "hurwitz-demo")

# canonical candidates of the certification pipeline and their verdicts
EXPECTED_VERDICTS = {
    "mobius": "automorphism",
    "atomic-inner": "valence-unbounded",
    "slit-power": "not-inner",
}


def parse_complex(text: str) -> complex:
    """Accepts "a+bi" (or j) and "a,b" forms."""
    raw = text.strip()
    if "," in raw:
        parts = raw.split(",")
        if len(parts) != 2:
            raise ValueError(f"cannot parse complex number from {text!r}")
        return complex(float(parts[0]), float(parts[1]))
    normal = raw.replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        value = complex(normal)
    except ValueError as err:
        raise ValueError(f"cannot parse complex number from {text!r}") from err
    if not (abs(value.real) < float("inf") and abs(value.imag) < float("inf")):
        raise ValueError(f"complex number must be finite: {text!r}")
    return value


def _nz(x: float) -> float:
    return x + 0.0  # folds -0.0 into 0.0 for stable output


def format_complex(z: complex) -> str:
    return f"{_nz(z.real):.15g}{_nz(z.imag):+.15g}i"


def load_map_argument(text: str):
    """--map takes inline JSON, a file path, or a bare gallery name."""
    raw = text.strip()
    if raw.startswith("{"):
        return parse_map_spec(raw)
    if raw in GALLERY_NAMES:
        return parse_map_spec({"type": "gallery", "name": raw})
    if os.path.exists(raw):
        try:
            with open(raw, "r", encoding="utf-8") as fh:
                return parse_map_spec(fh.read())
        except OSError as err:
            raise MapSpecError(f"cannot read map file: {err}") from err
    raise MapSpecError(f"--map argument {text!r} is neither inline JSON, "
                       "an existing file, nor a gallery name")


def _write_out(path, payload: str) -> int:
    if path is None or path == "-":
        sys.stdout.write(payload)
        return 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    except OSError as err:
        print(f"error: cannot write {path}: {err}", file=sys.stderr)
        return IO_ERROR
    return 0


def cmd_eval(args) -> int:
    handle = load_map_argument(args.map)
    z = parse_complex(args.z)
    if abs(z) >= 1.0:
        print(f"error: |z| must be < 1, got {format_complex(z)}", file=sys.stderr)
        return USAGE_ERROR
    value, deriv = handle.eval(z)
    print(f"{_nz(value.real):.15g} {_nz(value.imag):.15g} | "
          f"{_nz(deriv.real):.15g} {_nz(deriv.imag):.15g}")
    return 0


def cmd_valence(args) -> int:
    handle = load_map_argument(args.map)
    w = parse_complex(args.w)
    schedule = None
    if args.schedule:
        schedule = tuple(float(tok) for tok in args.schedule.split(","))
    report = valence_at(handle, w, schedule=schedule)
    print(f"w = {format_complex(w)}")
    for r, count, residual in zip(report.radii, report.counts, report.residuals):
        print(f"r={r:.12g} count={count} residual={residual:.3e}")
    if report.failed_radius is not None:
        print(f"failed-radius = {report.failed_radius:.12g}")
    print(f"value = {report.value}")
    print(f"stabilized = {'true' if report.stabilized else 'false'}")
    return 0


def cmd_heatmap(args) -> int:
    handle = load_map_argument(args.map)
    grid = valence_heatmap(handle, args.resolution, args.radius)
    payload = heatmap_to_csv(grid) if args.format == "csv" else heatmap_to_pgm(grid)
    status = _write_out(args.out, payload)
    if status != 0:
        return status
    counts = grid.cells[grid.cells >= 0]
    summary = (f"cells={grid.resolution ** 2} "
               f"min-count={int(counts.min()) if counts.size else 'n/a'} "
               f"max-count={int(counts.max()) if counts.size else 'n/a'} "
               f"outside={int((grid.cells == OUTSIDE_MARK).sum())} "
               f"errors={int((grid.cells == ERROR_MARK).sum())}")
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print(summary, file=stream)
    return 0


def _candidate_expectation(spec) -> str | None:
    if spec is None:
        return None
    if spec.get("type") == "mobius":
        return EXPECTED_VERDICTS["mobius"]
    if spec.get("type") == "gallery":
        return EXPECTED_VERDICTS.get(spec.get("name"))
    return None


def _verdict_case(verdict: PipelineVerdict, candidate_spec, expected) -> dict:
    case = {"case": 0, "kind": "pipeline-verdict",
            "candidate": candidate_spec,
            "verdict": verdict.verdict,
            "boundary_mean": verdict.boundary_mean,
            "detail": verdict.detail}
    if verdict.sup_error is not None:
        case["sup_error"] = verdict.sup_error
    if verdict.profile is not None:
        case["profile"] = [[r, c] for r, c in verdict.profile]
    case["expected"] = expected
    case["ok"] = expected is None or verdict.verdict == expected
    return case


def cmd_verify(args) -> int:
    suite = args.suite
    if suite not in SUITES:
        print(f"error: unknown suite {suite!r}; valid suites: {', '.join(SUITES)}",
              file=sys.stderr)
        return USAGE_ERROR

    if suite in ("theorem-a", "theorem-b", "theorem-c") and args.seed is None:
        print("error: this suite requires an explicit --seed", file=sys.stderr)
        return USAGE_ERROR

    if suite == "theorem-a":
        report = check_theorem_A(args.seed, args.cases or 100, args.targets or 50)
    elif suite == "theorem-b":
        report = check_theorem_B(args.seed, args.cases or 50)
    elif suite == "theorem-c":
        report = check_theorem_C(args.seed, args.cases or 50, args.mobius_cases or 20)
    elif suite == "theorem-3-2":
        report = check_theorem_3_2(k=args.k, seed=args.seed if args.seed is not None else 0)
    elif suite == "hurwitz-demo":
        n_list = tuple(int(tok) for tok in args.n_list.split(","))
        rows, limit_value = demo_hurwitz_escape(n_list, parse_complex(args.w))
        payload = hurwitz_table_csv(rows, limit_value)
        status = _write_out(args.out, payload)
        if status != 0:
            return status
        ok = all(v == 2 for _, v in rows) and limit_value == 1
        print(f"escape-family valences all 2: {all(v == 2 for _, v in rows)}; "
              f"limit valence: {limit_value}", file=sys.stderr)
        return 0 if ok else 1
    else:  # theorem-3-1
        if not args.candidate:
            print("error: theorem-3-1 requires --candidate", file=sys.stderr)
            return USAGE_ERROR
        handle = load_map_argument(args.candidate)
        verdict = check_theorem_3_1(handle, valence_bound=args.bound)
        expected = args.expect or _candidate_expectation(handle.spec)
        case = _verdict_case(verdict, handle.spec or handle.descriptor, expected)
        lines = [json.dumps(case, sort_keys=True, separators=(",", ":"))]
        summary = {"summary": {"suite": suite, "verdict": verdict.verdict,
                               "expected": expected, "ok": case["ok"]}}
        lines.append(json.dumps(summary, sort_keys=True, separators=(",", ":")))
        status = _write_out(args.out, "\n".join(lines) + "\n")
        if status != 0:
            return status
        return 0 if case["ok"] else 1

    status = _write_out(args.out, report_jsonl(report))
    if status != 0:
        return status
    print(f"suite={report.suite} cases={report.cases_run} "
          f"failures={len(report.failures)} wall-time={report.wall_time_s:.2f}s",
          file=sys.stderr)
    return 0 if report.ok else 1


def cmd_gallery(args) -> int:
    name = args.name
    if name not in GALLERY_NAMES:
        print(f"error: unknown gallery name {name!r}; valid names: "
              f"{', '.join(GALLERY_NAMES)}", file=sys.stderr)
        return USAGE_ERROR
    params = {}
    if name == "scaled-exp":
        params = {"epsilon": args.epsilon, "c": args.c_param}
    elif name == "slit-power":
        params = {"k": args.k}
    elif name == "escape":
        params = {"n": args.n}
    elif name == "frostman":
        base = load_map_argument(args.base) if args.base else None
        if base is None or base.spec is None:
            print("error: frostman needs --base with a spec-representable map",
                  file=sys.stderr)
            return USAGE_ERROR
        params = {"base": base.spec, "a": list(_pair(parse_complex(args.a)))}
    spec = gallery_spec(name, params)
    print(json.dumps(spec, sort_keys=True))
    return 0


def _pair(z: complex):
    return z.real, z.imag


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blaschke-lab",
        description="Numerical laboratory for holomorphic self-maps of the "
                    "unit disc: Blaschke products, winding-number valence, "
                    "conformal slit maps, and scripted verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a map and its derivative")
    p_eval.add_argument("--map", required=True,
                        help="inline JSON, file path, or gallery name")
    p_eval.add_argument("--z", required=True, help='point, "a+bi" or "a,b"')
    p_eval.set_defaults(fn=cmd_eval)

    p_val = sub.add_parser("valence", help="valence report at a target")
    p_val.add_argument("--map", required=True)
    p_val.add_argument("--w", required=True, help='target, "a+bi" or "a,b"')
    p_val.add_argument("--schedule", help="comma list of radii in (0,1)")
    p_val.set_defaults(fn=cmd_valence)

    p_heat = sub.add_parser("heatmap", help="valence heatmap over the disc")
    p_heat.add_argument("--map", required=True)
    p_heat.add_argument("--resolution", type=int, default=64)
    p_heat.add_argument("--radius", type=float, default=0.999)
    p_heat.add_argument("--format", choices=("csv", "pgm"), default="csv")
    p_heat.add_argument("--out", help="output path (default: stdout)")
    p_heat.set_defaults(fn=cmd_heatmap)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--cases", type=int, default=None)
    p_ver.add_argument("--targets", type=int, default=None)
    p_ver.add_argument("--mobius-cases", type=int, default=None)
    p_ver.add_argument("--k", type=int, default=2)
    p_ver.add_argument("--candidate", help="map spec for theorem-3-1")
    p_ver.add_argument("--bound", type=int, default=1,
                       help="claimed valence bound for theorem-3-1")
    p_ver.add_argument("--expect",
                       help="expected verdict for theorem-3-1 (overrides inference)")
    p_ver.add_argument("--w", default="0.1", help="target for hurwitz-demo")
    p_ver.add_argument("--n-list", default="2,10,100",
                       help="comma list of escape indices for hurwitz-demo")
    p_ver.add_argument("--out", help="output path (default: stdout)")
    p_ver.set_defaults(fn=cmd_verify)

    p_gal = sub.add_parser("gallery", help="emit a canonical gallery map spec")
    p_gal.add_argument("name")
    p_gal.add_argument("--k", type=int, default=2)
    p_gal.add_argument("--n", type=int, default=2)
    p_gal.add_argument("--epsilon", type=float, default=1e-10)
    p_gal.add_argument("--c-param", type=float, default=10.0)
    p_gal.add_argument("--a", default="0+0i", help="frostman shift parameter")
    p_gal.add_argument("--base", help="frostman base map spec")
    p_gal.set_defaults(fn=cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.fn(args)
    except MapSpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except BlaschkeLabError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
