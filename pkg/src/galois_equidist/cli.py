"""Command-line entry point: galois-equidist <command> [options]."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .discrepancy import (
    C_MAIN,
    PAIRING_TOL,
    SWEEP_COLUMNS,
    analyze_point,
    family_members,
    sweep_family,
    theorem_main,
    write_rows_csv,
)
from .functions import NotApplicable, TestFunction, empirical_lipschitz, function_from_dict
from .gendeg import MAX_LATTICE_POINTS, degree_search_table, generalized_degree, write_table_csv
from .harmonic import (
    DEFAULT_BOX,
    GridError,
    c_of_F,
    derivative_l1_sum,
    fourier_coeffs,
    grid_samples,
    haar_integral,
    transform_l1,
)
from .heights import NEAR_CIRCLE_GUARD, HeightUnavailable, point_height
from .mollifier import (
    estimate_lipschitz,
    lipschitz_bound,
    optimize_delta,
    rho_prime_bound,
)
from .orbits import REPRESENTATION_NOTE, ClusterError, OrbitError, SpecError, enumerate_orbit, load_point, load_structured
from .polynomial import PolynomialError
from .roots import DEFAULT_PRECISION, RootFindingError
from .suites import SUITE_COLUMNS, count_violations, load_corpus, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _clean(obj):
    """Make a report JSON-safe: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _envelope(command: str, inputs: dict, tolerances: dict, result) -> dict:
    return {
        "tool": "galois-equidist",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "tolerances": tolerances,
        "representation": REPRESENTATION_NOTE,
        "result": result,
    }


def _emit_json(doc: dict, out: str | None) -> None:
    text = json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(rows, columns, out: str | None) -> None:
    if out:
        write_rows_csv(rows, columns, out)
    else:
        write_rows_csv(rows, columns, None, fh=sys.stdout)


# ---------------------------------------------------------------------------
# knob validation


def _precision(value: str) -> float:
    v = float(value)
    if not 1e-15 <= v <= 1e-6:
        raise argparse.ArgumentTypeError("precision must lie in [1e-15, 1e-6]")
    return v


def _grid(value: str) -> int:
    m = int(value)
    if m < 16 or m > 4096 or m & (m - 1):
        raise argparse.ArgumentTypeError("grid size must be a power of two in [16, 4096]")
    return m


def _delta(value: str) -> float:
    v = float(value)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("delta must lie strictly between 0 and 1")
    return v


def _seed(value: str) -> int:
    v = int(value)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned value")
    return v


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# ---------------------------------------------------------------------------
# commands


def cmd_height(args) -> int:
    spec = load_point(args.point)
    orbit = enumerate_orbit(spec, args.precision)
    rep = point_height(spec, orbit, method=args.method)
    doc = _envelope(
        "height",
        {"point": {"path": str(args.point), "sha256": _digest(args.point)}},
        {"root_precision": args.precision, "quadrature_nodes": 2**16, "near_circle_guard": NEAR_CIRCLE_GUARD},
        rep.to_json(),
    )
    _emit_json(doc, args.out)
    return EXIT_OK


def cmd_gendeg(args) -> int:
    spec = load_point(args.point)
    orbit = enumerate_orbit(spec, args.precision)
    rep = generalized_degree(orbit, radius=args.radius)
    if args.table:
        write_table_csv(degree_search_table(orbit, rep.search_radius), args.table)
    result = rep.to_json()
    result["D"] = orbit.D
    if spec.assertion:
        result["assertion"] = spec.assertion
    doc = _envelope(
        "gendeg",
        {"point": {"path": str(args.point), "sha256": _digest(args.point)}},
        {"root_precision": args.precision, "cluster_tau_min": 1e-7, "max_lattice_points": MAX_LATTICE_POINTS},
        result,
    )
    _emit_json(doc, args.out)
    return EXIT_OK


def _load_fn(path: str, dim: int | None) -> TestFunction:
    data = load_structured(path)
    d = dim if dim is not None else int(data.get("min_dim", 1))
    return function_from_dict(data, d, name=Path(path).stem)


def cmd_fourier(args) -> int:
    F = _load_fn(args.fn, args.dim)
    if args.grid:
        samples = grid_samples(F.F0, args.grid, F.dim)
        table = fourier_coeffs(samples, args.box)
    else:
        table = F.spectrum(args.box)
    inside, tail = transform_l1(table)
    result = {
        "function": F.describe(),
        "spectrum": table.to_json(),
        "l1": inside + tail,
        "haar_integral": haar_integral(table),
        "derivative_l1_sum": derivative_l1_sum(table),
        "c_F": c_of_F(F, table),
    }
    doc = _envelope("fourier", {"fn": {"path": str(args.fn), "sha256": _digest(args.fn)}},
                    {"box": args.box, "grid": args.grid}, result)
    _emit_json(doc, args.out)
    return EXIT_OK


def cmd_mollifier(args) -> int:
    bound = lipschitz_bound(args.delta)
    result: dict = {"delta": args.delta, "lipschitz_bound": bound, "rho_prime_bound": rho_prime_bound(args.delta)}
    status = EXIT_OK
    if args.check_lipschitz:
        est = {c: estimate_lipschitz(c, args.delta, args.samples, args.seed) for c in ("u", "v")}
        ok = all(v <= bound + 1e-9 for v in est.values())
        result.update(estimates=est, ok=ok)
        status = EXIT_OK if ok else EXIT_VIOLATION
    doc = _envelope("mollifier", {}, {"samples": args.samples, "seed": args.seed, "slack": 1e-9}, result)
    _emit_json(doc, args.out)
    return status


def cmd_optimize_delta(args) -> int:
    opt = optimize_delta()
    doc = _envelope("optimize-delta", {}, {"grid_points": 1000, "golden_section_tol": 1e-6}, opt.to_json())
    _emit_json(doc, args.out)
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    spec = load_point(args.point)
    pd = analyze_point(spec, enumerate_orbit(spec, args.precision))
    F = _load_fn(args.fn, spec.dim)
    rep = theorem_main(pd, F, args.box)
    result = rep.to_json()
    if args.check_fn_lipschitz:
        result["empirical_lip"] = empirical_lipschitz(F, seed=args.seed)
    doc = _envelope(
        "discrepancy",
        {"point": {"path": str(args.point), "sha256": _digest(args.point)},
         "fn": {"path": str(args.fn), "sha256": _digest(args.fn)}},
        {"root_precision": args.precision, "box": args.box, "C": C_MAIN, "slack": 1e-9, "pairing": PAIRING_TOL},
        result,
    )
    _emit_json(doc, args.out)
    return EXIT_OK if rep.ok is not False else EXIT_VIOLATION


def cmd_verify(args) -> int:
    corpus = load_corpus(args.corpus)
    rows = run_suite(args.suite, corpus)
    _emit_csv(rows, SUITE_COLUMNS[args.suite], args.out)
    bad = count_violations(rows)
    print(f"{args.suite}: {len(rows)} checks, {bad} violations", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_sweep(args) -> int:
    fn_spec = load_structured(args.fn)
    stop = args.pmax if args.family == "cyclotomic" else args.kmax
    rows = sweep_family(family_members(args.family, args.start, stop, args.a), fn_spec, args.box)
    _emit_csv(rows, SWEEP_COLUMNS, args.out)
    bad = sum(1 for r in rows if r["ok"] is False)
    print(f"sweep {args.family}: {len(rows)} rows, {bad} violations or errors", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="galois-equidist", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_out(p, help_text="output file (default: stdout)"):
        p.add_argument("--out", help=help_text)

    p = sub.add_parser("height", help="Weil height of a point")
    p.add_argument("--point", required=True)
    p.add_argument("--method", choices=["roots", "quadrature", "both"], default="roots")
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    add_out(p)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("gendeg", help="generalized degree by shell search")
    p.add_argument("--point", required=True)
    p.add_argument("--radius", type=_positive)
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    p.add_argument("--table", help="also dump the n -> deg table as CSV")
    add_out(p)
    p.set_defaults(func=cmd_gendeg)

    p = sub.add_parser("fourier", help="Fourier spectrum of a test function's torus restriction")
    p.add_argument("--fn", required=True)
    p.add_argument("--dim", type=_positive, help="dimension N (default: the function file's min_dim)")
    p.add_argument("--box", type=_positive, default=DEFAULT_BOX)
    p.add_argument("--grid", type=_grid, help="sample F0 on an M^N grid instead of using the exact spectrum")
    add_out(p)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("mollifier", help="constants of the phase mollifier f_delta")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--check-lipschitz", action="store_true")
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    add_out(p)
    p.set_defaults(func=cmd_mollifier)

    p = sub.add_parser("optimize-delta", help="minimize -2/log(d) + 4 sqrt(2)(d^2+9)/d^3 over (0, 1)")
    add_out(p)
    p.set_defaults(func=cmd_optimize_delta)

    p = sub.add_parser("discrepancy", help="both sides of the equidistribution inequality")
    p.add_argument("--point", required=True)
    p.add_argument("--fn", required=True)
    p.add_argument("--box", type=_positive, default=DEFAULT_BOX)
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    p.add_argument("--check-fn-lipschitz", action="store_true", help="also sample the Lipschitz constant of F")
    p.add_argument("--seed", type=_seed, default=0)
    add_out(p)
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("verify", help="run a verification suite over a corpus")
    p.add_argument("--suite", choices=sorted(SUITE_COLUMNS), required=True)
    p.add_argument("--corpus", help="corpus directory (default: the bundled corpus)")
    add_out(p, "CSV output (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="discrepancy along a family of points")
    p.add_argument("--family", choices=["cyclotomic", "radical", "mixed"], required=True)
    p.add_argument("--fn", required=True)
    p.add_argument("--start", type=_positive)
    p.add_argument("--pmax", type=_positive, default=101, help="largest prime (cyclotomic)")
    p.add_argument("--kmax", type=_positive, default=20, help="largest index (radical, mixed)")
    p.add_argument("--a", type=_positive, default=2, help="exponent of the second coordinate (cyclotomic)")
    p.add_argument("--box", type=_positive, default=DEFAULT_BOX)
    add_out(p, "CSV output (default: stdout)")
    p.set_defaults(func=cmd_sweep)
    return ap


INPUT_ERRORS = (SpecError, PolynomialError, HeightUnavailable, NotApplicable, GridError, OSError,
                OrbitError, ClusterError, RootFindingError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
