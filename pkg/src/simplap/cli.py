"""Command-line front end: spectra, repair/caging runs, bound verification,
and demo data emission.

Exit codes: 0 success, 1 usage error, 2 input/data error, 3 numeric failure.
All output files are deterministic functions of the inputs and the seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import caging_run, repair_run
from .errors import NumericError, ParameterError, SimplapError
from .geometry import build_weighted_complex, load_points, normalize_scale, save_points_csv
from .harness import (
    RING_CENTERS,
    annulus_disc_instance,
    three_rings_configuration,
    verify_eigenvalue_bound,
)
from .spectral import DEFAULT_ZERO_TOL, eig_sym, smallest_nonzero_eigenpairs
from .weighted import weighted_laplacian, weighted_union

DEFAULT_VERIFY_CYCLES = (4, 6, 10)
DEFAULT_VERIFY_EPSILONS = (1e-1, 1e-2, 1e-3)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simplap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"simplap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    spectrum = sub.add_parser("spectrum", help="eigenvalues of the weighted Laplacian")
    spectrum.add_argument("--input", required=True, help="points CSV (id,x,y) or JSON")
    spectrum.add_argument("--dim", type=int, default=1)
    spectrum.add_argument("--k", type=int, default=10, help="number of eigenvalues to report")
    spectrum.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
    spectrum.add_argument("--emit-eigenvectors", action="store_true")
    spectrum.add_argument("--export-matrix", metavar="PATH", help="MatrixMarket dump of the Laplacian")
    spectrum.add_argument("--output", help="JSON output path (stdout when omitted)")

    for name, needs_k in (("repair", False), ("cage", True)):
        run = sub.add_parser(name, help=f"{name} dynamics run")
        run.add_argument("--input", required=True)
        run.add_argument("--output", required=True, help="output directory")
        if needs_k:
            run.add_argument("--k", type=int, required=True, help="eigenvalue index to drive down")
        run.add_argument("--steps", type=int, default=200)
        run.add_argument("--step-size", type=float, default=1e-2)
        run.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
        run.add_argument(
            "--line-search", action=argparse.BooleanOptionalAction, default=True
        )
        run.add_argument("--full-laplacian", action="store_true")

    verify = sub.add_parser("verify", help="eigenvalue bound checks on glued instances")
    verify.add_argument("--m", type=int, action="append", help="cycle length (repeatable)")
    verify.add_argument("--epsilon", type=float, action="append", help="filler weight (repeatable)")
    verify.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
    verify.add_argument("--output", help="JSON output path (stdout when omitted)")

    demo = sub.add_parser("demo", help="emit demo points, spectrum, and eigenvector colorings")
    demo.add_argument("--name", required=True, choices=["three-rings", "annulus"])
    demo.add_argument("--output", required=True, help="output directory")
    demo.add_argument("--sensors", type=int, default=120)
    demo.add_argument("--seed", type=int, default=7)
    demo.add_argument("--k", type=int, default=10)
    demo.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
    return parser


def _dump_json(data, output: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _spectrum_payload(L, k: int, zero_tol: float, emit_vectors: bool) -> dict:
    spec = eig_sym(L, zero_tol)
    count = min(k, spec.eigenvalues.size)
    payload = {
        "eigenvalues": [float(v) for v in spec.eigenvalues[:count]],
        "zero_tol": zero_tol,
        "nullity": spec.nullity,
    }
    if emit_vectors:
        payload["eigenvectors"] = [
            [float(x) for x in spec.eigenvectors[:, i]] for i in range(count)
        ]
    return payload


def _cmd_spectrum(args) -> int:
    points = load_points(args.input)
    wc = build_weighted_complex(points)
    L = weighted_laplacian(wc, args.dim)
    if args.export_matrix:
        from scipy.io import mmwrite

        mmwrite(args.export_matrix, L)
    _dump_json(_spectrum_payload(L, args.k, args.zero_tol, args.emit_eigenvectors), args.output)
    return 0


def _write_trajectory(outdir: Path, trajectory) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "trajectory.jsonl").write_text(trajectory.to_jsonl())
    save_points_csv(outdir / "final.csv", trajectory.final.positions)


def _cmd_repair(args) -> int:
    points = load_points(args.input)
    trajectory = repair_run(
        points,
        steps=args.steps,
        step_size=args.step_size,
        line_search=args.line_search,
        full=args.full_laplacian,
        zero_tol=args.zero_tol,
    )
    _write_trajectory(Path(args.output), trajectory)
    print(f"repair: lambda {trajectory.initial.objective!r} -> {trajectory.final.objective!r}")
    return 0


def _cmd_cage(args) -> int:
    points = load_points(args.input)
    trajectory = caging_run(
        points,
        k=args.k,
        steps=args.steps,
        step_size=args.step_size,
        line_search=args.line_search,
        full=args.full_laplacian,
        zero_tol=args.zero_tol,
    )
    _write_trajectory(Path(args.output), trajectory)
    print(f"cage: lambda {trajectory.initial.objective!r} -> {trajectory.final.objective!r}")
    return 0


def _cmd_verify(args) -> int:
    cycles = args.m or list(DEFAULT_VERIFY_CYCLES)
    epsilons = args.epsilon or list(DEFAULT_VERIFY_EPSILONS)
    report = []
    for m in cycles:
        for eps in epsilons:
            inst = annulus_disc_instance(m, eps)
            check = verify_eigenvalue_bound(inst, args.zero_tol)
            report.append(
                {
                    "m": m,
                    "epsilon": eps,
                    "n": inst.n,
                    "lambda": check.lambda_min_nonzero,
                    "bound": check.bound,
                    "holds": check.holds,
                }
            )
    _dump_json(report, args.output)
    return 0 if all(entry["holds"] for entry in report) else 3


def _edge_coloring_rows(X, vectors) -> list[str]:
    rows = ["vector,u,v,value"]
    for idx, vec in enumerate(vectors):
        for e_idx, (u, v) in enumerate(X.simplices(1)):
            rows.append(f"{idx},{u},{v},{vec[e_idx]!r}")
    return rows


def _cmd_demo(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.name == "three-rings":
        points = three_rings_configuration(args.sensors, args.seed)
        points = normalize_scale(points)
        wc = build_weighted_complex(points)
        n_vectors = 3
    else:
        inst = annulus_disc_instance(12, 1e-2)
        wc = weighted_union(inst.outer, inst.filler)
        m = 12
        angles = 2.0 * np.pi * np.arange(m) / m
        inner = np.column_stack((np.cos(angles), np.sin(angles)))
        outer_ring = 2.0 * inner
        points = np.vstack((inner, outer_ring, [[0.0, 0.0]]))
        n_vectors = 1
    save_points_csv(outdir / "points.csv", points)
    L = weighted_laplacian(wc, 1)
    _dump_json(
        _spectrum_payload(L, args.k, args.zero_tol, False), str(outdir / "spectrum.json")
    )
    pairs = smallest_nonzero_eigenpairs(L, n_vectors, args.zero_tol)
    rows = _edge_coloring_rows(wc.complex, [v for _, v in pairs])
    (outdir / "eigenvectors.csv").write_text("\n".join(rows) + "\n")
    print(f"demo {args.name}: wrote {outdir}/points.csv, spectrum.json, eigenvectors.csv")
    return 0


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "repair": _cmd_repair,
    "cage": _cmd_cage,
    "verify": _cmd_verify,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (SimplapError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
