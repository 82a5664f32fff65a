"""Command-line entry point.

Subcommands: ``compute`` (both decompositions plus degradedness), ``mmi``,
``blackwell``, ``sample`` (study harness, CSV + summary JSON) and
``summarize`` (re-aggregate existing CSVs).  Exit codes: 0 success, 2
validation/input error, 3 solver non-convergence (output is still written).
All outputs are machine-readable JSON/CSV with schema-stable keys; file
writes are atomic.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .blackwell import check_degraded
from .core import LN2, GaussianSystem, channel_form, validate_system, whiten
from .deficiency import SolverConfig
from .exceptions import DegenerateTotalMI, GaussPidError
from .mmi import PidAtoms, mmi_pid
from .pid import DeltaHatPid, delta_hat_pid, normalize
from .experiments import (
    SchemeId,
    atomic_write_text,
    read_records_csv,
    run_scheme,
    summarize,
    write_records_csv,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CONVERGED = 3


def _parse_dims(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--dims expects dM,dX,dY, got {text!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def _load_system(args) -> GaussianSystem:
    """Read a covariance from CSV (rows of numbers, no header) or JSON
    ({"dims": [dM,dX,dY], "sigma": [[...]]})."""
    path = args.cov
    if path is None:
        raise GaussPidError("--cov PATH is required")
    with open(path) as fh:
        text = fh.read()
    dims = _parse_dims(args.dims) if args.dims else None
    if path.endswith(".json") or text.lstrip().startswith("{"):
        payload = json.loads(text)
        sigma = np.asarray(payload["sigma"], dtype=float)
        file_dims = tuple(int(v) for v in payload["dims"])
        if dims is not None and dims != file_dims:
            raise GaussPidError(f"--dims {dims} conflicts with file dims {file_dims}")
        dims = file_dims
    else:
        try:
            rows = [
                [float(v) for v in line.replace(",", " ").split()]
                for line in text.splitlines()
                if line.strip()
            ]
            sigma = np.asarray(rows, dtype=float)
        except ValueError as exc:
            raise GaussPidError(f"malformed covariance CSV {path}: {exc}")
        if dims is None:
            raise GaussPidError("--dims dM,dX,dY is required with CSV input")
    return validate_system(sigma, dims)


def _finite_or_none(x: float):
    return float(x) if math.isfinite(x) else None


def _pid_json(atoms: PidAtoms, units: str, diagnostics: dict) -> dict:
    try:
        norm = {k: _finite_or_none(v) for k, v in normalize(atoms).as_dict().items()}
    except DegenerateTotalMI:
        norm = {k: None for k in ("ui_x_bar", "ui_y_bar", "ri_bar", "si_bar")}
    total = atoms.total_mi / (LN2 if units == "bits" else 1.0)
    return {
        "label": atoms.label.value,
        "nats": atoms.as_dict(),
        "bits": atoms.in_bits(),
        "normalized": norm,
        "total_mi": total,
        "nonnegative": atoms.nonnegativity(),
        "diagnostics": diagnostics,
    }


def _solver_diag(dh: DeltaHatPid) -> dict:
    out = {}
    for name, res in (("x_from_y", dh.x_from_y), ("y_from_x", dh.y_from_x)):
        out[name] = {
            "delta_hat": res.delta_hat,
            "converged": res.converged,
            "iterations": res.iterations,
            "objective": res.objective,
            "primal_residual": _finite_or_none(res.primal_residual),
            "lmi_min_eig": res.lmi_min_eig,
            "solve_ms": res.solve_ms,
        }
    return out


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if getattr(args, "out", None):
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        max_iterations=args.max_iters,
        tolerance=args.tol,
        relaxation=args.relaxation,
    )


def cmd_compute(args) -> int:
    sys_ = _load_system(args)
    cf = channel_form(sys_, ridge_jitter=args.ridge_jitter)
    report = check_degraded(whiten(cf))
    atoms_mmi = mmi_pid(sys_)
    dh = delta_hat_pid(sys_, _solver_config(args))
    payload = {
        "dims": list(sys_.dims),
        "units": args.units,
        "delta_hat": _pid_json(dh.atoms, args.units, _solver_diag(dh)),
        "mmi": _pid_json(atoms_mmi, args.units, {}),
        "degradedness": {
            "x_over_y": report.x_over_y,
            "y_over_x": report.y_over_x,
            "margins": [report.margin_x_over_y, report.margin_y_over_x],
            "tolerance": report.tolerance_used,
        },
    }
    _emit(args, payload)
    return EXIT_OK if dh.converged else EXIT_NOT_CONVERGED


def cmd_mmi(args) -> int:
    sys_ = _load_system(args)
    _emit(args, _pid_json(mmi_pid(sys_), args.units, {}))
    return EXIT_OK


def cmd_blackwell(args) -> int:
    sys_ = _load_system(args)
    report = check_degraded(whiten(channel_form(sys_, ridge_jitter=args.ridge_jitter)))
    _emit(
        args,
        {
            "x_over_y": report.x_over_y,
            "y_over_x": report.y_over_x,
            "margins": [report.margin_x_over_y, report.margin_y_over_x],
        },
    )
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 1:
        raise GaussPidError(f"--n must be >= 1, got {args.n}")
    scheme = SchemeId.parse(args.scheme)
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    records = run_scheme(scheme, args.n, args.seed, _solver_config(args), jobs=jobs)
    write_records_csv(records, args.out)
    summary_path = args.summary_out or (args.out + ".summary.json")
    atomic_write_text(
        summary_path, json.dumps(summarize(records).as_dict(), indent=2) + "\n"
    )
    return EXIT_OK


def cmd_summarize(args) -> int:
    records = []
    for path in args.inputs:
        records.extend(read_records_csv(path))
    _emit(args, summarize(records).as_dict())
    return EXIT_OK


def _add_cov_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cov", required=True, help="covariance file (CSV rows or JSON)")
    p.add_argument("--dims", help="block dimensions dM,dX,dY (required for CSV input)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument(
        "--ridge-jitter",
        action="store_true",
        help="regularize near-singular conditional noise with a tiny ridge",
    )


def _add_units_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--units", choices=("nats", "bits"), default="nats")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-10, help="solver tolerance")
    p.add_argument("--max-iters", type=int, default=5000, help="solver iteration cap")
    p.add_argument("--relaxation", type=float, default=1.0, help="over-relaxation factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gausspid",
        description="Partial information decomposition for jointly Gaussian vectors.",
    )
    parser.add_argument("--version", action="version", version=f"gausspid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="both decompositions plus degradedness report")
    _add_cov_flags(p)
    _add_units_flag(p)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("mmi", help="closed-form MMI decomposition only")
    _add_cov_flags(p)
    _add_units_flag(p)
    p.set_defaults(func=cmd_mmi)

    p = sub.add_parser("blackwell", help="degradedness report only")
    _add_cov_flags(p)
    p.set_defaults(func=cmd_blackwell)

    p = sub.add_parser("sample", help="run the sampling study for one scheme")
    p.add_argument("--scheme", required=True, choices=("s1", "s2", "s3", "s4"))
    p.add_argument("--n", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="records CSV path")
    p.add_argument("--summary-out", help="summary JSON path (default: OUT.summary.json)")
    p.add_argument("--jobs", type=int, default=0, help="worker count (0 = all cores)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("summarize", help="aggregate statistics from records CSVs")
    p.add_argument("inputs", nargs="+", help="records CSV file(s)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_summarize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GaussPidError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"gausspid: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
