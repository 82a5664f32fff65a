"""Sampling study harness: scheme-constrained dimensions, Wishart covariance
draws, both decompositions per draw, and summary statistics.

Records are fully determined by (scheme, n, seed, solver config): each record
derives its own generator from a counter-based Philox stream keyed by
``seed ^ index``, so batches can fan out across workers without changing
results, and any single record can be reproduced from its stored seed.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .blackwell import DegradednessReport, check_degraded
from .core import channel_form, validate_system, whiten
from .deficiency import SolverConfig
from .exceptions import EmptyInput, GaussPidError
from .mmi import PidAtoms, PidLabel, mmi_pid
from .pid import NormalizedAtoms, delta_hat_pid, has_unique_information, normalize

CSV_HEADER = (
    "scheme,seed,dM,dX,dY,mi_x,mi_y,mi_xy,ui_x,ui_y,ri,si,"
    "ui_x_bar,ui_y_bar,ri_bar,si_bar,x_over_y,y_over_x,"
    "converged_xy,converged_yx,solve_ms_xy,solve_ms_yx"
)
# Sampled covariances below this relative smallest eigenvalue get a recorded
# ridge of 1e-8 * (trace/d) * I.
WISHART_JITTER_RTOL = 1e-10
NONNEG_ATOL = 1e-6


class SchemeId(enum.Enum):
    """The four dimension-sampling schemes of the study."""

    S1 = "S1"  # d_M ~ Unif{1..10},  d_X = d_Y = d_M
    S2 = "S2"  # d_M ~ Unif{1..9},   d_X, d_Y ~ Unif{d_M+1..10}
    S3 = "S3"  # d_M ~ Unif{2..10},  d_X, d_Y ~ Unif{1..d_M-1}
    S4 = "S4"  # d_M ~ Unif{2..9},   d_X ~ Unif{1..d_M-1}, d_Y ~ Unif{d_M+1..10}

    @classmethod
    def parse(cls, value) -> "SchemeId":
        if isinstance(value, cls):
            return value
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise ValueError(f"unknown scheme {value!r}; expected one of s1..s4")


@dataclass(frozen=True)
class ExperimentRecord:
    """One sampled system: dimensions, both decompositions, degradedness
    flags, mutual informations and per-direction solver diagnostics.

    The ``_xy`` suffix refers to the delta_hat(M : X \\ Y) solve and ``_yx``
    to delta_hat(M : Y \\ X).  Failed records carry NaN quantities, an error
    message, and both converged flags False; they never abort a batch.
    """

    scheme: str
    dims: tuple[int, int, int]
    seed: int
    atoms_mmi: PidAtoms | None
    atoms_delta_hat: PidAtoms | None
    normalized: NormalizedAtoms | None
    degradedness: DegradednessReport | None
    mi_x: float
    mi_y: float
    mi_xy: float
    solve_ms_xy: float
    solve_ms_yx: float
    converged_xy: bool
    converged_yx: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.atoms_delta_hat is not None


def record_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based per-record generator keyed by ``seed ^ index``."""
    if seed < 0 or index < 0:
        raise ValueError(f"seed and index must be nonnegative, got {seed}, {index}")
    return np.random.Generator(np.random.Philox(key=np.uint64(seed) ^ np.uint64(index)))


def sample_dims(scheme, rng: np.random.Generator) -> tuple[int, int, int]:
    """Draw (d_M, d_X, d_Y) for a scheme, then swap so that d_X <= d_Y.

    Draw order is fixed (d_M, then d_X, then d_Y) for reproducibility.
    """
    scheme = SchemeId.parse(scheme)
    if scheme is SchemeId.S1:
        d_m = int(rng.integers(1, 11))
        d_x = d_y = d_m
    elif scheme is SchemeId.S2:
        d_m = int(rng.integers(1, 10))
        d_x = int(rng.integers(d_m + 1, 11))
        d_y = int(rng.integers(d_m + 1, 11))
    elif scheme is SchemeId.S3:
        d_m = int(rng.integers(2, 11))
        d_x = int(rng.integers(1, d_m))
        d_y = int(rng.integers(1, d_m))
    else:  # S4
        d_m = int(rng.integers(2, 10))
        d_x = int(rng.integers(1, d_m))
        d_y = int(rng.integers(d_m + 1, 11))
    if d_y < d_x:
        d_x, d_y = d_y, d_x
    return (d_m, d_x, d_y)


def sample_wishart(d: int, rng: np.random.Generator, return_jittered: bool = False):
    """Standard Wishart draw: Sigma = G G' with G a d x d matrix of standard
    normals (d degrees of freedom, identity scale).  Draws whose smallest
    eigenvalue falls below 1e-10 * (trace/d) receive a recorded ridge."""
    g = rng.standard_normal((d, d))
    sigma = g @ g.T
    sigma = 0.5 * (sigma + sigma.T)
    mean_eig = float(np.trace(sigma)) / d
    jittered = False
    if float(np.linalg.eigvalsh(sigma)[0]) < WISHART_JITTER_RTOL * mean_eig:
        sigma = sigma + (1e-8 * mean_eig) * np.eye(d)
        jittered = True
    if return_jittered:
        return sigma, jittered
    return sigma


def _failure_record(scheme: str, seed: int, dims, message: str) -> ExperimentRecord:
    nan = float("nan")
    return ExperimentRecord(
        scheme=scheme,
        dims=tuple(dims) if dims is not None else (0, 0, 0),
        seed=seed,
        atoms_mmi=None,
        atoms_delta_hat=None,
        normalized=None,
        degradedness=None,
        mi_x=nan,
        mi_y=nan,
        mi_xy=nan,
        solve_ms_xy=nan,
        solve_ms_yx=nan,
        converged_xy=False,
        converged_yx=False,
        error=message,
    )


def compute_record(scheme, base_seed: int, index: int, cfg: SolverConfig) -> ExperimentRecord:
    """Sample and decompose one system; failures are captured in the record."""
    scheme = SchemeId.parse(scheme)
    rng = record_rng(base_seed, index)
    derived_seed = int(np.uint64(base_seed) ^ np.uint64(index))
    dims = sample_dims(scheme, rng)
    try:
        sigma = sample_wishart(sum(dims), rng)
        sys = validate_system(sigma, dims)
        degradedness = check_degraded(whiten(channel_form(sys)))
        atoms_mmi = mmi_pid(sys)
        dh = delta_hat_pid(sys, cfg)
        normalized = normalize(dh.atoms)
    except (GaussPidError, np.linalg.LinAlgError) as exc:
        return _failure_record(scheme.value, derived_seed, dims, str(exc))
    return ExperimentRecord(
        scheme=scheme.value,
        dims=dims,
        seed=derived_seed,
        atoms_mmi=atoms_mmi,
        atoms_delta_hat=dh.atoms,
        normalized=normalized,
        degradedness=degradedness,
        mi_x=atoms_mmi.ui_x + atoms_mmi.ri,
        mi_y=atoms_mmi.ui_y + atoms_mmi.ri,
        mi_xy=atoms_mmi.total_mi,
        solve_ms_xy=dh.x_from_y.solve_ms,
        solve_ms_yx=dh.y_from_x.solve_ms,
        converged_xy=dh.x_from_y.converged,
        converged_yx=dh.y_from_x.converged,
    )


def _worker(args) -> ExperimentRecord:
    return compute_record(*args)


def run_scheme(
    scheme,
    n: int,
    seed: int,
    cfg: SolverConfig = SolverConfig(),
    jobs: int = 1,
) -> list[ExperimentRecord]:
    """Produce exactly ``n`` records, index-ordered regardless of parallelism."""
    if n < 1:
        raise ValueError(f"record count must be >= 1, got {n}")
    scheme = SchemeId.parse(scheme)
    tasks = [(scheme, seed, i, cfg) for i in range(n)]
    if jobs <= 1 or n == 1:
        return [_worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_worker, tasks, chunksize=max(1, n // (8 * jobs))))


@dataclass(frozen=True)
class SummaryStats:
    """Study-level statistics over a batch of records."""

    n_records: int
    n_failed: int
    frac_all_nonneg: float
    n_scalar_m: int
    frac_one_sided_scalar_m: float
    n_vector_m: int
    frac_both_unique_vector_m: float
    box_stats: dict  # scheme -> atom -> {q1, median, q3, whisker_lo, whisker_hi}

    def as_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "n_failed": self.n_failed,
            "frac_all_nonneg": self.frac_all_nonneg,
            "n_scalar_m": self.n_scalar_m,
            "frac_one_sided_scalar_m": self.frac_one_sided_scalar_m,
            "n_vector_m": self.n_vector_m,
            "frac_both_unique_vector_m": self.frac_both_unique_vector_m,
            "box_stats": self.box_stats,
        }


def _box(values: np.ndarray) -> dict:
    q1, med, q3 = (float(v) for v in np.percentile(values, [25.0, 50.0, 75.0]))
    iqr = q3 - q1
    return {
        "q1": q1,
        "median": med,
        "q3": q3,
        "whisker_lo": q1 - 1.5 * iqr,
        "whisker_hi": q3 + 1.5 * iqr,
    }


def summarize(records: list[ExperimentRecord]) -> SummaryStats:
    """Aggregate nonnegativity, uniqueness and box-plot statistics."""
    if not records:
        raise EmptyInput("summarize requires at least one record")
    valid = [r for r in records if r.ok]
    n_failed = len(records) - len(valid)

    def frac(flags) -> float:
        flags = list(flags)
        return float(np.mean(flags)) if flags else float("nan")

    all_nonneg = frac(
        all(v >= -NONNEG_ATOL for v in r.atoms_delta_hat.as_dict().values()) for r in valid
    )

    scalar_m = [r for r in valid if r.dims[0] == 1]
    vector_m = [r for r in valid if r.dims[0] > 1]
    one_sided = frac(
        not has_unique_information(
            min(r.atoms_delta_hat.ui_x, r.atoms_delta_hat.ui_y), r.atoms_delta_hat.total_mi
        )
        for r in scalar_m
    )
    both_unique = frac(
        has_unique_information(r.atoms_delta_hat.ui_x, r.atoms_delta_hat.total_mi)
        and has_unique_information(r.atoms_delta_hat.ui_y, r.atoms_delta_hat.total_mi)
        for r in vector_m
    )

    box_stats: dict = {}
    for scheme in sorted({r.scheme for r in valid}):
        rows = np.array(
            [r.normalized.as_array() for r in valid if r.scheme == scheme and r.normalized]
        )
        if rows.size == 0:
            continue
        box_stats[scheme] = {
            name: _box(rows[:, i])
            for i, name in enumerate(("ui_x_bar", "ui_y_bar", "ri_bar", "si_bar"))
        }

    return SummaryStats(
        n_records=len(records),
        n_failed=n_failed,
        frac_all_nonneg=all_nonneg,
        n_scalar_m=len(scalar_m),
        frac_one_sided_scalar_m=one_sided,
        n_vector_m=len(vector_m),
        frac_both_unique_vector_m=both_unique,
        box_stats=box_stats,
    )


# --- CSV contract -----------------------------------------------------------


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file and rename, so interrupts never leave torn files."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def records_to_csv(records: list[ExperimentRecord]) -> str:
    """Render records in the fixed CSV schema (full double precision,
    '.' decimal separator, no locale)."""
    nan = float("nan")
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in records:
        atoms = r.atoms_delta_hat
        norm = r.normalized
        deg = r.degradedness
        row = [
            r.scheme,
            str(r.seed),
            str(r.dims[0]),
            str(r.dims[1]),
            str(r.dims[2]),
            _fmt(r.mi_x),
            _fmt(r.mi_y),
            _fmt(r.mi_xy),
            _fmt(atoms.ui_x if atoms else nan),
            _fmt(atoms.ui_y if atoms else nan),
            _fmt(atoms.ri if atoms else nan),
            _fmt(atoms.si if atoms else nan),
            _fmt(norm.ui_x_bar if norm else nan),
            _fmt(norm.ui_y_bar if norm else nan),
            _fmt(norm.ri_bar if norm else nan),
            _fmt(norm.si_bar if norm else nan),
            _fmt_bool(deg.x_over_y if deg else False),
            _fmt_bool(deg.y_over_x if deg else False),
            _fmt_bool(r.converged_xy),
            _fmt_bool(r.converged_yx),
            _fmt(r.solve_ms_xy),
            _fmt(r.solve_ms_yx),
        ]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def write_records_csv(records: list[ExperimentRecord], path: str) -> None:
    atomic_write_text(path, records_to_csv(records))


def read_records_csv(path: str) -> list[ExperimentRecord]:
    """Re-hydrate records from the CSV contract.

    MMI atoms and degradedness margins are not part of the CSV, so the
    returned records carry ``atoms_mmi=None`` and NaN margins; everything
    :func:`summarize` consumes round-trips.
    """
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or ",".join(reader.fieldnames) != CSV_HEADER:
            raise GaussPidError(
                f"unexpected CSV header in {path}: {reader.fieldnames}"
            )
        for row in reader:
            atoms_vals = [float(row[k]) for k in ("ui_x", "ui_y", "ri", "si")]
            total = float(row["mi_xy"])
            failed = any(math.isnan(v) for v in atoms_vals)
            atoms = None
            norm = None
            if not failed:
                atoms = PidAtoms(*atoms_vals, total_mi=total, label=PidLabel.DELTA_HAT)
                norm = NormalizedAtoms(
                    ui_x_bar=float(row["ui_x_bar"]),
                    ui_y_bar=float(row["ui_y_bar"]),
                    ri_bar=float(row["ri_bar"]),
                    si_bar=float(row["si_bar"]),
                )
            nan = float("nan")
            deg = DegradednessReport(
                x_over_y=row["x_over_y"] == "true",
                y_over_x=row["y_over_x"] == "true",
                margin_x_over_y=nan,
                margin_y_over_x=nan,
                tolerance_used=nan,
            )
            records.append(
                ExperimentRecord(
                    scheme=row["scheme"],
                    dims=(int(row["dM"]), int(row["dX"]), int(row["dY"])),
                    seed=int(row["seed"]),
                    atoms_mmi=None,
                    atoms_delta_hat=atoms,
                    normalized=norm,
                    degradedness=deg,
                    mi_x=float(row["mi_x"]),
                    mi_y=float(row["mi_y"]),
                    mi_xy=total,
                    solve_ms_xy=float(row["solve_ms_xy"]),
                    solve_ms_yx=float(row["solve_ms_yx"]),
                    converged_xy=row["converged_xy"] == "true",
                    converged_yx=row["converged_yx"] == "true",
                    error="failure row" if failed else None,
                )
            )
    return records
