"""Simplex scatters and box-plot panels from a records CSV.

The input is the sampling-harness CSV (one row per sampled system).  For each
scheme present, two figures are produced: normalized decomposition atoms
scattered on the 3-simplex (a fixed oblique projection for the 2-D view, or a
row of rotated 3-D views), and a box-plot panel of the four atoms with
whiskers at 1.5 IQR.  Every transform is pinned (vertex order, projection,
axes limits, canvas geometry), so identical inputs render identical figures,
and each 2-D scatter ships with a sidecar JSON manifest of the plotted
pixel coordinates.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "pid-figures"

import matplotlib.pyplot as plt
import numpy as np

# Vertex order (UI_X, UI_Y, RI, SI) of the unit-edge tetrahedron; must stay in
# lockstep with the producer's simplex embedding (golden-point test pins it).
SIMPLEX_VERTICES = np.array(
    [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, math.sqrt(3.0) / 2.0, 0.0],
        [0.5, math.sqrt(3.0) / 6.0, math.sqrt(6.0) / 3.0],
    ]
)
# Oblique 2-D projection of the embedding: (x, y, z) -> (x + 0.3 z, y + 0.55 z).
PROJ_Z = (0.3, 0.55)
# Pinned canvas geometry for the 2-D scatter.
XLIM = (-0.08, 1.08)
YLIM = (-0.08, 0.95)
FIGSIZE = (5.0, 4.5)
DPI = 100
AXES_RECT = (0.08, 0.08, 0.88, 0.88)

ATOM_COLUMNS = ("ui_x_bar", "ui_y_bar", "ri_bar", "si_bar")
ATOM_LABELS = ("UIx", "UIy", "RI", "SI")
REQUIRED_COLUMNS = ("scheme",) + ATOM_COLUMNS


class FigureInputError(Exception):
    """Unusable input CSV (missing file, missing columns, or no data rows)."""


def _savefig(fig, path: str, fmt: str) -> None:
    # drop the SVG date stamp so identical inputs render identical bytes
    metadata = {"Date": None} if fmt == "svg" else None
    fig.savefig(path, format=fmt, metadata=metadata)


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSV, output directory, formats, and view."""

    input_csv: str
    out_dir: str
    formats: tuple[str, ...] = ("svg",)
    view: str = "2d"

    def __post_init__(self):
        if self.view not in ("2d", "3d"):
            raise ValueError(f"view must be '2d' or '3d', got {self.view!r}")
        for fmt in self.formats:
            if fmt not in ("svg", "png"):
                raise ValueError(f"format must be 'svg' or 'png', got {fmt!r}")


def simplex_points_3d(atoms: np.ndarray) -> np.ndarray:
    """Barycentric embedding of (n, 4) normalized atoms into the tetrahedron."""
    return np.asarray(atoms, dtype=float) @ SIMPLEX_VERTICES


def project_2d(points3d: np.ndarray) -> np.ndarray:
    """The fixed oblique projection used by the 2-D view."""
    p = np.asarray(points3d, dtype=float)
    u = p[:, 0] + PROJ_Z[0] * p[:, 2]
    v = p[:, 1] + PROJ_Z[1] * p[:, 2]
    return np.column_stack([u, v])


def data_to_pixels(uv: np.ndarray) -> np.ndarray:
    """Pixel coordinates (origin bottom-left) of 2-D data points under the
    pinned canvas geometry."""
    uv = np.asarray(uv, dtype=float)
    width, height = FIGSIZE[0] * DPI, FIGSIZE[1] * DPI
    x0, y0, w, h = AXES_RECT
    px = (x0 + w * (uv[:, 0] - XLIM[0]) / (XLIM[1] - XLIM[0])) * width
    py = (y0 + h * (uv[:, 1] - YLIM[0]) / (YLIM[1] - YLIM[0])) * height
    return np.column_stack([px, py])


def load_records(path: str) -> dict[str, np.ndarray]:
    """Read the CSV and group the normalized atoms by scheme."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise FigureInputError(f"cannot read {path}: {exc}")
    with fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in names]
        if missing:
            raise FigureInputError(
                f"{path} is missing required columns: {', '.join(missing)}"
            )
        by_scheme: dict[str, list[list[float]]] = {}
        for row in reader:
            try:
                atoms = [float(row[c]) for c in ATOM_COLUMNS]
            except (ValueError, TypeError):
                raise FigureInputError(f"{path}: non-numeric atom values in row {row}")
            if any(math.isnan(a) for a in atoms):
                continue  # failure rows carry NaNs; skip them
            by_scheme.setdefault(row["scheme"], []).append(atoms)
    if not by_scheme:
        raise FigureInputError(f"{path} contains no usable data rows")
    return {k: np.array(v) for k, v in sorted(by_scheme.items())}


def _render_simplex_2d(scheme: str, atoms: np.ndarray, out_dir: str,
                       formats: tuple[str, ...]) -> list[str]:
    uv = project_2d(simplex_points_3d(atoms))
    fig = plt.figure(figsize=FIGSIZE, dpi=DPI)
    ax = fig.add_axes(AXES_RECT)
    ax.set_xlim(*XLIM)
    ax.set_ylim(*YLIM)
    ax.set_aspect("auto")
    ax.axis("off")

    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    verts_uv = project_2d(SIMPLEX_VERTICES)
    for i, j in edges:
        ax.plot(*zip(verts_uv[i], verts_uv[j]), color="0.6", lw=0.8, zorder=1)
    for label, (u, v) in zip(ATOM_LABELS, verts_uv):
        ax.annotate(label, (u, v), textcoords="offset points", xytext=(4, 4), fontsize=9)
    ax.scatter(uv[:, 0], uv[:, 1], s=6, alpha=0.5, color="tab:blue", zorder=2)
    ax.set_title(f"{scheme}: normalized atoms on the 3-simplex")

    written = []
    for fmt in formats:
        path = os.path.join(out_dir, f"{scheme}_simplex.{fmt}")
        _savefig(fig, path, fmt)
        written.append(path)
    plt.close(fig)

    manifest = {
        "scheme": scheme,
        "canvas_px": [FIGSIZE[0] * DPI, FIGSIZE[1] * DPI],
        "pixel_origin": "bottom-left",
        "points_px": [[round(a, 3) for a in pt] for pt in data_to_pixels(uv)],
    }
    manifest_path = os.path.join(out_dir, f"{scheme}_simplex.points.json")
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=1)
    written.append(manifest_path)
    return written


def _render_simplex_3d(scheme: str, atoms: np.ndarray, out_dir: str,
                       formats: tuple[str, ...]) -> list[str]:
    pts = simplex_points_3d(atoms)
    views = ((20, -60), (20, 0), (20, 60))
    fig = plt.figure(figsize=(FIGSIZE[0] * len(views), FIGSIZE[1]), dpi=DPI)
    for k, (elev, azim) in enumerate(views, start=1):
        ax = fig.add_subplot(1, len(views), k, projection="3d")
        for i, j in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
            seg = SIMPLEX_VERTICES[[i, j]]
            ax.plot(seg[:, 0], seg[:, 1], seg[:, 2], color="0.6", lw=0.8)
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=5, alpha=0.5, color="tab:blue")
        for label, (x, y, z) in zip(ATOM_LABELS, SIMPLEX_VERTICES):
            ax.text(x, y, z, label, fontsize=8)
        ax.view_init(elev=elev, azim=azim)
        ax.set_axis_off()
    fig.suptitle(f"{scheme}: rotated simplex views")

    written = []
    for fmt in formats:
        path = os.path.join(out_dir, f"{scheme}_simplex3d.{fmt}")
        _savefig(fig, path, fmt)
        written.append(path)
    plt.close(fig)
    return written


def _render_box(scheme: str, atoms: np.ndarray, out_dir: str,
                formats: tuple[str, ...]) -> list[str]:
    fig = plt.figure(figsize=FIGSIZE, dpi=DPI)
    ax = fig.add_axes((0.12, 0.10, 0.84, 0.82))
    ax.boxplot(
        [atoms[:, i] for i in range(4)],
        tick_labels=list(ATOM_LABELS),
        whis=1.5,
        showfliers=True,
        flierprops={"markersize": 2, "alpha": 0.4},
    )
    ax.set_ylabel("fraction of total mutual information")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title(f"{scheme}: atom prevalence")
    written = []
    for fmt in formats:
        path = os.path.join(out_dir, f"{scheme}_box.{fmt}")
        _savefig(fig, path, fmt)
        written.append(path)
    plt.close(fig)
    return written


def render(spec: FigureSpec) -> list[str]:
    """Render one simplex scatter and one box-plot panel per scheme.

    Returns the list of files written.
    """
    by_scheme = load_records(spec.input_csv)
    os.makedirs(spec.out_dir, exist_ok=True)
    written: list[str] = []
    for scheme, atoms in by_scheme.items():
        if spec.view == "2d":
            written += _render_simplex_2d(scheme, atoms, spec.out_dir, spec.formats)
        else:
            written += _render_simplex_3d(scheme, atoms, spec.out_dir, spec.formats)
        written += _render_box(scheme, atoms, spec.out_dir, spec.formats)
    return written
