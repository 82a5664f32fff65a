"""Rendering contract: golden pixel points, per-scheme outputs, input errors."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from figures import (
    FigureInputError,
    FigureSpec,
    data_to_pixels,
    load_records,
    project_2d,
    render,
    simplex_points_3d,
)

HEADER = (
    "scheme,seed,dM,dX,dY,mi_x,mi_y,mi_xy,ui_x,ui_y,ri,si,"
    "ui_x_bar,ui_y_bar,ri_bar,si_bar,x_over_y,y_over_x,"
    "converged_xy,converged_yx,solve_ms_xy,solve_ms_yx"
)

# Pixel-space positions (origin bottom-left on the 500x450 canvas) of the
# pure-UI_X-vertex, centroid and UI_X-UI_Y-edge-midpoint rows under the
# pinned projection and canvas geometry.
GOLDEN_ROWS = [
    (1.0, 0.0, 0.0, 0.0),
    (0.25, 0.25, 0.25, 0.25),
    (0.5, 0.5, 0.0, 0.0),
]
GOLDEN_PIXELS = [
    (70.345, 66.757),
    (283.228, 220.906),
    (260.000, 66.757),
]


def write_csv(path, rows):
    lines = [HEADER]
    for scheme, atoms in rows:
        bars = ",".join(repr(float(v)) for v in atoms)
        lines.append(
            f"{scheme},0,2,1,1,0.5,0.5,1.0,0.1,0.1,0.4,0.4,{bars},"
            "false,false,true,true,1.0,1.0"
        )
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def four_scheme_csv(tmp_path):
    rng = np.random.default_rng(5)
    rows = []
    for scheme in ("S1", "S2", "S3", "S4"):
        for _ in range(12):
            w = rng.dirichlet(np.ones(4))
            rows.append((scheme, w))
    path = tmp_path / "records.csv"
    write_csv(path, rows)
    return path


class TestGoldenPoints:
    def test_pinned_pixel_coordinates(self):
        px = data_to_pixels(project_2d(simplex_points_3d(np.array(GOLDEN_ROWS))))
        for got, want in zip(px, GOLDEN_PIXELS):
            assert abs(got[0] - want[0]) <= 1.0
            assert abs(got[1] - want[1]) <= 1.0

    def test_manifest_matches_golden(self, tmp_path):
        path = tmp_path / "golden.csv"
        write_csv(path, [("S1", atoms) for atoms in GOLDEN_ROWS])
        render(FigureSpec(str(path), str(tmp_path / "out"), formats=("png",)))
        manifest = json.loads((tmp_path / "out" / "S1_simplex.points.json").read_text())
        assert manifest["canvas_px"] == [500.0, 450.0]
        for got, want in zip(manifest["points_px"], GOLDEN_PIXELS):
            assert abs(got[0] - want[0]) <= 1.0
            assert abs(got[1] - want[1]) <= 1.0

    def test_vertex_order_matches_producer_embedding(self):
        # UI_X at origin, UI_Y at (1,0,0), RI and SI above; unit edge lengths
        verts = simplex_points_3d(np.eye(4))
        for i in range(4):
            for j in range(i + 1, 4):
                assert np.linalg.norm(verts[i] - verts[j]) == pytest.approx(1.0)
        assert np.allclose(verts[0], [0.0, 0.0, 0.0])
        assert np.allclose(verts[1], [1.0, 0.0, 0.0])
        assert verts[3][2] == pytest.approx(math.sqrt(6.0) / 3.0)


class TestRender:
    def test_four_schemes_produce_eight_panels(self, four_scheme_csv, tmp_path):
        out = tmp_path / "figs"
        written = render(FigureSpec(str(four_scheme_csv), str(out), formats=("svg",)))
        simplex = sorted(p.name for p in out.glob("*_simplex.svg"))
        boxes = sorted(p.name for p in out.glob("*_box.svg"))
        assert simplex == [f"S{i}_simplex.svg" for i in (1, 2, 3, 4)]
        assert boxes == [f"S{i}_box.svg" for i in (1, 2, 3, 4)]
        assert len(written) == 12  # 4 simplex + 4 box + 4 manifests

    def test_3d_view(self, four_scheme_csv, tmp_path):
        out = tmp_path / "figs3d"
        render(FigureSpec(str(four_scheme_csv), str(out), formats=("png",), view="3d"))
        assert len(list(out.glob("*_simplex3d.png"))) == 4
        assert len(list(out.glob("*_box.png"))) == 4

    def test_deterministic_svg(self, four_scheme_csv, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        render(FigureSpec(str(four_scheme_csv), str(a)))
        render(FigureSpec(str(four_scheme_csv), str(b)))
        for name in ("S1_simplex.svg", "S3_box.svg"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_counterexample_replicas_land_on_edge_midpoint(self, tmp_path):
        path = tmp_path / "ce.csv"
        write_csv(path, [("S1", (0.5, 0.5, 0.0, 0.0))] * 5)
        render(FigureSpec(str(path), str(tmp_path / "out"), formats=("png",)))
        manifest = json.loads((tmp_path / "out" / "S1_simplex.points.json").read_text())
        for pt in manifest["points_px"]:
            assert abs(pt[0] - GOLDEN_PIXELS[2][0]) <= 1.0
            assert abs(pt[1] - GOLDEN_PIXELS[2][1]) <= 1.0


class TestInputErrors:
    def test_missing_columns_listed(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("scheme,ui_x_bar\nS1,0.5\n")
        with pytest.raises(FigureInputError, match="ui_y_bar"):
            load_records(str(bad))

    def test_empty_csv(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(HEADER + "\n")
        with pytest.raises(FigureInputError, match="no usable data rows"):
            load_records(str(empty))

    def test_nan_failure_rows_skipped(self, tmp_path):
        path = tmp_path / "nan.csv"
        lines = [HEADER]
        lines.append(
            "S1,0,2,1,1,0.5,0.5,1.0,0.1,0.1,0.4,0.4,0.25,0.25,0.25,0.25,"
            "false,false,true,true,1.0,1.0"
        )
        lines.append(
            "S1,1,2,1,1,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,"
            "false,false,false,false,nan,nan"
        )
        path.write_text("\n".join(lines) + "\n")
        by_scheme = load_records(str(path))
        assert by_scheme["S1"].shape == (1, 4)


class TestCli:
    def test_end_to_end(self, four_scheme_csv, tmp_path):
        out = tmp_path / "cli_out"
        proc = subprocess.run(
            [sys.executable, "-m", "figures.cli", "--in", str(four_scheme_csv),
             "--out", str(out), "--format", "svg", "--view", "2d"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert len(list(out.glob("*_simplex.svg"))) == 4

    def test_missing_column_exit_code(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("scheme,ui_x_bar\nS1,0.5\n")
        proc = subprocess.run(
            [sys.executable, "-m", "figures.cli", "--in", str(bad),
             "--out", str(tmp_path / "o")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert "missing required columns" in proc.stderr
