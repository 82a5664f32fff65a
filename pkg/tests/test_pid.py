"""Deficiency-based decomposition assembly, normalization, simplex embedding."""

import math

import numpy as np
import pytest

from gausspid import (
    PidAtoms,
    PidLabel,
    channel_form,
    check_degraded,
    delta_hat_pid,
    mmi_pid,
    mutual_information,
    normalize,
    simplex_coords,
    whiten,
)
from gausspid.exceptions import DegenerateTotalMI

from conftest import random_system, system_from_channels

LN2 = math.log(2.0)


def test_counterexample_atoms(counterexample):
    result = delta_hat_pid(counterexample)
    atoms = result.atoms
    assert atoms.label is PidLabel.DELTA_HAT
    assert atoms.ui_x == pytest.approx(0.5 * LN2, abs=1e-9)
    assert atoms.ui_y == pytest.approx(0.5 * LN2, abs=1e-9)
    assert atoms.ri == pytest.approx(0.0, abs=1e-9)
    assert atoms.si == pytest.approx(0.0, abs=1e-9)
    assert result.converged


def test_scalar_degraded_system():
    # ht_x = 2, ht_y = 1 with unit noise: Y is a degraded view of X.
    sys = system_from_channels(
        sigma_m=[[1.0]],
        h_x=[[2.0]],
        sigma_x_given_m=[[1.0]],
        h_y=[[1.0]],
        sigma_y_given_m=[[1.0]],
    )
    result = delta_hat_pid(sys)
    atoms = result.atoms
    mi_x = mutual_information(sys, "x")
    mi_y = mutual_information(sys, "y")
    assert mi_y == pytest.approx(0.5 * LN2, abs=1e-12)
    assert result.y_from_x.delta_hat == pytest.approx(0.0, abs=1e-9)
    assert atoms.ui_y == pytest.approx(0.0, abs=1e-9)
    assert atoms.ri == pytest.approx(mi_y, abs=1e-9)
    assert atoms.ui_x == pytest.approx(mi_x - mi_y, abs=1e-9)


def test_duplicated_block_fully_redundant():
    rng = np.random.default_rng(81)
    h = rng.standard_normal((2, 2))
    sys = system_from_channels(
        sigma_m=np.eye(2),
        h_x=h,
        sigma_x_given_m=np.eye(2),
        h_y=h,
        sigma_y_given_m=(1.0 + 1e-8) * np.eye(2),
        cross_noise=np.eye(2),
    )
    atoms = delta_hat_pid(sys).atoms
    mi_x = mutual_information(sys, "x")
    assert atoms.ui_x == pytest.approx(0.0, abs=1e-6)
    assert atoms.ui_y == pytest.approx(0.0, abs=1e-6)
    assert atoms.ri == pytest.approx(mi_x, abs=1e-6)
    assert atoms.si == pytest.approx(0.0, abs=1e-6)


def test_identity_closure_and_mmi_dominance():
    rng = np.random.default_rng(82)
    for _ in range(15):
        dims = tuple(int(v) for v in rng.integers(1, 5, size=3))
        sys = random_system(rng, dims)
        dh = delta_hat_pid(sys).atoms
        mm = mmi_pid(sys)
        mi_x = mutual_information(sys, "x")
        mi_y = mutual_information(sys, "y")
        assert dh.ui_x + dh.ri == pytest.approx(mi_x, abs=1e-9)
        assert dh.ui_y + dh.ri == pytest.approx(mi_y, abs=1e-9)
        assert dh.ui_x + dh.ui_y + dh.ri + dh.si == pytest.approx(dh.total_mi, abs=1e-9)
        assert dh.ri <= mm.ri + 1e-6
        assert dh.ui_x >= mm.ui_x - 1e-6
        assert dh.ui_y >= mm.ui_y - 1e-6


def test_swap_symmetry():
    rng = np.random.default_rng(83)
    for _ in range(6):
        sys = random_system(rng, (2, 2, 3))
        a = delta_hat_pid(sys).atoms
        b = delta_hat_pid(sys.swap_xy()).atoms
        assert b.ui_x == pytest.approx(a.ui_y, abs=1e-6)
        assert b.ui_y == pytest.approx(a.ui_x, abs=1e-6)
        assert b.ri == pytest.approx(a.ri, abs=1e-6)
        assert b.si == pytest.approx(a.si, abs=1e-6)


def test_degraded_reduces_to_mmi():
    rng = np.random.default_rng(84)
    for _ in range(10):
        d_m = int(rng.integers(1, 4))
        d_x = int(rng.integers(1, 4))
        d_y = int(rng.integers(1, 4))
        h_x = rng.standard_normal((d_x, d_m))
        t = rng.standard_normal((d_y, d_x))
        t /= max(1.0, np.linalg.norm(t, 2)) * (1.0 + 1e-9)
        sys = system_from_channels(
            sigma_m=np.eye(d_m),
            h_x=h_x,
            sigma_x_given_m=np.eye(d_x),
            h_y=t @ h_x,
            sigma_y_given_m=np.eye(d_y),
        )
        assert check_degraded(whiten(channel_form(sys))).x_over_y
        dh = delta_hat_pid(sys).atoms
        mm = mmi_pid(sys)
        for key in ("ui_x", "ui_y", "ri", "si"):
            assert getattr(dh, key) == pytest.approx(getattr(mm, key), abs=1e-6)


def test_scalar_message_reduction():
    rng = np.random.default_rng(85)
    for _ in range(15):
        dims = (1, int(rng.integers(1, 8)), int(rng.integers(1, 8)))
        sys = random_system(rng, dims)
        atoms = delta_hat_pid(sys).atoms
        assert min(atoms.ui_x, atoms.ui_y) <= 1e-6 * atoms.total_mi


def test_normalize_counterexample(counterexample):
    atoms = delta_hat_pid(counterexample).atoms
    n = normalize(atoms)
    assert n.ui_x_bar == pytest.approx(0.5, abs=1e-9)
    assert n.ui_y_bar == pytest.approx(0.5, abs=1e-9)
    assert n.ri_bar == pytest.approx(0.0, abs=1e-9)
    assert n.si_bar == pytest.approx(0.0, abs=1e-9)


def test_normalize_sums_to_one():
    rng = np.random.default_rng(86)
    for _ in range(10):
        dims = tuple(int(v) for v in rng.integers(1, 5, size=3))
        n = normalize(delta_hat_pid(random_system(rng, dims)).atoms)
        total = n.ui_x_bar + n.ui_y_bar + n.ri_bar + n.si_bar
        assert total == pytest.approx(1.0, abs=1e-9)
        assert all(-1e-6 <= v <= 1.0 + 1e-6 for v in n.as_array())


def test_normalize_degenerate_total():
    atoms = PidAtoms(0.0, 0.0, 0.0, 0.0, total_mi=1e-13, label=PidLabel.DELTA_HAT)
    with pytest.raises(DegenerateTotalMI):
        normalize(atoms)


class TestSimplexCoords:
    def test_pure_vertex(self):
        from gausspid.pid import SIMPLEX_VERTICES, NormalizedAtoms

        n = NormalizedAtoms(1.0, 0.0, 0.0, 0.0)
        assert np.allclose(simplex_coords(n), SIMPLEX_VERTICES[0])

    def test_centroid(self):
        from gausspid.pid import SIMPLEX_VERTICES, NormalizedAtoms

        n = NormalizedAtoms(0.25, 0.25, 0.25, 0.25)
        assert np.allclose(simplex_coords(n), SIMPLEX_VERTICES.mean(axis=0))

    def test_edge_midpoint(self):
        from gausspid.pid import NormalizedAtoms

        n = NormalizedAtoms(0.5, 0.5, 0.0, 0.0)
        assert np.allclose(simplex_coords(n), [0.5, 0.0, 0.0])
