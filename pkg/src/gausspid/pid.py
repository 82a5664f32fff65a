"""Assembly of the deficiency-based decomposition and normalized atoms.

Redundancy is the symmetrized quantity
min{I(M;X) - delta_hat(M:X\\Y), I(M;Y) - delta_hat(M:Y\\X)}; unique and
synergistic atoms then follow from the PID identities.  Atoms are reported
unclamped (nonnegativity of this decomposition is an empirical finding, not a
theorem) with a per-atom verdict available via
:meth:`gausspid.mmi.PidAtoms.nonnegativity`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GaussianSystem, channel_form, mutual_information, whiten
from .deficiency import (
    X_FROM_Y,
    Y_FROM_X,
    DeficiencyResult,
    SolverConfig,
    approximate_deficiency,
)
from .exceptions import DegenerateTotalMI
from .mmi import MIN_TIE_TOL, PidAtoms, PidLabel

# An atom counts as "has unique information" above this fraction of total MI.
UNIQUE_RTOL = 1e-6
# Total MI at or below this is too degenerate to normalize.
TOTAL_MI_FLOOR = 1e-12

# Vertex order (UI_X, UI_Y, RI, SI) of the unit-edge tetrahedron used for all
# simplex embeddings; the figures package pins the same three golden points.
SIMPLEX_VERTICES = np.array(
    [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, math.sqrt(3.0) / 2.0, 0.0],
        [0.5, math.sqrt(3.0) / 6.0, math.sqrt(6.0) / 3.0],
    ]
)


@dataclass(frozen=True)
class NormalizedAtoms:
    """Atoms divided by total mutual information; they sum to 1."""

    ui_x_bar: float
    ui_y_bar: float
    ri_bar: float
    si_bar: float

    def as_dict(self) -> dict:
        return {
            "ui_x_bar": self.ui_x_bar,
            "ui_y_bar": self.ui_y_bar,
            "ri_bar": self.ri_bar,
            "si_bar": self.si_bar,
        }

    def as_array(self) -> np.ndarray:
        return np.array([self.ui_x_bar, self.ui_y_bar, self.ri_bar, self.si_bar])


@dataclass(frozen=True)
class DeltaHatPid:
    """Deficiency-based decomposition plus both directional solver results."""

    atoms: PidAtoms
    y_from_x: DeficiencyResult
    x_from_y: DeficiencyResult

    @property
    def converged(self) -> bool:
        return self.y_from_x.converged and self.x_from_y.converged


def delta_hat_pid(sys: GaussianSystem, cfg: SolverConfig = SolverConfig()) -> DeltaHatPid:
    """Compute the deficiency-based decomposition of I(M;(X,Y)).

    Both directional programs are solved; solver state (convergence flags,
    residuals, timings) is carried in the returned results.  Ties in the
    redundancy minimum resolve to the X branch, which does not change atom
    values.
    """
    i_x = mutual_information(sys, "x")
    i_y = mutual_information(sys, "y")
    i_xy = mutual_information(sys, "xy")

    wc = whiten(channel_form(sys))
    res_yx = approximate_deficiency(wc, Y_FROM_X, cfg)
    res_xy = approximate_deficiency(wc, X_FROM_Y, cfg)

    branch_x = i_x - res_xy.delta_hat  # I(M;X) - delta_hat(M : X \ Y)
    branch_y = i_y - res_yx.delta_hat  # I(M;Y) - delta_hat(M : Y \ X)
    ri = branch_x if branch_x <= branch_y + MIN_TIE_TOL else branch_y
    ui_x = i_x - ri
    ui_y = i_y - ri
    si = i_xy - ui_x - ui_y - ri

    atoms = PidAtoms(
        ui_x=ui_x, ui_y=ui_y, ri=ri, si=si, total_mi=i_xy, label=PidLabel.DELTA_HAT
    )
    return DeltaHatPid(atoms=atoms, y_from_x=res_yx, x_from_y=res_xy)


def normalize(atoms: PidAtoms) -> NormalizedAtoms:
    """Divide each atom by the total mutual information."""
    if not atoms.total_mi > TOTAL_MI_FLOOR:
        raise DegenerateTotalMI(
            f"total mutual information {atoms.total_mi:.3e} is at or below "
            f"{TOTAL_MI_FLOOR:.0e} nats"
        )
    t = atoms.total_mi
    return NormalizedAtoms(
        ui_x_bar=atoms.ui_x / t,
        ui_y_bar=atoms.ui_y / t,
        ri_bar=atoms.ri / t,
        si_bar=atoms.si / t,
    )


def simplex_coords(n: NormalizedAtoms) -> np.ndarray:
    """Barycentric embedding of normalized atoms into the reference
    tetrahedron, vertex order (UI_X, UI_Y, RI, SI)."""
    return n.as_array() @ SIMPLEX_VERTICES


def has_unique_information(atom_value: float, total_mi: float) -> bool:
    """Scale-free uniqueness predicate: atom exceeds 1e-6 of total MI."""
    return atom_value > UNIQUE_RTOL * total_mi
