"""Closed-form MMI decomposition: redundancy is the minimum of the two
mutual informations, and the remaining atoms follow from the PID identities."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import LN2, GaussianSystem, mutual_information

# Atoms in [-ATOM_CLAMP, 0) are rounded up to exactly 0.
ATOM_CLAMP = 1e-10
# |I(M;X) - I(M;Y)| below this counts as a tie; the X branch is taken.
MIN_TIE_TOL = 1e-12


class PidLabel(enum.Enum):
    MMI = "mmi"
    DELTA_HAT = "delta_hat"


@dataclass(frozen=True)
class PidAtoms:
    """One bivariate decomposition: unique, redundant and synergistic
    information in nats, plus the total they must add up to.

    Satisfies ui_x + ri = I(M;X), ui_y + ri = I(M;Y) and
    ui_x + ui_y + ri + si = total_mi = I(M;(X,Y)) by construction.
    """

    ui_x: float
    ui_y: float
    ri: float
    si: float
    total_mi: float
    label: PidLabel

    def as_dict(self) -> dict:
        return {"ui_x": self.ui_x, "ui_y": self.ui_y, "ri": self.ri, "si": self.si}

    def in_bits(self) -> dict:
        return {k: v / LN2 for k, v in self.as_dict().items()}

    def nonnegativity(self, threshold: float = -1e-6) -> dict:
        """Per-atom verdict: True when the atom is above ``threshold``."""
        return {k: bool(v >= threshold) for k, v in self.as_dict().items()}


def _clamp_atom(v: float) -> float:
    return 0.0 if -ATOM_CLAMP <= v < 0.0 else v


def mmi_pid(sys: GaussianSystem) -> PidAtoms:
    """The MMI decomposition of I(M;(X,Y)).

    By construction min(ui_x, ui_y) is exactly 0: the branch with the smaller
    mutual information contributes no unique information.  Ties within 1e-12
    resolve to the X branch (atom values are identical either way).
    """
    i_x = mutual_information(sys, "x")
    i_y = mutual_information(sys, "y")
    i_xy = mutual_information(sys, "xy")

    if i_x <= i_y + MIN_TIE_TOL:
        ri, ui_x, ui_y = i_x, 0.0, i_y - i_x
    else:
        ri, ui_x, ui_y = i_y, i_x - i_y, 0.0
    si = i_xy - i_x - i_y + ri  # = i_xy - ui_x - ui_y - ri

    return PidAtoms(
        ui_x=_clamp_atom(ui_x),
        ui_y=_clamp_atom(ui_y),
        ri=_clamp_atom(ri),
        si=_clamp_atom(si),
        total_mi=i_xy,
        label=PidLabel.MMI,
    )
