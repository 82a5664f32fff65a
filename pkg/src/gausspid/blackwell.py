"""Blackwell sufficiency / stochastic degradedness between the two channels.

For whitened gains, X is Blackwell sufficient for Y about M exactly when the
Gram ordering ht_x' ht_x >= ht_y' ht_y holds in the PSD sense.  The report
carries graded margins (smallest eigenvalues of the Gram differences) so
borderline systems can be inspected rather than just flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import WhitenedChannels, _symmetrize
from .exceptions import NotDegraded, WitnessVerificationFailed

# Directions for degradation witnesses.
X_OVER_Y = "x_over_y"
Y_OVER_X = "y_over_x"

# |margin| below tolerance is reported as degraded (the ordering is non-strict).
REPORT_RTOL = 1e-9
# Singular values below 1e-10 * sigma_max are dropped in the pseudoinverse.
PINV_RCOND = 1e-10
WITNESS_RESIDUAL_RTOL = 1e-6
WITNESS_CONTRACTION_TOL = 1e-8


@dataclass(frozen=True)
class DegradednessReport:
    """Outcome of the PSD-ordering test in both directions.

    ``margin_x_over_y`` is the smallest eigenvalue of ht_x' ht_x - ht_y' ht_y
    (and symmetrically for the other direction); a direction is flagged
    degraded when its margin is >= -tolerance_used.  Both flags may hold
    simultaneously (equal Grams) or neither may hold (indefinite difference).
    """

    x_over_y: bool
    y_over_x: bool
    margin_x_over_y: float
    margin_y_over_x: float
    tolerance_used: float


def check_degraded(wc: WhitenedChannels) -> DegradednessReport:
    """Decide stochastic degradedness in both directions from whitened gains."""
    gram_x = _symmetrize(wc.ht_x.T @ wc.ht_x)
    gram_y = _symmetrize(wc.ht_y.T @ wc.ht_y)
    diff_eigs = np.linalg.eigvalsh(gram_x - gram_y)
    margin_xy = float(diff_eigs[0])
    margin_yx = float(-diff_eigs[-1])

    norm_x = float(np.linalg.eigvalsh(gram_x)[-1]) if gram_x.size else 0.0
    norm_y = float(np.linalg.eigvalsh(gram_y)[-1]) if gram_y.size else 0.0
    tol = REPORT_RTOL * max(norm_x, norm_y, 1.0)

    return DegradednessReport(
        x_over_y=margin_xy >= -tol,
        y_over_x=margin_yx >= -tol,
        margin_x_over_y=margin_xy,
        margin_y_over_x=margin_yx,
        tolerance_used=tol,
    )


def degradation_witness(wc: WhitenedChannels, direction: str) -> np.ndarray:
    """Construct the least-norm degrading map T for a confirmed direction.

    For ``x_over_y`` the witness satisfies T ht_x = ht_y and T T' <= I, so the
    channel y' = T x + N(0, I - TT') composed with X|M reproduces Y|M.  The
    map is built with a cutoff pseudoinverse and verified numerically; failed
    verification signals ill-conditioning, not a wrong ordering.
    """
    if direction not in (X_OVER_Y, Y_OVER_X):
        raise ValueError(f"direction must be {X_OVER_Y!r} or {Y_OVER_X!r}, got {direction!r}")
    report = check_degraded(wc)
    holds = report.x_over_y if direction == X_OVER_Y else report.y_over_x
    if not holds:
        raise NotDegraded(f"requested direction {direction} does not hold: {report}")

    source, target = (
        (wc.ht_x, wc.ht_y) if direction == X_OVER_Y else (wc.ht_y, wc.ht_x)
    )
    witness = target @ np.linalg.pinv(source, rcond=PINV_RCOND)

    target_norm = float(np.linalg.norm(target))
    residual = float(np.linalg.norm(witness @ source - target))
    if residual > WITNESS_RESIDUAL_RTOL * max(target_norm, 1e-300):
        raise WitnessVerificationFailed(
            f"witness residual {residual:.3e} exceeds "
            f"{WITNESS_RESIDUAL_RTOL:.1e} * |target| = {WITNESS_RESIDUAL_RTOL * target_norm:.3e}"
        )
    contraction = np.eye(witness.shape[0]) - witness @ witness.T
    min_eig = float(np.linalg.eigvalsh(_symmetrize(contraction))[0])
    if min_eig < -WITNESS_CONTRACTION_TOL:
        raise WitnessVerificationFailed(
            f"I - TT' has eigenvalue {min_eig:.3e} below -{WITNESS_CONTRACTION_TOL:.1e}"
        )
    return witness
