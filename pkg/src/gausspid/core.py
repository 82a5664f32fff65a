"""Gaussian system ingestion, channel extraction, whitening, and closed-form
information quantities.

A joint zero-mean Gaussian over (M, X, Y) is fully described by its covariance
matrix together with the block dimensions (d_M, d_X, d_Y); blocks are laid out
in the fixed order [M | X | Y].  All information quantities are returned in
nats.  Every function here is pure and the returned arrays are marked
read-only, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    AsymmetryTooLarge,
    DimensionMismatch,
    NotPositiveDefinite,
    SingularConditional,
    SingularCovariance,
    SingularNoise,
)

# Relative tolerance below which asymmetric input is silently symmetrized.
SYMMETRY_RTOL = 1e-8
# A covariance is accepted as PD when its smallest eigenvalue exceeds
# 1e-10 * (trace / dim).
PD_RTOL = 1e-10
# Eigenvalues of a noise covariance below this absolute floor abort whitening.
WHITEN_EIG_FLOOR = 1e-12
# Results in [-MI_CLAMP, 0) are rounded up to exactly 0.
MI_CLAMP = 1e-10

LN2 = math.log(2.0)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _logdet_pd(a: np.ndarray) -> float:
    """log det of a symmetric PD matrix via Cholesky, falling back to a
    symmetric eigendecomposition.  Raises ValueError if not PD."""
    try:
        chol = np.linalg.cholesky(a)
        return 2.0 * float(np.sum(np.log(np.diag(chol))))
    except np.linalg.LinAlgError:
        w = np.linalg.eigvalsh(a)
        if w[0] <= 0.0:
            raise ValueError("matrix is not positive definite")
        return float(np.sum(np.log(w)))


def _min_eig(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(_symmetrize(a))[0])


def inv_sqrt_pd(a: np.ndarray, floor: float = WHITEN_EIG_FLOOR) -> np.ndarray:
    """Inverse square root of a symmetric PD matrix by eigendecomposition.

    Eigenvalues below ``floor`` raise ValueError rather than being clamped.
    """
    w, v = np.linalg.eigh(_symmetrize(a))
    if w[0] < floor:
        raise ValueError(f"eigenvalue {w[0]:.3e} below floor {floor:.1e}")
    return (v / np.sqrt(w)) @ v.T


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root; tiny negative eigenvalues are treated as 0."""
    w, v = np.linalg.eigh(_symmetrize(a))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


@dataclass(frozen=True)
class GaussianSystem:
    """Joint covariance of (M, X, Y) plus block dimensions.

    ``sigma`` is symmetric positive definite, blocks ordered [M | X | Y].
    Construct through :func:`validate_system`, which enforces the invariants.
    """

    sigma: np.ndarray
    dims: tuple[int, int, int]

    @property
    def d_m(self) -> int:
        return self.dims[0]

    @property
    def d_x(self) -> int:
        return self.dims[1]

    @property
    def d_y(self) -> int:
        return self.dims[2]

    @property
    def d(self) -> int:
        return sum(self.dims)

    def _slice(self, sel: str) -> slice:
        d_m, d_x, d_y = self.dims
        return {
            "m": slice(0, d_m),
            "x": slice(d_m, d_m + d_x),
            "y": slice(d_m + d_x, d_m + d_x + d_y),
            "xy": slice(d_m, d_m + d_x + d_y),
        }[sel]

    def block(self, rows: str, cols: str) -> np.ndarray:
        """Covariance block for the named row/column selectors
        ('m', 'x', 'y' or 'xy')."""
        return self.sigma[self._slice(rows), self._slice(cols)]

    def swap_xy(self) -> "GaussianSystem":
        """The same joint distribution with the roles of X and Y exchanged."""
        d_m, d_x, d_y = self.dims
        order = np.r_[np.arange(d_m), np.arange(d_m + d_x, self.d), np.arange(d_m, d_m + d_x)]
        sigma = self.sigma[np.ix_(order, order)]
        return GaussianSystem(_readonly(sigma), (d_m, d_y, d_x))


@dataclass(frozen=True)
class ChannelForm:
    """Channel parameterization of a Gaussian system: prior covariance of M,
    channel gains, and conditional noise covariances for X|M and Y|M."""

    sigma_m: np.ndarray
    h_x: np.ndarray
    h_y: np.ndarray
    sigma_x_given_m: np.ndarray
    sigma_y_given_m: np.ndarray


@dataclass(frozen=True)
class WhitenedChannels:
    """Channel gains after whitening, so both noise covariances are identity."""

    sigma_m: np.ndarray
    ht_x: np.ndarray
    ht_y: np.ndarray

    @property
    def d_m(self) -> int:
        return self.sigma_m.shape[0]

    @property
    def d_x(self) -> int:
        return self.ht_x.shape[0]

    @property
    def d_y(self) -> int:
        return self.ht_y.shape[0]


def validate_system(raw_matrix, dims) -> GaussianSystem:
    """Validate a raw covariance against the declared block dimensions.

    Mildly asymmetric input (relative asymmetry <= 1e-8) is symmetrized as
    (A + A')/2; larger asymmetry raises :class:`AsymmetryTooLarge`.  The
    symmetrized matrix must be positive definite with smallest eigenvalue
    above ``1e-10 * trace/d``.
    """
    a = np.asarray(raw_matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"covariance must be square, got shape {a.shape}")
    try:
        d_m, d_x, d_y = (int(v) for v in dims)
    except (TypeError, ValueError):
        raise DimensionMismatch(f"dims must be three integers, got {dims!r}")
    if min(d_m, d_x, d_y) < 1:
        raise DimensionMismatch(f"dims must be positive, got {(d_m, d_x, d_y)}")
    d = d_m + d_x + d_y
    if a.shape[0] != d:
        raise DimensionMismatch(
            f"covariance is {a.shape[0]}x{a.shape[0]} but dims {(d_m, d_x, d_y)} require {d}x{d}"
        )

    scale = float(np.max(np.abs(a))) if a.size else 0.0
    asym = float(np.max(np.abs(a - a.T)))
    if scale > 0.0 and asym > SYMMETRY_RTOL * scale:
        raise AsymmetryTooLarge(
            f"relative asymmetry {asym / scale:.3e} exceeds {SYMMETRY_RTOL:.1e}"
        )
    sym = _symmetrize(a)

    w_min = float(np.linalg.eigvalsh(sym)[0])
    pd_floor = PD_RTOL * (float(np.trace(sym)) / d)
    if not (w_min > pd_floor):
        raise NotPositiveDefinite(
            f"smallest eigenvalue {w_min:.6e} is not above {pd_floor:.3e}",
            smallest_eigenvalue=w_min,
        )
    return GaussianSystem(_readonly(sym), (d_m, d_x, d_y))


def _conditional_noise(sigma_z: np.ndarray, gain: np.ndarray, sigma_mz: np.ndarray) -> np.ndarray:
    # Sigma_{Z|M} = Sigma_Z - H_Z Sigma_MZ  with H_Z = Sigma_ZM Sigma_M^{-1}
    return _symmetrize(sigma_z - gain @ sigma_mz)


def channel_form(sys: GaussianSystem, ridge_jitter: bool = False) -> ChannelForm:
    """Extract the channel parameterization (gains and conditional noises)
    from the joint covariance by Gaussian conditioning.

    With ``ridge_jitter`` enabled, a noise covariance failing the PD check is
    regularized by ``1e-8 * (trace/dim) * I`` before re-checking; by default
    the failure raises :class:`SingularNoise`.
    """
    sigma_m = sys.block("m", "m")
    chol_m = np.linalg.cholesky(sigma_m)

    def solve_m(rhs: np.ndarray) -> np.ndarray:
        y = np.linalg.solve(chol_m, rhs)
        return np.linalg.solve(chol_m.T, y)

    out = {}
    for name in ("x", "y"):
        sigma_mz = sys.block("m", name)
        gain = solve_m(sigma_mz).T  # H_Z = Sigma_ZM Sigma_M^{-1}
        noise = _conditional_noise(sys.block(name, name), gain, sigma_mz)
        dim = noise.shape[0]
        floor = PD_RTOL * (float(np.trace(noise)) / dim)
        if _min_eig(noise) <= floor:
            if ridge_jitter:
                noise = noise + (1e-8 * float(np.trace(noise)) / dim) * np.eye(dim)
            if _min_eig(noise) <= floor:
                raise SingularNoise(
                    f"conditional noise covariance of {name.upper()}|M is numerically "
                    f"singular (smallest eigenvalue <= {floor:.3e}); the full-rank "
                    "assumption is violated -- consider the --ridge-jitter CLI flag"
                )
        out[name] = (gain, noise)

    return ChannelForm(
        sigma_m=_readonly(sigma_m),
        h_x=_readonly(out["x"][0]),
        h_y=_readonly(out["y"][0]),
        sigma_x_given_m=_readonly(out["x"][1]),
        sigma_y_given_m=_readonly(out["y"][1]),
    )


def whiten(cf: ChannelForm) -> WhitenedChannels:
    """Apply the whitening transform, mapping each gain H to
    Sigma_{.|M}^{-1/2} H so both conditional noise covariances become I."""
    try:
        ht_x = inv_sqrt_pd(cf.sigma_x_given_m) @ cf.h_x
    except ValueError as exc:
        raise SingularNoise(f"cannot whiten X|M noise: {exc}")
    try:
        ht_y = inv_sqrt_pd(cf.sigma_y_given_m) @ cf.h_y
    except ValueError as exc:
        raise SingularNoise(f"cannot whiten Y|M noise: {exc}")
    return WhitenedChannels(
        sigma_m=_readonly(cf.sigma_m),
        ht_x=_readonly(ht_x),
        ht_y=_readonly(ht_y),
    )


def mutual_information(sys: GaussianSystem, source: str) -> float:
    """I(M; Z) in nats for Z in {'x', 'y', 'xy'}.

    Computed as 0.5 * [logdet(Sigma_M) - logdet(Sigma_M - Sigma_MZ
    Sigma_Z^{-1} Sigma_MZ')] via log-determinants of triangular/eigen
    factors.  Values in [-1e-10, 0) are clamped to exactly 0.
    """
    source = source.lower()
    if source not in ("x", "y", "xy"):
        raise ValueError(f"source must be one of 'x', 'y', 'xy', got {source!r}")
    sigma_m = sys.block("m", "m")
    sigma_mz = sys.block("m", source)
    sigma_z = sys.block(source, source)

    chol_z = np.linalg.cholesky(sigma_z)
    half = np.linalg.solve(chol_z, sigma_mz.T)  # L^{-1} Sigma_ZM
    cond = _symmetrize(sigma_m - half.T @ half)

    logdet_m = _logdet_pd(sigma_m)
    try:
        logdet_cond = _logdet_pd(cond)
    except ValueError:
        raise SingularConditional(
            f"Sigma_M|{source.upper()} is numerically singular; I(M;{source.upper()}) "
            "is not finite (full-rank noise assumption violated)"
        )
    mi = 0.5 * (logdet_m - logdet_cond)
    if -MI_CLAMP <= mi < 0.0:
        mi = 0.0
    return float(mi)


def kl_mvn(mean1, cov1, mean2, cov2) -> float:
    """KL divergence D(N(mean1, cov1) || N(mean2, cov2)) in nats:

        0.5 * [logdet(S2) - logdet(S1) - n + Tr(S2^{-1} S1) + |m1-m2|^2_{S2}]
    """
    m1 = np.atleast_1d(np.asarray(mean1, dtype=float))
    m2 = np.atleast_1d(np.asarray(mean2, dtype=float))
    s1 = np.atleast_2d(np.asarray(cov1, dtype=float))
    s2 = np.atleast_2d(np.asarray(cov2, dtype=float))
    n = m1.shape[0]
    if m2.shape[0] != n or s1.shape != (n, n) or s2.shape != (n, n):
        raise DimensionMismatch(
            f"inconsistent shapes: means {m1.shape}/{m2.shape}, covs {s1.shape}/{s2.shape}"
        )
    try:
        logdet1 = _logdet_pd(_symmetrize(s1))
        chol2 = np.linalg.cholesky(_symmetrize(s2))
    except (ValueError, np.linalg.LinAlgError):
        raise SingularCovariance("covariance arguments must be positive definite")
    logdet2 = 2.0 * float(np.sum(np.log(np.diag(chol2))))

    half_s1 = np.linalg.solve(chol2, s1)
    trace_term = float(np.trace(np.linalg.solve(chol2.T, half_s1)))
    diff = np.linalg.solve(chol2, m1 - m2)
    maha = float(diff @ diff)

    kl = 0.5 * (logdet2 - logdet1 - n + trace_term + maha)
    if -MI_CLAMP <= kl < 0.0:
        kl = 0.0
    return float(kl)
