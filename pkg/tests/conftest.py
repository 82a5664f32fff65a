"""Shared builders for test systems."""

import numpy as np
import pytest

from gausspid import GaussianSystem, validate_system


def counterexample_sigma() -> np.ndarray:
    """Joint covariance of M=[M1,M2], X=M1+Z1, Y=M2+Z2 (all iid N(0,1))."""
    return np.array(
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 2.0, 0.0],
            [0.0, 1.0, 0.0, 2.0],
        ]
    )


@pytest.fixture
def counterexample() -> GaussianSystem:
    return validate_system(counterexample_sigma(), (2, 1, 1))


def random_pd(rng: np.random.Generator, n: int, extra_dof: int = 3) -> np.ndarray:
    """Well-conditioned random PD matrix (Gram of an n x (n+extra_dof) block)."""
    g = rng.standard_normal((n, n + extra_dof))
    return g @ g.T / (n + extra_dof)


def random_system(rng: np.random.Generator, dims, extra_dof: int = 3) -> GaussianSystem:
    d = sum(dims)
    return validate_system(random_pd(rng, d, extra_dof) * d, dims)


def system_from_channels(sigma_m, h_x, sigma_x_given_m, h_y, sigma_y_given_m,
                         cross_noise=None) -> GaussianSystem:
    """Assemble the joint covariance from channel parts.

    X = H_X M + N_X and Y = H_Y M + N_Y with Cov(N_X, N_Y) = cross_noise
    (default 0, i.e. X independent of Y given M).
    """
    sigma_m = np.atleast_2d(np.asarray(sigma_m, dtype=float))
    h_x = np.atleast_2d(np.asarray(h_x, dtype=float))
    h_y = np.atleast_2d(np.asarray(h_y, dtype=float))
    sx = np.atleast_2d(np.asarray(sigma_x_given_m, dtype=float))
    sy = np.atleast_2d(np.asarray(sigma_y_given_m, dtype=float))
    d_m, d_x, d_y = sigma_m.shape[0], h_x.shape[0], h_y.shape[0]
    cross = np.zeros((d_x, d_y)) if cross_noise is None else np.asarray(cross_noise)

    sigma = np.zeros((d_m + d_x + d_y,) * 2)
    sm_hx = sigma_m @ h_x.T
    sm_hy = sigma_m @ h_y.T
    sigma[:d_m, :d_m] = sigma_m
    sigma[:d_m, d_m:d_m + d_x] = sm_hx
    sigma[:d_m, d_m + d_x:] = sm_hy
    sigma[d_m:d_m + d_x, :d_m] = sm_hx.T
    sigma[d_m + d_x:, :d_m] = sm_hy.T
    sigma[d_m:d_m + d_x, d_m:d_m + d_x] = h_x @ sigma_m @ h_x.T + sx
    sigma[d_m + d_x:, d_m + d_x:] = h_y @ sigma_m @ h_y.T + sy
    sigma[d_m:d_m + d_x, d_m + d_x:] = h_x @ sigma_m @ h_y.T + cross
    sigma[d_m + d_x:, d_m:d_m + d_x] = (h_x @ sigma_m @ h_y.T + cross).T
    return validate_system(sigma, (d_m, d_x, d_y))
