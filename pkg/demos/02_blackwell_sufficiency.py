"""Deciding when one channel is a garbled version of the other.

X is Blackwell sufficient for Y about M exactly when the whitened Gram
matrices satisfy ht_x' ht_x >= ht_y' ht_y in the PSD order.  When it holds, a
degrading map T with T ht_x = ht_y and TT' <= I reproduces Y's channel from
X's; when the Gram difference is indefinite, neither channel can simulate the
other and both carry unique information.
"""

import numpy as np

from gausspid import (
    WhitenedChannels,
    X_OVER_Y,
    check_degraded,
    degradation_witness,
)

print("-- a strictly degraded pair: ht_x = 2, ht_y = 1 --")
wc = WhitenedChannels(sigma_m=np.eye(1), ht_x=np.array([[2.0]]), ht_y=np.array([[1.0]]))
report = check_degraded(wc)
print(f"  x over y: {report.x_over_y} (margin {report.margin_x_over_y:+.3f})")
print(f"  y over x: {report.y_over_x} (margin {report.margin_y_over_x:+.3f})")
witness = degradation_witness(wc, X_OVER_Y)
print(f"  witness T = {witness[0, 0]:.3f}; noise budget I - TT' = "
      f"{1 - witness[0, 0] ** 2:.3f} >= 0")

print("\n-- the incomparable pair: ht_x = [1, 0], ht_y = [0, 1] --")
wc = WhitenedChannels(
    sigma_m=np.eye(2),
    ht_x=np.array([[1.0, 0.0]]),
    ht_y=np.array([[0.0, 1.0]]),
)
report = check_degraded(wc)
print(f"  x over y: {report.x_over_y} (margin {report.margin_x_over_y:+.3f})")
print(f"  y over x: {report.y_over_x} (margin {report.margin_y_over_x:+.3f})")
print("  The Gram difference diag(1, -1) is indefinite: neither channel")
print("  can reproduce the other, so both hold unique information.")

print("\n-- a random constructed degradation in higher dimension --")
rng = np.random.default_rng(7)
ht_x = rng.standard_normal((4, 3))
t_true = rng.standard_normal((2, 4))
t_true /= np.linalg.norm(t_true, 2) * 1.01  # spectral norm < 1
wc = WhitenedChannels(sigma_m=np.eye(3), ht_x=ht_x, ht_y=t_true @ ht_x)
report = check_degraded(wc)
witness = degradation_witness(wc, X_OVER_Y)
residual = np.linalg.norm(witness @ ht_x - wc.ht_y)
print(f"  x over y: {report.x_over_y}; witness residual |T ht_x - ht_y| = {residual:.2e}")
