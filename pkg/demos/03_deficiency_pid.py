"""The deficiency-based decomposition, next to the closed form.

The approximate deficiency of X with respect to Y measures how badly the best
linear-Gaussian map from X fails to reproduce Y's channel.  Feeding both
directional deficiencies into the redundancy definition yields a
decomposition that is exact under degradedness and sensible when neither
channel dominates.
"""

import numpy as np

from gausspid import delta_hat_pid, mmi_pid, validate_system

sigma = np.array(
    [
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 2.0, 0.0],
        [0.0, 1.0, 0.0, 2.0],
    ]
)
system = validate_system(sigma, dims=(2, 1, 1))
result = delta_hat_pid(system)

print("incomparable system: X = M1 + Z1, Y = M2 + Z2")
print(f"  deficiency(M : Y \\ X) = {result.y_from_x.delta_hat:.6f} "
      f"(solver: {result.y_from_x.iterations} iterations, "
      f"converged={result.y_from_x.converged})")
print(f"  deficiency(M : X \\ Y) = {result.x_from_y.delta_hat:.6f}")
print("  atoms (deficiency-based vs closed-form):")
mm = mmi_pid(system)
for name in ("ui_x", "ui_y", "ri", "si"):
    lhs = getattr(result.atoms, name)
    rhs = getattr(mm, name)
    print(f"    {name:5s}  {lhs:.6f}   vs  {rhs:.6f}")
print("  The unique information is recovered; the closed form hides it.")

print("\ndegraded system: Y is a noisier view of what X sees")
rng = np.random.default_rng(11)
h_x = rng.standard_normal((3, 2))
t = rng.standard_normal((2, 3))
t /= np.linalg.norm(t, 2) * 1.05
h_y = t @ h_x
d = 2 + 3 + 2
joint = np.zeros((d, d))
joint[:2, :2] = np.eye(2)
joint[:2, 2:5] = h_x.T
joint[2:5, :2] = h_x
joint[:2, 5:] = h_y.T
joint[5:, :2] = h_y
joint[2:5, 2:5] = h_x @ h_x.T + np.eye(3)
joint[5:, 5:] = h_y @ h_y.T + np.eye(2)
joint[2:5, 5:] = h_x @ h_y.T
joint[5:, 2:5] = h_y @ h_x.T
system = validate_system(joint, dims=(2, 3, 2))
result = delta_hat_pid(system)
mm = mmi_pid(system)
print(f"  deficiency(M : Y \\ X) = {result.y_from_x.delta_hat:.2e}  (zero: X simulates Y)")
print(f"  deficiency(M : X \\ Y) = {result.x_from_y.delta_hat:.6f}")
for name in ("ui_x", "ui_y", "ri", "si"):
    lhs = getattr(result.atoms, name)
    rhs = getattr(mm, name)
    print(f"    {name:5s}  {lhs:.6f}   vs  {rhs:.6f}")
print("  Under degradedness the two decompositions coincide.")
