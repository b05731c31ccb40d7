"""Kernelized score and Hessian-diagonal estimates on known Gaussians.

For x ~ N(0, s^2) the log-density has score -x/s^2 and a constant second
derivative -1/s^2, so both estimators can be checked against closed forms.
"""

import numpy as np

from paneldag import stein_hessian_diag, stein_score_estimate

rng = np.random.default_rng(0)

print("== score estimates ==")
for scale in (1.0, 2.0):
    x = scale * rng.standard_normal(1000)
    est = stein_score_estimate(x)
    mse = np.mean((est.G[:, 0] + x / scale**2) ** 2)
    print(f"  N(0, {scale**2:.0f}): n=1000  bandwidth={est.params.bandwidth:.3f}  "
          f"MSE against -x/{scale**2:.0f} = {mse:.4f}")

print()
print("== Hessian diagonal ==")
for scale in (1.0, 2.0):
    x = scale * rng.standard_normal(1000)
    est = stein_hessian_diag(x)
    mean = np.mean(est.H[:, 0])
    print(f"  N(0, {scale**2:.0f}): mean diagonal {mean:+.4f}  (analytic {-1 / scale**2:+.4f})")

print()
print("== the leaf-selection signal ==")
print("For additive-noise data the Hessian diagonal of a leaf is flat across")
print("samples, while a cause's diagonal varies. Two-node chain x1 -> x2:")
from paneldag import chain_model, sample_data

samples = sample_data(chain_model(("sine",)), 1500, seed=3)
H = stein_hessian_diag(samples.data).H
v = H.var(axis=0, ddof=1)
print(f"  var(H diag): x1 (cause) = {v[0]:.4f}   x2 (leaf) = {v[1]:.4f}")
print("  -> the smaller variance flags the leaf, which is removed first.")
