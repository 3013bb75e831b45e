# %% [markdown]
# # Convolution powers and the stable limit
#
# Convolving point masses at ``x`` and ``y`` gives a two-component mixture; the
# transform turns this into a product, which makes n-fold powers explicit.

# %%
import numpy as np

from kendallwalk import RngStream, SymmetricTwoPoint, SymmetricUniform
from kendallwalk import kendall as kd
from kendallwalk import walk as wk
from kendallwalk.verify import ks_critical, ks_distance
from kendallwalk.williamson import psi

alpha = 0.8

# %%
law = kd.convolve_point(1.0, 2.0, alpha)
print(law)
for t in (0.1, 0.3, 0.45):
    print(f"t={t}: transform {law.nu_hat(t):.15f}  product {psi(alpha, t) * psi(alpha, 2 * t):.15f}")

# %% [markdown]
# The square of the unit two-point law is the Pareto(2 alpha) law.

# %%
t = np.linspace(1, 6, 6)
sq = kd.ConvolutionPowerLaw(SymmetricTwoPoint(1.0), 2, alpha)
print(np.c_[t, sq.cdf(t), kd.SymmetricPareto(2 * alpha).cdf(t)])

# %% [markdown]
# Simulated marginals of the walk follow the n-fold CDF.

# %%
n_paths = 100_000
cfg = wk.WalkConfig(SymmetricUniform(), alpha, 10, n_paths, master_seed=2)
batch = wk.simulate_batch(cfg, checkpoints=[2, 5, 10])
for n in (2, 5, 10):
    d = ks_distance(batch.marginals[n], kd.ConvolutionPowerLaw(SymmetricUniform(), n, alpha).cdf)
    print(f"n={n:2d}  KS={d:.4f}  (1% critical value {ks_critical(n_paths):.4f})")

# %% [markdown]
# Rescaling the two-point powers by ``n^(-1/alpha)`` drives the transform to
# ``exp(-|t|^alpha)``, with error below ``2/n``.

# %%
grid = np.linspace(0, 3, 301)
for n in (10, 100, 1000, 10_000):
    err = np.max(np.abs(kd.rescaled_power_transform(n, alpha, grid) - np.exp(-grid**alpha)))
    print(f"n={n:6d}  sup error {err:.2e}  bound {2 / n:.1e}")
print("limit CDF at t = 0.5, 1, 2:", kd.stable_limit_cdf(np.array([0.5, 1.0, 2.0]), alpha))
