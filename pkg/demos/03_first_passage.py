# %% [markdown]
# # First passage above zero
#
# Whatever the (symmetric, atomless at 0) step law, the walk first goes positive
# at a geometric time. The first positive value has a law in closed form, and
# the pair has an explicit joint transform.

# %%
import numpy as np

from kendallwalk import SymmetricTwoPoint, SymmetricUniform
from kendallwalk import excursions as ex
from kendallwalk import walk as wk

alpha = 1.0
n_paths = 200_000

# %%
for dist in (SymmetricTwoPoint(1.0), SymmetricUniform()):
    law = ex.ExcursionLaw(dist, alpha)
    b = wk.simulate_batch(wk.WalkConfig(dist, alpha, 60, n_paths, master_seed=5), store=False)
    print(dist)
    print("  P(tau = k), k=1..5:", np.round([np.mean(b.tau == k) for k in range(1, 6)], 4), "vs", [2.0**-k for k in range(1, 6)])
    for t in (1.5, 2.0, 4.0):
        print(f"  P(X_tau < {t}) = {float(ex.overshoot_cdf(law, t)):.4f}, simulated {np.mean(b.overshoot < t):.4f}")
    for s, u in ((0.5, 0.25), (1.0, 0.5)):
        mean, se = ex.wiener_hopf_estimate(b.tau, b.overshoot, s, u, alpha)
        print(f"  E s^tau Psi(u X_tau) at s={s}, u={u}: {float(ex.wiener_hopf_H(law, s, u)):.4f}, simulated {mean:.4f} +- {se:.4f}")
    print("  E X_tau^alpha:", ex.overshoot_alpha_moment(law), "by quadrature", ex.overshoot_alpha_moment_quadrature(law))

# %% [markdown]
# The closed form for the overshoot is the sum over n of the probability of
# staying non-positive n - 1 times and then landing in (0, t).

# %%
law = ex.ExcursionLaw(SymmetricUniform(), alpha)
t = np.array([0.5, 1.0, 3.0])
for terms in (5, 20, 60):
    print(terms, ex.phi_partial_sum(law, t, terms=terms) - ex.overshoot_cdf(law, t))
