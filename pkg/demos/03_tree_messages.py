# %% [markdown]
# Messages on Galton-Watson trees
#
# Root-child messages after ``t`` rounds on sampled trees follow the
# density-evolution recursion; the root survival probability follows from it.

# %%
import numpy as np

from kscore import make_distribution, delta_at, survival_probability
from kscore.gw_tree import message_frequencies, root_survival_mc

dist = make_distribution({1: 0.1, 3: 0.9})
freqs = message_frequencies(dist, [1, 2, 4, 6], trials=20_000, seed=0)
for t, (f, err, count) in freqs.items():
    exact = delta_at(dist, t).as_array()
    print(t, np.round(f, 4), np.round(exact, 4), "max z", np.round(np.max(np.abs(f - exact) / np.maximum(err, 1e-12)), 2))

# %%
for t in (0, 2, 20):
    est, se = root_survival_mc(dist, t, trials=20_000, seed=1)
    print(f"t={t:>2}  mc={est:.4f} +- {se:.4f}  exact={survival_probability(dist, delta_at(dist, t)):.4f}")
