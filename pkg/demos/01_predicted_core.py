# %% [markdown]
# Predicted vs measured Karp-Sipser core
#
# Degrees are 1 with probability 0.1 and 3 otherwise.  We solve for the two
# extreme roots of zeta, read off the predicted core fraction, then sample a
# few graphs and peel them.

# %%
import numpy as np

from kscore import find_roots, make_distribution, configuration_model, peel

dist = make_distribution({1: 0.1, 3: 0.9})
report = find_roots(dist)
print("roots      ", report.all_roots)
print("stability  ", round(report.stability_product, 6))
print("prediction ", round(report.core_fraction, 6))

# %%
# Empirical fractions shrink toward the prediction as n grows.
for n in (1_000, 10_000, 100_000):
    fracs = [len(peel(configuration_model(dist, n, seed)).core_vertices) / n for seed in range(5)]
    print(f"n={n:>7}  mean={np.mean(fracs):.4f}  sd={np.std(fracs, ddof=1):.4f}")
