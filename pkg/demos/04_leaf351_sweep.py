# %% [markdown]
# The degree-1/3/51 family
#
# ``q`` weights leaves and ``p`` trades degree 3 against degree 51.  With
# ``q = 0`` nothing peels; a tiny leaf weight opens windows where the core
# disappears.

# %%
import numpy as np

from kscore.experiment import SweepConfig, run_sweep

_, rows = run_sweep(SweepConfig(q_values=[0.0, 0.001, 0.005], p_grid=(0.0, 1.0, 0.01), grid_size=20_000))
table = np.array(rows, dtype=float)

for q in (0.0, 0.001, 0.005):
    col = table[table[:, 0] == q]
    jumps = np.abs(np.diff(col[:, 5]))
    i = int(np.argmax(jumps))
    print(f"q={q:<6} core range [{col[:, 5].min():.3f}, {col[:, 5].max():.3f}]  "
          f"largest step {jumps[i]:.3f} at p={col[i, 1]:.2f}->{col[i + 1, 1]:.2f}")

# %%
# Coarser grid: the same fold shows as one big step.
col = table[table[:, 0] == 0.005][::5]
print(np.round(col[:, [1, 5]], 3)[:5])
