# %% [markdown]
# Leaf removal and Warning Propagation on one small graph
#
# A triangle with a pendant vertex plus a separate triangle.  After ``t``
# rounds of peeling, the survivors are exactly the vertices that WP labels U
# after ``2t`` rounds.

# %%
from kscore.graph_gen import MultiGraph
from kscore.karp_sipser import peel
from kscore.warning_prop import SYMBOLS, survivors_after, wp_run

g = MultiGraph.from_edges(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 0)])
res = peel(g, order_seed=0, record_history=True)
for t in range(res.rounds + 1):
    print(t, sorted(res.survivors(t)), sorted(survivors_after(g, t)))

# %%
# Final messages, written as u->v:symbol
run = wp_run(g)
for i, (u, v) in enumerate(zip(g.src, g.dst)):
    print(f"{u}->{v}:{SYMBOLS[run.state.values[i]]}", end="  ")
print("\nfixed after", run.rounds_to_fix, "rounds; core", sorted(res.core_vertices))

# %%
# A leaf hanging off a k-cycle needs one more round than it has edges.
for k in (3, 5, 8):
    cyc = MultiGraph.from_edges(k + 1, [(i, (i + 1) % k) for i in range(k)] + [(k, 0)])
    print(k, "edges", cyc.m, "rounds", wp_run(cyc).rounds_to_fix)
