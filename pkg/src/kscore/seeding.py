"""Deterministic seed derivation.

``mix_seed(master, *keys)`` hashes the integer tuple through numpy's
``SeedSequence`` and returns a 63-bit integer.  Trial ``i`` of an experiment
with master seed ``s`` uses ``mix_seed(s, n, i)``; sub-streams of one trial
(degrees, pairing, peel order) append a further key.
"""

import numpy as np


def mix_seed(master: int, *keys: int) -> int:
    state = np.random.SeedSequence([int(master), *map(int, keys)]).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])
