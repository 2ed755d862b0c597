import numpy as np


def multiset_distance(a, b) -> float:
    """Greedy nearest-neighbour matching distance between two eigenvalue
    multisets; robust against lexicographic-sort pairing flips."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    assert len(a) == len(b)
    worst = 0.0
    for z in a:
        dists = [abs(z - w) for w in b]
        nearest = int(np.argmin(dists))
        worst = max(worst, dists[nearest])
        b.pop(nearest)
    return worst
