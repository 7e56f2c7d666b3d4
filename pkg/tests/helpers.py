"""Exact transition matrices of the update kernels by integrating over their uniforms.

Each kernel decision compares one uniform against a threshold. Cutting
[0, 1) at every candidate threshold and evaluating the kernel at cell
midpoints therefore yields the transition matrix exactly.
"""
import itertools

import numpy as np


def cells(thresholds):
    cuts = sorted({0.0, 1.0, *[t for t in thresholds if 0.0 < t < 1.0]})
    mids = [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
    widths = [b - a for a, b in zip(cuts, cuts[1:])]
    return mids, widths


def exact_transition(states, step, n_uniforms, thresholds):
    """T[x, y] for ``step(state, uniforms) -> new state`` over enumerated ``states``."""
    index = {tuple(s): k for k, s in enumerate(states)}
    mids, widths = cells(thresholds)
    T = np.zeros((len(states), len(states)))
    for x, s in enumerate(states):
        for combo in itertools.product(range(len(mids)), repeat=n_uniforms):
            u = np.array([mids[c] for c in combo])
            w = float(np.prod([widths[c] for c in combo]))
            T[x, index[tuple(step(np.array(s, copy=True), u))]] += w
    return T
