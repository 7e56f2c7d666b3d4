"""Metropolis post-processing of annealer output for approximate thermal sampling.

Reweighting between disjoint minima (via free energies) is not attempted;
post-processing only equilibrates within the basin each state starts in.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .ising import IsingProblem, as_spins, spins_to_str, str_to_spins
from .qmc import classical_metropolis, task_rng


@dataclass
class EmpiricalDistribution:
    support: list[np.ndarray]
    weights: np.ndarray

    def as_vector(self, n: int) -> np.ndarray:
        """Dense probability vector in the exact-oracle basis order."""
        from .exact import state_index

        vec = np.zeros(2**n)
        for z, w in zip(self.support, self.weights):
            vec[state_index(z)] += w
        return vec

    def write_csv(self, fh) -> None:
        fh.write("state,weight\n")
        for z, w in zip(self.support, self.weights):
            fh.write(f"{spins_to_str(z)},{float(w)!r}\n")


def metropolis_postprocess(states, problem: IsingProblem, t_eff: float, n_sweeps: int,
                           seed: int = 0, warmup: int = 0) -> list[np.ndarray]:
    """Independent single-spin Metropolis chains at ``t_eff``, one per input state.

    ``warmup`` drops that many leading inputs before processing.
    """
    if not t_eff > 0:
        raise ValueError("t_eff must be positive")
    out = []
    for k, z in enumerate(list(states)[warmup:]):
        z = as_spins(z, problem.n).copy()
        if n_sweeps:
            classical_metropolis(z, problem, np.full(n_sweeps, float(t_eff)), task_rng(seed, k))
        out.append(z)
    return out


def estimate_distribution(states) -> EmpiricalDistribution:
    states = list(states)
    if not states:
        raise ValueError("need at least one state")
    counts = Counter(spins_to_str(z) for z in states)
    keys = sorted(counts)
    w = np.array([counts[k] for k in keys], dtype=float)
    return EmpiricalDistribution([str_to_spins(k) for k in keys], w / w.sum())
