"""Classical simulated annealing baseline."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ising import IsingProblem, as_spins, random_spins
from .qmc import classical_metropolis


@dataclass(frozen=True)
class SaConfig:
    """``n_steps`` full sweeps with temperature linear from ``t_start`` to ``t_end``."""

    n_steps: int = 1000
    t_start: float = 10.0
    t_end: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.t_start >= self.t_end >= 0:
            raise ValueError("need t_start >= t_end >= 0")
        if self.n_steps < 1:
            raise ValueError("n_steps must be positive")

    def temperatures(self) -> np.ndarray:
        if self.n_steps == 1:
            return np.array([self.t_end], dtype=float)
        return np.linspace(self.t_start, self.t_end, self.n_steps)


def simulated_annealing(problem: IsingProblem, config: SaConfig = SaConfig(), init=None,
                        rng: np.random.Generator | None = None) -> tuple[np.ndarray, float]:
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    z = random_spins(problem.n, rng) if init is None else as_spins(init, problem.n).copy()
    classical_metropolis(z, problem, config.temperatures(), rng)
    return z, float(problem.energies(z))


def success_probability(problem: IsingProblem, target, config: SaConfig, runs: int,
                        seed: int = 0) -> tuple[float, float]:
    """Fraction of runs ending in ``target`` and its standard error."""
    from .qmc import task_rng

    target = as_spins(target, problem.n)
    hits = sum(np.array_equal(simulated_annealing(problem, config, rng=task_rng(seed, r))[0], target)
               for r in range(runs))
    p = hits / runs
    return p, float(np.sqrt(p * (1 - p) / runs))
