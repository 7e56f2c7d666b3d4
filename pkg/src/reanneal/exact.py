"""Dense exact diagonalisation of H = -A sum_i X_i + B H_problem for small n.

Basis index ``k`` has spin ``b`` equal to +1 when bit ``b`` of ``k`` is 0,
matching :func:`reanneal.ising.all_states`.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .errors import CapacityError
from .ising import IsingProblem, all_states, exhaustive_ground_state

ED_MAX_N = 12


def _guard(n: int):
    if n > ED_MAX_N:
        raise CapacityError(f"dense diagonalisation limited to n <= {ED_MAX_N}, got {n}")


def build_tfim(problem: IsingProblem, A: float, B: float) -> np.ndarray:
    _guard(problem.n)
    n = problem.n
    dim = 2**n
    H = np.diag(B * problem.energies(all_states(n)))
    k = np.arange(dim)
    for b in range(n):
        H[k, k ^ (1 << b)] = -A
    return H


def ground_state(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenpair, with the largest-magnitude amplitude made positive."""
    w, v = np.linalg.eigh(H)
    psi = v[:, 0]
    if psi[np.argmax(np.abs(psi))] < 0:
        psi = -psi
    return float(w[0]), psi


def thermal_diagonal(problem: IsingProblem, A: float, B: float, temperature: float) -> np.ndarray:
    """Diagonal of exp(-H / temperature) / Z in the computational basis."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    w, v = np.linalg.eigh(build_tfim(problem, A, B))
    boltz = np.exp(-(w - w[0]) / temperature)
    p = (v**2) @ boltz
    return p / p.sum()


def classical_boltzmann(problem: IsingProblem, temperature: float) -> np.ndarray:
    e = problem.energies(all_states(problem.n))
    w = np.exp(-(e - e.min()) / temperature)
    return w / w.sum()


def state_index(z) -> int:
    z = np.asarray(z)
    return int(((z < 0).astype(np.int64) << np.arange(z.shape[0])).sum())


def state_indices(states: np.ndarray) -> np.ndarray:
    states = np.asarray(states)
    return ((states < 0).astype(np.int64) << np.arange(states.shape[-1])).sum(axis=-1)


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, float) - np.asarray(q, float)).sum())


def tunneling_suppression_profile(problem: IsingProblem, ratios) -> dict[float, list[tuple[int, float]]]:
    """Mean |amplitude| of the ground state at each Hamming distance from the classical minimum.

    Distances are measured from the lexicographically first classical
    minimiser; B is fixed to 1 so only the ratio A/B matters.
    """
    _guard(problem.n)
    z0, _, _ = exhaustive_ground_state(problem)
    states = all_states(problem.n)
    dist = np.count_nonzero(states != z0, axis=1)
    out = {}
    for r in ratios:
        _, psi = ground_state(build_tfim(problem, float(r), 1.0))
        groups = defaultdict(list)
        for d, a in zip(dist, np.abs(psi)):
            groups[int(d)].append(a)
        out[float(r)] = [(d, float(np.mean(groups[d]))) for d in sorted(groups)]
    return out


def suppression_slope(profile: list[tuple[int, float]], max_distance: int | None = None) -> float:
    """Least-squares slope of ln(mean amplitude) against distance."""
    pts = [(d, a) for d, a in profile if (max_distance is None or d <= max_distance) and a > 0]
    d, a = np.array(pts).T
    return float(np.polyfit(d, np.log(a), 1)[0])


def write_vector_csv(vec, fh, column: str = "probability") -> None:
    fh.write(f"index,{column}\n")
    for k, x in enumerate(vec):
        fh.write(f"{k},{float(x)!r}\n")
