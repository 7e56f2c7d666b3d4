"""Path-integral Monte Carlo for the transverse-field Ising model.

A Trotter state is a ``(P, n)`` ``int8`` array. Its classical action at
temperature ``P*T`` is

    S = sum_k B * E(z_k) - J_perp * sum_k sum_i z_{k,i} z_{k+1,i}

with periodic slice index and J_perp from :func:`slice_coupling`. Each
Monte Carlo step (MCS) is one local sweep over every (slice, spin) pair
followed by one all-slice flip attempt per spin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .ising import IsingProblem, as_spins

A_FLOOR = 1e-9


@dataclass(frozen=True)
class PiqaParams:
    P: int = 60
    T: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.P < 2:
            raise ValueError("need at least two Trotter slices")
        if not self.T > 0:
            raise ValueError("temperature must be positive")

    @property
    def PT(self) -> float:
        """Temperature of the coupled classical system."""
        return self.P * self.T


@dataclass
class SweepStats:
    local_attempts: int = 0
    local_accepts: int = 0
    global_attempts: int = 0
    global_accepts: int = 0

    def __iadd__(self, other: SweepStats) -> SweepStats:
        self.local_attempts += other.local_attempts
        self.local_accepts += other.local_accepts
        self.global_attempts += other.global_attempts
        self.global_accepts += other.global_accepts
        return self


def task_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for task ``keys`` under master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(keys)))


def slice_coupling(A: float, P: int, T: float) -> float:
    """Ferromagnetic inter-slice coupling -(P T / 2) ln tanh(A / (P T))."""
    if not A > 0:
        raise ValueError(f"transverse field must be positive, got {A}")
    pt = P * T
    return -0.5 * pt * math.log(math.tanh(A / pt))


def clamp_field(A: float, b_max: float = 1.0) -> float:
    return max(A, A_FLOOR * max(b_max, 1.0))


def trotter_state(init, P: int) -> np.ndarray:
    """Replicate a classical configuration into ``P`` slices."""
    z = as_spins(init)
    return np.ascontiguousarray(np.tile(z, (P, 1)))


def extract_states(state: np.ndarray) -> list[np.ndarray]:
    return [row.copy() for row in state]


def slice_energies(problem: IsingProblem, state: np.ndarray) -> np.ndarray:
    return problem.energies(state)


def _check(state: np.ndarray, problem: IsingProblem, params: PiqaParams):
    if state.dtype != np.int8 or not state.flags.c_contiguous:
        raise TypeError("Trotter state must be a C-contiguous int8 array")
    if state.shape != (params.P, problem.n):
        raise ValueError(f"Trotter state shape {state.shape} != ({params.P}, {problem.n})")


def run_mcs(state: np.ndarray, problem: IsingProblem, A: float, B: float, params: PiqaParams,
            n_mcs: int, rng: np.random.Generator, *, local: bool = True, glob: bool = True,
            snapshots: np.ndarray | None = None, b_max: float = 1.0) -> SweepStats:
    """Run ``n_mcs`` Monte Carlo steps in place."""
    _check(state, problem, params)
    P, n = state.shape
    jperp = slice_coupling(clamp_field(A, b_max), P, params.T)
    per = (P * n if local else 0) + (n if glob else 0)
    u = rng.random(n_mcs * per)
    snaps = snapshots if snapshots is not None else np.empty((0, P, n), dtype=np.int8)
    ptr, idx, jv = problem.csr
    la, ga = _backend.piqa_mcs(state, problem.h, ptr, idx, jv, float(B), jperp, params.PT,
                               local, glob, u, snaps)
    return SweepStats(n_mcs * P * n if local else 0, la, n_mcs * n if glob else 0, ga)


def metropolis_sweep(state, problem, A, B, params, rng) -> SweepStats:
    """One single-spin Metropolis update attempt per (slice, spin)."""
    return run_mcs(state, problem, A, B, params, 1, rng, local=True, glob=False)


def global_flip_update(state, problem, B, params, rng) -> SweepStats:
    """One all-slice flip attempt per spin; the inter-slice action is unchanged by it."""
    return run_mcs(state, problem, 1.0, B, params, 1, rng, local=False, glob=True)


def classical_metropolis(z: np.ndarray, problem: IsingProblem, temps, rng) -> int:
    """Single-spin sweeps on a classical vector in place, one per temperature."""
    temps = np.ascontiguousarray(temps, dtype=np.float64)
    u = rng.random(temps.shape[0] * problem.n)
    ptr, idx, jv = problem.csr
    return _backend.classical_sweeps(z, problem.h, ptr, idx, jv, temps, u)


def classical_preanneal(problem: IsingProblem, t_class: float, init, rng: np.random.Generator,
                        n_sweeps: int = 100) -> np.ndarray:
    """Fixed-temperature Metropolis on the classical problem; returns a new vector."""
    if not t_class > 0:
        raise ValueError("pre-anneal temperature must be positive")
    z = as_spins(init, problem.n).copy()
    if n_sweeps:
        classical_metropolis(z, problem, np.full(n_sweeps, float(t_class)), rng)
    return z


TRAJECTORY_COLUMNS = ("step", "s", "A", "B", "A_over_B", "mean_hamming", "min_energy", "mean_energy")


def run_trajectory(problem: IsingProblem, schedule, s_path: Sequence[tuple[float, int]],
                   params: PiqaParams, init: np.ndarray, rng: np.random.Generator,
                   reference=None) -> tuple[np.ndarray, list[dict]]:
    """Walk ``s_path`` of ``(s, mcs)`` steps starting from a copy of ``init``.

    After each step the log records the mean slice Hamming distance to
    ``reference`` (default: first slice of ``init``) and slice energies.
    """
    if len(s_path) == 0:
        raise ValueError("empty s path")
    state = np.array(init, dtype=np.int8, order="C", copy=True)
    if state.ndim == 1:
        state = trotter_state(state, params.P)
    ref = as_spins(state[0] if reference is None else reference, problem.n)
    b_max = schedule.b_max
    log = []
    for step, (s, mcs) in enumerate(s_path):
        A, B = schedule(s)
        if mcs:
            run_mcs(state, problem, A, B, params, int(mcs), rng, b_max=b_max)
        e = problem.energies(state)
        log.append({
            "step": step,
            "s": float(s),
            "A": A,
            "B": B,
            "A_over_B": A / B if B > 0 else math.inf,
            "mean_hamming": float(np.count_nonzero(state != ref, axis=1).mean()),
            "min_energy": float(e.min()),
            "mean_energy": float(e.mean()),
        })
    return state, log


def sample_slices(problem: IsingProblem, A: float, B: float, params: PiqaParams,
                  rng: np.random.Generator, n_measure: int, burn_in: int = 1000,
                  init=None, chunk: int = 4096) -> np.ndarray:
    """Equilibrium snapshots at fixed (A, B): array of shape ``(n_measure, P, n)``."""
    start = init if init is not None else np.where(rng.random(problem.n) < 0.5, 1, -1)
    state = trotter_state(start, params.P) if np.ndim(start) == 1 else np.ascontiguousarray(start, np.int8)
    run_mcs(state, problem, A, B, params, burn_in, rng)
    out = np.empty((n_measure, params.P, problem.n), dtype=np.int8)
    done = 0
    while done < n_measure:
        k = min(chunk, n_measure - done)
        run_mcs(state, problem, A, B, params, k, rng, snapshots=out[done:done + k])
        done += k
    return out


def write_trajectory_csv(log: list[dict], fh) -> None:
    fh.write(",".join(TRAJECTORY_COLUMNS) + "\n")
    for row in log:
        fh.write(",".join(_cell(row[c]) for c in TRAJECTORY_COLUMNS) + "\n")


def _cell(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))
