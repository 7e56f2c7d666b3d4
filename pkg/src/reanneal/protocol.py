"""Emulated annealer: schedules, reverse-anneal cycles and forward annealing."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import PreparationError
from .ising import IsingProblem, as_spins, build_init_problem, random_spins, spins_to_str
from .qmc import PiqaParams, classical_preanneal, run_trajectory, task_rng, trotter_state


@dataclass(frozen=True)
class AnnealSchedule:
    """A(s), B(s): linear (A = 1 - s, B = s) or piecewise-linear through ``rows``."""

    kind: str = "linear"
    rows: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self):
        if self.kind == "linear":
            return
        if self.kind != "tabulated":
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        rows = tuple((float(s), float(a), float(b)) for s, a, b in self.rows)
        if len(rows) < 2:
            raise ValueError("tabulated schedule needs at least two rows")
        s, a, b = map(np.array, zip(*rows))
        if s[0] != 0.0 or s[-1] != 1.0 or np.any(np.diff(s) <= 0):
            raise ValueError("schedule s values must increase strictly from 0 to 1")
        if np.any(np.diff(a) > 0) or np.any(np.diff(b) < 0):
            raise ValueError("A must be non-increasing and B non-decreasing")
        if a[-1] < 0 or b[0] < 0:
            raise ValueError("schedule energies must be non-negative")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_file(cls, path: str | Path) -> AnnealSchedule:
        """Read ``s A B`` rows (whitespace or comma separated, ``#`` comments)."""
        rows = []
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].replace(",", " ").split()
            if not line:
                continue
            try:
                rows.append(tuple(float(x) for x in line[:3]))
            except ValueError:
                if rows:
                    raise
                continue  # header line
        return cls("tabulated", tuple(rows))

    def __call__(self, s: float) -> tuple[float, float]:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {s}")
        if self.kind == "linear":
            return 1.0 - s, float(s)
        ss = [r[0] for r in self.rows]
        return (float(np.interp(s, ss, [r[1] for r in self.rows])),
                float(np.interp(s, ss, [r[2] for r in self.rows])))

    @property
    def b_max(self) -> float:
        return 1.0 if self.kind == "linear" else max(r[2] for r in self.rows)

    def s_at_ratio(self, ratio: float) -> float:
        """The s where A(s)/B(s) equals ``ratio`` (A/B is decreasing in s)."""
        if self.kind == "linear":
            return 1.0 / (1.0 + ratio)
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            A, B = self(mid)
            if B == 0 or A / B > ratio:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


LINEAR = AnnealSchedule()


def schedule_eval(schedule: AnnealSchedule, s: float) -> tuple[float, float]:
    return schedule(s)


@dataclass(frozen=True)
class CycleSpec:
    s_prime: float = 1.0
    total_mcs: int = 1000
    dwell_fraction: float = 0.0
    prep_mode: str = "direct"
    s_steps: int = 50
    prep_mcs: int = 500
    prep_retries: int = 5

    def __post_init__(self):
        if not 0.0 <= self.s_prime <= 1.0:
            raise ValueError("s_prime must lie in [0, 1]")
        if not 0.0 <= self.dwell_fraction <= 1.0:
            raise ValueError("dwell_fraction must lie in [0, 1]")
        if self.prep_mode not in ("direct", "hinit_anneal"):
            raise ValueError(f"unknown prep_mode {self.prep_mode!r}")
        if self.s_steps < 1:
            raise ValueError("s_steps must be positive")
        if self.dwell_fraction < 1 and self.total_mcs < 2 * self.s_steps:
            raise ValueError("total_mcs must be at least 2 * s_steps")


def _spread(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if k < extra else 0) for k in range(parts)]


def cycle_path(cycle: CycleSpec) -> list[tuple[float, int]]:
    """(s, mcs) steps for 1 -> s' -> (dwell) -> 1 with a fixed total budget."""
    dwell = int(round(cycle.dwell_fraction * cycle.total_mcs))
    legs = cycle.total_mcs - dwell
    down_budget = legs // 2
    up_budget = legs - down_budget
    k = cycle.s_steps
    path = []
    if legs:
        down = np.linspace(1.0, cycle.s_prime, k + 1)[1:]
        path += list(zip(down.tolist(), _spread(down_budget, k)))
    if dwell:
        path.append((cycle.s_prime, dwell))
    if legs:
        up = np.linspace(cycle.s_prime, 1.0, k + 1)[1:]
        path += list(zip(up.tolist(), _spread(up_budget, k)))
    return path


def forward_path(schedule: AnnealSchedule, total_mcs: int, s_steps: int = 50,
                 start_ratio: float = 3.0) -> list[tuple[float, int]]:
    s0 = schedule.s_at_ratio(start_ratio)
    k = max(1, min(s_steps, total_mcs))
    return list(zip(np.linspace(s0, 1.0, k).tolist(), _spread(total_mcs, k)))


@dataclass
class CycleOutcome:
    state: np.ndarray
    energy: float
    slices: np.ndarray


@dataclass
class AnnealerCallResult:
    cycles: list[tuple[np.ndarray, float]]
    best_state: np.ndarray
    min_energy: float
    mean_energy: float
    mean_hamming_from_start: float
    s_prime: float | None = 1.0
    seed: int | None = None
    hammings: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "s_prime": self.s_prime,
            "cycles": [{"state": spins_to_str(z), "energy": e} for z, e in self.cycles],
            "min_energy": self.min_energy,
            "mean_energy": self.mean_energy,
            "mean_hamming": self.mean_hamming_from_start,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _readout(problem: IsingProblem, state: np.ndarray) -> tuple[np.ndarray, float]:
    e = problem.energies(state)
    k = int(np.argmin(e))
    return state[k].copy(), float(e[k])


def _prepare(problem, init, cycle, schedule, params, rng) -> np.ndarray:
    if cycle.prep_mode == "direct":
        return trotter_state(init, params.P)
    hinit = build_init_problem(init, problem.edges)
    for _ in range(cycle.prep_retries):
        state = _forward_run(hinit, cycle.prep_mcs, schedule, params, rng)[0]
        z, _ = _readout(hinit, state)
        if np.array_equal(z, init):
            return state
    raise PreparationError(f"initial-state anneal missed the target {cycle.prep_retries} times")


def annealing_cycle(problem: IsingProblem, init_state, cycle: CycleSpec,
                    schedule: AnnealSchedule, params: PiqaParams,
                    rng: np.random.Generator) -> CycleOutcome:
    """One reverse-anneal local search; the readout is the lowest-energy slice."""
    init = as_spins(init_state, problem.n)
    if cycle.s_prime >= 1.0:
        return CycleOutcome(init.copy(), float(problem.energies(init)), trotter_state(init, params.P))
    state = _prepare(problem, init, cycle, schedule, params, rng)
    state, _ = run_trajectory(problem, schedule, cycle_path(cycle), params, state, rng, reference=init)
    z, e = _readout(problem, state)
    return CycleOutcome(z, e, state)


def _aggregate(problem, outcomes, starts, s_prime, seed) -> AnnealerCallResult:
    cycles = [(o.state, o.energy) for o in outcomes]
    energies = np.array([e for _, e in cycles])
    best = int(np.argmin(energies))
    hams = [float(np.count_nonzero(o.slices != z0, axis=1).mean()) for o, z0 in zip(outcomes, starts)]
    return AnnealerCallResult(
        cycles=cycles,
        best_state=cycles[best][0].copy(),
        min_energy=float(energies[best]),
        mean_energy=float(energies.mean()),
        mean_hamming_from_start=float(np.mean(hams)),
        s_prime=s_prime,
        seed=seed,
        hammings=hams,
    )


def annealer_call(problem: IsingProblem, init_state, s_prime: float, n_cycles: int,
                  cycle_template: CycleSpec, schedule: AnnealSchedule, params: PiqaParams,
                  seed: int | None = None) -> AnnealerCallResult:
    """``n_cycles`` independent cycles from the same state and s'.

    Cycle ``c`` draws from ``task_rng(seed, c)``; ``seed`` defaults to
    ``params.seed``.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be positive")
    seed = params.seed if seed is None else seed
    init = as_spins(init_state, problem.n)
    cycle = replace(cycle_template, s_prime=s_prime)
    outcomes = [annealing_cycle(problem, init, cycle, schedule, params, task_rng(seed, c))
                for c in range(n_cycles)]
    return _aggregate(problem, outcomes, [init] * n_cycles, s_prime, seed)


def _forward_run(problem, total_mcs, schedule, params, rng, s_steps=50):
    z0 = classical_preanneal(problem, params.PT, random_spins(problem.n, rng), rng)
    state, log = run_trajectory(problem, schedule, forward_path(schedule, total_mcs, s_steps),
                                params, trotter_state(z0, params.P), rng, reference=z0)
    return state, z0, log


def forward_qaa(problem: IsingProblem, total_mcs: int, schedule: AnnealSchedule = LINEAR,
                params: PiqaParams = PiqaParams(), n_cycles: int = 1, seed: int | None = None,
                s_steps: int = 50) -> AnnealerCallResult:
    """Traditional annealing from A/B = 3 to s = 1 after a pre-anneal at T = P*T.

    Hamming statistics are measured from each run's pre-annealed state.
    """
    if total_mcs < 1:
        raise ValueError("total_mcs must be positive")
    seed = params.seed if seed is None else seed
    outcomes, starts = [], []
    for c in range(n_cycles):
        state, z0, _ = _forward_run(problem, total_mcs, schedule, params, task_rng(seed, c), s_steps)
        z, e = _readout(problem, state)
        outcomes.append(CycleOutcome(z, e, state))
        starts.append(z0)
    return _aggregate(problem, outcomes, starts, None, seed)


def typical_hamming_dist(result: AnnealerCallResult) -> float:
    if not result.cycles:
        raise ValueError("empty annealer result")
    return result.mean_hamming_from_start
