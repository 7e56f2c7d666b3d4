"""Algorithms built on annealer calls: adaptive range search, quantum-analogue
parallel tempering and population annealing, and a hybrid stage driver."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .ising import IsingProblem, as_spins, energy, random_spins, spins_to_str
from .protocol import LINEAR, AnnealSchedule, CycleSpec, annealer_call, typical_hamming_dist
from .qmc import PiqaParams, task_rng


def effective_temperature(A: float, B: float) -> float:
    """Temperature at which a unit-field qubit's Boltzmann weights match its ground state.

    Returns 0.0 for A == 0 and +inf for B == 0.
    """
    if A < 0 or B < 0:
        raise ValueError("A and B must be non-negative")
    if A == 0 and B == 0:
        raise ValueError("A and B cannot both vanish")
    if A == 0:
        return 0.0
    if B == 0:
        return math.inf
    x = B / A
    # ln r with r = sqrt(1 + x^2) + x, written to stay accurate for small x
    log_r = math.asinh(x)
    return 1.0 / log_r


def amplitude_ratio(A: float, B: float) -> float:
    return math.sqrt(A * A + B * B) / A + B / A


def teff_of_s(schedule: AnnealSchedule, s: float) -> float:
    return effective_temperature(*schedule(s))


def beta_eff(schedule: AnnealSchedule, s: float) -> float:
    t = teff_of_s(schedule, s)
    return math.inf if t == 0 else 1.0 / t


def suggest_s_primes(schedule: AnnealSchedule, s_lo: float, s_hi: float, count: int) -> list[float]:
    """Grid of s' values geometric in 1/T_eff between ``s_lo`` and ``s_hi``."""
    b_lo, b_hi = beta_eff(schedule, s_lo), beta_eff(schedule, s_hi)
    if not (0 < b_lo < b_hi < math.inf):
        raise ValueError("endpoints must give finite, increasing inverse temperatures")
    out = []
    for beta in np.geomspace(b_lo, b_hi, count):
        lo, hi = s_lo, s_hi
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if beta_eff(schedule, mid) < beta:
                lo = mid
            else:
                hi = mid
        out.append(0.5 * (lo + hi))
    return out


@dataclass(frozen=True)
class CallConfig:
    """Everything an annealer call needs besides problem, state and s'."""

    n_cycles: int = 10
    cycle: CycleSpec = CycleSpec()
    schedule: AnnealSchedule = LINEAR
    params: PiqaParams = PiqaParams()

    def call(self, problem, state, s_prime, seed):
        return annealer_call(problem, state, s_prime, self.n_cycles, self.cycle,
                             self.schedule, self.params, seed=seed)


@dataclass
class AdaptiveResult:
    s_prime: float
    s_min: float
    s_max: float
    history: list[tuple[float, float]]

    def __float__(self) -> float:
        return self.s_prime

    @property
    def width(self) -> float:
        return self.s_max - self.s_min


def bisect_s_prime(distance: Callable[[float], float], dist: float, n_step: int,
                   literal: bool = False) -> AdaptiveResult:
    """Bisection on s' against a measured typical Hamming distance.

    Too little exploration moves s' down (wider search), too much moves it
    up. ``literal`` reproduces the printed update for the upward branch,
    which overshoots ``s_max``; it exists only for comparison.
    """
    if n_step < 1:
        raise ValueError("n_step must be positive")
    s, s_min, s_max = 0.5, 0.0, 1.0
    history = []
    for _ in range(n_step):
        d = distance(s)
        history.append((s, d))
        if d < dist:
            s_max = s
            s = s_min + 0.5 * (s - s_min)
        else:
            s_min = s
            s = s_max + 0.5 * (s_max - s) if literal else s + 0.5 * (s_max - s)
    return AdaptiveResult(s, s_min, s_max, history)


def adaptive_s_prime(problem: IsingProblem, state, dist: float, n_step: int,
                     call_config: CallConfig = CallConfig(), seed: int = 0,
                     literal: bool = False) -> AdaptiveResult:
    if not 0 < dist <= problem.n:
        raise ValueError("dist must lie in (0, n]")
    state = as_spins(state, problem.n)
    calls = iter(range(n_step))

    def measure(s):
        res = call_config.call(problem, state, s, seed=_subseed(seed, next(calls)))
        return typical_hamming_dist(res)

    return bisect_s_prime(measure, dist, n_step, literal=literal)


def _subseed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=keys).generate_state(1, np.uint64)[0])


# -- parallel tempering --------------------------------------------------

def swap_probability(t_j: float, t_k: float, e_j: float, e_k: float) -> float:
    """min(1, exp((1/T_j - 1/T_k)(E_j - E_k))); zero temperature means infinite beta."""
    b_j = math.inf if t_j == 0 else 1.0 / t_j
    b_k = math.inf if t_k == 0 else 1.0 / t_k
    de = e_j - e_k
    if de == 0:
        return 1.0
    if math.isinf(b_j) or math.isinf(b_k):
        db = b_j - b_k if not (math.isinf(b_j) and math.isinf(b_k)) else 0.0
        x = 0.0 if db == 0 else math.copysign(math.inf, db * de)
    else:
        x = (b_j - b_k) * de
    return 1.0 if x >= 0 else math.exp(x)


@dataclass
class Replica:
    state: np.ndarray
    energy: float
    s_prime: float

    def to_dict(self) -> dict:
        return {"state": spins_to_str(self.state), "energy": self.energy, "s_prime": self.s_prime}


@dataclass(frozen=True)
class PTConfig:
    s_primes: tuple[float, ...]
    n_steps: int = 10
    n_cycles_per_call: int = 5
    energy_measure: str = "min"
    include_virtual_s1: bool = False
    adjacent_only: bool = False

    def __post_init__(self):
        sp = tuple(float(s) for s in self.s_primes)
        if not sp:
            raise ValueError("need at least one s'")
        if any(not 0.0 < s < 1.0 for s in sp):
            raise ValueError("s' values must lie in (0, 1) so T_eff is finite and positive")
        if any(b <= a for a, b in zip(sp, sp[1:])):
            raise ValueError("s' values must be strictly increasing")
        if self.energy_measure not in ("min", "mean"):
            raise ValueError("energy_measure must be 'min' or 'mean'")
        object.__setattr__(self, "s_primes", sp)


@dataclass
class StepRecord:
    step: int
    replicas: list[Replica]
    decisions: list[dict] = field(default_factory=list)
    seed: int | None = None

    def to_json(self) -> str:
        return json.dumps({"step": self.step, "seed": self.seed,
                           "replicas": [r.to_dict() for r in self.replicas],
                           "decisions": self.decisions})


def _measure(result, how: str) -> float:
    return result.min_energy if how == "min" else result.mean_energy


def quantum_parallel_tempering(problem: IsingProblem, config: PTConfig,
                               call: CallConfig = CallConfig(), seed: int = 0) -> list[StepRecord]:
    """Replicas at fixed s' exchange states with the effective-temperature swap rule.

    Each annealer call runs ``config.n_cycles_per_call`` cycles; the rest of
    the call settings come from ``call``.
    """
    call = replace(call, n_cycles=config.n_cycles_per_call)
    rng = task_rng(seed, 0)
    temps = [teff_of_s(call.schedule, s) for s in config.s_primes]
    replicas = [Replica(z, energy(problem, z), s)
                for z, s in zip((random_spins(problem.n, rng) for _ in config.s_primes), config.s_primes)]
    if config.include_virtual_s1:
        best = min(replicas, key=lambda r: r.energy)
        replicas.append(Replica(best.state.copy(), best.energy, 1.0))
        temps.append(0.0)
    n_active = len(config.s_primes)
    history = []
    for step in range(config.n_steps):
        step_seed = _subseed(seed, 1, step)
        for j in range(n_active):
            res = call.call(problem, replicas[j].state, replicas[j].s_prime, seed=_subseed(step_seed, j))
            replicas[j] = Replica(res.best_state, _measure(res, config.energy_measure), replicas[j].s_prime)
        decisions = []
        n = len(replicas)
        pairs = ([(j, j + 1) for j in range(n - 1)] if config.adjacent_only
                 else [(j, k) for j in range(n) for k in range(j + 1, n)])
        for j, k in pairs:
            p = swap_probability(temps[j], temps[k], replicas[j].energy, replicas[k].energy)
            u = rng.random()
            accepted = bool(u < p)
            if accepted:
                rj, rk = replicas[j], replicas[k]
                replicas[j] = Replica(rk.state, rk.energy, rj.s_prime)
                replicas[k] = Replica(rj.state, rj.energy, rk.s_prime)
            decisions.append({"pair": [j, k], "prob": p, "accepted": accepted})
        history.append(StepRecord(step, [Replica(r.state.copy(), r.energy, r.s_prime) for r in replicas],
                                  decisions, step_seed))
    return history


# -- population annealing ------------------------------------------------

def resampling_means(energies, d_beta: float, n_bar: float) -> np.ndarray:
    """Mean copy numbers exp(d_beta * E_i) / Q, with Q making them sum to ``n_bar``."""
    e = np.asarray(energies, dtype=float)
    x = d_beta * e
    w = np.exp(x - x.max())
    return n_bar * w / w.sum()


def normalization_factor(energies, d_beta: float, n_bar: float) -> float:
    e = np.asarray(energies, dtype=float)
    return float(np.exp(d_beta * e).sum() / n_bar)


@dataclass(frozen=True)
class PAConfig:
    s_primes: tuple[float, ...]
    n_bar: int = 20
    n_cycles_per_call: int = 5
    energy_measure: str = "min"

    def __post_init__(self):
        sp = tuple(float(s) for s in self.s_primes)
        if len(sp) < 2:
            raise ValueError("population annealing needs at least two s' values")
        if any(not 0.0 < s < 1.0 for s in sp) or any(b <= a for a, b in zip(sp, sp[1:])):
            raise ValueError("s' values must be strictly increasing inside (0, 1)")
        if self.n_bar < 1:
            raise ValueError("n_bar must be positive")
        if self.energy_measure not in ("min", "mean"):
            raise ValueError("energy_measure must be 'min' or 'mean'")
        object.__setattr__(self, "s_primes", sp)


@dataclass
class PAResult:
    stages: list[StepRecord]
    exhausted: bool = False
    population: list[np.ndarray] = field(default_factory=list)

    @property
    def final(self) -> list[Replica]:
        return self.stages[-1].replicas if self.stages else []


def quantum_population_annealing(problem: IsingProblem, config: PAConfig,
                                 call: CallConfig = CallConfig(), seed: int = 0) -> PAResult:
    """Anneal a population through increasing s', resampling by Poisson copy numbers.

    Stage ``i`` anneals at ``s_primes[i]`` and resamples toward
    ``s_primes[i + 1]``; the resampled states are returned as ``population``.
    """
    call = replace(call, n_cycles=config.n_cycles_per_call)
    rng = task_rng(seed, 0)
    states = [random_spins(problem.n, rng) for _ in range(config.n_bar)]
    stages = []
    sched = call.schedule
    for i in range(len(config.s_primes) - 1):
        stage_seed = _subseed(seed, 1, i)
        s_old, s_new = config.s_primes[i], config.s_primes[i + 1]
        energies = []
        for j, z in enumerate(states):
            res = call.call(problem, z, s_old, seed=_subseed(stage_seed, j))
            states[j] = res.best_state
            energies.append(_measure(res, config.energy_measure))
        d_beta = 1.0 / teff_of_s(sched, s_old) - 1.0 / teff_of_s(sched, s_new)
        means = resampling_means(energies, d_beta, config.n_bar)
        copies = rng.poisson(means)
        new_states = [states[j] for j in range(len(states)) for _ in range(copies[j])]
        decisions = [{"mean_copies": float(m), "copies": int(c)} for m, c in zip(means, copies)]
        stages.append(StepRecord(i, [Replica(z.copy(), e, s_old) for z, e in zip(states, energies)],
                                 decisions, stage_seed))
        states = new_states
        if not states:
            return PAResult(stages, exhausted=True)
    return PAResult(stages, population=states)


# -- hybrid driver -------------------------------------------------------

@dataclass(frozen=True)
class Stage:
    """``kind`` is ``random``, ``classical_sa`` or ``quantum_local``."""

    kind: str
    s_prime: float = 1.0
    sa: object = None

    def __post_init__(self):
        if self.kind not in ("random", "classical_sa", "quantum_local"):
            raise ValueError(f"unknown stage kind {self.kind!r}")


def hybrid_search(problem: IsingProblem, stages: Sequence[Stage], init=None,
                  call: CallConfig = CallConfig(), seed: int = 0) -> tuple[Replica, list[Replica]]:
    """Thread one state through classical and quantum local stages.

    Returns the best replica seen and the best-so-far after every stage.
    """
    from .sa import SaConfig, simulated_annealing

    if not stages:
        raise ValueError("need at least one stage")
    rng = task_rng(seed, 0)
    current = as_spins(init, problem.n) if init is not None else random_spins(problem.n, rng)
    best = Replica(current.copy(), energy(problem, current), 1.0)
    trace = []
    for k, stage in enumerate(stages):
        if stage.kind == "random":
            current = random_spins(problem.n, rng)
        elif stage.kind == "classical_sa":
            cfg = stage.sa if stage.sa is not None else SaConfig()
            current, _ = simulated_annealing(problem, cfg, init=current, rng=task_rng(seed, 1, k))
        else:
            res = call.call(problem, current, stage.s_prime, seed=_subseed(seed, 2, k))
            current = res.best_state
        e = energy(problem, current)
        if e < best.energy:
            best = Replica(current.copy(), e, stage.s_prime if stage.kind == "quantum_local" else 1.0)
        trace.append(Replica(best.state.copy(), best.energy, best.s_prime))
    return best, trace
