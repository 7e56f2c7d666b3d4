"""Ising problems, energies, the benchmark gadget and mis-specification tools.

Energies follow E(z) = -sum_i h_i z_i - sum_(i<j) J_ij z_i z_j, so a positive
coupler is ferromagnetic. Spin configurations are 1-D ``int8`` arrays with
entries in {-1, +1}.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import CapacityError

EXHAUSTIVE_MAX_N = 24
BALL_MAX_SIZE = 2**22


def as_spins(state, n: int | None = None) -> np.ndarray:
    """Validate ``state`` and return it as an ``int8`` vector."""
    z = np.asarray(state)
    if z.ndim != 1:
        raise ValueError(f"spin vector must be 1-D, got shape {z.shape}")
    if not np.all((z == 1) | (z == -1)):
        raise ValueError("spin entries must be -1 or +1")
    if n is not None and z.shape[0] != n:
        raise ValueError(f"spin vector has length {z.shape[0]}, problem has {n} spins")
    return z.astype(np.int8)


def spins_to_str(z) -> str:
    return "".join("+" if s > 0 else "-" for s in z)


def str_to_spins(text: str) -> np.ndarray:
    if not text or set(text) - {"+", "-"}:
        raise ValueError(f"not a +/- spin string: {text!r}")
    return np.array([1 if c == "+" else -1 for c in text], dtype=np.int8)


def random_spins(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)


@dataclass(frozen=True, eq=False)
class IsingProblem:
    """Local fields ``h`` and couplers ``(i, j, J)`` with ``i < j``."""

    n: int
    h: np.ndarray
    couplers: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("problem needs at least one spin")
        h = np.array(self.h, dtype=float).reshape(-1)
        if h.shape[0] != self.n:
            raise ValueError(f"h has length {h.shape[0]}, expected {self.n}")
        if not np.all(np.isfinite(h)):
            raise ValueError("fields must be finite")
        h.flags.writeable = False
        seen = set()
        cleaned = []
        for i, j, J in self.couplers:
            i, j, J = int(i), int(j), float(J)
            if i > j:
                i, j = j, i
            if not (0 <= i < j < self.n):
                raise ValueError(f"coupler ({i}, {j}) out of range for n={self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate coupler ({i}, {j})")
            if not math.isfinite(J):
                raise ValueError("couplers must be finite")
            seen.add((i, j))
            cleaned.append((i, j, J))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "couplers", tuple(sorted(cleaned)))

    def __eq__(self, other):
        if not isinstance(other, IsingProblem):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.h, other.h)
                and self.couplers == other.couplers)

    __hash__ = None

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.couplers]

    @cached_property
    def _pairs(self):
        if not self.couplers:
            return np.zeros(0, int), np.zeros(0, int), np.zeros(0)
        c = np.array(self.couplers, dtype=float)
        return c[:, 0].astype(int), c[:, 1].astype(int), c[:, 2].copy()

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric adjacency as (ptr, idx, J) arrays for the kernels."""
        nbrs: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for i, j, J in self.couplers:
            nbrs[i].append((j, J))
            nbrs[j].append((i, J))
        ptr = np.zeros(self.n + 1, dtype=np.int32)
        ptr[1:] = np.cumsum([len(r) for r in nbrs])
        idx = np.array([j for r in nbrs for j, _ in r], dtype=np.int32)
        jv = np.array([J for r in nbrs for _, J in r], dtype=np.float64)
        return ptr, idx, jv

    def energies(self, states) -> np.ndarray:
        """Vectorised energy over the last axis of ``states``."""
        z = np.asarray(states, dtype=float)
        i, j, J = self._pairs
        return -(z @ self.h) - (z[..., i] * z[..., j]) @ J

    def local_fields(self, z) -> np.ndarray:
        ptr, idx, jv = self.csr
        z = np.asarray(z, dtype=float)
        f = self.h.copy()
        contrib = jv * z[idx]
        np.add.at(f, np.repeat(np.arange(self.n), np.diff(ptr)), contrib)
        return f


def energy(problem: IsingProblem, state) -> float:
    z = as_spins(state, problem.n)
    return float(problem.energies(z))


def hamming(a, b) -> int:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


def build_init_problem(y, edges: Iterable[tuple[int, int]] | None = None) -> IsingProblem:
    """Gauge-transformed ferromagnet whose unique ground state is ``y``.

    ``edges`` defaults to the benchmark gadget's graph when ``y`` has the
    gadget's size, otherwise to a chain.
    """
    y = as_spins(y)
    n = y.shape[0]
    if edges is None:
        if n % 2 == 0 and n >= 6:
            edges = build_benchmark(GadgetParams(n_core=n // 2)).edges
        else:
            edges = [(i, i + 1) for i in range(n - 1)]
    couplers = [(i, j, float(y[i] * y[j])) for i, j in edges]
    return IsingProblem(n, y.astype(float), tuple(couplers))


@dataclass(frozen=True)
class GadgetParams:
    """Dickson-style ring gadget with ancilla spokes and a delta ring.

    Defaults were tuned so the instance is easy for simulated annealing,
    defeats forward path-integral annealing, and shows the frozen, local and
    global tunnelling regimes under reverse annealing.
    """

    n_core: int = 8
    core_field: float = 0.65
    ancilla_field: float = -0.75
    ring_coupling: float = 1.8
    spoke_coupling: float = 1.3
    delta: float = 0.2

    def __post_init__(self):
        if self.n_core < 3:
            raise ValueError("n_core must be at least 3")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")


def build_benchmark(params: GadgetParams = GadgetParams()) -> IsingProblem:
    """Core qubits ``0..n_core-1`` form the ring; ancilla ``n_core+i`` hangs off core ``i``."""
    m = params.n_core
    h = [params.core_field] * m + [params.ancilla_field] * m
    couplers = []
    for i in range(m):
        couplers.append((i, (i + 1) % m, params.ring_coupling))
        couplers.append((i, m + i, params.spoke_coupling))
        couplers.append((m + i, m + (i + 1) % m, params.delta))
    return IsingProblem(2 * m, h, tuple(couplers))


def all_states(n: int) -> np.ndarray:
    """Every configuration, row ``k`` having spin ``b`` = +1 iff bit ``b`` of ``k`` is 0."""
    idx = np.arange(2**n, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n)) & 1
    return (1 - 2 * bits).astype(np.int8)


def _lexmin(states: np.ndarray) -> np.ndarray:
    order = np.lexsort(states.T[::-1])
    return states[order[0]]


def exhaustive_ground_state(problem: IsingProblem, tol: float = 1e-9):
    """Return ``(state, energy, degeneracy)`` by brute force.

    Ties within ``tol`` count as degenerate; the lexicographically smallest
    minimiser (with -1 < +1) is returned.
    """
    n = problem.n
    if n > EXHAUSTIVE_MAX_N:
        raise CapacityError(f"exhaustive search limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
    chunk_bits = min(n, 18)
    low = all_states(chunk_bits)
    best_e = math.inf
    best: list[np.ndarray] = []
    for hi in range(2 ** (n - chunk_bits)):
        if n > chunk_bits:
            high_bits = (hi >> np.arange(n - chunk_bits)) & 1
            high = np.broadcast_to((1 - 2 * high_bits).astype(np.int8), (low.shape[0], n - chunk_bits))
            states = np.hstack([low, high])
        else:
            states = low
        e = problem.energies(states)
        m = e.min()
        if m < best_e - tol:
            best_e = float(m)
            best = [states[e <= m + tol]]
        elif m <= best_e + tol:
            best.append(states[e <= best_e + tol])
    minimisers = np.vstack(best)
    return _lexmin(minimisers), best_e, int(minimisers.shape[0])


@dataclass(frozen=True)
class NoiseSpec:
    sigma_h: float = 0.0
    sigma_j: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma_h < 0 or self.sigma_j < 0:
            raise ValueError("noise sigmas must be non-negative")


def perturb(problem: IsingProblem, noise: NoiseSpec) -> IsingProblem:
    """Copy of ``problem`` with independent Gaussian offsets on every h and J."""
    rng = np.random.default_rng(noise.seed)
    dh = rng.normal(0.0, 1.0, problem.n) * noise.sigma_h
    dj = rng.normal(0.0, 1.0, len(problem.couplers)) * noise.sigma_j
    couplers = tuple((i, j, J + d) for (i, j, J), d in zip(problem.couplers, dj))
    return IsingProblem(problem.n, problem.h + dh, couplers)


def hamming_ball(center, radius: int) -> np.ndarray:
    """All states within ``radius`` flips of ``center``, ordered by distance."""
    z = as_spins(center)
    n = z.shape[0]
    if not 0 <= radius <= n:
        raise ValueError(f"radius must lie in [0, {n}]")
    size = sum(math.comb(n, k) for k in range(radius + 1))
    if size > BALL_MAX_SIZE:
        raise CapacityError(f"Hamming ball holds {size} states, limit is {BALL_MAX_SIZE}")
    out = np.empty((size, n), dtype=np.int8)
    row = 0
    for k in range(radius + 1):
        for flips in itertools.combinations(range(n), k):
            out[row] = z
            out[row, list(flips)] *= -1
            row += 1
    return out


def corruption_probability(problem: IsingProblem, noise: NoiseSpec, center, radius: int,
                           trials: int, tol: float = 1e-9) -> float:
    """Fraction of noise draws whose in-ball minimiser is not a noiseless in-ball minimiser.

    Draw ``t`` uses seed ``(noise.seed, t)``.
    """
    ball = hamming_ball(as_spins(center, problem.n), radius)
    clean = problem.energies(ball)
    ok = clean <= clean.min() + tol
    if noise.sigma_h == 0 and noise.sigma_j == 0:
        return 0.0
    bad = 0
    for t in range(trials):
        seed = int(np.random.SeedSequence([noise.seed, t]).generate_state(1, np.uint64)[0])
        noisy = perturb(problem, NoiseSpec(noise.sigma_h, noise.sigma_j, seed)).energies(ball)
        if not ok[int(np.argmin(noisy))]:
            bad += 1
    return bad / trials


def mean_energy_shift(problem: IsingProblem, noise: NoiseSpec, n_states: int, draws: int) -> float:
    """Mean |E_noisy(z) - E(z)| over random states and noise draws."""
    rng = np.random.default_rng([noise.seed, 1])
    states = np.where(rng.random((n_states, problem.n)) < 0.5, 1, -1)
    base = problem.energies(states)
    total = 0.0
    for t in range(draws):
        noisy = perturb(problem, NoiseSpec(noise.sigma_h, noise.sigma_j, noise.seed * 1_000_003 + t))
        total += np.abs(noisy.energies(states) - base).mean()
    return total / draws


# -- problem files -------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def dumps_problem(problem: IsingProblem, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"n {problem.n}")
    lines += [f"h {i} {_fmt(v)}" for i, v in enumerate(problem.h) if v != 0]
    lines += [f"J {i} {j} {_fmt(J)}" for i, j, J in problem.couplers]
    return "\n".join(lines) + "\n"


def loads_problem(text: str, dwave_sign: bool = False) -> IsingProblem:
    """Parse the ``n``/``h``/``J`` line format.

    With ``dwave_sign`` the values are negated on ingestion, mapping the
    E = sum h z + sum J z z convention onto ours.
    """
    n = None
    h: dict[int, float] = {}
    couplers: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "h" and len(parts) == 3:
                h[int(parts[1])] = h.get(int(parts[1]), 0.0) + float(parts[2])
            elif parts[0] == "J" and len(parts) == 4:
                couplers.append((int(parts[1]), int(parts[2]), float(parts[3])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise ValueError("problem file has no 'n' record")
    if any(not 0 <= i < n for i in h):
        raise ValueError("field index out of range")
    sign = -1.0 if dwave_sign else 1.0
    hv = np.zeros(n)
    for i, v in h.items():
        hv[i] = sign * v
    return IsingProblem(n, hv, tuple((i, j, sign * J) for i, j, J in couplers))


def read_problem(path: str | Path, dwave_sign: bool = False) -> IsingProblem:
    return loads_problem(Path(path).read_text(), dwave_sign=dwave_sign)


def write_problem(problem: IsingProblem, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(dumps_problem(problem, comment))


BENCHMARK_FILE = "benchmark_dickson_delta0.2.ising"


def load_benchmark() -> IsingProblem:
    """The frozen default instance shipped with the package."""
    text = resources.files("reanneal").joinpath("data", BENCHMARK_FILE).read_text()
    return loads_problem(text)
