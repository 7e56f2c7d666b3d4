"""Experiment drivers behind the CLI and the statistical property checks.

Every driver takes a resolved configuration dict and returns
``(columns, rows)`` for CSV output or a list of JSON-serialisable records.
Randomness for task ``k`` always comes from ``task_rng(seed, ...)``, so
results do not depend on how tasks are distributed over workers.
"""
from __future__ import annotations

import math
from statistics import NormalDist
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

from .errors import ConfigError
from .ising import (GadgetParams, IsingProblem, NoiseSpec, as_spins, build_benchmark, energy,
                    corruption_probability, exhaustive_ground_state, load_benchmark,
                    mean_energy_shift, random_spins, read_problem, spins_to_str, str_to_spins)
from .meta import (CallConfig, PAConfig, PTConfig, Stage, adaptive_s_prime, hybrid_search,
                   quantum_parallel_tempering, quantum_population_annealing, teff_of_s)
from .protocol import (LINEAR, AnnealSchedule, CycleSpec, _spread, annealer_call, annealing_cycle,
                       forward_qaa)
from .qmc import PiqaParams, classical_preanneal, run_trajectory, task_rng, trotter_state
from .sa import SaConfig, simulated_annealing

DESK_FACTOR = 5

# name -> (default, kind); kinds: int, float, bool, str, ints, floats
COMMON = {
    "seed": (0, "int"),
    "problem": ("benchmark", "str"),
    "dwave_sign": (False, "bool"),
    "delta": (0.2, "float"),
    "P": (60, "int"),
    "T": (0.05, "float"),
    "schedule_file": ("", "str"),
}

COMMANDS: dict[str, dict] = {
    "teff-curve": {"s_points": (101, "int")},
    "fig-sa": {"delta_grid": ((0.0, 0.1, 0.2, 0.3, 0.4), "floats"), "runs": (1000, "int"),
               "n_steps": (1000, "int"), "t_start": (10.0, "float")},
    "fig-range": {"taus": ((500, 1000, 2000, 3000, 4000, 5000), "ints"), "runs": (1000, "int"),
                  "ratio_max": (3.0, "float"), "points": (30, "int"), "forward_tau": (1000, "int")},
    "fig-local-search": {"n_starts": (500, "int"), "tau": (1000, "int"),
                         "ratios": ((0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0), "floats"),
                         "s_steps": (50, "int"), "preanneal_sweeps": (100, "int")},
    "pt": {"s_primes": ((0.4, 0.5, 0.6, 0.7, 0.8), "floats"), "n_steps": (10, "int"),
           "n_cycles": (5, "int"), "tau": (1000, "int"), "energy_measure": ("min", "str"),
           "virtual_s1": (True, "bool"), "adjacent_only": (False, "bool")},
    "pa": {"s_primes": ((0.4, 0.5, 0.6, 0.7, 0.8), "floats"), "n_bar": (20, "int"),
           "n_cycles": (5, "int"), "tau": (1000, "int"), "energy_measure": ("min", "str")},
    "adaptive": {"dist": (2.0, "float"), "n_step": (6, "int"), "start": ("ground", "str"),
                 "n_cycles": (20, "int"), "tau": (1000, "int"), "literal": (False, "bool")},
    "hybrid": {"stages": ("random,sa,q:0.8,q:0.8", "str"), "n_cycles": (5, "int"),
               "tau": (1000, "int"), "sa_steps": (1000, "int"), "sa_t_start": (10.0, "float")},
    "noise": {"mode": ("radius", "str"), "sigma_h": (0.3, "float"), "sigma_j": (0.3, "float"),
              "radii": ((0, 1, 2, 4, 8, 16), "ints"), "trials": (1000, "int"), "center": ("ground", "str"),
              "n_cores": ((4, 6, 8), "ints"), "n_states": (200, "int")},
    "solve": {"method": ("exhaustive", "str"), "runs": (10, "int"), "tau": (1000, "int"),
              "s_prime": (0.8, "float"), "start": ("random", "str")},
}

RUN_COUNT_KEYS = {"fig-sa": ("runs",), "fig-range": ("runs",), "fig-local-search": ("n_starts",),
                  "noise": ("trials",), "solve": ("runs",)}


def _parse(value: str, kind: str):
    value = value.strip()
    try:
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        if kind == "bool":
            low = value.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(value)
            return low in ("true", "1", "yes")
        if kind == "ints":
            return tuple(int(v) for v in value.split(",") if v.strip())
        if kind == "floats":
            return tuple(float(v) for v in value.split(",") if v.strip())
        return value
    except ValueError:
        raise ConfigError(f"cannot read {value!r} as {kind}") from None


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return ",".join(format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines, or the ``# config:`` header of an earlier output file.

    When header lines are present everything else (the data) is ignored.
    """
    out = {}
    lines = text.splitlines()
    header = [raw.strip()[len("# config:"):] for raw in lines if raw.strip().startswith("# config:")]
    for raw in header or lines:
        line = raw.strip()
        if line.startswith("#"):
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line without '=': {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def resolve_config(command: str, raw: dict[str, str], desk_scale: bool = False) -> dict:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    spec = {**COMMON, **COMMANDS[command]}
    unknown = set(raw) - set(spec) - {"desk_scale"}
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {', '.join(sorted(unknown))}")
    cfg = {k: (_parse(raw[k], kind) if k in raw else default) for k, (default, kind) in spec.items()}
    already = _parse(raw["desk_scale"], "bool") if "desk_scale" in raw else False
    cfg["desk_scale"] = desk_scale or already
    if cfg["desk_scale"] and not already:
        for key in RUN_COUNT_KEYS.get(command, ()):
            cfg[key] = max(1, cfg[key] // DESK_FACTOR)
    return cfg


def config_lines(cfg: dict) -> list[str]:
    return [f"{k} = {format_value(v)}" for k, v in sorted(cfg.items())]


# -- shared helpers ------------------------------------------------------

def _pmap(fn: Callable, tasks: list, workers: int = 1) -> list:
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def load_problem(cfg: dict) -> IsingProblem:
    src = cfg["problem"]
    if src == "benchmark":
        if cfg["delta"] == 0.2:
            return load_benchmark()
        return build_benchmark(GadgetParams(delta=cfg["delta"]))
    try:
        return read_problem(src, dwave_sign=cfg["dwave_sign"])
    except OSError as exc:
        raise ConfigError(f"cannot read problem file {src}: {exc}") from None


def load_schedule(cfg: dict) -> AnnealSchedule:
    if not cfg["schedule_file"]:
        return LINEAR
    try:
        return AnnealSchedule.from_file(cfg["schedule_file"])
    except OSError as exc:
        raise ConfigError(f"cannot read schedule file: {exc}") from None


def params_of(cfg: dict) -> PiqaParams:
    return PiqaParams(P=cfg["P"], T=cfg["T"], seed=cfg["seed"])


def binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n)


# -- T_eff curve ---------------------------------------------------------

def teff_curve(cfg: dict):
    sched = load_schedule(cfg)
    rows = []
    for s in np.linspace(0.0, 1.0, cfg["s_points"]):
        A, B = sched(float(s))
        rows.append((float(s), A, B, teff_of_s(sched, float(s))))
    return ("s", "A", "B", "T_eff"), rows


def check_teff_curve(rows) -> list[tuple[str, bool, str]]:
    t = [r[3] for r in rows]
    ok = all(b < a for a, b in zip(t, t[1:]))
    return [("T_eff strictly decreasing in s", ok, f"{len(t)} points")]


# -- Fig. 3: SA versus delta ---------------------------------------------

def _sa_task(args):
    problem, e0, cfg_sa, seed, r = args
    _, e = simulated_annealing(problem, cfg_sa, rng=task_rng(seed, r))
    return e <= e0 + 1e-9


def fig_sa(cfg: dict, workers: int = 1):
    rows = []
    sa_cfg = SaConfig(n_steps=cfg["n_steps"], t_start=cfg["t_start"], t_end=0.0)
    for d_idx, delta in enumerate(cfg["delta_grid"]):
        problem = build_benchmark(GadgetParams(delta=delta))
        _, e0, _ = exhaustive_ground_state(problem)
        seed = int(np.random.SeedSequence(cfg["seed"], spawn_key=(d_idx,)).generate_state(1)[0])
        hits = _pmap(_sa_task, [(problem, e0, sa_cfg, seed, r) for r in range(cfg["runs"])], workers)
        p = sum(hits) / cfg["runs"]
        rows.append((delta, p, binomial_stderr(p, cfg["runs"])))
    return ("delta", "success_prob", "stderr"), rows


# -- Fig. 4: search range ------------------------------------------------

def range_grid(schedule: AnnealSchedule, ratio_max: float, points: int) -> np.ndarray:
    s_end = schedule.s_at_ratio(ratio_max)
    return np.linspace(1.0, s_end, points + 1)[1:]


def _backward_task(args):
    problem, schedule, grid, tau, params, ground, seed, r = args
    path = list(zip(grid.tolist(), _spread(tau, len(grid))))
    _, log = run_trajectory(problem, schedule, path, params, trotter_state(ground, params.P),
                            task_rng(seed, r), reference=ground)
    return [row["mean_hamming"] for row in log]


def _forward_task(args):
    problem, schedule, grid, tau, params, ground, seed, r = args
    rng = task_rng(seed, r)
    z0 = classical_preanneal(problem, params.PT, random_spins(problem.n, rng), rng)
    path_s = list(grid[::-1]) + [1.0]
    path = list(zip(path_s, _spread(tau, len(path_s))))
    _, log = run_trajectory(problem, schedule, path, params, trotter_state(z0, params.P), rng,
                            reference=ground)
    return [row["mean_hamming"] for row in log]


def fig_range(cfg: dict, workers: int = 1):
    problem = load_problem(cfg)
    schedule = load_schedule(cfg)
    params = params_of(cfg)
    ground, _, _ = exhaustive_ground_state(problem)
    grid = range_grid(schedule, cfg["ratio_max"], cfg["points"])
    ratios = [_ratio(schedule, s) for s in grid]
    rows = []
    for t_idx, tau in enumerate(cfg["taus"]):
        tasks = [(problem, schedule, grid, tau, params, ground, _seed(cfg["seed"], 0, t_idx), r)
                 for r in range(cfg["runs"])]
        h = np.array(_pmap(_backward_task, tasks, workers))
        for k, ratio in enumerate(ratios):
            rows.append((tau, ratio, float(h[:, k].mean()), _sem(h[:, k]), "backward"))
    tasks = [(problem, schedule, grid, cfg["forward_tau"], params, ground, _seed(cfg["seed"], 1), r)
             for r in range(cfg["runs"])]
    h = np.array(_pmap(_forward_task, tasks, workers))
    fwd_ratios = ratios[::-1] + [0.0]
    for k, ratio in enumerate(fwd_ratios):
        rows.append((cfg["forward_tau"], ratio, float(h[:, k].mean()), _sem(h[:, k]), "forward"))
    return ("tau", "A_over_B", "mean_hamming", "stderr", "direction"), rows


def _ratio(schedule, s):
    A, B = schedule(float(s))
    return A / B if B > 0 else math.inf


def _sem(x) -> float:
    x = np.asarray(x, float)
    return float(x.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else 0.0


def _seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=keys).generate_state(1, np.uint64)[0])


def _spearman(x, y) -> float:
    rx = np.argsort(np.argsort(x)).astype(float)
    ry = _average_ranks(np.asarray(y, float))
    return float(np.corrcoef(rx, ry)[0, 1])


def _average_ranks(y):
    order = np.argsort(y, kind="mergesort")
    ranks = np.empty(len(y))
    ys = y[order]
    i = 0
    while i < len(y):
        j = i
        while j + 1 < len(y) and ys[j + 1] == ys[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j)
        i = j + 1
    return ranks


def family_wise_z(z: float, m: int) -> float:
    """One-sided threshold giving ``m`` comparisons the joint false-alarm rate of one test at ``z``."""
    nd = NormalDist()
    return nd.inv_cdf(1.0 - nd.cdf(-z) / max(m, 1))


def check_fig_range(rows, n_spins: int = 16, tol_scale: float = 1.0):
    """Frozen start near zero, monotone curves, tau ordering, merge with the forward curve."""
    back = {}
    fwd = {}
    for tau, ratio, h, se, direction in rows:
        (back.setdefault(tau, []) if direction == "backward" else fwd.setdefault(tau, [])).append((ratio, h, se))
    results = []
    small = [min(curve)[1] for curve in back.values()]
    limit = 0.05 * n_spins * tol_scale
    results.append(("mean Hamming ~0 at smallest A/B", max(small) < limit,
                    f"max {max(small):.3f} < {limit:.3f}"))
    rhos = {tau: _spearman([c[0] for c in curve], [c[1] for c in curve]) for tau, curve in back.items()}
    results.append(("Spearman(A/B, Hamming) > 0.95 for every tau", min(rhos.values()) > 0.95,
                    ", ".join(f"{t}:{r:.3f}" for t, r in sorted(rhos.items()))))
    taus = sorted(back)
    zs = [(h2 - h1) / max(math.hypot(s1, s2), 1e-12)
          for lo, hi in zip(taus, taus[1:])
          for (_, h1, s1), (_, h2, s2) in zip(sorted(back[lo]), sorted(back[hi]))]
    # 2 sigma as a family-wise level: the whole set of comparisons gets the
    # false-alarm rate of a single one-sided 2 sigma test (Bonferroni)
    z_crit = family_wise_z(2.0, len(zs))
    worst = min(zs, default=math.inf)
    results.append(("larger tau >= smaller tau within 2 sigma (family-wise)", worst >= -z_crit,
                    f"min z = {worst:.2f}, threshold -{z_crit:.2f} over {len(zs)} comparisons, "
                    f"{sum(z < -2.0 for z in zs)} below -2 individually"))
    merge_ok = True
    detail = []
    for ftau, fcurve in fwd.items():
        top = max(fcurve)
        for tau, curve in back.items():
            b = max(curve)
            z = abs(b[1] - top[1]) / max(math.hypot(b[2], top[2]), 1e-12)
            detail.append(f"{tau}:{z:.2f}")
            merge_ok &= z <= 3.0
    results.append(("backward meets forward at max A/B within 3 sigma", merge_ok, " ".join(detail)))
    return results


# -- Fig. 5: local search ------------------------------------------------

def _local_task(args):
    problem, schedule, cycle, params, start, ground, seed, r = args
    out = annealing_cycle(problem, start, cycle, schedule, params, task_rng(seed, r))
    return bool(np.array_equal(out.state, ground))


def local_search_starts(problem: IsingProblem, n_starts: int, params: PiqaParams, seed: int,
                        sweeps: int = 100) -> list[np.ndarray]:
    """Uniform random states, each relaxed by the same classical pre-anneal at T."""
    rng = task_rng(seed, 0)
    raw = [random_spins(problem.n, rng) for _ in range(n_starts)]
    return [classical_preanneal(problem, params.T, z, task_rng(seed, 1, k), n_sweeps=sweeps)
            for k, z in enumerate(raw)]


def fig_local_search(cfg: dict, workers: int = 1):
    problem = load_problem(cfg)
    schedule = load_schedule(cfg)
    params = params_of(cfg)
    ground, _, _ = exhaustive_ground_state(problem)
    starts = local_search_starts(problem, cfg["n_starts"], params, cfg["seed"], cfg["preanneal_sweeps"])
    rows = []
    n = cfg["n_starts"]
    for g_idx, ratio in enumerate(cfg["ratios"]):
        cycle = CycleSpec(s_prime=schedule.s_at_ratio(ratio), total_mcs=cfg["tau"], s_steps=cfg["s_steps"])
        seed = _seed(cfg["seed"], 2, g_idx)
        hits = _pmap(_local_task, [(problem, schedule, cycle, params, z, ground, seed, r)
                                   for r, z in enumerate(starts)], workers)
        p = sum(hits) / n
        rows.append((ratio, p, binomial_stderr(p, n)))
    return ("A_over_B_at_sprime", "success_prob", "stderr"), rows


def check_fig_local_search(rows, n: int):
    ratios = [r[0] for r in rows]
    p = [r[1] for r in rows]

    def sig(a, b):
        return math.hypot(binomial_stderr(a, n), binomial_stderr(b, n))

    plateau_ok = abs(p[1] - p[0]) <= 2 * max(sig(p[0], p[1]), 1.0 / n)
    k = int(np.argmax(p[1:-1])) + 1
    peak, base, last = p[k], p[0], p[-1]
    z_peak = (peak - base) / max(sig(peak, base), 1e-12)
    z_drop = (peak - last) / max(sig(peak, last), 1e-12)
    return [
        ("plateau at small A/B", plateau_ok, f"p({ratios[0]})={p[0]:.3f}, p({ratios[1]})={p[1]:.3f}"),
        ("interior maximum above plateau by > 3 sigma", z_peak > 3, f"peak {peak:.3f} at {ratios[k]}, z={z_peak:.1f}"),
        ("large-A/B value below maximum by > 3 sigma", z_drop > 3, f"p({ratios[-1]})={last:.3f}, z={z_drop:.1f}"),
    ]


# -- meta-algorithm drivers ----------------------------------------------

def call_config(cfg: dict, n_cycles: int, tau: int) -> CallConfig:
    return CallConfig(n_cycles=n_cycles, cycle=CycleSpec(total_mcs=tau, s_steps=min(50, tau // 2)),
                      schedule=load_schedule(cfg), params=params_of(cfg))


def run_pt(cfg: dict):
    problem = load_problem(cfg)
    conf = PTConfig(tuple(cfg["s_primes"]), n_steps=cfg["n_steps"], n_cycles_per_call=cfg["n_cycles"],
                    energy_measure=cfg["energy_measure"], include_virtual_s1=cfg["virtual_s1"],
                    adjacent_only=cfg["adjacent_only"])
    hist = quantum_parallel_tempering(problem, conf, call_config(cfg, cfg["n_cycles"], cfg["tau"]), cfg["seed"])
    return [rec.to_json() for rec in hist]


def run_pa(cfg: dict):
    import json

    problem = load_problem(cfg)
    conf = PAConfig(tuple(cfg["s_primes"]), n_bar=cfg["n_bar"], n_cycles_per_call=cfg["n_cycles"],
                    energy_measure=cfg["energy_measure"])
    res = quantum_population_annealing(problem, conf, call_config(cfg, cfg["n_cycles"], cfg["tau"]), cfg["seed"])
    lines = [rec.to_json() for rec in res.stages]
    lines.append(json.dumps({"summary": True, "exhausted": res.exhausted,
                             "population": [spins_to_str(z) for z in res.population],
                             "energies": [energy(problem, z) for z in res.population]}))
    return lines


def _start_state(problem, which: str, seed: int) -> np.ndarray:
    if which == "ground":
        return exhaustive_ground_state(problem)[0]
    if which == "random":
        return random_spins(problem.n, task_rng(seed, 99))
    return as_spins(str_to_spins(which), problem.n)


def run_adaptive(cfg: dict):
    import json

    problem = load_problem(cfg)
    state = _start_state(problem, cfg["start"], cfg["seed"])
    res = adaptive_s_prime(problem, state, cfg["dist"], cfg["n_step"],
                           call_config(cfg, cfg["n_cycles"], cfg["tau"]), seed=cfg["seed"], literal=cfg["literal"])
    return [json.dumps({"state": spins_to_str(state), "dist": cfg["dist"], "s_prime": res.s_prime,
                        "s_min": res.s_min, "s_max": res.s_max,
                        "history": [{"s_prime": s, "typical_hamming": d} for s, d in res.history],
                        "seed": cfg["seed"]})]


def parse_stages(text: str, sa_cfg: SaConfig) -> list[Stage]:
    stages = []
    for tok in (t.strip() for t in text.split(",") if t.strip()):
        if tok == "random":
            stages.append(Stage("random"))
        elif tok == "sa":
            stages.append(Stage("classical_sa", sa=sa_cfg))
        elif tok.startswith("q:"):
            stages.append(Stage("quantum_local", s_prime=_parse(tok[2:], "float")))
        else:
            raise ConfigError(f"unknown stage {tok!r} (use random, sa, q:<s'>)")
    if not stages:
        raise ConfigError("no stages given")
    return stages


def run_hybrid(cfg: dict):
    import json

    problem = load_problem(cfg)
    sa_cfg = SaConfig(n_steps=cfg["sa_steps"], t_start=cfg["sa_t_start"])
    stages = parse_stages(cfg["stages"], sa_cfg)
    best, trace = hybrid_search(problem, stages, call=call_config(cfg, cfg["n_cycles"], cfg["tau"]), seed=cfg["seed"])
    return [json.dumps({"best": best.to_dict(), "trace": [r.to_dict() for r in trace], "seed": cfg["seed"]})]


def run_noise(cfg: dict):
    if cfg["mode"] == "scaling":
        rows = []
        for m in cfg["n_cores"]:
            prob = build_benchmark(GadgetParams(n_core=m, delta=cfg["delta"]))
            shift = mean_energy_shift(prob, NoiseSpec(cfg["sigma_h"], cfg["sigma_j"], cfg["seed"]),
                                      cfg["n_states"], cfg["trials"])
            rows.append((m, prob.n, shift))
        return ("n_core", "n", "mean_abs_dE"), rows
    if cfg["mode"] != "radius":
        raise ConfigError("noise mode must be 'radius' or 'scaling'")
    problem = load_problem(cfg)
    center = _start_state(problem, cfg["center"], cfg["seed"])
    noise = NoiseSpec(cfg["sigma_h"], cfg["sigma_j"], cfg["seed"])
    rows = []
    for r in cfg["radii"]:
        p = corruption_probability(problem, noise, center, min(r, problem.n), cfg["trials"])
        rows.append((r, p, binomial_stderr(p, cfg["trials"])))
    return ("radius", "corruption_prob", "stderr"), rows


def run_solve(cfg: dict):
    import json

    problem = load_problem(cfg)
    method = cfg["method"]
    if method == "exhaustive":
        z, e, deg = exhaustive_ground_state(problem)
        return [json.dumps({"method": method, "state": spins_to_str(z), "energy": e, "degeneracy": deg})]
    if method == "sa":
        out = [simulated_annealing(problem, SaConfig(), rng=task_rng(cfg["seed"], r)) for r in range(cfg["runs"])]
        best = min(out, key=lambda t: t[1])
        return [json.dumps({"method": method, "state": spins_to_str(best[0]), "energy": best[1],
                            "energies": [e for _, e in out], "seed": cfg["seed"]})]
    schedule = load_schedule(cfg)
    params = params_of(cfg)
    if method == "qaa":
        res = forward_qaa(problem, cfg["tau"], schedule, params, n_cycles=cfg["runs"], seed=cfg["seed"])
    elif method == "local":
        start = _start_state(problem, cfg["start"], cfg["seed"])
        res = annealer_call(problem, start, cfg["s_prime"], cfg["runs"],
                            CycleSpec(total_mcs=cfg["tau"], s_steps=min(50, cfg["tau"] // 2)),
                            schedule, params, seed=cfg["seed"])
    else:
        raise ConfigError(f"unknown solve method {method!r}")
    d = res.to_dict()
    d["method"] = method
    return [json.dumps(d)]


CSV_DRIVERS = {"teff-curve": teff_curve, "fig-sa": fig_sa, "fig-range": fig_range,
               "fig-local-search": fig_local_search, "noise": run_noise}
JSONL_DRIVERS = {"pt": run_pt, "pa": run_pa, "adaptive": run_adaptive, "hybrid": run_hybrid,
                 "solve": run_solve}
WORKER_AWARE = {"fig-sa", "fig-range", "fig-local-search"}


def check_noise(mode: str, rows):
    """Radius mode: non-decreasing within 3 sigma. Scaling mode: log-log slope 1/2 within 20%."""
    if mode == "scaling":
        n = np.array([r[1] for r in rows], float)
        de = np.array([r[2] for r in rows], float)
        slope = float(np.polyfit(np.log(n), np.log(de), 1)[0])
        return [("mean |dE| scales as sqrt(n)", abs(slope - 0.5) <= 0.1, f"fitted exponent {slope:.3f}")]
    worst = math.inf
    for (_, p1, s1), (_, p2, s2) in zip(rows, rows[1:]):
        worst = min(worst, (p2 - p1) / max(math.hypot(s1, s2), 1e-12) if p2 < p1 else math.inf)
    ok = worst >= -3.0
    return [("corruption probability non-decreasing in radius", ok,
             "no decreases" if worst == math.inf else f"largest drop z = {worst:.2f}")]
