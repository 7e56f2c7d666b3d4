"""Time the compiled and pure-Python kernels on the benchmark instance.

    python benchmarks/bench_kernels.py [--mcs 200] [--P 60] [--repeat 3]

Both backends consume the same uniforms, so the script also confirms that
their final states agree bit for bit.
"""
import argparse
import time

import numpy as np

from reanneal import _pykernels
from reanneal.ising import load_benchmark
from reanneal.qmc import slice_coupling

try:
    from reanneal import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_piqa(mod, problem, P, n_mcs, repeat):
    rng = np.random.default_rng(0)
    start = rng.choice(np.array([-1, 1], np.int8), (P, problem.n))
    u = rng.random(n_mcs * (P * problem.n + problem.n))
    ptr, idx, jv = problem.csr
    jperp = slice_coupling(0.5, P, 0.05)
    snaps = np.empty((0, P, problem.n), np.int8)

    def run():
        s = start.copy()
        mod.piqa_mcs(s, problem.h, ptr, idx, jv, 0.5, jperp, P * 0.05, True, True, u, snaps)
        return s

    return best_of(run, repeat)


def bench_classical(mod, problem, n_sweeps, repeat):
    rng = np.random.default_rng(1)
    start = rng.choice(np.array([-1, 1], np.int8), problem.n)
    temps = np.linspace(10.0, 0.0, n_sweeps)
    u = rng.random(n_sweeps * problem.n)
    ptr, idx, jv = problem.csr

    def run():
        z = start.copy()
        mod.classical_sweeps(z, problem.h, ptr, idx, jv, temps, u)
        return z

    return best_of(run, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mcs", type=int, default=200)
    ap.add_argument("--P", type=int, default=60)
    ap.add_argument("--sweeps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    problem = load_benchmark()
    backends = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled kernels not built; timing the Python fallback only")

    rows = []
    for label, work, fn in [
        (f"piqa_mcs  P={args.P} n={problem.n} x{args.mcs}", args.mcs * args.P * problem.n,
         lambda m: bench_piqa(m, problem, args.P, args.mcs, args.repeat)),
        (f"classical n={problem.n} x{args.sweeps}", args.sweeps * problem.n,
         lambda m: bench_classical(m, problem, args.sweeps, args.repeat)),
    ]:
        results = {name: fn(mod) for name, mod in backends}
        states = [out for _, out in results.values()]
        same = all(np.array_equal(states[0], s) for s in states[1:])
        for name, (t, _) in results.items():
            rows.append((label, name, t, t / work * 1e9))
        if len(results) == 2:
            speedup = results["python"][0] / results["cython"][0]
            rows.append((label, "speedup", speedup, float("nan")))
            rows.append((label, "identical", float(same), float("nan")))

    print(f"{'kernel':<36} {'backend':<10} {'seconds / x':>12} {'ns / spin update':>17}")
    for label, name, t, ns in rows:
        if name == "speedup":
            print(f"{label:<36} {name:<10} {t:>11.1f}x")
        elif name == "identical":
            print(f"{label:<36} {name:<10} {'yes' if t else 'NO':>12}")
        else:
            print(f"{label:<36} {name:<10} {t:>12.4f} {ns:>17.1f}")


if __name__ == "__main__":
    main()
