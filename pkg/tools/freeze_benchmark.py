"""Regenerate the checked-in benchmark instance from the GadgetParams defaults."""
from dataclasses import asdict
from pathlib import Path

from reanneal.ising import (BENCHMARK_FILE, GadgetParams, build_benchmark, exhaustive_ground_state,
                            spins_to_str, write_problem)

params = GadgetParams()
problem = build_benchmark(params)
z, e, deg = exhaustive_ground_state(problem)
comment = "\n".join([
    f"Dickson-style {problem.n}-qubit ring gadget, delta = {params.delta}",
    "params: " + " ".join(f"{k}={v:g}" for k, v in asdict(params).items()),
    "convention: E = -sum h z - sum J z z (positive J is ferromagnetic)",
    f"ground state: {spins_to_str(z)} energy {e!r} degeneracy {deg}",
])
out = Path(__file__).resolve().parents[1] / "src" / "reanneal" / "data" / BENCHMARK_FILE
write_problem(problem, out, comment=comment)
print(out)
