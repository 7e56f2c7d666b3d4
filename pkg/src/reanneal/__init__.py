"""Reverse-annealing local search on an emulated quantum annealer."""
from .errors import CapacityError, ConfigError, PreparationError
from .ising import (GadgetParams, IsingProblem, build_benchmark, build_init_problem, energy,
                    exhaustive_ground_state, load_benchmark, read_problem, write_problem)
from .meta import (CallConfig, PAConfig, PTConfig, adaptive_s_prime, effective_temperature,
                   hybrid_search, quantum_parallel_tempering, quantum_population_annealing)
from .protocol import LINEAR, AnnealSchedule, CycleSpec, annealer_call, annealing_cycle, forward_qaa
from .qmc import PiqaParams, run_mcs, run_trajectory
from .sa import SaConfig, simulated_annealing

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule", "CallConfig", "CapacityError", "ConfigError", "CycleSpec", "GadgetParams",
    "IsingProblem", "LINEAR", "PAConfig", "PTConfig", "PiqaParams", "PreparationError", "SaConfig",
    "adaptive_s_prime", "annealer_call", "annealing_cycle", "build_benchmark", "build_init_problem",
    "effective_temperature", "energy", "exhaustive_ground_state", "forward_qaa", "hybrid_search",
    "load_benchmark", "quantum_parallel_tempering", "quantum_population_annealing", "read_problem",
    "run_mcs", "run_trajectory", "simulated_annealing", "write_problem",
]
