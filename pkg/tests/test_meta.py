import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reanneal.ising import IsingProblem, energy, load_benchmark
from reanneal.meta import (CallConfig, PAConfig, PTConfig, Stage, adaptive_s_prime, amplitude_ratio,
                           beta_eff, bisect_s_prime, effective_temperature, hybrid_search,
                           normalization_factor, quantum_parallel_tempering,
                           quantum_population_annealing, resampling_means, suggest_s_primes,
                           swap_probability, teff_of_s)
from reanneal.protocol import LINEAR, CycleSpec, annealer_call
from reanneal.qmc import PiqaParams

BENCH = load_benchmark()
FAST = CallConfig(n_cycles=2, cycle=CycleSpec(total_mcs=100, s_steps=10), params=PiqaParams(P=8, T=0.1))

positive = st.floats(1e-3, 1e3)


class TestEffectiveTemperature:
    def test_symmetric(self):
        assert effective_temperature(1.0, 1.0) == pytest.approx(1 / math.log(1 + math.sqrt(2)), abs=1e-10)
        assert effective_temperature(1.0, 1.0) == pytest.approx(1.1346, abs=1e-4)

    def test_a1_b2(self):
        assert effective_temperature(1.0, 2.0) == pytest.approx(1 / math.log(math.sqrt(5) + 2), abs=1e-12)
        assert effective_temperature(1.0, 2.0) == pytest.approx(0.6930, abs=5e-4)

    def test_limits(self):
        assert effective_temperature(0.0, 1.0) == 0.0
        assert effective_temperature(1e-12, 1.0) < 0.05
        assert effective_temperature(1.0, 0.0) == math.inf

    def test_invalid(self):
        with pytest.raises(ValueError):
            effective_temperature(-1.0, 1.0)
        with pytest.raises(ValueError):
            effective_temperature(0.0, 0.0)

    @given(positive, positive, st.floats(1e-3, 1e3))
    def test_scale_invariance(self, A, B, c):
        assert effective_temperature(c * A, c * B) == pytest.approx(effective_temperature(A, B), rel=1e-10)

    @given(positive, positive)
    def test_matches_amplitude_ratio(self, A, B):
        # squared amplitude ratio equals the Boltzmann ratio of a unit field, exp(2 / T_eff)
        assert amplitude_ratio(A, B) ** 2 == pytest.approx(math.exp(2 / effective_temperature(A, B)), rel=1e-9)

    def test_linear_schedule(self):
        assert teff_of_s(LINEAR, 0.5) == pytest.approx(1.1346, abs=1e-4)
        assert teff_of_s(LINEAR, 1.0) == 0.0
        grid = [teff_of_s(LINEAR, s) for s in np.linspace(0.001, 1.0, 1000)]
        assert all(b < a for a, b in zip(grid, grid[1:]))

    def test_suggest_s_primes_is_geometric_in_beta(self):
        sp = suggest_s_primes(LINEAR, 0.3, 0.8, 5)
        betas = [beta_eff(LINEAR, s) for s in sp]
        ratios = [b / a for a, b in zip(betas, betas[1:])]
        assert sp[0] == pytest.approx(0.3) and sp[-1] == pytest.approx(0.8)
        assert np.allclose(ratios, ratios[0], rtol=1e-9)


class TestBisection:
    def test_always_too_far(self):
        res = bisect_s_prime(lambda s: 10.0, 1.0, 4)
        assert [s for s, _ in res.history] == [0.5, 0.75, 0.875, 0.9375]
        assert res.s_prime == 1 - 2**-5

    def test_always_too_near(self):
        res = bisect_s_prime(lambda s: 0.0, 1.0, 4)
        assert [s for s, _ in res.history] == [0.5, 0.25, 0.125, 0.0625]

    @pytest.mark.parametrize("n_step", [1, 5, 12, 30])
    def test_linear_oracle(self, n_step):
        n = 16
        res = bisect_s_prime(lambda s: n * (1 - s), n / 4, n_step)
        assert res.width == 2.0**-n_step
        assert abs(res.s_prime - 0.75) <= 2.0**-n_step

    @given(st.floats(0.01, 0.99), st.integers(1, 40))
    def test_bracket_width_exact(self, root, n_step):
        res = bisect_s_prime(lambda s: 1.0 - s, 1.0 - root, n_step)
        assert res.width == 2.0**-n_step
        assert res.s_min <= res.s_prime <= res.s_max

    def test_literal_update_leaves_bracket(self):
        res = bisect_s_prime(lambda s: 10.0, 1.0, 2, literal=True)
        assert res.history[1][0] > 1.0

    def test_on_benchmark(self):
        z = -np.ones(16, np.int8)
        res = adaptive_s_prime(BENCH, z, 2.0, 3, FAST, seed=1)
        assert len(res.history) == 3 and res.width == 0.125
        with pytest.raises(ValueError):
            adaptive_s_prime(BENCH, z, 0.0, 3, FAST)


class TestSwapRule:
    def test_equal_energies(self):
        assert swap_probability(1.0, 0.5, -3.0, -3.0) == 1.0

    def test_example(self):
        assert swap_probability(1.0, 0.5, -10.0, -12.0) == pytest.approx(math.exp(-2), abs=1e-15)

    # |exponent| <= 100 keeps both directions representable
    @given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-5, 5), st.floats(-5, 5))
    def test_metropolis_identity(self, tj, tk, ej, ek):
        x = (1 / tj - 1 / tk) * (ej - ek)
        forward, backward = swap_probability(tj, tk, ej, ek), swap_probability(tj, tk, ek, ej)
        assert forward / backward == pytest.approx(math.exp(x), rel=1e-10)

    def test_zero_temperature(self):
        # a virtual T = 0 replica only accepts states that are no worse
        assert swap_probability(0.5, 0.0, -5.0, -3.0) == 1.0
        assert swap_probability(0.5, 0.0, -3.0, -5.0) == 0.0


class TestParallelTempering:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            PTConfig(())
        with pytest.raises(ValueError):
            PTConfig((0.5, 0.4))
        with pytest.raises(ValueError):
            PTConfig((0.5, 1.0))

    def test_single_replica_reduces_to_calls(self):
        hist = quantum_parallel_tempering(BENCH, PTConfig((0.6,), n_steps=3, n_cycles_per_call=2), FAST, seed=4)
        assert all(not h.decisions for h in hist)
        from reanneal.meta import _subseed
        state = hist[0].replicas[0].state
        res = annealer_call(BENCH, state, 0.6, 2, FAST.cycle, LINEAR, FAST.params,
                            seed=_subseed(_subseed(4, 1, 1), 0))
        assert np.array_equal(hist[1].replicas[0].state, res.best_state)

    def test_all_pairs_and_adjacent(self):
        cfg = PTConfig((0.3, 0.5, 0.7), n_steps=1, n_cycles_per_call=1)
        assert len(quantum_parallel_tempering(BENCH, cfg, FAST)[0].decisions) == 3
        adj = PTConfig((0.3, 0.5, 0.7), n_steps=1, n_cycles_per_call=1, adjacent_only=True)
        assert [d["pair"] for d in quantum_parallel_tempering(BENCH, adj, FAST)[0].decisions] == [[0, 1], [1, 2]]

    def test_replicas_keep_their_s_prime_and_energy(self):
        cfg = PTConfig((0.3, 0.6), n_steps=3, n_cycles_per_call=1, include_virtual_s1=True)
        hist = quantum_parallel_tempering(BENCH, cfg, FAST, seed=2)
        for rec in hist:
            assert [r.s_prime for r in rec.replicas] == [0.3, 0.6, 1.0]
            for r in rec.replicas:
                assert r.energy == pytest.approx(energy(BENCH, r.state))

    def test_deterministic(self):
        cfg = PTConfig((0.4, 0.6), n_steps=2, n_cycles_per_call=1)
        a = [h.to_json() for h in quantum_parallel_tempering(BENCH, cfg, FAST, seed=9)]
        b = [h.to_json() for h in quantum_parallel_tempering(BENCH, cfg, FAST, seed=9)]
        assert a == b


class TestPopulationAnnealing:
    def test_equal_temperatures(self):
        assert np.allclose(resampling_means([-1.0, -5.0, 3.0], 0.0, 3), 1.0)

    def test_two_replica_example(self):
        means = resampling_means([-1.0, -3.0], -1.0, 2)
        assert normalization_factor([-1.0, -3.0], -1.0, 2) == pytest.approx(11.402, abs=1e-3)
        assert means == pytest.approx([0.2384, 1.7616], abs=1e-4)
        assert means.sum() == pytest.approx(2.0, abs=1e-12)

    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=50), st.floats(-5, 5), st.integers(1, 1000))
    def test_population_conserved(self, energies, d_beta, n_bar):
        assert abs(resampling_means(energies, d_beta, n_bar).sum() - n_bar) < 1e-10 * n_bar

    def test_realised_population_size(self):
        rng = np.random.default_rng(0)
        sizes = [rng.poisson(resampling_means(rng.normal(0, 3, 20), -0.5, 20)).sum() for _ in range(10_000)]
        assert abs(np.mean(sizes) - 20) < 3 * np.std(sizes) / np.sqrt(len(sizes))

    def test_run(self):
        res = quantum_population_annealing(BENCH, PAConfig((0.3, 0.5, 0.7), n_bar=4, n_cycles_per_call=1), FAST)
        assert len(res.stages) == 2 and not res.exhausted
        assert [r.s_prime for r in res.stages[1].replicas][:1] == [0.5]
        assert sum(d["copies"] for d in res.stages[-1].decisions) == len(res.population)

    def test_validation(self):
        with pytest.raises(ValueError):
            PAConfig((0.5,))
        with pytest.raises(ValueError):
            PAConfig((0.3, 0.5), n_bar=0)


class TestHybrid:
    def test_identity_stage(self):
        y = np.array([1, -1] * 8, np.int8)
        best, trace = hybrid_search(BENCH, [Stage("quantum_local", 1.0)], init=y, call=FAST)
        assert np.array_equal(best.state, y) and len(trace) == 1

    def test_best_is_monotone(self):
        stages = [Stage("random"), Stage("classical_sa"), Stage("quantum_local", 0.4), Stage("random")]
        _, trace = hybrid_search(BENCH, stages, call=FAST, seed=3)
        energies = [r.energy for r in trace]
        assert all(b <= a for a, b in zip(energies, energies[1:]))

    def test_unknown_stage(self):
        with pytest.raises(ValueError):
            Stage("teleport")
        with pytest.raises(ValueError):
            hybrid_search(BENCH, [])

    @pytest.mark.slow
    def test_sa_then_local_beats_forward_qaa(self):
        from reanneal.ising import exhaustive_ground_state
        from reanneal.protocol import forward_qaa
        from reanneal.sa import SaConfig

        ground = exhaustive_ground_state(BENCH)[0]
        call = CallConfig(n_cycles=1, cycle=CycleSpec(total_mcs=500, s_steps=25))
        stages = [Stage("classical_sa", sa=SaConfig(n_steps=500)), Stage("quantum_local", LINEAR.s_at_ratio(1.0))]
        runs = 40
        hybrid = sum(np.array_equal(hybrid_search(BENCH, stages, call=call, seed=r)[0].state, ground)
                     for r in range(runs))
        qaa = forward_qaa(BENCH, 1000, n_cycles=runs, seed=1)
        plain = sum(np.array_equal(z, ground) for z, _ in qaa.cycles)
        assert hybrid > plain
