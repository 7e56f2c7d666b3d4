import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reanneal.exact import classical_boltzmann, tv_distance
from reanneal.ising import IsingProblem, all_states
from reanneal.sampling import estimate_distribution, metropolis_postprocess

FOUR = IsingProblem(4, [0.3, -0.2, 0.1, 0.0], ((0, 1, 0.5), (1, 2, -0.4), (2, 3, 0.3), (0, 3, 0.2)))


class TestEstimateDistribution:
    def test_single_state(self):
        d = estimate_distribution([np.array([1, -1])] * 5)
        assert len(d.support) == 1 and d.weights[0] == 1.0

    def test_counts(self):
        a, b = np.array([1, 1]), np.array([-1, 1])
        d = estimate_distribution([a, a, b, a])
        weights = {tuple(z): w for z, w in zip(d.support, d.weights)}
        assert weights == {(1, 1): 0.75, (-1, 1): 0.25}

    @given(st.lists(st.lists(st.sampled_from([-1, 1]), min_size=3, max_size=3), min_size=1, max_size=40))
    def test_weights_normalised(self, rows):
        d = estimate_distribution([np.array(r, np.int8) for r in rows])
        assert np.all(d.weights >= 0) and abs(d.weights.sum() - 1) < 1e-12
        assert abs(d.as_vector(3).sum() - 1) < 1e-12

    def test_vector_uses_oracle_order(self):
        d = estimate_distribution([np.array([1, 1]), np.array([-1, 1])])
        assert list(d.as_vector(2)) == [0.5, 0.5, 0.0, 0.0]
        assert tv_distance(d.as_vector(2), [1, 0, 0, 0]) == 0.5

    def test_empty(self):
        with pytest.raises(ValueError):
            estimate_distribution([])

    def test_csv(self):
        buf = io.StringIO()
        estimate_distribution([np.array([1, -1])]).write_csv(buf)
        assert buf.getvalue() == "state,weight\n+-,1.0\n"


class TestPostprocess:
    def test_zero_sweeps_is_identity(self):
        states = list(all_states(4))
        out = metropolis_postprocess(states, FOUR, 0.5, 0)
        assert all(np.array_equal(a, b) for a, b in zip(out, states))

    def test_keeps_sample_count_and_warmup(self):
        states = list(all_states(4))
        assert len(metropolis_postprocess(states, FOUR, 0.5, 3)) == 16
        assert len(metropolis_postprocess(states, FOUR, 0.5, 3, warmup=4)) == 12

    def test_cold_limit_reaches_local_minima(self):
        for z in metropolis_postprocess(list(all_states(4)), FOUR, 1e-9, 10):
            flips = np.where(np.eye(4, dtype=bool), -z, z)
            assert np.all(FOUR.energies(flips) >= FOUR.energies(z))

    def test_long_chains_are_boltzmann(self):
        t_eff = 0.8
        rng = np.random.default_rng(0)
        starts = [rng.choice(np.array([-1, 1], np.int8), 4) for _ in range(20_000)]
        out = metropolis_postprocess(starts, FOUR, t_eff, 30, seed=2)
        vec = estimate_distribution(out).as_vector(4)
        assert tv_distance(vec, classical_boltzmann(FOUR, t_eff)) < 0.05

    def test_rejects_bad_temperature(self):
        with pytest.raises(ValueError):
            metropolis_postprocess([np.ones(4)], FOUR, 0.0, 1)
