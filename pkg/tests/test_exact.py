import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reanneal.errors import CapacityError
from reanneal.exact import (build_tfim, classical_boltzmann, ground_state, state_index, state_indices,
                            suppression_slope, thermal_diagonal, tunneling_suppression_profile,
                            tv_distance, write_vector_csv)
from reanneal.ising import IsingProblem, all_states

from test_ising import problems

SINGLE = IsingProblem(1, [1.0], ())


def chain(n, h=0.1, J=1.0):
    return IsingProblem(n, [h] * n, tuple((i, i + 1, J) for i in range(n - 1)))


class TestBuildTfim:
    def test_single_qubit_matrix(self):
        assert np.array_equal(build_tfim(SINGLE, 1.0, 1.0), [[-1, -1], [-1, 1]])

    def test_zero_field_is_diagonal(self):
        p = chain(3, h=0.4)
        H = build_tfim(p, 0.0, 2.0)
        assert np.array_equal(H, np.diag(2.0 * p.energies(all_states(3))))

    @settings(max_examples=20, deadline=None)
    @given(problems(max_n=6), st.floats(0.01, 3))
    def test_hypercube_degree(self, p, A):
        H = build_tfim(p, A, 1.0)
        off = np.abs(H - np.diag(np.diag(H))).sum(axis=1)
        assert np.allclose(off, p.n * A)
        assert np.array_equal(H, H.T)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            build_tfim(IsingProblem(13, np.zeros(13), ()), 1.0, 1.0)


class TestGroundState:
    def test_single_qubit_energy(self):
        e, _ = ground_state(build_tfim(SINGLE, 1.0, 1.0))
        assert e == pytest.approx(-math.sqrt(2), abs=1e-12)

    def test_single_qubit_amplitude_ratio(self):
        _, psi = ground_state(build_tfim(SINGLE, 1.0, 1.0))
        assert psi[0] / psi[1] == pytest.approx(math.sqrt(2) + 1, abs=1e-12)

    @pytest.mark.parametrize("A,B", [(0.3, 1.0), (1.0, 0.2), (2.0, 5.0)])
    def test_two_level_closed_form(self, A, B):
        e, psi = ground_state(build_tfim(SINGLE, A, B))
        r = math.hypot(A, B)
        assert e == pytest.approx(-r, abs=1e-12)
        assert psi[0] / psi[1] == pytest.approx(r / A + B / A, rel=1e-12)

    def test_classical_limit_is_basis_vector(self):
        p = chain(4, h=0.3)
        _, psi = ground_state(build_tfim(p, 0.0, 1.0))
        assert psi[0] == pytest.approx(1.0) and np.allclose(psi[1:], 0)

    @settings(max_examples=20, deadline=None)
    @given(problems(max_n=6), st.floats(0.05, 2))
    def test_residual_and_sign(self, p, A):
        H = build_tfim(p, A, 1.0)
        e, psi = ground_state(H)
        assert np.linalg.norm(H @ psi - e * psi) < 1e-9 * max(np.linalg.norm(H), 1.0)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        assert psi[np.argmax(np.abs(psi))] > 0


class TestThermal:
    @settings(max_examples=20, deadline=None)
    @given(problems(max_n=5), st.floats(0, 2), st.floats(0.1, 5))
    def test_normalised(self, p, A, T):
        assert abs(thermal_diagonal(p, A, 1.0, T).sum() - 1.0) < 1e-12

    def test_zero_field_is_classical(self):
        p = chain(4, h=0.2)
        assert np.allclose(thermal_diagonal(p, 0.0, 1.5, 0.7), classical_boltzmann(p, 0.7 / 1.5))

    def test_hot_limit_is_uniform(self):
        p = chain(3)
        assert np.allclose(thermal_diagonal(p, 1.0, 1.0, 1e9), 1 / 8)

    def test_single_qubit_magnetisation(self):
        # <sz> = (B / r) tanh(r / T) for the 2x2 problem
        A, B, T = 1.0, 1.0, 0.5
        p = thermal_diagonal(SINGLE, A, B, T)
        r = math.hypot(A, B)
        assert p[0] - p[1] == pytest.approx(B / r * math.tanh(r / T), abs=1e-12)

    def test_rejects_bad_temperature(self):
        with pytest.raises(ValueError):
            thermal_diagonal(SINGLE, 1.0, 1.0, 0.0)


class TestIndexing:
    def test_basis_order(self):
        states = all_states(3)
        assert np.array_equal(state_indices(states), np.arange(8))
        assert state_index([1, 1, 1]) == 0 and state_index([-1, 1, 1]) == 1 and state_index([1, 1, -1]) == 4

    def test_tv_distance(self):
        assert tv_distance([1, 0], [0, 1]) == 1.0
        assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0.0


class TestSuppression:
    def test_classical_limit(self):
        prof = tunneling_suppression_profile(chain(4), [1e-9])[1e-9]
        assert prof[0] == (0, pytest.approx(1.0))
        assert all(a < 1e-6 for d, a in prof[1:])

    def test_six_spin_chain_slope(self):
        prof = tunneling_suppression_profile(chain(6), [0.05])[0.05]
        slope = suppression_slope(prof)
        assert slope == pytest.approx(-3.246, abs=1e-3)
        assert abs(slope - math.log(0.05)) < 0.2 * abs(math.log(0.05))

    def test_amplitude_decays_with_distance(self):
        prof = tunneling_suppression_profile(chain(5), [0.02])[0.02]
        amps = [a for _, a in prof]
        assert all(x > y for x, y in zip(amps, amps[1:]))

    def test_degenerate_minimum_uses_first(self):
        p = IsingProblem(2, [0, 0], ((0, 1, 1.0),))
        prof = tunneling_suppression_profile(p, [0.1])[0.1]
        assert [d for d, _ in prof] == [0, 1, 2]


def test_write_vector_csv():
    buf = io.StringIO()
    write_vector_csv(np.array([0.25, 0.75]), buf)
    assert buf.getvalue() == "index,probability\n0,0.25\n1,0.75\n"
