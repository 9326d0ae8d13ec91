import cmath
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from dissint import algebra, propagator
from dissint.algebra import TimeGrid
from dissint.errors import DefectExceeded, DimensionMismatch, NonFiniteInput
from dissint.interferometer import SIGMA_X, SIGMA_Z
from dissint.propagator import Hamiltonian
from systems import random_hamiltonian

seeds = st.integers(0, 2**32 - 1)


def gate_H(eta=1.0, gamma=0.1):
    return 0.5 * complex(eta, -gamma) * SIGMA_Z


class TestEvolve:
    def test_zero_hamiltonian(self):
        pair = propagator.evolve(Hamiltonian.constant(np.zeros((2, 2))), TimeGrid(0, 3, 10))
        np.testing.assert_array_equal(pair.L, np.broadcast_to(np.eye(2), pair.L.shape))
        np.testing.assert_array_equal(pair.R, pair.L)
        assert propagator.binorm_defect(pair) == 0

    def test_dissipative_precession(self):
        pair = propagator.evolve(Hamiltonian.constant(gate_H()), TimeGrid(0, math.pi, 1000))
        exact = cmath.exp(-0.5j * complex(1, -0.1) * math.pi)
        assert abs(pair.L[-1, 0, 0] - exact) <= 1e-8
        assert round(pair.L[-1, 0, 0].imag, 4) == -0.8546
        assert abs(pair.L[-1, 0, 0].real) < 1e-8

    def test_pauli_x_half_turn(self):
        pair = propagator.evolve(Hamiltonian.constant(SIGMA_X / 2), TimeGrid(0, math.pi, 1000))
        np.testing.assert_allclose(pair.L[-1], -1j * SIGMA_X, atol=1e-10)
        np.testing.assert_allclose(pair.R[-1], -1j * SIGMA_X, atol=1e-10)

    def test_initial_identity_and_l_dot(self):
        H = random_hamiltonian(np.random.default_rng(3))
        pair = propagator.evolve(H, TimeGrid(0, 1, 200))
        np.testing.assert_array_equal(pair.L[0], np.eye(H.dim))
        np.testing.assert_array_equal(pair.R[0], np.eye(H.dim))
        for j in (0, 57, 200):
            np.testing.assert_allclose(pair.L_dot[j], -1j * H(pair.times[j]) @ pair.L[j])

    def test_defect_exceeded(self):
        H = Hamiltonian.constant(np.diag([8 - 1j, -3 + 0.5j]) + 4 * SIGMA_X)
        with pytest.raises(DefectExceeded):
            propagator.evolve(H, TimeGrid(0, 5, 50))

    def test_time_dependent_matches_solve_ivp(self):
        # independent oracle: scipy's adaptive DOP853 at tight tolerance
        from scipy.integrate import solve_ivp

        H = random_hamiltonian(np.random.default_rng(11))
        n = H.dim
        pair = propagator.evolve(H, TimeGrid(0, 2, 2000))

        def rhs(t, y, adj):
            m = H(t).conj().T if adj else H(t)
            return (-1j * m @ y.reshape(n, n)).ravel()

        for adj, samples in ((False, pair.L), (True, pair.R)):
            sol = solve_ivp(rhs, (0, 2), np.eye(n, dtype=complex).ravel(), args=(adj,),
                            method="DOP853", rtol=1e-12, atol=1e-12)
            assert algebra.max_abs(sol.y[:, -1].reshape(n, n) - samples[-1]) <= 1e-8

    def test_bad_hamiltonian_output(self):
        H = Hamiltonian(2, lambda t: np.eye(3))
        with pytest.raises(DimensionMismatch):
            propagator.evolve(H, TimeGrid(0, 1, 2))
        H = Hamiltonian(2, lambda t: np.full((2, 2), np.inf))
        with pytest.raises(NonFiniteInput):
            propagator.evolve(H, TimeGrid(0, 1, 2))


class TestEvolveConstant:
    def test_gate_closed_form(self):
        omega = complex(1, -0.3)
        t = 1.7
        L, R = propagator.evolve_constant(0.5 * omega * SIGMA_Z, t)
        np.testing.assert_allclose(L, np.diag([cmath.exp(-0.5j * omega * t), cmath.exp(0.5j * omega * t)]))
        w = omega.conjugate()
        np.testing.assert_allclose(R, np.diag([cmath.exp(-0.5j * w * t), cmath.exp(0.5j * w * t)]))

    def test_time_zero(self):
        L, R = propagator.evolve_constant(gate_H(), 0.0)
        np.testing.assert_array_equal(L, np.eye(2))
        np.testing.assert_array_equal(R, np.eye(2))

    def test_hermitian_gives_unitary(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        L, R = propagator.evolve_constant(x + x.conj().T, 0.8)
        np.testing.assert_allclose(L, R, atol=1e-13)
        np.testing.assert_allclose(L.conj().T @ L, np.eye(3), atol=1e-13)

    def test_constant_pair_is_exact(self):
        rng = np.random.default_rng(4)
        H = 0.5 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        grid = TimeGrid(0.5, 2.0, 30)
        pair = propagator.constant_pair(H, grid)
        assert propagator.binorm_defect(pair) <= 1e-12
        L, R = propagator.evolve_constant(H, 1.5)
        np.testing.assert_allclose(pair.L[-1], L, atol=1e-12)
        np.testing.assert_allclose(pair.R[-1], R, atol=1e-12)
        np.testing.assert_allclose(pair.L[-1], scipy.linalg.expm(-1.5j * H), atol=1e-10)


class TestInvariants:
    @settings(max_examples=15)
    @given(seed=seeds)
    def test_hermitian_l_equals_r(self, seed):
        H = random_hamiltonian(np.random.default_rng(seed), anti=0.0)
        pair = propagator.evolve(H, TimeGrid(0, 2, 400))
        assert algebra.max_abs(pair.L - pair.R) <= 1e-10

    @pytest.mark.parametrize("eta, gamma", [(1.0, 0.0), (1.0, 0.2), (2.5, 0.05)])
    def test_rk4_matches_exact(self, eta, gamma):
        H = gate_H(eta, gamma)
        period = 2 * math.pi / abs(complex(eta, -gamma))
        pair = propagator.evolve(Hamiltonian.constant(H), TimeGrid(0, period, 1000))
        L, R = propagator.evolve_constant(H, period)
        assert algebra.max_abs(pair.L[-1] - L) <= 1e-8
        assert algebra.max_abs(pair.R[-1] - R) <= 1e-8

    def test_propagator_error_is_fourth_order(self):
        H = random_hamiltonian(np.random.default_rng(21))
        ref = propagator.evolve(H, TimeGrid(0, 2, 16000)).L[-1]
        errs = [algebra.max_abs(propagator.evolve(H, TimeGrid(0, 2, n)).L[-1] - ref) for n in (250, 500)]
        assert 12 <= errs[0] / errs[1] <= 20

    def test_defect_converges_at_fifth_order(self):
        # R†L - I cancels the leading local term of the two RK4 maps: h^5 globally
        H = random_hamiltonian(np.random.default_rng(21))
        d = [propagator.evolve(H, TimeGrid(0, 4, n)).defects()[-1] for n in (500, 1000)]
        assert 28 <= d[0] / d[1] <= 36


class TestHamiltonian:
    def test_from_terms(self):
        H = Hamiltonian.from_terms([(lambda t: 1.0, SIGMA_Z), (math.cos, SIGMA_X)])
        np.testing.assert_allclose(H(0.0), SIGMA_Z + SIGMA_X)
        assert not H.is_constant

    def test_constant_flags(self):
        assert Hamiltonian.constant(SIGMA_X).hermitian_hint
        assert not Hamiltonian.constant(gate_H()).hermitian_hint

    def test_default_grid_is_even(self):
        # eigenvalues are +-|omega|/2, so one characteristic period is 4π/|omega|
        period = 4 * math.pi / abs(complex(1, -0.1))
        grid = propagator.default_grid(Hamiltonian.constant(gate_H()), period)
        assert grid.steps == 1000
        grid = propagator.default_grid(Hamiltonian.constant(gate_H()), 0.3337 * period)
        assert grid.steps % 2 == 0

    def test_default_grid_zero_hamiltonian(self):
        assert propagator.default_grid(Hamiltonian.constant(np.zeros((2, 2))), 1.0).steps == 2
