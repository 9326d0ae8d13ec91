import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dissint import algebra, biortho, gate, geometric, propagator
from dissint.algebra import TimeGrid
from dissint.errors import NodalPoint, NotCyclic, ZeroGauge
from dissint.geometric import GaugeFunction
from dissint.interferometer import SIGMA_X, SIGMA_Z
from dissint.propagator import Hamiltonian
from systems import random_density, random_hamiltonian

seeds = st.integers(0, 2**32 - 1)


def gate_pair(p, steps=2000):
    H = Hamiltonian.constant(gate.hamiltonian(p))
    return H, propagator.evolve(H, TimeGrid(0, p.tau, steps))


def unitary_oracle(H, rho, tau):
    """Phase factor arg sum_k w_k <a_k|e^{-iH tau}|a_k> e^{i tau <H>_k} for constant Hermitian H."""
    U = algebra.mat_exp(-1j * tau * H)
    total = 0
    for w, a in zip(rho.weights, rho.alphas):
        total += w * np.vdot(a, U @ a) * cmath.exp(1j * tau * np.vdot(a, H @ a).real)
    return total / abs(total)


class TestGaugeFunction:
    def test_identity(self):
        g = GaugeFunction.identity(TimeGrid(0, 1, 4), 2)
        np.testing.assert_array_equal(g.values, np.ones((5, 2)))

    def test_must_start_at_one(self):
        grid = TimeGrid(0, 1, 2)
        with pytest.raises(ValueError):
            GaugeFunction(grid, np.full((3, 1), 2.0), np.zeros((3, 1)))

    def test_zero_rejected(self):
        grid = TimeGrid(0, 1, 2)
        with pytest.raises(ZeroGauge):
            GaugeFunction(grid, np.array([[1.0], [0.0], [1.0]]), np.zeros((3, 1)))

    def test_exponential(self):
        g = GaugeFunction.exponential(TimeGrid(1, 2, 2), [1j])
        np.testing.assert_allclose(g.values[:, 0], np.exp(1j * np.array([0, 0.5, 1])))
        np.testing.assert_allclose(g.derivatives, 1j * g.values)


class TestGaugeTransform:
    def test_identity_gauge(self):
        H, pair = gate_pair(gate.GateParams(1, 0.1, 0.7, 0.8), 200)
        rho = gate.input_state(gate.GateParams(1, 0.1, 0.7, 0.8))
        out = geometric.gauge_transform(pair, rho, GaugeFunction.identity(pair.grid, 2))
        np.testing.assert_allclose(out.L, pair.L, atol=1e-15)
        np.testing.assert_allclose(out.R, pair.R, atol=1e-15)

    @given(seed=seeds, n=st.integers(2, 3))
    @settings(max_examples=20)
    def test_state_path_unchanged(self, seed, n):
        rng = np.random.default_rng(seed)
        H = random_hamiltonian(rng)
        if H.dim != n:
            H = Hamiltonian.constant(0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))))
        rho = random_density(rng, n)
        pair = propagator.evolve(H, TimeGrid(0, 1, 200))
        g = GaugeFunction.exponential(pair.grid, rng.normal(size=n) + 1j * rng.normal(size=n))
        gauged = geometric.gauge_transform(pair, rho, g)
        m = rho.matrix_form()
        before = pair.L @ m @ pair.R.conj().transpose(0, 2, 1)
        after = gauged.L @ m @ gauged.R.conj().transpose(0, 2, 1)
        assert algebra.max_abs(after - before) <= 1e-10
        assert propagator.binorm_defect(gauged) <= 1e-8

    def test_one_dimensional(self):
        grid = TimeGrid(0, 1, 100)
        pair = propagator.evolve(Hamiltonian.constant([[0.5]]), grid)
        rho = biortho.pure_state([1.0])
        g = GaugeFunction.exponential(grid, [2j])
        out = geometric.gauge_transform(pair, rho, g)
        np.testing.assert_allclose(out.L[:, 0, 0], pair.L[:, 0, 0] * g.values[:, 0])
        np.testing.assert_allclose(out.R[:, 0, 0], pair.R[:, 0, 0] / np.conj(g.values[:, 0]))


class TestConnection:
    def test_zero_hamiltonian(self):
        pair = propagator.evolve(Hamiltonian.constant(np.zeros((2, 2))), TimeGrid(0, 1, 10))
        conn = geometric.connection(pair, random_density(np.random.default_rng(0), 2))
        np.testing.assert_array_equal(conn.values, [0, 0])

    @pytest.mark.parametrize("gamma, theta", [(0.0, math.pi / 3), (0.1, math.pi / 3), (0.3, 1.1)])
    def test_gate_values(self, gamma, theta):
        p = gate.GateParams(1, gamma, theta, 0.8)
        H, pair = gate_pair(p)
        conn = geometric.connection(pair, gate.input_state(p))
        # for H diagonal in z, R† dL/dt = -iH, so c_pm = -/+ i omega tau cos(theta)/2
        c = 0.5j * p.omega * p.tau * math.cos(theta)
        np.testing.assert_allclose(conn.values, [-c, c], atol=1e-10)

    @given(seed=seeds)
    @settings(max_examples=15)
    def test_hermitian_is_imaginary(self, seed):
        rng = np.random.default_rng(seed)
        H = random_hamiltonian(rng, anti=0.0)
        rho = biortho.decompose_density(np.diag(rng.dirichlet(np.ones(H.dim))))
        pair = propagator.evolve(H, TimeGrid(0, 1, 200))
        conn = geometric.connection(pair, rho)
        assert np.max(np.abs(conn.values.real)) <= 1e-10

    def test_odd_grid_rejected(self):
        pair = propagator.evolve(Hamiltonian.constant(SIGMA_X), TimeGrid(0, 1, 101))
        with pytest.raises(ValueError):
            geometric.connection(pair, gate.input_state(gate.GateParams(1, 0, 0.5, 1)))

    def test_derivative_from_hamiltonian(self):
        p = gate.GateParams(1, 0.2, 0.4, 0.9)
        H, pair = gate_pair(p, 100)
        bare = propagator.PropagatorPair(pair.grid, pair.L, pair.R)
        rho = gate.input_state(p)
        np.testing.assert_allclose(geometric.connection(bare, rho, H).values,
                                   geometric.connection(pair, rho).values, atol=1e-14)

    def test_simpson_convergence_order(self):
        H = random_hamiltonian(np.random.default_rng(21))
        rho = random_density(np.random.default_rng(22), H.dim)

        def total(n):
            return geometric.connection(propagator.evolve(H, TimeGrid(0, 3, n)), rho).values

        ref = total(32000)
        # coarser grids are still pre-asymptotic (ratios 24, 22)
        errs = [np.max(np.abs(total(n) - ref)) for n in (800, 1600)]
        assert 12 <= errs[0] / errs[1] <= 20


class TestParallelTransport:
    def test_factor_at_pure_phase(self):
        p = gate.GateParams(1, 0.0, math.pi / 3, 1.0)
        _, pair = gate_pair(p)
        z = geometric.parallel_factors(geometric.connection(pair, gate.input_state(p)))
        assert z[0] == pytest.approx(1j, abs=1e-10)

    def test_factor_of_real_connection(self):
        grid = TimeGrid(0, 1, 2)
        conn = geometric.ConnectionIntegral(grid, np.zeros((3, 1)), np.zeros((3, 1)), np.array([math.log(2)]))
        assert geometric.parallel_factors(conn)[0] == pytest.approx(0.5)

    @pytest.mark.parametrize("gamma", [0.0, 0.1])
    def test_parallel_gauge_kills_connection(self, gamma):
        p = gate.GateParams(1, gamma, 0.9, 0.7)
        H, pair = gate_pair(p)
        rho = gate.input_state(p)
        g = geometric.parallel_gauge(pair, rho)
        assert geometric.parallel_defect(pair, rho, g) <= 1e-8

    def test_time_dependent_parallel_gauge(self):
        H = random_hamiltonian(np.random.default_rng(5))
        rho = random_density(np.random.default_rng(6), H.dim)
        pair = propagator.evolve(H, TimeGrid(0, 2, 1000))
        g = geometric.parallel_gauge(pair, rho)
        assert geometric.parallel_defect(pair, rho, g) <= 1e-8

    def test_identity_gauge_defect(self):
        p = gate.GateParams(1, 0.1, 0.9, 0.7)
        _, pair = gate_pair(p, 100)
        rho = gate.input_state(p)
        d = geometric.parallel_defect(pair, rho, GaugeFunction.identity(pair.grid, 2))
        assert d == pytest.approx(abs(p.omega * math.cos(p.theta)) / 2, rel=1e-12)

    def test_zero_hamiltonian_defect(self):
        pair = propagator.evolve(Hamiltonian.constant(np.zeros((2, 2))), TimeGrid(0, 1, 10))
        rho = random_density(np.random.default_rng(3), 2)
        assert geometric.parallel_defect(pair, rho, GaugeFunction.identity(pair.grid, 2)) == 0


class TestGeometricPhase:
    def test_starts_at_zero(self):
        p = gate.GateParams(1, 0.1, 1.0, 0.8)
        _, pair = gate_pair(p)
        rho = gate.input_state(p)
        path = geometric.geometric_phase_path(pair, rho, geometric.connection(pair, rho))
        assert path[0] == 0

    @pytest.mark.parametrize("gamma, theta, r", [(0.0, math.pi / 3, 1.0), (0.05, 0.8, 0.9), (0.2, 2.0, 0.5)])
    def test_matches_gate_closed_form(self, gamma, theta, r):
        p = gate.GateParams(1, gamma, theta, r)
        _, pair = gate_pair(p, 4000)
        rho = gate.input_state(p)
        gam = geometric.geometric_phase(pair, rho, geometric.connection(pair, rho))
        assert abs(gam - gate.geometric_phase_closed(p)) <= 1e-8

    @given(seed=seeds, tau=st.floats(0.3, 2.0))
    @settings(max_examples=20)
    def test_unitary_oracle(self, seed, tau):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 4))
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        Hm = 0.5 * (x + x.conj().T)
        v = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, _ = np.linalg.qr(v)
        rho = biortho.assemble_density(rng.dirichlet(np.ones(n)), q.T, q.T)
        expected = unitary_oracle(Hm, rho, tau)
        pair = propagator.evolve(Hamiltonian.constant(Hm), TimeGrid(0, tau, 1000))
        try:
            gam = geometric.geometric_phase(pair, rho, geometric.connection(pair, rho))
        except NodalPoint:
            return
        assert abs(gam.imag) <= 1e-9
        assert abs(cmath.exp(1j * gam) - expected) <= 1e-8

    def test_nodal_point(self):
        # exact samples: RK4 error would lift the zero above the threshold
        p = gate.GateParams(1, 0.0, math.pi / 2, 1.0, tau=math.pi)
        pair = propagator.constant_pair(gate.hamiltonian(p), TimeGrid(0, p.tau, 200))
        rho = gate.input_state(p)
        with pytest.raises(NodalPoint):
            geometric.geometric_phase(pair, rho, geometric.connection(pair, rho))

    @given(seed=seeds)
    @settings(max_examples=20)
    def test_gauge_invariance(self, seed):
        rng = np.random.default_rng(seed)
        H = random_hamiltonian(rng)
        rho = random_density(rng, H.dim)
        pair = propagator.evolve(H, TimeGrid(0, 1.5, 600))
        base = geometric.geometric_phase(pair, rho, geometric.connection(pair, rho))
        rates = rng.uniform(-1, 1, H.dim) + 1j * rng.uniform(-3, 3, H.dim)
        gauged = geometric.gauge_transform(pair, rho, GaugeFunction.exponential(pair.grid, rates))
        other = geometric.geometric_phase(gauged, rho, geometric.connection(gauged, rho))
        assert abs(cmath.exp(1j * other) - cmath.exp(1j * base)) <= 1e-8


class TestCyclic:
    def test_pure_dynamical_phase(self):
        H = Hamiltonian.constant(SIGMA_Z / 2)
        pair = propagator.evolve(H, TimeGrid(0, 2 * math.pi, 2000))
        forms = geometric.cyclic_pure_phase_forms(pair, [1, 0])
        assert forms.zeta == pytest.approx(-math.pi, abs=1e-8)
        assert abs(forms.gamma) <= 1e-8
        assert forms.direct == pytest.approx(1, abs=1e-8)

    def test_dissipative_eigenstate(self):
        p = gate.GateParams(1, 0.1, 0.0, 1.0)
        _, pair = gate_pair(p)
        gam = geometric.cyclic_pure_phase(pair, [1, 0])
        assert abs(gam) <= 1e-8

    def test_tilted_state_cone(self):
        p = gate.GateParams(1, 0.0, math.pi / 3, 1.0)
        _, pair = gate_pair(p)
        plus, _ = gate.tilted_basis(p.theta)
        gam = geometric.cyclic_pure_phase(pair, plus)
        # half the solid angle of the cone, modulo 2 pi
        assert cmath.exp(1j * gam) == pytest.approx(cmath.exp(-1j * math.pi * (1 - math.cos(p.theta))), abs=1e-8)
        rho = gate.input_state(p)
        mixed = geometric.geometric_phase(pair, rho, geometric.connection(pair, rho))
        assert cmath.exp(1j * mixed) == pytest.approx(cmath.exp(1j * gam), abs=1e-8)

    def test_explicit_zeta(self):
        H = Hamiltonian.constant(SIGMA_Z / 2)
        pair = propagator.evolve(H, TimeGrid(0, 2 * math.pi, 2000))
        assert abs(geometric.cyclic_pure_phase(pair, [1, 0], zeta=-math.pi)) <= 1e-8

    def test_not_cyclic(self):
        p = gate.GateParams(1, 0.1, math.pi / 3, 1.0)
        _, pair = gate_pair(p)
        plus, _ = gate.tilted_basis(p.theta)
        with pytest.raises(NotCyclic):
            geometric.cyclic_pure_phase(pair, plus)
