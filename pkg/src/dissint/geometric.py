"""Gauge classes of propagator pairs, parallel transport and the complex geometric phase.

For a state path ``rho(t) = L(t) rho R†(t)`` all pairs
``L~ = L Z``, ``R~ = R Z^-†`` with ``Z = sum_k z_k(t) |alpha_k><beta_k|`` and
``z_k(0) = 1`` generate the same path.  The connection
``<beta_k|R†(t) dL/dt|alpha_k>`` picks up ``dz_k/dt / z_k`` under such a
change, and the phase factor built from it is gauge invariant.

Time derivatives are never finite-differenced: they come from the equations
of motion (``dL/dt = -i H L``) or from the product rule for gauged pairs.
Integrals use composite Simpson on the propagator grid, which therefore needs
an even number of steps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from . import algebra
from .algebra import TimeGrid
from .biortho import GeneralizedDensityOperator, binormalize
from .errors import DimensionMismatch, NodalPoint, NotCyclic, ZeroGauge
from .propagator import Hamiltonian, PropagatorPair

NODAL_TOL = 1e-12
CYCLIC_TOL = 1e-8


def _simpson(f, t):
    f = np.asarray(f, dtype=complex)
    return simpson(f.real, x=t, axis=0) + 1j * simpson(f.imag, x=t, axis=0)


def _cumulative_simpson(f, t):
    # scipy's cumulative_simpson casts complex input to real
    f = np.asarray(f, dtype=complex)
    re = cumulative_simpson(f.real, x=t, axis=0, initial=0)
    im = cumulative_simpson(f.imag, x=t, axis=0, initial=0)
    return re + 1j * im


def _require_even(grid: TimeGrid):
    if grid.steps % 2:
        raise ValueError(f"Simpson quadrature needs an even step count, got {grid.steps}")


@dataclass(frozen=True)
class GaugeFunction:
    """Per-eigenpair factors ``z_k(t_j)`` and their derivatives on a grid.

    ``values`` and ``derivatives`` have shape ``(steps + 1, N)``.
    """

    grid: TimeGrid
    values: np.ndarray
    derivatives: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.values, dtype=complex)
        dz = np.asarray(self.derivatives, dtype=complex)
        if z.ndim != 2 or z.shape[0] != self.grid.steps + 1 or dz.shape != z.shape:
            raise DimensionMismatch(f"gauge samples must have shape (steps+1, N), got {z.shape}")
        if np.any(z == 0):
            raise ZeroGauge("gauge factors must be nonzero")
        if np.max(np.abs(z[0] - 1)) > 1e-12:
            raise ValueError("gauge factors must equal 1 at the initial time")
        object.__setattr__(self, "values", z)
        object.__setattr__(self, "derivatives", dz)

    @classmethod
    def identity(cls, grid: TimeGrid, n: int) -> "GaugeFunction":
        m = grid.steps + 1
        return cls(grid, np.ones((m, n), complex), np.zeros((m, n), complex))

    @classmethod
    def from_functions(
        cls,
        grid: TimeGrid,
        z: Sequence[Callable[[np.ndarray], np.ndarray]],
        zdot: Sequence[Callable[[np.ndarray], np.ndarray]],
    ) -> "GaugeFunction":
        """Build from vectorized callables ``z_k(t)`` and ``dz_k/dt(t)``."""
        t = grid.times
        values = np.stack([np.broadcast_to(f(t), t.shape) for f in z], axis=1)
        derivs = np.stack([np.broadcast_to(f(t), t.shape) for f in zdot], axis=1)
        return cls(grid, values, derivs)

    @classmethod
    def exponential(cls, grid: TimeGrid, rates) -> "GaugeFunction":
        """``z_k(t) = exp(rate_k (t - t0))``."""
        rates = np.asarray(rates, dtype=complex)
        t = (grid.times - grid.t0)[:, None]
        z = np.exp(rates[None, :] * t)
        return cls(grid, z, rates[None, :] * z)


@dataclass(frozen=True)
class ConnectionIntegral:
    """Connection integrand per eigenpair, its running integral and total.

    ``values[k] = ∫ <beta_k(t)|d alpha_k/dt> dt`` over the whole grid.
    """

    grid: TimeGrid
    integrand: np.ndarray
    cumulative: np.ndarray
    values: np.ndarray


def _basis_matrices(rho: GeneralizedDensityOperator):
    # columns are the vectors
    return rho.alphas.T, rho.betas.T


def gauge_transform(pair: PropagatorPair, rho: GeneralizedDensityOperator, g: GaugeFunction) -> PropagatorPair:
    """Move ``pair`` within its gauge class using factors ``g`` in the basis of ``rho``."""
    if pair.L_dot is None:
        raise ValueError("gauge_transform needs a pair with known dL/dt")
    if g.grid != pair.grid:
        raise DimensionMismatch("gauge and propagator are sampled on different grids")
    if g.values.shape[1] != rho.dim or pair.dim != rho.dim:
        raise DimensionMismatch("gauge, state and propagator dimensions differ")
    A, B = _basis_matrices(rho)
    Bh = B.conj().T
    Ah = A.conj().T
    Z = (A[None] * g.values[:, None, :]) @ Bh
    Z_dot = (A[None] * g.derivatives[:, None, :]) @ Bh
    Z_r = (B[None] * (1 / np.conj(g.values))[:, None, :]) @ Ah
    L = pair.L @ Z
    R = pair.R @ Z_r
    L_dot = pair.L_dot @ Z + pair.L @ Z_dot
    out = PropagatorPair(pair.grid, L, R, L_dot)
    return PropagatorPair(pair.grid, L, R, L_dot, float(out.defects().max()))


def _connection_integrand(pair: PropagatorPair, rho: GeneralizedDensityOperator, H: Optional[Hamiltonian]):
    if pair.dim != rho.dim:
        raise DimensionMismatch("propagator and state dimensions differ")
    if pair.L_dot is not None:
        L_dot = pair.L_dot
    elif H is not None:
        L_dot = -1j * np.stack([H(t) for t in pair.times]) @ pair.L
    else:
        raise ValueError("need either pair.L_dot or the Hamiltonian")
    alpha_dot = np.einsum("tij,kj->tki", L_dot, rho.alphas)
    beta_t = np.einsum("tij,kj->tki", pair.R, rho.betas)
    return np.einsum("tki,tki->tk", beta_t.conj(), alpha_dot)


def connection(pair: PropagatorPair, rho: GeneralizedDensityOperator, H: Optional[Hamiltonian] = None) -> ConnectionIntegral:
    """Simpson integral of ``<beta_k|R†(t) dL/dt|alpha_k>`` over the pair's grid.

    ``dL/dt`` is taken from ``pair.L_dot`` (exact ``-i H L`` for integrated
    pairs, product rule for gauged ones) or rebuilt from ``H``.
    """
    _require_even(pair.grid)
    f = _connection_integrand(pair, rho, H)
    t = pair.times
    total = _simpson(f, t)
    running = _cumulative_simpson(f, t)
    running[-1] = total
    return ConnectionIntegral(pair.grid, f, running, total)


def parallel_factors(conn: ConnectionIntegral) -> np.ndarray:
    """``z_k(tau) = exp(-c_k)`` for the parallel-transporting gauge."""
    return np.exp(-np.asarray(conn.values))


def parallel_gauge(pair: PropagatorPair, rho: GeneralizedDensityOperator, H: Optional[Hamiltonian] = None) -> GaugeFunction:
    """Gauge whose factors solve ``dz_k/dt = -z_k <beta_k|R† dL/dt|alpha_k>``."""
    conn = connection(pair, rho, H)
    z = np.exp(-conn.cumulative)
    return GaugeFunction(pair.grid, z, -conn.integrand * z)


def parallel_defect(pair: PropagatorPair, rho: GeneralizedDensityOperator, g: GaugeFunction, H: Optional[Hamiltonian] = None) -> float:
    """Largest ``|<beta_k|R~†(t) dL~/dt|alpha_k>|`` over the grid and k."""
    if pair.L_dot is None:
        if H is None:
            raise ValueError("need either pair.L_dot or the Hamiltonian")
        L_dot = -1j * np.stack([H(t) for t in pair.times]) @ pair.L
        pair = PropagatorPair(pair.grid, pair.L, pair.R, L_dot, pair.max_defect)
    gauged = gauge_transform(pair, rho, g)
    f = _connection_integrand(gauged, rho, None)
    return float(np.max(np.abs(f)))


def _phase_sums(pair: PropagatorPair, rho: GeneralizedDensityOperator, conn: ConnectionIntegral):
    A, B = _basis_matrices(rho)
    w = rho.weights
    # <beta_k|L(t)|alpha_k> and <beta_k|R†(t)|alpha_k>
    l_diag = np.einsum("ik,tij,jk->tk", B.conj(), pair.L, A)
    r_diag = np.einsum("ik,tji,jk->tk", B.conj(), pair.R.conj(), A)
    c = conn.cumulative
    num = (w * l_diag * np.exp(-c)).sum(axis=1)
    den = (w * r_diag * np.exp(c)).sum(axis=1)
    return num, den


def geometric_phase_path(pair: PropagatorPair, rho: GeneralizedDensityOperator, conn: ConnectionIntegral) -> np.ndarray:
    """Geometric phase of the path truncated at every grid time.

    The square root is continued from ``exp(i Gamma) = 1`` at the first
    sample through the ratio of the two weighted sums.
    """
    if conn.grid != pair.grid:
        raise DimensionMismatch("connection and propagator use different grids")
    num, den = _phase_sums(pair, rho, conn)
    smallest = min(np.abs(num).min(), np.abs(den).min())
    if smallest < NODAL_TOL:
        j = int(np.argmin(np.minimum(np.abs(num), np.abs(den))))
        raise NodalPoint(f"phase sums vanish ({smallest:.3g}) at t = {pair.times[j]:.6g}")
    ratio = num / den
    arg = algebra.unwind(ratio).unwound_arg
    return 0.5 * arg - 0.5j * np.log(np.abs(ratio))


def geometric_phase(pair: PropagatorPair, rho: GeneralizedDensityOperator, conn: ConnectionIntegral) -> complex:
    """Complex mixed-state geometric phase Gamma at the final grid time."""
    return complex(geometric_phase_path(pair, rho, conn)[-1])


@dataclass(frozen=True)
class CyclicPhase:
    gamma: complex
    zeta: complex
    direct: complex
    rephased: complex


def cyclic_pure_phase_forms(
    pair: PropagatorPair, alpha, beta=None, zeta: Optional[complex] = None, tol: float = CYCLIC_TOL
) -> CyclicPhase:
    """Both forms of the pure cyclic phase.

    ``direct`` is ``exp(i zeta) exp(-∫<beta(t)|d alpha/dt>)``; ``rephased`` is
    ``exp(i Gamma)`` with ``Gamma = i ∫<beta~|d alpha~/dt>`` after removing a
    linear total phase ``f(t)`` with ``f(tau) - f(0) = zeta``.  Without an
    explicit ``zeta`` the total phase is followed continuously from t0.
    """
    _require_even(pair.grid)
    if pair.L_dot is None:
        raise ValueError("cyclic phase needs a pair with known dL/dt")
    proj = binormalize(alpha, alpha if beta is None else beta)
    a0, b0 = proj.alpha, proj.beta
    a_t = pair.L @ a0
    b_t = pair.R @ b0
    a_dot = pair.L_dot @ a0
    total = np.einsum("ti,ti->t", b0.conj()[None, :], a_t)
    if zeta is None:
        zeta = complex(-1j * algebra.continuous_log(total)[-1])
    zeta = complex(zeta)
    ez = np.exp(1j * zeta)
    if (np.max(np.abs(a_t[-1] - ez * a0)) > tol
            or np.max(np.abs(b_t[-1] - np.exp(1j * np.conj(zeta)) * b0)) > tol):
        raise NotCyclic("the state does not return to itself up to exp(i zeta)")
    t = pair.times
    conn = _simpson(np.einsum("ti,ti->t", b_t.conj(), a_dot), t)
    direct = ez * np.exp(-conn)

    s = (t - t[0]) / (t[-1] - t[0])
    f = zeta * s
    f_dot = zeta / (t[-1] - t[0])
    a_tilde = np.exp(-1j * f)[:, None] * a_t
    b_tilde = np.exp(-1j * np.conj(f))[:, None] * b_t
    a_tilde_dot = np.exp(-1j * f)[:, None] * (a_dot - 1j * f_dot * a_t)
    gamma = 1j * _simpson(np.einsum("ti,ti->t", b_tilde.conj(), a_tilde_dot), t)
    return CyclicPhase(complex(gamma), zeta, complex(direct), complex(np.exp(1j * gamma)))


def cyclic_pure_phase(pair: PropagatorPair, alpha, beta=None, zeta: Optional[complex] = None, tol: float = CYCLIC_TOL) -> complex:
    """Complex geometric phase of a pure state in cyclic dissipative motion.

    Raises ``ArithmeticError`` if the two equivalent forms disagree by more
    than 1e-9, which signals an under-resolved grid.
    """
    forms = cyclic_pure_phase_forms(pair, alpha, beta, zeta, tol)
    gap = abs(forms.direct - forms.rephased)
    if gap > 1e-9:
        raise ArithmeticError(f"cyclic phase forms disagree by {gap:.3g}")
    return forms.gamma
