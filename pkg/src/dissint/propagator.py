"""Operator-pair propagation for non-Hermitian Hamiltonians.

Solves ``i dL/dt = H L`` and ``i dR/dt = H† R`` with ``L(0) = R(0) = I`` by
classical fixed-step RK4.  Both equations share one step sequence, so the
binormalization residual ``R†L - I`` can be compared sample by sample.  The
residual is measured, never projected away.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import algebra
from .algebra import TimeGrid
from .errors import DefectExceeded, DimensionMismatch, NonFiniteInput

DEFAULT_DEFECT_TOL = 1e-8


@dataclass(frozen=True)
class Hamiltonian:
    """Time-dependent generator ``t -> H(t)``.

    ``evaluate`` must be deterministic and reentrant.  ``is_constant`` lets
    the integrator reuse a single RK4 step matrix.
    """

    dim: int
    evaluate: Callable[[float], np.ndarray]
    is_constant: bool = False
    hermitian_hint: bool = False

    @classmethod
    def constant(cls, matrix) -> "Hamiltonian":
        m = algebra.as_matrix(matrix, "H")
        m.setflags(write=False)
        herm = algebra.max_abs(m - m.conj().T) == 0
        return cls(m.shape[0], lambda t: m, is_constant=True, hermitian_hint=bool(herm))

    @classmethod
    def from_terms(cls, terms) -> "Hamiltonian":
        """``H(t) = sum_j f_j(t) M_j`` from ``(f_j, M_j)`` pairs."""
        terms = [(f, algebra.as_matrix(m, "H term")) for f, m in terms]
        if not terms:
            raise ValueError("at least one term required")
        dim = terms[0][1].shape[0]
        if any(m.shape != (dim, dim) for _, m in terms):
            raise DimensionMismatch("Hamiltonian terms differ in dimension")

        def evaluate(t):
            return sum(complex(f(t)) * m for f, m in terms)

        return cls(dim, evaluate)

    def __call__(self, t: float) -> np.ndarray:
        m = np.asarray(self.evaluate(t), dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"H({t}) has shape {m.shape}, expected {(self.dim, self.dim)}")
        if not np.all(np.isfinite(m)):
            raise NonFiniteInput(f"H({t}) has non-finite entries")
        return m

    def characteristic_period(self, t: float = 0.0) -> float:
        """``2π / max|λ(H(t))|``; infinite when H(t) vanishes."""
        lam = np.linalg.eigvals(self(t))
        top = float(np.max(np.abs(lam)))
        return math.inf if top == 0 else 2 * math.pi / top


def default_grid(H: Hamiltonian, tau: float, steps_per_period: int = 1000, t0: float = 0.0) -> TimeGrid:
    """Grid with ``steps_per_period`` RK4 steps per characteristic period (even count)."""
    period = H.characteristic_period(t0)
    steps = 2 if math.isinf(period) else math.ceil(steps_per_period * tau / period)
    steps = max(2, steps + steps % 2)
    return TimeGrid(t0, t0 + tau, steps)


@dataclass(frozen=True)
class PropagatorPair:
    """Sampled ``(L(t_j), R(t_j))`` on ``grid``.

    ``L_dot`` holds dL/dt at each sample when known analytically (always for
    :func:`evolve` output); gauge transforms carry it through the product rule.
    """

    grid: TimeGrid
    L: np.ndarray
    R: np.ndarray
    L_dot: Optional[np.ndarray] = None
    max_defect: float = 0.0

    @property
    def dim(self) -> int:
        return self.L.shape[-1]

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def defects(self) -> np.ndarray:
        eye = np.eye(self.dim)
        prod = np.conj(np.swapaxes(self.R, -1, -2)) @ self.L
        return np.max(np.abs(prod - eye), axis=(-2, -1))

    def final(self) -> tuple[np.ndarray, np.ndarray]:
        return self.L[-1], self.R[-1]


def _rk4_step_matrices(H0, Hmid, H1, h):
    """One RK4 step for ``dY/dt = -i H(t) Y`` applied to Y = I."""
    n = H0.shape[0]
    y = np.eye(n, dtype=complex)
    k1 = -1j * H0 @ y
    k2 = -1j * Hmid @ (y + 0.5 * h * k1)
    k3 = -1j * Hmid @ (y + 0.5 * h * k2)
    k4 = -1j * H1 @ (y + h * k3)
    return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _fill_powers(out, step):
    """``out[j] = step^j`` by block doubling: ``out[k:2k] = step^k out[0:k]``."""
    k = 1
    block = step
    total = out.shape[0]
    while k < total:
        end = min(2 * k, total)
        out[k:end] = block @ out[: end - k]
        block = block @ block
        k *= 2


def evolve(H: Hamiltonian, grid: TimeGrid, defect_tolerance: float = DEFAULT_DEFECT_TOL) -> PropagatorPair:
    """Integrate the L/R equations of motion with classical RK4 on ``grid``.

    Raises ``DefectExceeded`` when ``||R†L - I||_max`` passes
    ``defect_tolerance`` at any sample.
    """
    n = H.dim
    h = grid.h
    times = grid.times
    m = grid.steps
    L = np.empty((m + 1, n, n), dtype=complex)
    R = np.empty((m + 1, n, n), dtype=complex)
    L[0] = R[0] = np.eye(n)

    if H.is_constant:
        Hc = H(grid.t0)
        Hs = np.broadcast_to(Hc, (m + 1, n, n))
        PL = _rk4_step_matrices(Hc, Hc, Hc, h)
        Hd = Hc.conj().T
        PR = _rk4_step_matrices(Hd, Hd, Hd, h)
        _fill_powers(L, PL)
        _fill_powers(R, PR)
    else:
        Hs = np.stack([H(t) for t in times])
        Hmid = np.stack([H(t) for t in times[:-1] + 0.5 * h])
        # stack L and R so each stage is one batched product; G = -i [H, H†]
        G = -1j * np.stack([Hs, np.conj(np.swapaxes(Hs, -1, -2))], axis=1)
        Gmid = -1j * np.stack([Hmid, np.conj(np.swapaxes(Hmid, -1, -2))], axis=1)
        Y = np.stack([L[0], R[0]])
        for j in range(m):
            k1 = G[j] @ Y
            k2 = Gmid[j] @ (Y + 0.5 * h * k1)
            k3 = Gmid[j] @ (Y + 0.5 * h * k2)
            k4 = G[j + 1] @ (Y + h * k3)
            Y = Y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            L[j + 1], R[j + 1] = Y[0], Y[1]

    if not (np.all(np.isfinite(L)) and np.all(np.isfinite(R))):
        raise DefectExceeded("propagator overflowed; reduce tau or the decay rates")
    L_dot = -1j * Hs @ L
    pair = PropagatorPair(grid, L, R, L_dot)
    defects = pair.defects()
    worst = float(defects.max())
    if worst > defect_tolerance:
        j = int(np.argmax(defects))
        raise DefectExceeded(
            f"||R†L - I||_max = {worst:.3g} at t = {times[j]:.6g} exceeds {defect_tolerance:.3g}"
        )
    return PropagatorPair(grid, L, R, L_dot, worst)


def evolve_constant(H, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``(exp(-iHt), exp(-iH†t))`` for a time-independent H."""
    m = algebra.as_matrix(H, "H")
    L = algebra.mat_exp(-1j * t * m)
    R = algebra.mat_exp(-1j * t * m.conj().T)
    return L, R


def constant_pair(H, grid: TimeGrid) -> PropagatorPair:
    """Analytic propagators sampled on ``grid`` (no integration error)."""
    m = algebra.as_matrix(H, "H")
    times = grid.times - grid.t0
    pairs = algebra.eig_pairs(m)
    lam = np.array([p.value for p in pairs])
    right = np.stack([p.right for p in pairs], axis=1)
    left = np.stack([p.left for p in pairs], axis=1)
    # exp(-iHt) = sum_k e^{-i lam_k t} |r_k><l_k|; exp(-iH†t) swaps the roles
    phase = np.exp(-1j * np.outer(times, lam))
    L = (right[None] * phase[:, None, :]) @ left.conj().T
    R = (left[None] * np.exp(-1j * np.outer(times, lam.conj()))[:, None, :]) @ right.conj().T
    pair = PropagatorPair(grid, L, R, -1j * m @ L)
    return PropagatorPair(grid, L, R, pair.L_dot, float(pair.defects().max()))


def binorm_defect(pair: PropagatorPair) -> float:
    return float(pair.defects().max())
