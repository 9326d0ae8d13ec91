"""Dissipative one-qubit geometric phase-shift gate.

Model: ``H = (eta - i gamma) sigma_z / 2`` acting on a qubit with Bloch
vector of length ``r`` tilted by ``theta`` from the z axis.  The complex total
precession angle is ``phi = (eta - i gamma) tau``.

Closed forms involve arctan of tangents, so a single-point evaluation is
ambiguous by multiples of pi.  Every closed form here is continued along the
straight segment ``s -> s * phi``, ``s in [0, 1]``, from its value 0 at s = 0.
The segment starts with 2048 samples and is refined (doubling, up to 2**16)
until no sample-to-sample phase step of an intermediate quantity exceeds
pi/2.  A path that still has such a step at the finest resolution passes
within roundoff of a branch point; the value is then the one-sided limit and
``pole_crossing`` is reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np

from . import algebra, geometric, interferometer, propagator
from .algebra import TimeGrid
from .biortho import GeneralizedDensityOperator, assemble_density
from .errors import ExpansionSingular, InsufficientSignal, PoleAtI, PoleCrossing, UndersampledPath
from .interferometer import SIGMA_Z

BASE_SAMPLES = 2048
MAX_SAMPLES = 2**16
SMOOTH_STEP = math.pi / 2
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class GateParams:
    """Gate parameters; ``tau`` defaults to one precession period ``2π/eta``."""

    eta: float
    gamma: float
    theta: float
    r: float
    tau: Optional[float] = None

    def __post_init__(self):
        for name in ("eta", "gamma", "theta", "r"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.tau is None:
            if self.eta == 0:
                raise ValueError("tau is required when eta = 0")
            object.__setattr__(self, "tau", 2 * math.pi / abs(self.eta))
        if not 0 < self.r <= 1:
            raise ValueError(f"r (Bloch length) must lie in (0, 1], got {self.r}")
        if self.gamma < 0:
            raise ValueError(f"gamma (decay rate) must be nonnegative, got {self.gamma}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau}")

    @property
    def omega(self) -> complex:
        return complex(self.eta, -self.gamma)

    @property
    def phi(self) -> complex:
        return self.omega * self.tau

    def with_(self, **changes) -> "GateParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class GateReport:
    Phi: complex
    V: complex
    Gamma: complex
    Omega: complex
    branch_unwound: bool
    pole_crossing: bool = False


def hamiltonian(p: GateParams) -> np.ndarray:
    return 0.5 * p.omega * SIGMA_Z


def tilted_basis(theta: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([c, s], dtype=complex), np.array([-s, c], dtype=complex)


def input_state(p: GateParams) -> GeneralizedDensityOperator:
    plus, minus = tilted_basis(p.theta)
    w = [(1 + p.r) / 2, (1 - p.r) / 2]
    return assemble_density(w, [plus, minus], [plus, minus])


def ideal_gate(theta: float) -> np.ndarray:
    """``exp(i (1 - sigma_theta) 2π (1 - cos theta))`` in the tilted eigenbasis.

    ``(1 - sigma_theta)`` has eigenvalue 0 on ``|alpha_+>`` and 2 on
    ``|alpha_->``, so U acts as 1 and ``exp(4πi (1 - cos theta))``.
    """
    plus, minus = tilted_basis(theta)
    phase = np.exp(1j * 2 * 2 * math.pi * (1 - math.cos(theta)))
    return np.outer(plus, plus.conj()) + phase * np.outer(minus, minus.conj())


# -- branch-tracked closed forms ---------------------------------------------

@dataclass(frozen=True)
class _Track:
    s: np.ndarray
    Phi: np.ndarray
    V: np.ndarray
    Omega: np.ndarray
    Gamma: Optional[np.ndarray]
    pole_crossing: bool
    gamma_error: Optional[str] = None


def _max_step(*paths) -> float:
    return max(float(np.max(np.abs(algebra.phase_steps(q)))) if q.size > 1 else 0.0 for q in paths)


def _arctan_pair(numer, denom):
    """Continued arctan(numer/denom) plus the two quantities whose phases are tracked.

    Raises ``PoleCrossing`` only when the continuation itself is impossible
    (an exact zero or an exact half-turn between samples).
    """
    plus, minus = denom + 1j * numer, denom - 1j * numer
    try:
        arc = algebra.continuous_arctan(numer, denom)
    except (PoleAtI, UndersampledPath) as exc:
        raise PoleCrossing(f"arctan continuation failed: {exc}") from exc
    return arc, (plus, minus)


def _near_zero(*paths) -> bool:
    return min(float(np.abs(q).min()) for q in paths) < SINGULAR_TOL


def _track_once(p: GateParams, n: int):
    s = np.linspace(0.0, 1.0, n + 1)
    u = 0.5 * s * p.phi
    cos_u, sin_u = np.cos(u), np.sin(u)
    cos_t = math.cos(p.theta)
    c = p.r * cos_t

    arc_phi, q_phi = _arctan_pair(c * sin_u, cos_u)
    arc_om, q_om = _arctan_pair(cos_t * sin_u, cos_u)
    radicand = cos_u**2 + c**2 * sin_u**2
    Omega = 2 * arc_om - 2 * u * cos_t
    tracked = [*q_phi, *q_om, radicand]
    Gamma, gamma_error = None, None
    try:
        arc_g, q_g = _arctan_pair(p.r * np.sin(Omega / 2), np.cos(Omega / 2))
        Gamma = -arc_g
        tracked += list(q_g)
    except PoleCrossing as exc:
        gamma_error = str(exc)
    return s, -arc_phi, radicand, Omega, Gamma, gamma_error, _max_step(*tracked), _near_zero(*tracked)


@lru_cache(maxsize=256)
def _track(p: GateParams) -> _Track:
    n = BASE_SAMPLES
    result = None
    while True:
        try:
            result = _track_once(p, n)
            step = result[-2]
        except PoleCrossing:
            step = math.inf
        if step <= SMOOTH_STEP or n >= MAX_SAMPLES:
            break
        n *= 2
    if result is None:
        raise PoleCrossing("closed forms cannot be continued through an exact branch point")
    s, Phi, radicand, Omega, Gamma, gamma_error, step, grazing = result
    try:
        V = algebra.continuous_sqrt(radicand)
    except (algebra.ZeroSample, UndersampledPath) as exc:
        raise PoleCrossing(f"visibility root cannot be continued: {exc}") from exc
    return _Track(s, Phi, V, Omega, Gamma, step > SMOOTH_STEP or grazing, gamma_error)


def phase_visibility_closed(p: GateParams) -> tuple[complex, complex]:
    """``Phi = -arctan[r cos(theta) tan(phi/2)]``, ``V = sqrt(cos^2(phi/2) + r^2 cos^2(theta) sin^2(phi/2))``."""
    tr = _track(p)
    return complex(tr.Phi[-1]), complex(tr.V[-1])


def solid_angle(p: GateParams) -> complex:
    """``Omega = 2 arctan[cos(theta) tan(phi/2)] - phi cos(theta)``, continued from phi = 0."""
    return complex(_track(p).Omega[-1])


def geometric_phase_closed(p: GateParams) -> complex:
    """``Gamma = -arctan[r tan(Omega/2)]``, continued from Gamma = 0."""
    tr = _track(p)
    if tr.Gamma is None:
        raise PoleCrossing(f"geometric phase not continuable: {tr.gamma_error}")
    return complex(tr.Gamma[-1])


def closed_form_paths(p: GateParams) -> _Track:
    """All closed forms sampled along the continuation segment."""
    return _track(p)


def report(p: GateParams) -> GateReport:
    tr = _track(p)
    Phi, V = complex(tr.Phi[-1]), complex(tr.V[-1])
    Omega = complex(tr.Omega[-1])
    Gamma = complex(tr.Gamma[-1]) if tr.Gamma is not None else complex(math.nan, math.nan)
    # did continuation leave the principal branch anywhere?
    unwound = False
    try:
        cos_t = math.cos(p.theta)
        t_half = np.tan(p.phi / 2)
        principal_phi = -algebra.principal_arctan(p.r * cos_t * t_half)
        principal_om = 2 * algebra.principal_arctan(cos_t * t_half) - p.phi * cos_t
        unwound = abs(principal_phi - Phi) > 1e-9 or abs(principal_om - Omega) > 1e-9
    except (PoleAtI, ValueError, OverflowError):
        unwound = True
    return GateReport(Phi, V, Gamma, Omega, unwound, tr.pole_crossing or tr.Gamma is None)


# -- small-decay expansions ----------------------------------------------------

def omega_expansion(p: GateParams) -> tuple[complex, float]:
    """First-order expansion of Omega in ``gamma * tau``.

    Returns ``(approximation, coefficient)`` where the approximation is
    ``Omega(gamma=0) - i gamma tau * coefficient``.
    """
    s2 = math.sin(p.eta * p.tau / 2) ** 2
    st2 = math.sin(p.theta) ** 2
    denom = 1 - s2 * st2
    if abs(denom) < SINGULAR_TOL:
        raise ExpansionSingular("1 - sin^2(eta tau/2) sin^2(theta) vanishes")
    coef = math.cos(p.theta) * s2 * st2 / denom
    zeroth = solid_angle(p.with_(gamma=0.0)).real
    return complex(zeroth, -p.gamma * p.tau * coef), coef


def phi_expansion(p: GateParams) -> float:
    """First-order imaginary part of Phi: ``(gamma tau/2) r cos(theta) / D``.

    ``D = 1 - (1 - r^2 cos^2 theta) sin^2(eta tau/2)``.  The sign is the one
    obtained by differentiating the closed form with ``phi = (eta - i gamma) tau``.
    """
    cr = p.r * math.cos(p.theta)
    denom = 1 - (1 - cr**2) * math.sin(p.eta * p.tau / 2) ** 2
    if abs(denom) < SINGULAR_TOL:
        raise ExpansionSingular("1 - (1 - r^2 cos^2 theta) sin^2(eta tau/2) vanishes")
    return 0.5 * p.gamma * p.tau * cr / denom


# -- robustness ----------------------------------------------------------------

QUANTITIES: dict[str, Callable[[GateParams], complex]] = {
    "Omega": solid_angle,
    "Gamma": geometric_phase_closed,
    "Phi": lambda p: phase_visibility_closed(p)[0],
    "V": lambda p: phase_visibility_closed(p)[1],
    "Phi_im": lambda p: phase_visibility_closed(p)[0].imag,
    "Omega_im": lambda p: solid_angle(p).imag,
    "Gamma_im": lambda p: geometric_phase_closed(p).imag,
}

NOISE_FLOOR = 1e-13


def robustness_order(template: GateParams, quantity: Union[str, Callable[[GateParams], complex]], gammas) -> float:
    """Least-squares slope of ``log|q(gamma) - q(0)|`` against ``log gamma``.

    ``template`` fixes everything except gamma.  At least 7 decay rates are
    required; differences below 1e-13 raise ``InsufficientSignal``.
    """
    q = QUANTITIES[quantity] if isinstance(quantity, str) else quantity
    gammas = np.asarray(gammas, dtype=float)
    if gammas.size < 7:
        raise ValueError("slope fit needs at least 7 decay rates")
    if np.any(gammas <= 0):
        raise ValueError("decay rates must be positive for a log-log fit")
    base = q(template.with_(gamma=0.0))
    diffs = np.array([abs(q(template.with_(gamma=float(g))) - base) for g in gammas])
    if np.any(diffs < NOISE_FLOOR):
        raise InsufficientSignal(f"smallest deviation {diffs.min():.3g} is below the noise floor {NOISE_FLOOR}")
    slope, _ = np.polyfit(np.log(gammas), np.log(diffs), 1)
    return float(slope)


def log_gammas(eta: float, lo: float = 1e-4, hi: float = 1e-2, points: int = 9) -> np.ndarray:
    return eta * np.logspace(math.log10(lo), math.log10(hi), points)


# -- full numerical pipelines (used as oracles for the closed forms) ------------

def pipeline_phase_visibility(p: GateParams, samples: int = 2048) -> tuple[complex, complex]:
    """Phi and V from the interferometer traces with exact propagators along t."""
    H = hamiltonian(p)
    grid = TimeGrid(0.0, p.tau, samples)
    pair = propagator.constant_pair(H, grid)
    res = interferometer.relative_phase_visibility_path(input_state(p), pair.L, pair.R)
    return res[-1].phase, res[-1].visibility


def pipeline_geometric_phase(p: GateParams, steps: int = 10_000) -> complex:
    """Gamma from RK4 propagation, Simpson connection and the continued square root."""
    H = propagator.Hamiltonian.constant(hamiltonian(p))
    pair = propagator.evolve(H, TimeGrid(0.0, p.tau, steps + steps % 2))
    rho = input_state(p)
    conn = geometric.connection(pair, rho, H)
    return geometric.geometric_phase(pair, rho, conn)
