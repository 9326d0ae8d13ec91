"""Mach-Zehnder interferometry with a partial absorber or dissipative internal motion.

Intensities are returned unnormalized, as the right-hand sides of the
proportionalities (e.g. ``2 + Tr[L rho]/z + z Tr[rho R†]``); the normalized
pattern ``1 + V cos(phi - Phi)`` is half of that.

Product-space basis ordering is ``|spatial> (x) |internal>`` with the spatial
index slow, so the channel-0 block is the leading ``N x N`` block.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import algebra
from .biortho import GeneralizedDensityOperator
from .errors import BinormalizationBroken, DimensionMismatch, VanishingInterference, ZeroZ

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)

NODAL_TOL = 1e-12


@dataclass(frozen=True)
class AbsorberSetting:
    """Partial absorber with transmission ``T`` plus a U(1) phase ``chi``."""

    T: float
    chi: float

    def __post_init__(self):
        if not 0 < self.T <= 1:
            raise ValueError(f"transmission must lie in (0, 1], got {self.T}")

    @property
    def z(self) -> complex:
        return math.sqrt(self.T) * cmath.exp(1j * self.chi)


@dataclass(frozen=True)
class ArmConfiguration:
    """Arm 0 carries the internal pair (L, R); arm 1 multiplies by ``z``."""

    z: complex
    L: np.ndarray
    R: np.ndarray
    tol: float = 1e-8

    def __post_init__(self):
        if complex(self.z) == 0:
            raise ZeroZ("arm multiplier z must be nonzero")
        L = algebra.as_matrix(self.L, "L")
        R = algebra.as_matrix(self.R, "R")
        if L.shape != R.shape:
            raise DimensionMismatch("L and R differ in dimension")
        defect = algebra.max_abs(R.conj().T @ L - np.eye(L.shape[0]))
        if defect > self.tol:
            raise BinormalizationBroken(f"||R†L - I||_max = {defect:.3g}")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "R", R)

    @property
    def dim(self) -> int:
        return self.L.shape[0]


@dataclass(frozen=True)
class InterferenceResult:
    """Channel-0 intensity with its complex relative phase and visibility.

    ``branch_ambiguous`` is set for single-point evaluations, where the sign
    of the square root is a convention rather than a continuation.
    """

    intensity: complex
    phase: complex
    visibility: complex
    branch_ambiguous: bool = False

    def normalized_pattern(self, phi) -> complex:
        """``1 + V cos(phi - Phi)`` for a (complex) shift ``phi``."""
        return 1 + self.visibility * np.cos(phi - self.phase)


def standard_intensity(setting: AbsorberSetting) -> tuple[float, float]:
    """Conventional squared-modulus analysis: ``(1 + nu cos chi, nu)``."""
    nu = 2 * math.sqrt(setting.T) / (1 + setting.T)
    return 1 + nu * math.cos(setting.chi), nu


def scalar_intensity(z) -> complex:
    """Complex channel-0 intensity ``2 + 1/z + z`` of the absorber interferometer."""
    z = complex(z)
    if z == 0:
        raise ZeroZ("intensity is singular at z = 0 (path fully known)")
    return 2 + 1 / z + z


def polar_interference(setting: AbsorberSetting) -> tuple[float, float]:
    """``(vartheta, |J|)`` for ``J = cos(phi) = |J| exp(-i vartheta)``.

    vartheta is the principal ``arctan(((1-T)/(1+T)) tan chi)``; use
    :func:`polar_interference_sweep` for a continuous angle over a chi sweep.
    """
    T, chi = setting.T, setting.chi
    theta = math.atan((1 - T) / (1 + T) * math.tan(chi))
    mag = math.sqrt(math.cos(chi) ** 2 + (1 - T) ** 2 / (4 * T))
    return theta, mag


def polar_interference_sweep(T: float, chis: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    chis = np.asarray(chis, dtype=float)
    pointwise = [polar_interference(AbsorberSetting(T, c)) for c in chis]
    theta = np.array([p[0] for p in pointwise])
    mag = np.array([p[1] for p in pointwise])
    # the tangent form jumps by pi at chi = pi/2 mod pi; unwind on the doubled angle
    if theta.size > 1:
        theta = algebra.unwind(np.exp(2j * theta)).unwound_arg / 2
    return theta, mag


def _block(op2, internal):
    return np.kron(op2, internal)


def output_state(rho: GeneralizedDensityOperator, arms: ArmConfiguration) -> np.ndarray:
    """Full ``2N x 2N`` output operator of the interferometer."""
    n = rho.dim
    if arms.dim != n:
        raise DimensionMismatch("arm operators do not match the internal dimension")
    eye = np.eye(n)
    big_L = _block(P0, arms.L) + arms.z * _block(P1, eye)
    big_R = _block(P0, arms.R) + (1 / np.conj(arms.z)) * _block(P1, eye)
    U_M = _block(SIGMA_X, eye)
    U_B = _block(HADAMARD, eye)
    rho_in = _block(P0, rho.matrix_form())
    forward = algebra.mat_mul(algebra.mat_mul(algebra.mat_mul(U_B, U_M), big_L), U_B)
    backward = algebra.mat_mul(
        algebra.mat_mul(algebra.mat_mul(algebra.adjoint(U_B), algebra.adjoint(big_R)), algebra.adjoint(U_M)),
        algebra.adjoint(U_B),
    )
    return algebra.mat_mul(algebra.mat_mul(forward, rho_in), backward)


def channel0_block_trace(state: np.ndarray, n: int) -> complex:
    return algebra.trace(state[:n, :n])


def channel0_intensity(rho: GeneralizedDensityOperator, arms: ArmConfiguration) -> complex:
    """Closed form ``2 + Tr[L rho]/z + z Tr[rho R†]``."""
    m = rho.matrix_form()
    a = algebra.trace(arms.L @ m)
    b = algebra.trace(m @ arms.R.conj().T)
    return 2 + a / arms.z + arms.z * b


def _traces(rho, L, R):
    m = rho.matrix_form()
    return np.trace(L @ m, axis1=-2, axis2=-1), np.trace(m @ np.conj(np.swapaxes(R, -1, -2)), axis1=-2, axis2=-1)


def _check_nodal(a, b):
    worst = min(np.min(np.abs(a)), np.min(np.abs(b)))
    if worst < NODAL_TOL:
        raise VanishingInterference(f"interference trace magnitude {worst:.3g}: phase undefined")


def relative_phase_visibility(rho: GeneralizedDensityOperator, L, R, z: complex = 1.0) -> InterferenceResult:
    """Single-point complex phase and visibility.

    Convention: ``V`` is the principal root of ``Tr[L rho] Tr[rho R†]`` and
    ``exp(i Phi) = Tr[L rho] / V`` with principal ``Phi``.  This keeps
    ``V exp(+-i Phi)`` equal to the two traces exactly, so the pattern
    reconstructs the intensity; the overall sign choice is flagged.
    """
    L = algebra.as_matrix(L, "L")
    R = algebra.as_matrix(R, "R")
    a, b = _traces(rho, L, R)
    a, b = complex(a), complex(b)
    _check_nodal(np.array([a]), np.array([b]))
    V = cmath.sqrt(a * b)
    Phi = -1j * cmath.log(a / V)
    z = complex(z)
    if z == 0:
        raise ZeroZ("z must be nonzero")
    return InterferenceResult(2 + a / z + z * b, Phi, V, branch_ambiguous=True)


def relative_phase_visibility_path(rho: GeneralizedDensityOperator, L_path, R_path, z: complex = 1.0) -> list[InterferenceResult]:
    """Phase and visibility along a sampled evolution starting at ``L = R = I``.

    The visibility root is continued from ``V = 1`` at the first sample and
    the phase is unwound, so no branch choice is left open.
    """
    L_path = np.asarray(L_path, dtype=complex)
    R_path = np.asarray(R_path, dtype=complex)
    a, b = _traces(rho, L_path, R_path)
    _check_nodal(a, b)
    V = algebra.continuous_sqrt(a * b)
    e_phase = a / V
    Phi = algebra.unwind(e_phase).unwound_arg - 1j * np.log(np.abs(e_phase))
    z = complex(z)
    if z == 0:
        raise ZeroZ("z must be nonzero")
    intensity = 2 + a / z + z * b
    return [InterferenceResult(complex(i), complex(p), complex(v)) for i, p, v in zip(intensity, Phi, V)]
