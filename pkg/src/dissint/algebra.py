"""Small dense complex linear algebra and branch-tracked multivalued functions.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; dimensions in this
package never exceed a handful, so nothing here is tuned for large N.

Multivalued functions (arg, sqrt, log, arctan) are principal-valued at a single
point.  Along a sampled path they are continued from the principal value at
the first sample; see :func:`unwind`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NonDiagonalizable,
    NonFiniteInput,
    PoleAtI,
    UndersampledPath,
    ZeroSample,
)

#: Relative eigenvalue separation below which a spectrum counts as degenerate.
DEGENERACY_RTOL = 1e-8


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a finite square complex128 array."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be square with dim >= 1, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return m


def as_vector(v, name="vector") -> np.ndarray:
    x = np.array(v, dtype=complex).reshape(-1)
    if x.size < 1:
        raise DimensionMismatch(f"{name} is empty")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return x


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def max_abs(a) -> float:
    """Entrywise max norm, the norm used for every matrix tolerance here."""
    return float(np.max(np.abs(a)))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # make the largest-magnitude component real positive
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


class EigenPair(NamedTuple):
    value: complex
    right: np.ndarray
    left: np.ndarray


def eig_pairs(a) -> list[EigenPair]:
    """Right/left eigenvector pairs of a non-normal matrix.

    Right vectors have unit norm with their largest component real positive.
    Left vectors are eigenvectors of ``a†`` for the conjugate eigenvalue,
    scaled so that ``left_k† right_l = δ_kl``.  Pairs are ordered by
    ascending real part, then imaginary part.

    Raises
    ------
    DegenerateSpectrum
        If two eigenvalues are closer than ``1e-8 * (1 + spectral radius)``.
    NonDiagonalizable
        If a left/right pair cannot be binormalized.
    """
    m = as_matrix(a)
    n = m.shape[0]
    lam, vr = np.linalg.eig(m)
    radius = float(np.max(np.abs(lam)))
    gap_tol = DEGENERACY_RTOL * (1.0 + radius)
    if n > 1:
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.diag(np.full(n, np.inf))
        if gaps.min() < gap_tol:
            raise DegenerateSpectrum(
                f"eigenvalue gap {gaps.min():.3g} below tolerance {gap_tol:.3g}"
            )
    mu, vl = np.linalg.eig(m.conj().T)

    order = np.lexsort((lam.imag, lam.real))
    pairs = []
    used = set()
    for k in order:
        j = int(np.argmin(np.abs(mu - np.conj(lam[k]))))
        if j in used:
            raise DegenerateSpectrum("left/right eigenvalues could not be paired one-to-one")
        used.add(j)
        right = _fix_phase(vr[:, k] / np.linalg.norm(vr[:, k]))
        left = vl[:, j]
        overlap = np.vdot(left, right)
        if abs(overlap) < 1e-12 * np.linalg.norm(left):
            raise NonDiagonalizable(f"left and right eigenvectors for {lam[k]} are orthogonal")
        left = left / np.conj(overlap)
        pairs.append(EigenPair(complex(lam[k]), right, left))
    return pairs


def mat_exp(a) -> np.ndarray:
    """Matrix exponential through the biorthonormal spectral sum.

    Diagonal input is exponentiated entrywise, which also covers the zero
    matrix and other degenerate diagonal cases without an eigensolve.
    """
    m = as_matrix(a)
    if np.count_nonzero(m - np.diag(np.diag(m))) == 0:
        return np.diag(np.exp(np.diag(m)))
    out = np.zeros_like(m)
    for value, right, left in eig_pairs(m):
        out += np.exp(value) * np.outer(right, left.conj())
    return out


def _as_finite_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteInput(f"non-finite scalar {z}")
    return z


def principal_arctan(z) -> complex:
    """arctan(z) = log((1+iz)/(1-iz)) / 2i with the principal logarithm."""
    z = _as_finite_complex(z)
    num = 1 + 1j * z
    den = 1 - 1j * z
    if num == 0 or den == 0:
        raise PoleAtI(f"arctan has a logarithmic pole at z = {z}")
    return cmath.log(num / den) / 2j


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t0 = t_0 < ... < t_steps = t1``."""

    t0: float
    t1: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)):
            raise NonFiniteInput("grid endpoints must be finite")
        if not self.t1 > self.t0:
            raise ValueError(f"t1 must exceed t0 (got {self.t0}, {self.t1})")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.steps + 1)


@dataclass(frozen=True)
class BranchPath:
    samples: np.ndarray
    unwound_arg: np.ndarray

    @property
    def winding(self) -> float:
        """Net change of the continuous argument, in units of 2π."""
        return float((self.unwound_arg[-1] - self.unwound_arg[0]) / (2 * np.pi))


def phase_steps(samples) -> np.ndarray:
    """Wrapped argument increments between neighbouring samples, in (-π, π]."""
    s = np.asarray(samples, dtype=complex)
    return np.angle(s[1:] * np.conj(s[:-1]))


def unwind(samples, max_jump: float = np.pi) -> BranchPath:
    """Continuous argument of a sampled nonzero complex path.

    The result starts at the principal argument of ``samples[0]`` and is
    congruent to the principal argument of every sample modulo 2π.

    Raises
    ------
    ZeroSample
        A sample is exactly zero.
    UndersampledPath
        Two neighbours differ in argument by ``max_jump`` or more, so the
        direction of winding between them cannot be decided.
    """
    s = np.asarray(samples, dtype=complex).reshape(-1)
    if s.size == 0:
        raise ValueError("empty path")
    if not np.all(np.isfinite(s)):
        raise NonFiniteInput("path has non-finite samples")
    zero = np.flatnonzero(s == 0)
    if zero.size:
        raise ZeroSample(f"sample {zero[0]} is zero; argument undefined")
    principal = np.angle(s)
    if s.size == 1:
        return BranchPath(s, principal.copy())
    steps = phase_steps(s)
    bad = np.flatnonzero(np.abs(steps) >= max_jump)
    if bad.size:
        raise UndersampledPath(int(bad[0]), float(steps[bad[0]]))
    raw = principal[0] + np.concatenate(([0.0], np.cumsum(steps)))
    # snap onto principal + 2πk so roundoff in the cumulative sum cannot drift
    turns = np.round((raw - principal) / (2 * np.pi))
    return BranchPath(s, principal + 2 * np.pi * turns)


def continuous_log(samples, max_jump: float = np.pi) -> np.ndarray:
    s = np.asarray(samples, dtype=complex).reshape(-1)
    path = unwind(s, max_jump)
    return np.log(np.abs(s)) + 1j * path.unwound_arg


def continuous_sqrt(samples, max_jump: float = np.pi) -> np.ndarray:
    """Square root continued along the path from the principal root at ``samples[0]``."""
    s = np.asarray(samples, dtype=complex).reshape(-1)
    path = unwind(s, max_jump)
    return np.sqrt(np.abs(s)) * np.exp(0.5j * path.unwound_arg)


def continuous_arctan(numer, denom, max_jump: float = np.pi) -> np.ndarray:
    """arctan(numer/denom) continued along a path.

    Working with the pair instead of the quotient lets the path cross the
    poles of a tangent (``denom = 0``) without a jump:
    arctan(N/D) = [log(D + iN) - log(D - iN)] / 2i, with each logarithm
    continued separately.  The first value is the principal arctan.
    Zeros of ``D ± iN`` are the genuine branch points (quotient = ±i).
    """
    n = np.asarray(numer, dtype=complex).reshape(-1)
    d = np.asarray(denom, dtype=complex).reshape(-1)
    if n.shape != d.shape:
        raise DimensionMismatch("numerator and denominator paths differ in length")
    try:
        plus = continuous_log(d + 1j * n, max_jump)
        minus = continuous_log(d - 1j * n, max_jump)
    except ZeroSample as exc:
        raise PoleAtI(f"path passes through a branch point of arctan: {exc}") from exc
    out = (plus - minus) / 2j
    if d[0] != 0:
        anchor = principal_arctan(n[0] / d[0])
        out += np.pi * np.round((anchor - out[0]).real / np.pi)
    return out
