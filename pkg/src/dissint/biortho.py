"""Generalized pure and mixed states in a biorthonormal basis.

A generalized density operator is ``rho = sum_k w_k |alpha_k><beta_k|`` with
real weights ``w_k >= 0`` summing to one and ``<beta_k|alpha_l> = delta_kl``.
It evolves as ``rho -> L rho R†`` for a propagator pair with ``R† L = I``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .errors import (
    BadWeights,
    BinormalizationBroken,
    ComplexWeights,
    DimensionMismatch,
    NegativeWeight,
    NotBiorthonormal,
    OrthogonalPair,
)

ORTHOGONAL_TOL = 1e-12


@dataclass(frozen=True)
class GeneralizedProjector:
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        overlap = np.vdot(self.beta, self.alpha)
        if abs(overlap - 1) > 1e-12:
            raise NotBiorthonormal(f"<beta|alpha> = {overlap}, expected 1")

    def matrix(self) -> np.ndarray:
        return np.outer(self.alpha, self.beta.conj())


def binormalize(alpha, beta) -> GeneralizedProjector:
    """Rescale ``beta`` so that ``<beta|alpha> = 1``; ``alpha`` is kept as given."""
    a = algebra.as_vector(alpha, "alpha")
    b = algebra.as_vector(beta, "beta")
    if a.shape != b.shape:
        raise DimensionMismatch("alpha and beta differ in dimension")
    overlap = np.vdot(b, a)
    if abs(overlap) < ORTHOGONAL_TOL:
        raise OrthogonalPair(f"|<beta|alpha>| = {abs(overlap):.3g} is below {ORTHOGONAL_TOL}")
    return GeneralizedProjector(a, b / np.conj(overlap))


@dataclass(frozen=True)
class GeneralizedDensityOperator:
    """Weights plus binormalized eigenvector pairs.

    ``alphas[k]`` and ``betas[k]`` are the k-th right and left vectors (rows).
    ``weight_tol`` bounds |sum w - 1| and how negative a weight may round to;
    ``basis_tol`` bounds the biorthonormality and completeness residuals.
    """

    weights: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    weight_tol: float = field(default=1e-12, compare=False)
    basis_tol: float = field(default=1e-10, compare=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        a = np.asarray(self.alphas, dtype=complex)
        b = np.asarray(self.betas, dtype=complex)
        n = w.size
        if a.shape != (n, n) or b.shape != (n, n):
            raise DimensionMismatch(
                f"{n} weights need {n} vectors of dimension {n}; got {a.shape} and {b.shape}"
            )
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise BadWeights("non-finite entries in density operator data")
        if np.any(w < -self.weight_tol):
            raise BadWeights(f"negative weight {w.min():.3g}")
        if abs(w.sum() - 1) > self.weight_tol:
            raise BadWeights(f"weights sum to {w.sum()!r}, not 1")
        gram = b.conj() @ a.T
        if algebra.max_abs(gram - np.eye(n)) > self.basis_tol:
            raise NotBiorthonormal("<beta_k|alpha_l> deviates from delta_kl")
        completeness = a.T @ b.conj()
        if algebra.max_abs(completeness - np.eye(n)) > self.basis_tol:
            raise NotBiorthonormal("sum_k |alpha_k><beta_k| deviates from the identity")
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)

    @property
    def dim(self) -> int:
        return self.weights.size

    def matrix_form(self) -> np.ndarray:
        return (self.alphas.T * self.weights) @ self.betas.conj()

    def projector(self, k: int) -> GeneralizedProjector:
        return GeneralizedProjector(self.alphas[k], self.betas[k])

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        m = self.matrix_form()
        return algebra.max_abs(m - m.conj().T) <= tol


def assemble_density(weights, alphas, betas, **tolerances) -> GeneralizedDensityOperator:
    return GeneralizedDensityOperator(
        np.asarray(weights, dtype=float),
        np.asarray(alphas, dtype=complex),
        np.asarray(betas, dtype=complex),
        **tolerances,
    )


def pure_state(alpha, beta=None) -> GeneralizedDensityOperator:
    """Rank-one state ``|alpha><beta|`` completed to a biorthonormal basis."""
    proj = binormalize(alpha, alpha if beta is None else beta)
    n = proj.alpha.size
    if n == 1:
        return assemble_density([1.0], [proj.alpha], [proj.beta])
    # complement: right vectors spanning ker <beta|, left vectors spanning ker <alpha|
    _, _, vh_b = np.linalg.svd(proj.beta.conj()[None, :])
    _, _, vh_a = np.linalg.svd(proj.alpha.conj()[None, :])
    comp_r = vh_b[1:].conj()
    comp_l = vh_a[1:].conj()
    # biorthonormalize the complement block
    gram = comp_l.conj() @ comp_r.T
    comp_l = np.conj(np.linalg.inv(gram)) @ comp_l
    alphas = np.vstack([proj.alpha, comp_r])
    betas = np.vstack([proj.beta, comp_l])
    weights = np.zeros(n)
    weights[0] = 1.0
    return assemble_density(weights, alphas, betas)


def decompose_density(rho, tol: float = 1e-10) -> GeneralizedDensityOperator:
    """Recover weights and eigenvector pairs from a matrix.

    Weights come back sorted descending.  Each alpha has unit norm with its
    largest component real positive; beta is fixed by binormalization.
    """
    m = algebra.as_matrix(rho, "rho")
    pairs = algebra.eig_pairs(m)
    values = np.array([p.value for p in pairs])
    if np.any(np.abs(values.imag) > tol):
        raise ComplexWeights(f"eigenvalue imaginary parts up to {np.abs(values.imag).max():.3g}")
    if np.any(values.real < -tol):
        raise NegativeWeight(f"eigenvalue {values.real.min():.3g} is negative")
    order = np.argsort(-values.real, kind="stable")
    alphas, betas = [], []
    for k in order:
        proj = binormalize(pairs[k].right, pairs[k].left)
        alphas.append(proj.alpha)
        betas.append(proj.beta)
    weights = np.clip(values.real[order], 0.0, None)
    return assemble_density(weights, alphas, betas, weight_tol=max(tol, 1e-12), basis_tol=tol)


def evolve_density(rho: GeneralizedDensityOperator, L, R, tol: float = 1e-8) -> GeneralizedDensityOperator:
    """``rho -> L rho R†``: alphas map through L, betas through R, weights fixed."""
    L = algebra.as_matrix(L, "L")
    R = algebra.as_matrix(R, "R")
    if L.shape != (rho.dim, rho.dim) or R.shape != L.shape:
        raise DimensionMismatch("propagators do not match the state dimension")
    defect = algebra.max_abs(R.conj().T @ L - np.eye(rho.dim))
    if defect > tol:
        raise BinormalizationBroken(f"||R†L - I||_max = {defect:.3g} exceeds {tol:.3g}")
    return GeneralizedDensityOperator(
        rho.weights,
        rho.alphas @ L.T,
        rho.betas @ R.T,
        weight_tol=rho.weight_tol,
        basis_tol=max(rho.basis_tol, 10 * tol),
    )
