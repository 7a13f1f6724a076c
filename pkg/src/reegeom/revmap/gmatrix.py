"""Reverse map from a closest separable state to its entangled family.

Every entangled state whose closest separable state is the edge state σ
lies on the half line ρ(x) = σ - x G(σ), x >= 0, where, with |φ> the kernel
of σ^Γ and (λ_i, |i>) the eigen-data of σ,

    G(σ) = Σ_ij G_ij |i><i| (|φ><φ|)^Γ |j><j|,
    G_ii = λ_i,  G_ij = (λ_i - λ_j) / (ln λ_i - ln λ_j).
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from reegeom.errors import NotEdgeStateError, RankDeficientError, \
    LeftPhysicalRangeError
from reegeom.logger import logger
from reegeom.ree.entropy import logarithmic_mean
from reegeom.states.qstate import DensityMatrix, MatrixLike, PSD_TOL, \
    as_matrix, partial_transpose

EDGE_TOL = 1e-8
RANK_TOL = 1e-12
REGULARIZATION_EPS = 1e-7
MAX_SEARCH_X = 1e8
BISECT_XTOL = 1e-12


def _projector(*pairs) -> np.ndarray:
    m = np.zeros((4, 4))
    for i, j in pairs:
        m[i, j] = 1
    return m


# Perturbations lifting the rank deficiency of the two solvable closest
# separable states in their canonical frames. Both keep the PT kernel unique.
VP_REGULARIZATION = _projector((1, 1), (2, 2), (0, 3), (3, 0))
HORODECKI_REGULARIZATION = _projector((0, 0), (3, 3))


@dataclass(frozen=True, eq=False)
class GMatrix:
    matrix: np.ndarray
    kernel: np.ndarray
    eigenvalues: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def pt_kernel(sigma: MatrixLike, tol: float = EDGE_TOL) -> np.ndarray:
    values, vectors = np.linalg.eigh(partial_transpose(sigma).hermitian_part)
    zeros = np.flatnonzero(np.abs(values) <= tol)
    if zeros.size != 1:
        raise NotEdgeStateError(int(zeros.size), float(values[0]))
    return vectors[:, zeros[0]]


def g_matrix(sigma: MatrixLike, rank_tol: float = RANK_TOL) -> GMatrix:
    m = as_matrix(sigma)
    values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    if values[0] <= rank_tol:
        raise RankDeficientError(float(values[0]))
    phi = pt_kernel(m)
    projector = partial_transpose(np.outer(phi, phi.conj())).entries
    local = vectors.conj().T @ projector @ vectors
    weights = logarithmic_mean(values[:, None], values[None, :])
    g = vectors @ (weights * local) @ vectors.conj().T
    return GMatrix(0.5 * (g + g.conj().T), phi, values)


def family_generator(sigma: MatrixLike, pattern: Optional[np.ndarray] = None,
                     eps: float = REGULARIZATION_EPS) -> np.ndarray:
    """G(σ), or its ε -> 0 limit along σ + εP for rank-deficient σ.

    The limit is taken by one Richardson step: 2 G(σ + εP/2) - G(σ + εP).
    """
    if pattern is None:
        return g_matrix(sigma).matrix
    m = as_matrix(sigma)
    coarse = g_matrix(m + eps * pattern).matrix
    fine = g_matrix(m + 0.5 * eps * pattern).matrix
    logger.trace(f'regularized G, Richardson correction '
                 f'{np.max(np.abs(fine - coarse)):.3e}', src='revmap')
    return 2 * fine - coarse


def max_admissible_x(sigma: MatrixLike, generator: np.ndarray,
                     tol: float = PSD_TOL) -> float:
    """Largest x with σ - xG positive within tol (the range is an interval)."""
    m = as_matrix(sigma)

    def slack(x):
        return np.linalg.eigvalsh(m - x * generator)[0] + tol

    if slack(0) < 0:
        return 0.0
    hi = 1.0
    while slack(hi) >= 0:
        hi *= 2
        if hi > MAX_SEARCH_X:
            return np.inf
    return float(bisect(slack, 0.0, hi, xtol=BISECT_XTOL))


def family_from_css(sigma: MatrixLike, x: float,
                    pattern: Optional[np.ndarray] = None,
                    eps: float = REGULARIZATION_EPS,
                    tol: float = PSD_TOL) -> DensityMatrix:
    """ρ(x) = σ - x G(σ); rank-deficient σ needs a regularization pattern."""
    if x < 0:
        raise ValueError(f'family parameter must be non-negative, got {x}')
    generator = family_generator(sigma, pattern, eps)
    rho = DensityMatrix(as_matrix(sigma) - x * generator)
    if rho.min_eigenvalue < -tol:
        x_max = max_admissible_x(sigma, generator, tol)
        raise LeftPhysicalRangeError(x, x_max, rho.min_eigenvalue)
    return rho


def regularized_family(sigma: MatrixLike, x: float, pattern: np.ndarray,
                       eps: float = REGULARIZATION_EPS) -> DensityMatrix:
    return family_from_css(sigma, x, pattern=pattern, eps=eps)
