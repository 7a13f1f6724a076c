"""Quantum relative entropy and its first derivative in the second argument.

All logarithms are natural, entropies are in nats.
"""
import math
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from reegeom.states.qstate import MatrixLike, as_matrix

SUPPORT_TOL = 1e-12
LOG_CLAMP = 1e-300
LOG_DEGENERACY = 1e-9
INFINITE = math.inf
NUM_DIRECTIONS = 256


def _hermitian(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def von_neumann_entropy(rho: MatrixLike) -> float:
    p = np.linalg.eigvalsh(_hermitian(as_matrix(rho)))
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def relative_entropy(rho: MatrixLike, sigma: MatrixLike) -> float:
    """S(rho||sigma) = tr(rho ln rho - rho ln sigma), +inf off support."""
    rho_m = _hermitian(as_matrix(rho))
    p = np.linalg.eigvalsh(rho_m)
    p = p[p > 0]
    neg_entropy = float(np.sum(p * np.log(p)))

    lam, vectors = np.linalg.eigh(_hermitian(as_matrix(sigma)))
    weights = np.einsum('ji,jk,ki->i', vectors.conj(), rho_m, vectors).real
    null = lam <= SUPPORT_TOL
    if np.any(weights[null] > SUPPORT_TOL):
        return INFINITE
    support = ~null
    cross = float(np.sum(weights[support]
                         * np.log(np.maximum(lam[support], LOG_CLAMP))))
    return neg_entropy - cross


def logarithmic_mean(a, b) -> np.ndarray:
    """(a - b) / (ln a - ln b) for positive a, b, with value a at a = b.

    Evaluated as m u / artanh(u) with m = (a + b)/2, u = (a - b)/(a + b),
    which has no cancellation near a = b. Once u rounds to ±1 the direct
    quotient is used; the mean is 0 when either argument is 0.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float),
                               np.asarray(b, dtype=float))
    mean = 0.5 * (a + b)
    u = np.divide(a - b, a + b, out=np.zeros_like(mean), where=(a + b) > 0)
    log_gap = np.log(np.maximum(a, LOG_CLAMP)) \
        - np.log(np.maximum(b, LOG_CLAMP))
    close = np.abs(log_gap) < LOG_DEGENERACY
    far = ~close & (np.abs(u) < 1)
    skewed = ~close & ~far & (a > 0) & (b > 0)
    safe_u = np.where(far, u, 0.5)
    safe_gap = np.where(skewed, log_gap, 1.0)
    value = np.where(far, mean * safe_u / np.arctanh(safe_u),
                     np.where(close, mean, 0.0))
    return np.where(skewed, (a - b) / safe_gap, value)


def log_derivative(sigma: MatrixLike, rho: MatrixLike) -> np.ndarray:
    """Fréchet derivative of ln at sigma applied to rho, on sigma's support.

    d/dε tr(rho ln(sigma + ε X)) = tr(Γ X) with the returned Γ.
    """
    lam, vectors = np.linalg.eigh(_hermitian(as_matrix(sigma)))
    local = vectors.conj().T @ as_matrix(rho) @ vectors
    support = lam > SUPPORT_TOL
    inverse_mean = np.zeros((4, 4))
    block = np.ix_(support, support)
    inverse_mean[block] = 1 / logarithmic_mean(lam[support][:, None],
                                               lam[support][None, :])
    return _hermitian(vectors @ (inverse_mean * local) @ vectors.conj().T)


def directional_derivative(rho: MatrixLike, sigma: MatrixLike,
                           direction: MatrixLike,
                           steps: Sequence[float] = (1e-5, 1e-6)) -> float:
    """d/dε S(rho||(1-ε)sigma + ε direction) at 0+ by finite differences.

    Forward differences at the two steps are combined by a Richardson step.
    """
    sigma_m, direction_m = as_matrix(sigma), as_matrix(direction)
    base = relative_entropy(rho, sigma_m)
    estimates = [
        (relative_entropy(rho, (1 - h) * sigma_m + h * direction_m) - base) / h
        for h in steps]
    h1, h2 = steps
    return float((h1 * estimates[1] - h2 * estimates[0]) / (h1 - h2))


def _product_ket(angles: np.ndarray) -> np.ndarray:
    """Kets |a>|b> for rows of (theta_a, phi_a, theta_b, phi_b)."""
    angles = np.atleast_2d(angles)
    a = np.stack([np.cos(angles[:, 0] / 2),
                  np.exp(1j * angles[:, 1]) * np.sin(angles[:, 0] / 2)], axis=1)
    b = np.stack([np.cos(angles[:, 2] / 2),
                  np.exp(1j * angles[:, 3]) * np.sin(angles[:, 2] / 2)], axis=1)
    return np.einsum('ka,kb->kab', a, b).reshape(-1, 4)


def directional_optimality_check(rho: MatrixLike, css: MatrixLike,
                                 num_directions: int = NUM_DIRECTIONS,
                                 seed: int = 0) -> float:
    """Smallest first-order change of S(rho||.) from css towards separable
    states; a closest separable state gives a non-negative value.

    The derivative towards σ' is tr(Γ css) - tr(Γ σ') with Γ from
    `log_derivative`. It is linear in σ', so the minimum over separable
    states is attained on a pure product state: random product states and
    the computational basis are scanned and the best one is refined.
    """
    gamma = log_derivative(css, rho)
    base = float(np.trace(gamma @ as_matrix(css)).real)

    def score(angles):
        kets = _product_ket(angles)
        return np.einsum('ki,ij,kj->k', kets.conj(), gamma, kets).real

    rng = np.random.default_rng(seed)
    samples = np.column_stack([
        np.arccos(rng.uniform(-1, 1, num_directions)),
        rng.uniform(0, 2 * np.pi, num_directions),
        np.arccos(rng.uniform(-1, 1, num_directions)),
        rng.uniform(0, 2 * np.pi, num_directions),
    ])
    corners = np.array([[ta, 0, tb, 0] for ta in (0, np.pi)
                        for tb in (0, np.pi)])
    samples = np.vstack([corners, samples])
    scores = score(samples)
    best = samples[np.argmax(scores)]
    res = minimize(lambda a: -score(a)[0], best, method='L-BFGS-B')
    best_score = max(float(scores.max()), float(-res.fun))
    return base - best_score
