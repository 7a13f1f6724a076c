"""Bell states and the mixtures with solvable closest separable states."""
from typing import Tuple

import numpy as np

from reegeom.states.qstate import DensityMatrix, DiagonalPauliForm, \
    from_pauli

WEIGHTS_TOL = 1e-12

BELL_KETS = np.array([
    [1, 0, 0, 1],
    [1, 0, 0, -1],
    [0, 1, 1, 0],
    [0, 1, -1, 0],
], dtype=complex) / np.sqrt(2)

# Correlation vectors of the four Bell states, i.e. the vertices of T.
BELL_CORRELATIONS = np.array([
    [1, -1, 1],
    [-1, 1, 1],
    [1, 1, -1],
    [-1, -1, -1],
], dtype=float)

Weights = Tuple[float, float, float]


def bell_state(index: int) -> DensityMatrix:
    """Bell state by 1-based index: 1 = (|00>+|11>)/√2, ..., 4 = singlet."""
    if index not in (1, 2, 3, 4):
        raise ValueError(f'unrecognized Bell state index "{index}"')
    return DensityMatrix.from_ket(BELL_KETS[index - 1])


def bell_weights(t) -> np.ndarray:
    """Bell-basis weights (1 + v_i·t)/4 of a Bell-diagonal state."""
    return (1 + BELL_CORRELATIONS @ np.asarray(t, dtype=float)) / 4


def bell_correlation(weights) -> np.ndarray:
    return BELL_CORRELATIONS.T @ np.asarray(weights, dtype=float)


def bell_diagonal_state(t) -> DensityMatrix:
    return from_pauli(DiagonalPauliForm(np.zeros(3), np.zeros(3), t))


def check_weights(lam) -> Weights:
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape != (3,):
        raise ValueError(f'expected three weights, got {lam.size}')
    if np.any(lam < -WEIGHTS_TOL) or abs(lam.sum() - 1) > WEIGHTS_TOL:
        raise ValueError(f'weights {tuple(lam)} are not a probability vector')
    lam = np.clip(lam, 0, None)
    return tuple(float(v) for v in lam)


def vp_state(lam) -> DensityMatrix:
    """λ1 |β1><β1| + λ2 |00><00| + λ3 |11><11|."""
    l1, l2, l3 = check_weights(lam)
    m = l1 * bell_state(1).entries
    m = m + np.diag([l2, 0, 0, l3])
    return DensityMatrix(m)


def horodecki_state(lam) -> DensityMatrix:
    """λ1 |β1><β1| + λ2 |01><01| + λ3 |10><10|."""
    l1, l2, l3 = check_weights(lam)
    m = l1 * bell_state(1).entries
    m = m + np.diag([0, l2, l3, 0])
    return DensityMatrix(m)


def vp_pauli(lam) -> DiagonalPauliForm:
    l1, l2, l3 = check_weights(lam)
    d = l2 - l3
    return DiagonalPauliForm((0, 0, d), (0, 0, d), (l1, -l1, 1))


def horodecki_pauli(lam) -> DiagonalPauliForm:
    l1, l2, l3 = check_weights(lam)
    d = l2 - l3
    return DiagonalPauliForm((0, 0, d), (0, 0, -d), (l1, -l1, 2 * l1 - 1))


def werner_state(fidelity: float) -> DensityMatrix:
    """Mixture of |β1> with white noise, with <β1|ρ|β1> = fidelity."""
    if not 0 <= fidelity <= 1:
        raise ValueError(f'fidelity {fidelity} is outside [0, 1]')
    c = (4 * fidelity - 1) / 3
    return bell_diagonal_state(c * BELL_CORRELATIONS[0])
