"""Random states used by the verification suites and tests."""
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from reegeom.states.families import bell_correlation, Weights
from reegeom.states.qstate import DensityMatrix, LocalUnitary

MIN_PRODUCT_TERMS = 16


def random_density_matrix(rng: np.random.Generator,
                          rank: int = 4) -> DensityMatrix:
    """Ginibre-distributed state of the given rank."""
    ginibre = (rng.standard_normal((4, rank))
               + 1j * rng.standard_normal((4, rank)))
    m = ginibre @ ginibre.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_qubit_ket(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)


def random_product_state(rng: np.random.Generator) -> DensityMatrix:
    return DensityMatrix.from_ket(
        np.kron(random_qubit_ket(rng), random_qubit_ket(rng)))


def random_separable_state(rng: np.random.Generator,
                           num_terms: int = MIN_PRODUCT_TERMS
                           ) -> DensityMatrix:
    weights = rng.dirichlet(np.ones(num_terms))
    m = sum(w * random_product_state(rng).entries
            for w in weights)
    return DensityMatrix(m)


def random_local_unitary(rng: np.random.Generator) -> LocalUnitary:
    return LocalUnitary(unitary_group.rvs(2, random_state=rng),
                        unitary_group.rvs(2, random_state=rng))


def random_entangled_bell_correlation(rng: np.random.Generator,
                                      margin: float = 0.01) -> np.ndarray:
    """Correlation vector of a Bell-diagonal state with max weight > 1/2."""
    while True:
        weights = rng.dirichlet(np.ones(4))
        if weights.max() > 0.5 + margin:
            return bell_correlation(weights)


def random_vp_weights(rng: np.random.Generator,
                      min_weight: float = 0.01) -> Weights:
    while True:
        lam = rng.dirichlet(np.ones(3))
        if lam[0] >= min_weight:
            return tuple(float(v) for v in lam)


def random_horodecki_weights(rng: np.random.Generator,
                             entangled: Optional[bool] = True,
                             margin: float = 0.01) -> Weights:
    """Horodecki weights, entangled iff λ1² > 4 λ2 λ3 (both kinds if None)."""
    while True:
        lam = rng.dirichlet(np.ones(3))
        gap = lam[0] ** 2 - 4 * lam[1] * lam[2]
        if entangled is None \
                or (entangled and gap > margin) \
                or (not entangled and gap < -margin):
            return tuple(float(v) for v in lam)
