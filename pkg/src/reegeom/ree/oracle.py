"""Numerical relative entropy of entanglement.

S(rho||σ) is minimized over mixtures of K product pure states

    σ = Σ_k p_k |a_k><a_k| ⊗ |b_k><b_k|,

with p = softmax(logits) and each qubit given by two Bloch angles. The
objective is convex in σ but not in these parameters, so several seeded
L-BFGS descents are run and compared.
"""
from dataclasses import dataclass, field
from typing import Any, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import softmax

from reegeom.errors import NotConvergedError
from reegeom.logger import logger
from reegeom.parallel import parallel_map
from reegeom.ree.entropy import LOG_CLAMP, logarithmic_mean, relative_entropy
from reegeom.states.qstate import DensityMatrix, MatrixLike, PAULI, ID2, \
    as_matrix, is_ppt

MIN_ENSEMBLE_SIZE = 16
MIN_AGREEING_RESTARTS = 3


@dataclass
class OracleConfig:
    ensemble_size: int = 20
    max_iterations: int = 2000
    tolerance: float = 1e-12
    restarts: int = 8
    seed: int = 1
    agreement: float = 1e-3
    threads: Optional[int] = None

    def __post_init__(self):
        if self.ensemble_size < MIN_ENSEMBLE_SIZE:
            raise ValueError(f'ensemble size must be at least '
                             f'{MIN_ENSEMBLE_SIZE}, got {self.ensemble_size}')
        if self.restarts < 1:
            raise ValueError(f'at least one restart is needed, '
                             f'got {self.restarts}')


def create_oracle_config(spec: Union[OracleConfig, dict, None]
                         ) -> OracleConfig:
    if spec is None:
        return OracleConfig()
    if isinstance(spec, OracleConfig):
        return spec
    if isinstance(spec, dict):
        return OracleConfig(**spec)
    raise TypeError(f'unrecognized oracle spec. type "{type(spec)}"')


@dataclass(frozen=True, eq=False)
class ReeReport:
    value: float
    # filled only by the optimizer (ree_numeric, ree_compare)
    css_numeric: Optional[DensityMatrix] = None
    css_geometric: Optional[DensityMatrix] = None
    gap: float = float('nan')
    iterations: int = 0
    converged: bool = True
    restart_values: Tuple[float, ...] = field(default=())
    residuals: Optional[Any] = None


class ProductEnsemble:
    """Parameterization of a mixture of `size` product pure states.

    The parameter vector is [logits, theta_a, phi_a, theta_b, phi_b].
    """
    def __init__(self, size: int):
        self.size = size

    def split(self, params: np.ndarray):
        return np.split(np.asarray(params, dtype=float), 5)

    def random_params(self, rng: np.random.Generator) -> np.ndarray:
        k = self.size
        return np.concatenate([
            rng.standard_normal(k),
            np.arccos(rng.uniform(-1, 1, k)), rng.uniform(0, 2 * np.pi, k),
            np.arccos(rng.uniform(-1, 1, k)), rng.uniform(0, 2 * np.pi, k),
        ])

    @staticmethod
    def _bloch(theta: np.ndarray, phi: np.ndarray):
        st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
        n = np.stack([st * cp, st * sp, ct], axis=1)
        dn_theta = np.stack([ct * cp, ct * sp, -st], axis=1)
        dn_phi = np.stack([-st * sp, st * cp, np.zeros_like(st)], axis=1)
        return n, dn_theta, dn_phi

    @staticmethod
    def _operators(n: np.ndarray) -> np.ndarray:
        return 0.5 * np.einsum('ki,iab->kab', n, PAULI)

    def _components(self, params: np.ndarray):
        logits, theta_a, phi_a, theta_b, phi_b = self.split(params)
        weights = softmax(logits)
        n_a, da_theta, da_phi = self._bloch(theta_a, phi_a)
        n_b, db_theta, db_phi = self._bloch(theta_b, phi_b)
        proj_a = 0.5 * ID2 + self._operators(n_a)
        proj_b = 0.5 * ID2 + self._operators(n_b)
        return weights, proj_a, proj_b, (da_theta, da_phi), (db_theta, db_phi)

    def state(self, params: np.ndarray) -> np.ndarray:
        weights, proj_a, proj_b, _, _ = self._components(params)
        return np.einsum('k,kab,kcd->acbd', weights, proj_a, proj_b
                         ).reshape(4, 4)

    def objective(self, params: np.ndarray, rho: np.ndarray,
                  neg_entropy: float):
        """S(rho||σ(params)) and its gradient."""
        weights, proj_a, proj_b, da, db = self._components(params)
        sigma = np.einsum('k,kab,kcd->acbd', weights, proj_a, proj_b
                          ).reshape(4, 4)
        lam, vectors = np.linalg.eigh(sigma)
        lam = np.maximum(lam, LOG_CLAMP)
        local = vectors.conj().T @ rho @ vectors
        value = neg_entropy - float(np.sum(np.diag(local).real * np.log(lam)))

        # dS = tr(H dσ) with H = -Dln_σ[rho]
        h = -vectors @ (local / logarithmic_mean(lam[:, None], lam[None, :])) \
            @ vectors.conj().T
        h4 = h.reshape(2, 2, 2, 2)

        def pair(x, y):
            return np.einsum('acbd,kba,kdc->k', h4, x, y).real

        h_k = pair(proj_a, proj_b)
        grad = [
            weights * (h_k - weights @ h_k),
            weights * pair(self._operators(da[0]), proj_b),
            weights * pair(self._operators(da[1]), proj_b),
            weights * pair(proj_a, self._operators(db[0])),
            weights * pair(proj_a, self._operators(db[1])),
        ]
        return value, np.concatenate(grad)


@dataclass(frozen=True, eq=False)
class _Descent:
    value: float
    sigma: np.ndarray
    iterations: int
    index: int


def _descend(rho: np.ndarray, neg_entropy: float, cfg: OracleConfig,
             seed_seq: np.random.SeedSequence, index: int) -> _Descent:
    ensemble = ProductEnsemble(cfg.ensemble_size)
    x0 = ensemble.random_params(np.random.default_rng(seed_seq))
    res = minimize(ensemble.objective, x0, args=(rho, neg_entropy), jac=True,
                   method='L-BFGS-B',
                   options={'maxiter': cfg.max_iterations,
                            'ftol': cfg.tolerance, 'gtol': 1e-10})
    sigma = ensemble.state(res.x)
    value = relative_entropy(rho, sigma)
    logger.trace(f'restart {index}: value={value:.12f} nit={res.nit} '
                 f'({res.message})', src='oracle')
    return _Descent(value, sigma, int(res.nit), index)


def ree_numeric(rho: MatrixLike, cfg: Union[OracleConfig, dict] = None
                ) -> ReeReport:
    """REE by multi-start descent over product-state mixtures.

    Raises NotConvergedError when fewer than three restarts (or all of them,
    if there are fewer) agree with the best value within `cfg.agreement`.
    """
    cfg = create_oracle_config(cfg)
    rho_m = as_matrix(rho)
    if is_ppt(rho_m):
        return ReeReport(0.0, css_numeric=DensityMatrix(rho_m),
                         restart_values=(0.0,))

    p = np.linalg.eigvalsh(0.5 * (rho_m + rho_m.conj().T))
    p = p[p > 0]
    neg_entropy = float(np.sum(p * np.log(p)))
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    runs = parallel_map(
        lambda item: _descend(rho_m, neg_entropy, cfg, item[1], item[0]),
        list(enumerate(seeds)), cfg.threads)
    runs.sort(key=lambda run: (run.value, run.index))

    best = runs[0]
    values = tuple(run.value for run in runs)
    agreeing = sum(1 for v in values if v - best.value <= cfg.agreement)
    converged = agreeing >= min(MIN_AGREEING_RESTARTS, cfg.restarts)
    report = ReeReport(
        value=max(best.value, 0.0),
        css_numeric=DensityMatrix(best.sigma),
        iterations=sum(run.iterations for run in runs),
        converged=converged,
        restart_values=values,
    )
    logger.debug(f'oracle best={best.value:.12f}, {agreeing}/{len(runs)} '
                 f'restarts agree', src='oracle')
    if not converged:
        raise NotConvergedError(report)
    return report
