"""Self-check suites run by `ree-geom verify`."""
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np
from tqdm import tqdm

from reegeom.css.css import css_auto, css_vp, css_horodecki, \
    vp_family_parameter, horodecki_family_parameter
from reegeom.errors import DegenerateFrameWarning, NotConvergedError, \
    ReeGeomError
from reegeom.geometry.bodies import Body, TETRAHEDRON_NORMALS, \
    face_crossing, nearest_vertex, surface_mesh
from reegeom.geometry.crossing import line_surface_crossing
from reegeom.helpers import RunConfig
from reegeom.logger import logger
from reegeom.ree.entropy import directional_optimality_check
from reegeom.ree.oracle import ree_numeric
from reegeom.revmap.gmatrix import family_generator, regularized_family, \
    VP_REGULARIZATION, HORODECKI_REGULARIZATION
from reegeom.revmap.zfamily import line_crossing, sample_sigma_z, \
    sample_sweep_params, z_family
from reegeom.states.families import bell_diagonal_state, bell_state, \
    horodecki_state, vp_state
from reegeom.states.sampling import random_entangled_bell_correlation, \
    random_horodecki_weights, random_local_unitary, random_vp_weights

BLOCH_TOL = 1e-10
RECOVERY_TOL = 1e-9
DIRECTIONAL_TOL = 1e-8
DUAL_ROUTE_TOL = 1e-10
CROSSING_TOL = 1e-10
MESH_TOL = 1e-8
ORACLE_GAP_TOL = 2e-4
DUAL_ROUTE_X = (0.0, 0.05, 0.1)
MESH_SIZE = 64


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''

    def to_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed,
                'detail': self.detail}


def _check(name: str, value: float, limit: float) -> CheckResult:
    passed = bool(np.isfinite(value) and value <= limit)
    return CheckResult(name, passed, f'{value:.3e} (limit {limit:.0e})')


def _entangled_samples(rng: np.random.Generator, count: int):
    for i in range(count):
        lu = random_local_unitary(rng)
        t = random_entangled_bell_correlation(rng)
        yield f'bell[{i}]', lu.apply(bell_diagonal_state(t))
        yield f'vp[{i}]', lu.apply(vp_state(random_vp_weights(rng)))
        yield f'horodecki[{i}]', lu.apply(horodecki_state(
            random_horodecki_weights(rng)))


#############################################################################
# SUITES
#############################################################################
def suite_families(cfg: RunConfig, rng: np.random.Generator, count: int,
                   progress: bool = False) -> List[CheckResult]:
    results = []
    for i in range(1, 5):
        css = css_auto(bell_state(i), numeric_fallback=False,
                       psd_tol=cfg.tolerance.psd)
        results.append(_check(f'bell-state[{i}] ree = ln 2',
                               abs(css.ree - math.log(2)), 1e-12))

    samples = list(_entangled_samples(rng, count))
    if progress:
        samples = tqdm(samples, desc='families', leave=False)
    for name, rho in samples:
        try:
            res = css_auto(rho, numeric_fallback=False,
                           psd_tol=cfg.tolerance.psd,
                           classify_tol=cfg.tolerance.classify)
        except ReeGeomError as exc:
            results.append(CheckResult(f'{name} solved', False, str(exc)))
            continue
        results.append(_check(f'{name} bloch gap', res.residuals.bloch_gap,
                              BLOCH_TOL))
        results.append(_check(f'{name} edge gap', res.residuals.edge_gap,
                              cfg.tolerance.edge))
        if not math.isnan(res.residuals.recovery_gap):
            results.append(_check(f'{name} recovery gap',
                                  res.residuals.recovery_gap, RECOVERY_TOL))
        results.append(_check(f'{name} directional',
                              -directional_optimality_check(rho, res.css),
                              DIRECTIONAL_TOL))
    return results


def suite_revmap(cfg: RunConfig, rng: np.random.Generator, count: int,
                 progress: bool = False) -> List[CheckResult]:
    results = []
    indices = tqdm(range(count), desc='revmap', leave=False) if progress \
        else range(count)
    for i in indices:
        p = sample_sigma_z(rng)
        generator = family_generator(p.matrix())
        err = max(float(np.max(np.abs(
            z_family(p, x).entries - (p.matrix() - x * generator))))
            for x in DUAL_ROUTE_X)
        results.append(_check(f'sigma_z[{i}] closed form = G route', err,
                              DUAL_ROUTE_TOL))

        lam = random_vp_weights(rng)
        css = css_vp(lam).css
        rho = regularized_family(css, vp_family_parameter(lam),
                                 VP_REGULARIZATION, cfg.epsilon)
        results.append(_check(
            f'vp[{i}] recovery',
            float(np.max(np.abs(rho.entries - vp_state(lam).entries))),
            RECOVERY_TOL))

        lam = random_horodecki_weights(rng)
        css = css_horodecki(lam).css
        rho = regularized_family(css, horodecki_family_parameter(lam),
                                 HORODECKI_REGULARIZATION, cfg.epsilon)
        results.append(_check(
            f'horodecki[{i}] recovery',
            float(np.max(np.abs(rho.entries - horodecki_state(lam).entries))),
            RECOVERY_TOL))

    first, second = sample_sweep_params(rng, 0.0, 0.0, 2, bell_diagonal=True)
    mu = line_crossing(first, second).mu
    results.append(_check('bell-diagonal lines meet (1, 1, -1)',
                          float(np.max(np.abs(mu - np.array([1, 1, -1])))),
                          CROSSING_TOL))
    return results


def suite_oracle(cfg: RunConfig, rng: np.random.Generator, count: int,
                 progress: bool = False) -> List[CheckResult]:
    results = []
    samples = list(_entangled_samples(rng, count))
    if progress:
        samples = tqdm(samples, desc='oracle', leave=False)
    for name, rho in samples:
        try:
            geometric = css_auto(rho, numeric_fallback=False,
                                 psd_tol=cfg.tolerance.psd,
                                 classify_tol=cfg.tolerance.classify)
        except ReeGeomError as exc:
            results.append(CheckResult(f'{name} solved', False, str(exc)))
            continue
        try:
            numeric = ree_numeric(rho, cfg.oracle)
        except NotConvergedError as exc:
            results.append(CheckResult(f'{name} oracle', False, str(exc)))
            continue
        results.append(_check(f'{name} geometric - numeric',
                              abs(geometric.ree - numeric.value),
                              ORACLE_GAP_TOL))
    return results


def suite_geometry(cfg: RunConfig, rng: np.random.Generator, count: int,
                   progress: bool = False) -> List[CheckResult]:
    results = []
    mesh = surface_mesh(Body.T, 0.0, 0.0, MESH_SIZE, cfg.tolerance.psd)
    results.append(_check(
        'T mesh on tetrahedron planes',
        float(np.max(np.abs(np.max(mesh.points @ TETRAHEDRON_NORMALS.T,
                                   axis=1) - 1))),
        MESH_TOL))
    mesh = surface_mesh(Body.L, 0.0, 0.0, MESH_SIZE, cfg.tolerance.psd)
    results.append(_check(
        'L mesh on octahedron faces',
        float(np.max(np.abs(np.sum(np.abs(mesh.points), axis=1) - 1))),
        MESH_TOL))

    indices = tqdm(range(count), desc='geometry', leave=False) if progress \
        else range(count)
    for i in indices:
        t = random_entangled_bell_correlation(rng)
        vertex = nearest_vertex(t)
        crossing = line_surface_crossing(t, vertex, 0.0, 0.0,
                                         cfg.geometry.w_max,
                                         cfg.geometry.grid_step)[0]
        results.append(_check(
            f'bell[{i}] face crossing = ray search',
            float(np.linalg.norm(crossing.coords - face_crossing(t, vertex))),
            1e-8))
    return results


SUITES: Dict[str, Callable[..., List[CheckResult]]] = {
    'families': suite_families,
    'revmap': suite_revmap,
    'oracle': suite_oracle,
    'geometry': suite_geometry,
}


def run_suites(names: List[str], cfg: RunConfig, seed: int, count: int,
               progress: bool = False) -> Dict[str, List[CheckResult]]:
    """Run the named suites with one generator per suite spawned from seed."""
    seeds = np.random.SeedSequence(seed).spawn(len(names))
    report = {}
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', DegenerateFrameWarning)
        for name, seed_seq in zip(names, seeds):
            logger.info(f'running suite "{name}"', src='verify')
            report[name] = SUITES[name](cfg, np.random.default_rng(seed_seq),
                                        count, progress)
    return report
