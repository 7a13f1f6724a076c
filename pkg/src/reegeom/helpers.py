from dataclasses import dataclass, field
from typing import Optional

from reegeom.css.classify import CLASSIFY_TOL
from reegeom.geometry.crossing import GRID_STEP
from reegeom.ree.oracle import OracleConfig, create_oracle_config
from reegeom.revmap.gmatrix import EDGE_TOL, REGULARIZATION_EPS
from reegeom.states.qstate import PSD_TOL

DEFAULT_PARAMS = {
    'tolerance.psd': PSD_TOL,
    'tolerance.classify': CLASSIFY_TOL,
    'tolerance.edge': EDGE_TOL,

    'oracle.ensemble_size': 20,
    'oracle.restarts': 8,
    'oracle.max_iterations': 2000,
    'oracle.tolerance': 1e-12,
    'oracle.agreement': 1e-3,
    'oracle.seed': 1,
    'oracle.threads': None,

    'revmap.epsilon': REGULARIZATION_EPS,

    'geometry.w_max': None,
    'geometry.grid_step': GRID_STEP,
}


@dataclass
class ToleranceSpec:
    psd: float = PSD_TOL
    classify: float = CLASSIFY_TOL
    edge: float = EDGE_TOL


@dataclass
class GeometrySpec:
    # None follows each ray to the edge of the admissible cube
    w_max: Optional[float] = None
    grid_step: float = GRID_STEP

    def __post_init__(self):
        if not 0 < self.grid_step < 1 \
                or (self.w_max is not None and self.w_max <= 0):
            raise ValueError(f'bad crossing grid: w_max={self.w_max}, '
                             f'grid_step={self.grid_step}')


@dataclass
class RunConfig:
    tolerance: ToleranceSpec = field(default_factory=ToleranceSpec)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    geometry: GeometrySpec = field(default_factory=GeometrySpec)
    epsilon: float = REGULARIZATION_EPS


def subdict(d: dict, prefix: str) -> dict:
    dot_prefix = f'{prefix}.'
    l = len(dot_prefix)
    return {
        k[l:]: v
        for k, v in d.items() if k.startswith(dot_prefix)
    }


def dict2config(d: dict) -> RunConfig:
    """Build a RunConfig from a flat dotted-key dictionary.

    Missing keys take the defaults of the respective specs; unknown keys
    under a known prefix raise TypeError.
    """
    return RunConfig(
        tolerance=ToleranceSpec(**subdict(d, 'tolerance')),
        oracle=create_oracle_config(subdict(d, 'oracle')),
        geometry=GeometrySpec(**subdict(d, 'geometry')),
        epsilon=d.get('revmap.epsilon', REGULARIZATION_EPS),
    )


def update_dict(d: dict, kws) -> dict:
    new_d = {k: v for k, v in d.items()}
    for k, v in kws.items():
        new_d[k] = v
    return new_d
