"""Export the surface and sweep datasets of the standard configurations.

Usage: python experiments/export_figures.py [OUTPUT_DIR]
"""
import os
import sys

import numpy as np

from reegeom.cli.io import RunManifest, write_csv
from reegeom.cli.main import SURFACE_COLUMNS
from reegeom.geometry.bodies import Body, surface_mesh
from reegeom.logger import Logger, logger
from reegeom.revmap.zfamily import SWEEP_COLUMNS, css_line_sweep, \
    sample_sweep_params

MESH_SIZE = 64
SURFACES = [
    (Body.T, 0.3, 0.3), (Body.T, 0.5, -0.5),
    (Body.L, 0.0, 0.0), (Body.L, 0.3, 0.3), (Body.L, 0.5, -0.5),
]
SWEEPS = [
    # (r, s, families, bell_diagonal)
    (0.0, 0.0, 8, True),
    (0.3, 0.3, 8, False),
    (0.3, -0.3, 8, False),
]
X_GRID = np.linspace(0, 4.0, 41)
SEED = 0


def _tag(value: float) -> str:
    return f'{value:+.1f}'.replace('.', 'p')


def export(out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    for body, r, s in SURFACES:
        mesh = surface_mesh(body, r, s, MESH_SIZE)
        path = os.path.join(out_dir,
                            f'surface_{body.value}_r{_tag(r)}_s{_tag(s)}.csv')
        rows = ((*p, sheet) for p, sheet in zip(mesh.points, mesh.sheets))
        write_csv(path, SURFACE_COLUMNS, rows, RunManifest(
            'surface', outputs=[path],
            flags={'body': body.value, 'r': r, 's': s, 'n': MESH_SIZE}))
        logger.info(f'{path}: {len(mesh)} points', src='export')

    rng = np.random.default_rng(SEED)
    for r, s, families, bell_diagonal in SWEEPS:
        params = sample_sweep_params(rng, r, s, families, bell_diagonal)
        rows = css_line_sweep(params, X_GRID, progress=True)
        path = os.path.join(out_dir, f'sweep_r{_tag(r)}_s{_tag(s)}.csv')
        write_csv(path, SWEEP_COLUMNS, rows, RunManifest(
            'sweep', outputs=[path], seed=SEED,
            flags={'r': r, 's': s, 'families': families,
                   'bell_diagonal': bell_diagonal,
                   'xmax': float(X_GRID[-1]), 'xsteps': len(X_GRID)}))
        logger.info(f'{path}: {len(rows)} rows', src='export')


if __name__ == '__main__':
    logger.set_level(Logger.Level.INFO)
    export(sys.argv[1] if len(sys.argv) > 1 else 'datasets')
