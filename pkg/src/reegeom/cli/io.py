"""File formats of the command-line tool.

Matrices travel as JSON objects {"re": [[...]], "im": [[...]]}, row-major in
the basis |00>, |01>, |10>, |11>. Meshes and sweeps are CSV files with floats
printed to 17 significant digits. Every JSON output embeds a run manifest
under "manifest"; every CSV output gets a `<out>.manifest.json` sidecar.
"""
import csv
import json
import math
import sys
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from reegeom import __version__
from reegeom.states.qstate import DensityMatrix, PSD_TOL

STDIO = '-'
MANIFEST_SUFFIX = '.manifest.json'


@dataclass
class RunManifest:
    subcommand: str
    inputs: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    flags: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    version: str = __version__

    def to_dict(self) -> dict:
        return asdict(self)


def jsonable(value):
    """Convert numpy scalars and arrays, map non-finite floats to null."""
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {'re': m.real.tolist(), 'im': m.imag.tolist()}


def matrix_from_json(obj, shape=(4, 4)) -> np.ndarray:
    if not isinstance(obj, dict) or 're' not in obj:
        raise ValueError('matrix object needs "re" (and optionally "im") '
                         'entries')
    re = np.asarray(obj['re'], dtype=float)
    im = np.asarray(obj.get('im', np.zeros_like(re)), dtype=float)
    if re.shape != shape or im.shape != shape:
        raise ValueError(f'expected {shape[0]}x{shape[1]} matrix, got '
                         f're{re.shape}, im{im.shape}')
    return re + 1j * im


def read_json(path: str):
    if path == STDIO:
        return json.load(sys.stdin)
    with open(path) as f:
        return json.load(f)


def write_json(path: str, payload: dict, manifest: RunManifest):
    data = jsonable(dict(payload, manifest=manifest.to_dict()))
    text = json.dumps(data, indent=2)
    if path == STDIO:
        sys.stdout.write(text + '\n')
    else:
        with open(path, 'w') as f:
            f.write(text + '\n')


def read_state(path: str, psd_tol: float = PSD_TOL) -> DensityMatrix:
    """Read a density matrix and check every invariant.

    Raises InvalidStateError naming the first violated invariant.
    """
    return DensityMatrix(matrix_from_json(read_json(path))).validate(psd_tol)


def format_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    return str(value)


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence],
              manifest: RunManifest):
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
    write_json(path + MANIFEST_SUFFIX, {}, manifest)


def read_csv(path: str) -> List[Dict[str, str]]:
    with open(path, newline='') as f:
        return list(csv.DictReader(f))
