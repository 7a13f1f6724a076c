"""Tetrahedron T of states, octahedron L of separable states and their
deformations T_{r,s}, L_{r,s} at fixed z-parallel Bloch components."""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from reegeom.errors import OutsideTetrahedronError
from reegeom.logger import logger
from reegeom.states.families import BELL_CORRELATIONS
from reegeom.states.qstate import PSD_TOL
from reegeom.states.spectra import t_sheets, l_sheets, min_eigenvalues, \
    pt_min_eigenvalues

TETRAHEDRON_TOL = 1e-8
TIE_TOL = 1e-12


class Body(Enum):
    T = 'T'
    L = 'L'

    @staticmethod
    def deserialize(s: str) -> 'Body':
        try:
            return Body(s.upper())
        except ValueError:
            raise ValueError(f'unrecognized body "{s}"') from None


@dataclass(frozen=True)
class Vertex:
    label: str
    coords: Tuple[float, float, float]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


TETRAHEDRON = tuple(
    Vertex(f'v{i + 1}', tuple(float(c) for c in v))
    for i, v in enumerate(BELL_CORRELATIONS))

OCTAHEDRON = tuple(
    Vertex(f'o{axis + 1}{"+" if sign > 0 else "-"}',
           tuple(float(sign) if k == axis else 0.0 for k in range(3)))
    for axis in range(3) for sign in (1, -1))

# The face of T opposite to v_i lies in the plane t·(-v_i) = 1.
TETRAHEDRON_NORMALS = -BELL_CORRELATIONS


def tetrahedron_excess(t) -> float:
    """Largest violation of t·n <= 1 over the four face normals."""
    return float(np.max(TETRAHEDRON_NORMALS @ np.asarray(t, dtype=float)) - 1)


def in_tetrahedron(t, tol: float = TETRAHEDRON_TOL) -> bool:
    return tetrahedron_excess(t) <= tol


def in_octahedron(t, tol: float = TETRAHEDRON_TOL) -> bool:
    return float(np.sum(np.abs(t))) <= 1 + tol


def nearest_vertex(t, tol: float = TETRAHEDRON_TOL) -> Vertex:
    t = np.asarray(t, dtype=float)
    excess = tetrahedron_excess(t)
    if excess > tol:
        raise OutsideTetrahedronError(t, excess)
    distances = np.linalg.norm(BELL_CORRELATIONS - t, axis=1)
    index = int(np.flatnonzero(distances <= distances.min() + TIE_TOL)[0])
    return TETRAHEDRON[index]


def face_crossing(t, vertex: Vertex) -> np.ndarray:
    """Intersection of the ray v + w(t - v) with the face v·τ = 1 of L.

    For an entangled Bell-diagonal t this face is the one nearest to t and
    w = 2 / (3 - v·t).
    """
    t, v = np.asarray(t, dtype=float), vertex.array
    w = 2 / (3 - v @ t)
    return v + w * (t - v)


#############################################################################
# DEFORMED BODIES
#############################################################################
@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    body: Body
    r: float
    s: float
    n: int
    points: np.ndarray
    sheets: Tuple[str, ...]

    def __len__(self):
        return len(self.sheets)

    def residuals(self) -> np.ndarray:
        """Value of the vanishing eigenvalue at every point."""
        q1, q2, q3 = self.points.T
        if self.body is Body.T:
            mu, nu = min_eigenvalues(self.r, self.s, q1, q2, q3)
        else:
            mu, nu = pt_min_eigenvalues(self.r, self.s, q1, q2, q3)
        return np.where(np.array(self.sheets) == 'mu', mu, nu)


def surface_mesh(body: Body, r: float, s: float, n: int,
                 tol: float = PSD_TOL) -> SurfaceMesh:
    """Sample the boundary of T_{r,s} or L_{r,s} on an n x n (q1, q2) grid.

    Points are ordered row-major in (q1, q2), the upper sheet before the
    lower one at each grid node.
    """
    if isinstance(body, str):
        body = Body.deserialize(body)
    if abs(r) > 1 or abs(s) > 1:
        raise ValueError(f'Bloch components r={r}, s={s} must lie in [-1, 1]')
    if n < 2:
        raise ValueError(f'grid size must be at least 2, got {n}')

    grid = np.linspace(-1, 1, n)
    q1, q2 = (a.ravel() for a in np.meshgrid(grid, grid, indexing='ij'))
    sheets = t_sheets if body is Body.T else l_sheets
    upper, upper_ok, lower, lower_ok = sheets(r, s, q1, q2, tol)

    q3 = np.stack([upper, lower], axis=1)
    mask = np.stack([upper_ok, lower_ok], axis=1)
    tags = np.broadcast_to(np.array(['mu', 'nu']), mask.shape)
    points = np.stack([
        np.broadcast_to(q1[:, None], mask.shape)[mask],
        np.broadcast_to(q2[:, None], mask.shape)[mask],
        q3[mask],
    ], axis=1)
    logger.debug(f'{body.value} mesh r={r} s={s} n={n}: kept {len(points)} '
                 f'of {mask.size} sheet points', src='geometry')
    return SurfaceMesh(body, r, s, n, points, tuple(tags[mask]))
