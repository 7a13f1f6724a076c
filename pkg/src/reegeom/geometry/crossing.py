from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from reegeom.errors import NoCrossingError
from reegeom.geometry.bodies import Vertex
from reegeom.logger import logger
from reegeom.states.spectra import min_eigenvalues, pt_min_eigenvalues

RANGE_MARGIN = 1.1
# grid spacing as a fraction of the search range
GRID_STEP = 1e-4
ROOT_XTOL = 1e-12
TOUCH_TOL = 1e-10
PHYSICAL_TOL = 1e-8
DUPLICATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CrossingPoint:
    coords: np.ndarray
    w: float
    sheet: str


def _edge_function(r: float, s: float, origin: np.ndarray,
                   direction: np.ndarray):
    def f(w):
        w = np.asarray(w, dtype=float)
        p = origin + w[..., None] * direction
        mu, nu = pt_min_eigenvalues(r, s, p[..., 0], p[..., 1], p[..., 2])
        return np.minimum(mu, nu)
    return f


def _tangential_touch(f, ws: np.ndarray, i: int):
    """Refine a local minimum of |f| bracketed by grid points i-1, i, i+1."""
    g = lambda w: abs(float(f(w)))
    try:
        res = minimize_scalar(g, bracket=(ws[i - 1], ws[i], ws[i + 1]),
                              method='golden', options={'xtol': 1e-15})
    except ValueError:
        return None
    return float(res.x) if g(res.x) <= TOUCH_TOL else None


def search_range(t, v) -> float:
    """Largest w for which v + w(t - v) stays in the cube [-1, 1]^3, widened
    by RANGE_MARGIN so that crossings on the cube faces are bracketed."""
    direction = np.asarray(t, dtype=float) - np.asarray(v, dtype=float)
    return RANGE_MARGIN * 2 / np.max(np.abs(direction))


def line_surface_crossing(t, v: Union[Vertex, np.ndarray], r: float, s: float,
                          w_max: Optional[float] = None,
                          step: float = GRID_STEP) -> List[CrossingPoint]:
    """Points v + w(t - v), w in [0, w_max], where the ray meets L_{r,s}.

    Without an explicit w_max the ray is followed until it leaves the cube
    of admissible correlation vectors (see search_range). The boundary is
    the zero set of min(mu-^Γ, nu-^Γ). Sign changes on a grid whose
    spacing is `step` times the range are refined by Brent's method, grid
    minima of |f| are refined as possible tangential touches. Crossings
    where the state itself is not positive are dropped. The result is
    sorted by distance from t.
    """
    t = np.asarray(t, dtype=float)
    origin = v.array if isinstance(v, Vertex) else np.asarray(v, dtype=float)
    direction = t - origin
    if np.linalg.norm(direction) == 0:
        raise ValueError('the line is undefined when t coincides with the '
                         'vertex')
    if w_max is None:
        w_max = search_range(t, origin)

    f = _edge_function(r, s, origin, direction)
    ws = np.linspace(0, w_max, int(round(1 / step)) + 1)
    values = f(ws)
    magnitudes = np.abs(values)

    roots = [float(w) for w in ws[values == 0]]
    for i in np.flatnonzero(values[:-1] * values[1:] < 0):
        roots.append(brentq(lambda w: float(f(w)), ws[i], ws[i + 1],
                            xtol=ROOT_XTOL))
    for i in range(1, len(ws) - 1):
        if values[i] == 0 or values[i - 1] * values[i + 1] <= 0:
            continue
        # |f| must dip towards zero faster than it varies across the cell
        slope = max(abs(values[i - 1] - values[i]),
                    abs(values[i + 1] - values[i]))
        if magnitudes[i] < magnitudes[i - 1] \
                and magnitudes[i] < magnitudes[i + 1] \
                and magnitudes[i] <= slope:
            touch = _tangential_touch(f, ws, i)
            if touch is not None:
                roots.append(touch)

    crossings = []
    for w in sorted(roots):
        if crossings and abs(w - crossings[-1].w) <= DUPLICATE_TOL:
            continue
        p = origin + w * direction
        if min(min_eigenvalues(r, s, *p)) < -PHYSICAL_TOL:
            logger.trace(f'dropped unphysical crossing {p} at w={w}',
                         src='crossing')
            continue
        mu, nu = pt_min_eigenvalues(r, s, *p)
        crossings.append(CrossingPoint(p, w, 'mu' if abs(mu) <= abs(nu)
                                       else 'nu'))

    if not crossings:
        raise NoCrossingError(f'ray from {tuple(origin)} through {tuple(t)} '
                              f'misses L(r={r}, s={s})')
    crossings.sort(key=lambda c: abs(c.w - 1))
    return crossings
