"""Closed-form families whose closest separable state is

    σ_Z = R1|00><00| + R2|01><01| + R3|10><10| + R4|11><11|
          + Y(|01><10| + |10><01|),   Y = √(R1 R4),  R2 R3 >= R1 R4.

Along the family ρ(x) = σ_Z - x G(σ_Z) every entry moves linearly,
R_i -> R_i - x R̄_i and Y -> Y - x Ȳ, with

    z = √((R2 - R3)² + 4 R1 R4),  L = ln((R2 + R3 + z)/(R2 + R3 - z)),
    d = -1 / ((R1 + R4) z² L).
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence

import numpy as np
from tqdm import tqdm

from reegeom.errors import DegenerateZError, ParallelLinesError
from reegeom.logger import logger
from reegeom.parallel import parallel_map
from reegeom.states.qstate import DensityMatrix, DiagonalPauliForm, PSD_TOL

PARAMS_TOL = 1e-12
DEGENERATE_TOL = 1e-14
PARALLEL_TOL = 1e-12
MIN_ENTRY = 1e-3
SWEEP_MARGIN = 0.05


@dataclass(frozen=True)
class SigmaZParams:
    R1: float
    R2: float
    R3: float
    R4: float
    Y: float

    @classmethod
    def from_entries(cls, R1: float, R2: float, R3: float,
                     R4: float) -> 'SigmaZParams':
        p = cls(R1, R2, R3, R4, math.sqrt(R1 * R4))
        p.validate()
        return p

    def validate(self) -> 'SigmaZParams':
        entries = (self.R1, self.R2, self.R3, self.R4)
        if min(entries) < -PARAMS_TOL:
            raise ValueError(f'negative entry in {entries}')
        if abs(sum(entries) - 1) > PARAMS_TOL:
            raise ValueError(f'entries {entries} do not sum to one')
        if abs(self.Y - math.sqrt(max(self.R1 * self.R4, 0))) > PARAMS_TOL:
            raise ValueError(f'Y={self.Y} differs from sqrt(R1 R4)')
        if self.R2 * self.R3 < self.R1 * self.R4 - PARAMS_TOL:
            raise ValueError(f'R2 R3 < R1 R4 for {entries}')
        return self

    @property
    def correlation_z(self) -> float:
        """t3 of σ_Z, R1 - R2 - R3 + R4."""
        return self.R1 - self.R2 - self.R3 + self.R4

    def matrix(self) -> np.ndarray:
        m = np.diag([self.R1, self.R2, self.R3, self.R4]).astype(complex)
        m[1, 2] = m[2, 1] = self.Y
        return m


@dataclass(frozen=True)
class ZFamilyDerivatives:
    R1_bar: float
    R2_bar: float
    R3_bar: float
    R4_bar: float
    Y_bar: float
    z: float
    L: float
    d: float


def z_derivatives(p: SigmaZParams) -> ZFamilyDerivatives:
    delta, total = p.R2 - p.R3, p.R2 + p.R3
    outer = p.R1 + p.R4
    if outer <= DEGENERATE_TOL:
        raise DegenerateZError(f'R1 + R4 = {outer} leaves the partial '
                               f'transpose kernel degenerate')
    z = math.hypot(delta, 2 * p.Y)
    if z <= DEGENERATE_TOL:
        # R2 = R3 and Y = 0: the generator vanishes identically
        return ZFamilyDerivatives(0.0, 0.0, 0.0, 0.0, 0.0, z, math.inf,
                                  -math.inf)

    # L -> inf on the edge R2 R3 = R1 R4, where 1/L -> 0
    ratio = z / total
    L = 2 * math.atanh(ratio) if ratio < 1 else math.inf
    inv_L = 1 / L
    k = 1 / (outer * z ** 2)
    y2 = p.Y ** 2
    R1_bar = y2 / outer
    R2_bar = -2 * y2 * k * (delta * p.R2 + 2 * y2 - delta * z * inv_L)
    R3_bar = -2 * R1_bar - R2_bar
    Y_bar = -p.Y * k * (2 * y2 * total + delta ** 2 * z * inv_L)
    return ZFamilyDerivatives(R1_bar, R2_bar, R3_bar, R1_bar, Y_bar, z, L,
                              -k * inv_L)


def z_family(p: SigmaZParams, x: float) -> DensityMatrix:
    bar = z_derivatives(p)
    m = np.diag([p.R1 - x * bar.R1_bar, p.R2 - x * bar.R2_bar,
                 p.R3 - x * bar.R3_bar, p.R4 - x * bar.R4_bar]
                ).astype(complex)
    m[1, 2] = m[2, 1] = p.Y - x * bar.Y_bar
    return DensityMatrix(m)


def z_family_pauli(p: SigmaZParams, x: float) -> DiagonalPauliForm:
    bar = z_derivatives(p)
    drift = bar.R2_bar - bar.R3_bar
    r = (p.R1 + p.R2 - p.R3 - p.R4) - x * drift
    s = (p.R1 - p.R2 + p.R3 - p.R4) + x * drift
    t12 = 2 * p.Y - 2 * x * bar.Y_bar
    t3 = p.correlation_z - 4 * x * bar.R1_bar
    return DiagonalPauliForm((0, 0, r), (0, 0, s), (t12, t12, t3))


class LineCrossing(NamedTuple):
    x: float
    x_prime: float
    mu: np.ndarray


def line_crossing(p: SigmaZParams, p_prime: SigmaZParams) -> LineCrossing:
    """Where the correlation lines of two σ_Z families intersect.

    Both lines live in the plane t1 = t2, so the crossing solves
    Y - xȲ = Y' - x'Ȳ' and r̃ - 4xR̄1 = r̃' - 4x'R̄1'.
    """
    a, b = z_derivatives(p), z_derivatives(p_prime)
    denom = b.Y_bar * a.R1_bar - a.Y_bar * b.R1_bar
    if abs(denom) <= PARALLEL_TOL:
        raise ParallelLinesError(f'families {p} and {p_prime} have parallel '
                                 f'correlation lines')
    rt, rt_prime = p.correlation_z, p_prime.correlation_z
    dy = p.Y - p_prime.Y
    x = (b.Y_bar * (rt - rt_prime) - 4 * dy * b.R1_bar) / (4 * denom)
    x_prime = (a.Y_bar * (rt - rt_prime) - 4 * dy * a.R1_bar) / (4 * denom)
    mu12 = (4 * (p.Y * b.Y_bar * a.R1_bar - p_prime.Y * a.Y_bar * b.R1_bar)
            - a.Y_bar * b.Y_bar * (rt - rt_prime)) / (2 * denom)
    mu3 = (4 * dy * a.R1_bar * b.R1_bar
           - (rt * a.Y_bar * b.R1_bar - rt_prime * b.Y_bar * a.R1_bar)) / denom
    return LineCrossing(x, x_prime, np.array([mu12, mu12, mu3]))


#############################################################################
# SWEEPS
#############################################################################
class SweepRow(NamedTuple):
    family_id: int
    x: float
    t1: float
    t2: float
    t3: float
    tau1: float
    tau2: float
    tau3: float
    r: float
    s: float


SWEEP_COLUMNS = SweepRow._fields


def _sweep_family(family_id: int, p: SigmaZParams, x_grid: Sequence[float],
                  tol: float) -> List[SweepRow]:
    tau = z_family_pauli(p, 0.0).q
    rows = []
    for x in x_grid:
        if z_family(p, x).min_eigenvalue < -tol:
            logger.trace(f'family {family_id} left the physical range at '
                         f'x={x}', src='sweep')
            continue
        form = z_family_pauli(p, x)
        rows.append(SweepRow(family_id, float(x), *form.q, *tau,
                             form.r[2], form.s[2]))
    return rows


def css_line_sweep(params: Sequence[SigmaZParams], x_grid: Iterable[float],
                   tol: float = PSD_TOL, threads: int = None,
                   progress: bool = False) -> List[SweepRow]:
    """Correlation polylines of each family over x_grid, with τ = t(0).

    Points where ρ(x) is not positive are dropped; rows are ordered by
    family, then by x.
    """
    x_grid = list(x_grid)
    items = list(enumerate(params))
    if progress:
        items = tqdm(items, desc='sweep', leave=False)
    chunks = parallel_map(lambda item: _sweep_family(*item, x_grid, tol),
                          items, threads)
    return [row for chunk in chunks for row in chunk]


def sample_sigma_z(rng: np.random.Generator,
                   min_entry: float = MIN_ENTRY) -> SigmaZParams:
    """Random full-rank σ_Z with R2 R3 > R1 R4."""
    while True:
        R1, R2, R3, R4 = rng.dirichlet(np.ones(4))
        if R2 * R3 < R1 * R4:
            R1, R2, R3, R4 = R2, R1, R4, R3
        if min(R1, R2, R3, R4) >= min_entry \
                and R2 * R3 - R1 * R4 >= min_entry ** 2:
            return SigmaZParams.from_entries(R1, R2, R3, R4)


def sample_sweep_params(rng: np.random.Generator, r: float, s: float,
                        count: int,
                        bell_diagonal: bool = False) -> List[SigmaZParams]:
    """σ_Z parameters whose Bloch components at x = 0 equal (r, s).

    With c = R1 + R4 the entries are fixed by (r, s, c); c is drawn
    uniformly from the interior of its feasible interval.
    """
    if bell_diagonal and (r != 0 or s != 0):
        raise ValueError('Bell-diagonal sweeps require r = s = 0')
    low = abs(r + s) / 2
    high = min(1 - abs(r - s) / 2, (1 + r * s) / 2)
    if high <= low:
        raise ValueError(f'no σ_Z family has Bloch components r={r}, s={s}')
    span = high - low
    params = []
    for c in rng.uniform(low + SWEEP_MARGIN * span, high - SWEEP_MARGIN * span,
                         count):
        params.append(SigmaZParams.from_entries(
            (c + (r + s) / 2) / 2, (1 - c + (r - s) / 2) / 2,
            (1 - c - (r - s) / 2) / 2, (c - (r + s) / 2) / 2))
    return params
