"""Closed-form spectra of states whose Bloch vectors are both along z.

Such a state has r = (0, 0, r), s = (0, 0, s), g = diag(q1, q2, q3) and an
X-shaped matrix made of two 2x2 blocks: span{|01>, |10>} carries the
eigenvalues mu± = [(1 - q3) ± M1]/4 and span{|00>, |11>} carries
nu± = [(1 + q3) ± M2]/4 with

    M1 = √((r - s)² + (q1 + q2)²),  M2 = √((r + s)² + (q1 - q2)²).

Partial transposition of such a state is the substitution q2 -> -q2, so the
same formulas give the spectrum of rho^Γ.
"""
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from reegeom.states.qstate import DensityMatrix, DiagonalPauliForm, \
    PSD_TOL, partial_transpose

SPECTRUM_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class ZParallelState:
    r: float
    s: float
    q1: float
    q2: float
    q3: float

    def to_matrix(self) -> np.ndarray:
        r, s, q1, q2, q3 = self.r, self.s, self.q1, self.q2, self.q3
        m = np.diag([1 + r + s + q3, 1 + r - s - q3,
                     1 - r + s - q3, 1 - r - s + q3]).astype(complex)
        m[0, 3] = m[3, 0] = q1 - q2
        m[1, 2] = m[2, 1] = q1 + q2
        return m / 4

    def to_density_matrix(self) -> DensityMatrix:
        return DensityMatrix(self.to_matrix())

    def pauli_form(self) -> DiagonalPauliForm:
        return DiagonalPauliForm((0, 0, self.r), (0, 0, self.s),
                                 (self.q1, self.q2, self.q3))

    def transposed(self) -> 'ZParallelState':
        return ZParallelState(self.r, self.s, self.q1, -self.q2, self.q3)


class EigenPair(NamedTuple):
    label: str
    value: float
    vector: np.ndarray


@dataclass(frozen=True)
class EigenSystem:
    mu_plus: EigenPair
    mu_minus: EigenPair
    nu_plus: EigenPair
    nu_minus: EigenPair

    @property
    def pairs(self) -> Tuple[EigenPair, ...]:
        return self.mu_plus, self.mu_minus, self.nu_plus, self.nu_minus

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs])

    @property
    def vectors(self) -> np.ndarray:
        """Eigenvectors as columns, in the order of `pairs`."""
        return np.stack([p.vector for p in self.pairs], axis=1)

    @property
    def min_value(self) -> float:
        return float(min(self.mu_minus.value, self.nu_minus.value))


class PtEigenSystem(EigenSystem):
    pass


def _block_vectors(a: float, b: float, first: int,
                   second: int) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvectors of [[c + a, b], [b, c - a]] embedded at (first, second).

    Both rows of the block give an eigenvector; the one free of
    cancellation is taken. At a = b = 0 the block is scalar and the basis
    vectors are returned.
    """
    m = np.hypot(a, b)
    upper, lower = np.zeros(4, dtype=complex), np.zeros(4, dtype=complex)
    if m == 0:
        upper[first], lower[second] = 1, 1
        return upper, lower
    if a >= 0:
        upper[[first, second]] = (a + m, b)
        lower[[first, second]] = (b, -(a + m))
    else:
        upper[[first, second]] = (b, m - a)
        lower[[first, second]] = (m - a, -b)
    return upper / np.linalg.norm(upper), lower / np.linalg.norm(lower)


def _eigensystem(z: ZParallelState, suffix: str = ''):
    m1 = np.hypot(z.r - z.s, z.q1 + z.q2)
    m2 = np.hypot(z.r + z.s, z.q1 - z.q2)
    mu_up, mu_down = _block_vectors(z.r - z.s, z.q1 + z.q2, 1, 2)
    nu_up, nu_down = _block_vectors(z.r + z.s, z.q1 - z.q2, 0, 3)
    return (
        EigenPair(f'mu+{suffix}', (1 - z.q3 + m1) / 4, mu_up),
        EigenPair(f'mu-{suffix}', (1 - z.q3 - m1) / 4, mu_down),
        EigenPair(f'nu+{suffix}', (1 + z.q3 + m2) / 4, nu_up),
        EigenPair(f'nu-{suffix}', (1 + z.q3 - m2) / 4, nu_down),
    )


def _check_against_dense(system: EigenSystem, matrix: np.ndarray):
    dense = np.linalg.eigvalsh(matrix)
    closed = np.sort(system.values)
    assert np.max(np.abs(dense - closed)) <= SPECTRUM_CHECK_TOL, \
        f'closed-form spectrum {closed} differs from dense {dense}'
    for pair in system.pairs:
        residual = matrix @ pair.vector - pair.value * pair.vector
        assert np.max(np.abs(residual)) <= SPECTRUM_CHECK_TOL, \
            f'{pair.label} is not an eigenvector (residual {residual})'


def eigensystem(z: ZParallelState, check: bool = False) -> EigenSystem:
    system = EigenSystem(*_eigensystem(z))
    if check:
        _check_against_dense(system, z.to_matrix())
    return system


def pt_eigensystem(z: ZParallelState, check: bool = False) -> PtEigenSystem:
    system = PtEigenSystem(*_eigensystem(z.transposed(), suffix='^G'))
    if check:
        _check_against_dense(system, partial_transpose(z.to_matrix()).entries)
    return system


#############################################################################
# VECTORIZED FORMS
#############################################################################
def min_eigenvalues(r, s, q1, q2, q3) -> Tuple[np.ndarray, np.ndarray]:
    """(mu-, nu-) broadcast over array arguments."""
    mu = (1 - q3 - np.hypot(r - s, q1 + q2)) / 4
    nu = (1 + q3 - np.hypot(r + s, q1 - q2)) / 4
    return mu, nu


def pt_min_eigenvalues(r, s, q1, q2, q3) -> Tuple[np.ndarray, np.ndarray]:
    """(mu-^Γ, nu-^Γ) broadcast over array arguments."""
    return min_eigenvalues(r, s, q1, np.negative(q2), q3)


class SheetRoots(NamedTuple):
    upper: np.ndarray
    upper_ok: np.ndarray
    lower: np.ndarray
    lower_ok: np.ndarray


def t_sheets(r, s, q1, q2, tol: float = PSD_TOL) -> SheetRoots:
    """Sheets mu- = 0 (upper) and nu- = 0 (lower) of the boundary of T_{r,s}.

    A root is kept where the other eigenvalue is non-negative, so that the
    root is where min(mu-, nu-) vanishes.
    """
    q1, q2 = np.asarray(q1, dtype=float), np.asarray(q2, dtype=float)
    upper = 1 - np.hypot(r - s, q1 + q2)
    lower = np.hypot(r + s, q1 - q2) - 1
    upper_ok = min_eigenvalues(r, s, q1, q2, upper)[1] >= -tol
    lower_ok = min_eigenvalues(r, s, q1, q2, lower)[0] >= -tol
    return SheetRoots(upper, upper_ok, lower, lower_ok)


def l_sheets(r, s, q1, q2, tol: float = PSD_TOL) -> SheetRoots:
    """Sheets mu-^Γ = 0 (upper) and nu-^Γ = 0 (lower) of the boundary of L_{r,s}.

    Besides the minimum condition on the partial transpose, a root is kept
    only if the state itself is positive there.
    """
    q1, q2 = np.asarray(q1, dtype=float), np.asarray(q2, dtype=float)
    upper = 1 - np.hypot(r - s, q1 - q2)
    lower = np.hypot(r + s, q1 + q2) - 1

    def physical(q3):
        mu, nu = min_eigenvalues(r, s, q1, q2, q3)
        return (mu >= -tol) & (nu >= -tol)

    upper_ok = (pt_min_eigenvalues(r, s, q1, q2, upper)[1] >= -tol) \
        & physical(upper)
    lower_ok = (pt_min_eigenvalues(r, s, q1, q2, lower)[0] >= -tol) \
        & physical(lower)
    return SheetRoots(upper, upper_ok, lower, lower_ok)


class BoundaryRoot(NamedTuple):
    q3: float
    sheet: str


def _roots(sheets: SheetRoots) -> Tuple[BoundaryRoot, ...]:
    roots = []
    if sheets.upper_ok:
        roots.append(BoundaryRoot(float(sheets.upper), 'mu'))
    if sheets.lower_ok:
        roots.append(BoundaryRoot(float(sheets.lower), 'nu'))
    return tuple(roots)


def boundary_T(r: float, s: float, q1: float, q2: float,
               tol: float = PSD_TOL) -> Tuple[BoundaryRoot, ...]:
    _check_bloch(r, s)
    return _roots(t_sheets(r, s, q1, q2, tol))


def boundary_L(r: float, s: float, q1: float, q2: float,
               tol: float = PSD_TOL) -> Tuple[BoundaryRoot, ...]:
    _check_bloch(r, s)
    return _roots(l_sheets(r, s, q1, q2, tol))


def _check_bloch(r: float, s: float):
    if abs(r) > 1 or abs(s) > 1:
        raise ValueError(f'Bloch components r={r}, s={s} must lie in [-1, 1]')
