"""Two-qubit state algebra in the |00>, |01>, |10>, |11> basis.

A state is written in the Pauli basis as

    rho = 1/4 [I⊗I + r·σ⊗I + I⊗s·σ + Σ g_mn σ_m⊗σ_n],

where `r`, `s` are the Bloch vectors of the two qubits and `g` is the
correlation tensor.
"""
import itertools
import warnings
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from reegeom.errors import InvalidStateError, DegenerateFrameWarning
from reegeom.logger import logger

PSD_TOL = 1e-10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
UNITARY_TOL = 1e-12
DEGENERATE_FRAME_TOL = 1e-8
DIAGONAL_TOL = 1e-10

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)
PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
LOCAL_A = np.array([np.kron(p, ID2) for p in PAULI])
LOCAL_B = np.array([np.kron(ID2, p) for p in PAULI])
CORRELATORS = np.array([[np.kron(a, b) for b in PAULI] for a in PAULI])
SIGMA_YY = np.kron(PAULI[1], PAULI[1])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f'expected a 4x4 matrix, got shape {m.shape}')
        m.setflags(write=False)
        object.__setattr__(self, 'entries', m)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries.copy() if copy else self.entries
        return self.entries.astype(dtype)

    @classmethod
    def from_ket(cls, ket) -> 'DensityMatrix':
        ket = np.asarray(ket, dtype=complex)
        ket = ket / np.linalg.norm(ket)
        return cls(np.outer(ket, ket.conj()))

    @property
    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.entries + self.entries.conj().T)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.hermitian_part)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def not_positive(self) -> bool:
        return self.min_eigenvalue < -PSD_TOL

    def violations(self) -> dict:
        m = self.entries
        return {
            'hermitian': float(np.max(np.abs(m - m.conj().T))),
            'trace': float(abs(np.trace(m) - 1)),
            'positive': max(0.0, -self.min_eigenvalue),
        }

    def validate(self, psd_tol: float = PSD_TOL) -> 'DensityMatrix':
        """Raise InvalidStateError naming the first violated invariant."""
        bounds = {
            'hermitian': HERMITIAN_TOL,
            'trace': TRACE_TOL,
            'positive': psd_tol,
        }
        for invariant, magnitude in self.violations().items():
            if magnitude > bounds[invariant]:
                raise InvalidStateError(invariant, magnitude)
        return self

    def is_valid(self, psd_tol: float = PSD_TOL) -> bool:
        try:
            self.validate(psd_tol)
        except InvalidStateError:
            return False
        return True


MatrixLike = Union[DensityMatrix, np.ndarray]


def as_matrix(rho: MatrixLike) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.entries
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f'expected a 4x4 matrix, got shape {m.shape}')
    return m


@dataclass(frozen=True, eq=False)
class PauliForm:
    r: np.ndarray
    s: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'r', _real_vector(self.r))
        object.__setattr__(self, 's', _real_vector(self.s))
        g = np.array(self.g, dtype=float).reshape(3, 3)
        g.setflags(write=False)
        object.__setattr__(self, 'g', g)


@dataclass(frozen=True, eq=False)
class DiagonalPauliForm:
    r: np.ndarray
    s: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        for name in ('r', 's', 'q'):
            object.__setattr__(self, name, _real_vector(getattr(self, name)))

    @property
    def g(self) -> np.ndarray:
        return np.diag(self.q)

    def to_pauli_form(self) -> PauliForm:
        return PauliForm(self.r, self.s, self.g)


def _real_vector(v) -> np.ndarray:
    v = np.array(v, dtype=float).reshape(3)
    v.setflags(write=False)
    return v


def to_pauli(rho: MatrixLike) -> PauliForm:
    m = as_matrix(rho)
    # tr(M A) = Σ M[a, b] A[b, a]
    r = np.einsum('ab,iba->i', m, LOCAL_A).real
    s = np.einsum('ab,iba->i', m, LOCAL_B).real
    g = np.einsum('ab,ijba->ij', m, CORRELATORS).real
    return PauliForm(r, s, g)


def from_pauli(p: Union[PauliForm, DiagonalPauliForm]) -> DensityMatrix:
    """Build the matrix of a Pauli form; the result may be non-positive."""
    m = (ID4
         + np.einsum('i,iab->ab', p.r, LOCAL_A)
         + np.einsum('i,iab->ab', p.s, LOCAL_B)
         + np.einsum('ij,ijab->ab', p.g, CORRELATORS)) / 4
    rho = DensityMatrix(0.5 * (m + m.conj().T))
    if rho.not_positive:
        logger.trace(f'Pauli form is not positive, min eigenvalue '
                     f'{rho.min_eigenvalue:.3e}', src='qstate')
    return rho


def partial_transpose(rho: MatrixLike) -> DensityMatrix:
    """Transpose on the second qubit."""
    m = as_matrix(rho)
    return DensityMatrix(m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1)
                         .reshape(4, 4))


def partial_trace(rho: MatrixLike, keep: str = 'A') -> np.ndarray:
    m = as_matrix(rho).reshape(2, 2, 2, 2)
    if keep == 'A':
        return np.einsum('abcb->ac', m)
    if keep == 'B':
        return np.einsum('abad->bd', m)
    raise ValueError(f'unrecognized subsystem "{keep}"')


def min_pt_eigenvalue(rho: MatrixLike) -> float:
    return partial_transpose(rho).min_eigenvalue


def is_ppt(rho: MatrixLike, tol: float = PSD_TOL) -> bool:
    return min_pt_eigenvalue(rho) >= -tol


def concurrence(rho: MatrixLike) -> float:
    m = as_matrix(rho)
    values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    root = (vectors * np.sqrt(np.clip(values, 0, None))) @ vectors.conj().T
    flipped = SIGMA_YY @ m.conj() @ SIGMA_YY
    product = root @ flipped @ root
    lam = np.sqrt(np.clip(
        np.linalg.eigvalsh(0.5 * (product + product.conj().T)), 0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


#############################################################################
# LOCAL UNITARIES
#############################################################################
def su2_from_rotation(rotation: np.ndarray) -> np.ndarray:
    """Lift R in SO(3) to U in SU(2) with U (n·σ) U† = (R n)·σ."""
    x, y, z, w = Rotation.from_matrix(rotation).as_quat()
    return w * ID2 - 1j * (x * PAULI[0] + y * PAULI[1] + z * PAULI[2])


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    U_A: np.ndarray
    U_B: np.ndarray

    def __post_init__(self):
        for name in ('U_A', 'U_B'):
            u = np.array(getattr(self, name), dtype=complex)
            if u.shape != (2, 2):
                raise ValueError(f'{name} must be 2x2, got shape {u.shape}')
            deviation = np.max(np.abs(u @ u.conj().T - ID2))
            if deviation > UNITARY_TOL:
                raise ValueError(f'{name} is not unitary (deviation '
                                 f'{deviation:.3e})')
            u.setflags(write=False)
            object.__setattr__(self, name, u)

    @classmethod
    def identity(cls) -> 'LocalUnitary':
        return cls(ID2, ID2)

    @classmethod
    def from_rotations(cls, rot_a: np.ndarray,
                       rot_b: np.ndarray) -> 'LocalUnitary':
        return cls(su2_from_rotation(rot_a), su2_from_rotation(rot_b))

    @property
    def matrix(self) -> np.ndarray:
        return np.kron(self.U_A, self.U_B)

    def apply(self, rho: MatrixLike) -> DensityMatrix:
        u = self.matrix
        return DensityMatrix(u @ as_matrix(rho) @ u.conj().T)

    def inverse(self) -> 'LocalUnitary':
        return LocalUnitary(self.U_A.conj().T, self.U_B.conj().T)

    def compose(self, other: 'LocalUnitary') -> 'LocalUnitary':
        """The map applying `other` first, then `self`."""
        return LocalUnitary(self.U_A @ other.U_A, self.U_B @ other.U_B)


def canonicalize(rho: MatrixLike) -> Tuple[DiagonalPauliForm, LocalUnitary]:
    """Rotate both qubits so that the correlation tensor becomes diagonal.

    The diagonal is ordered by decreasing magnitude with q1, q2 >= 0; the
    sign of det(g) is an LU invariant and stays on q3.
    """
    p = to_pauli(rho)
    u, sv, vt = np.linalg.svd(p.g)
    frame_a, frame_b = u, vt.T
    q = sv.copy()
    if np.linalg.det(frame_a) < 0:
        frame_a[:, -1] *= -1
        q[-1] *= -1
    if np.linalg.det(frame_b) < 0:
        frame_b[:, -1] *= -1
        q[-1] *= -1

    gaps = np.abs(sv[:, None] - sv[None, :])[np.triu_indices(3, 1)]
    if np.any(gaps < DEGENERATE_FRAME_TOL):
        warnings.warn(f'correlation tensor has degenerate singular values '
                      f'{tuple(sv)}, diagonal frame is not unique',
                      DegenerateFrameWarning, stacklevel=2)

    order = np.argsort(-np.abs(q), kind='stable')
    perm = np.eye(3)[order]
    perm_sign = round(np.linalg.det(perm))
    q = q[order]
    flip_b = np.where(q[:2] < 0, -1.0, 1.0)
    signs_a = np.array([1.0, 1.0, perm_sign])
    signs_b = np.array([flip_b[0], flip_b[1], perm_sign * flip_b[0] * flip_b[1]])

    rot_a = np.diag(signs_a) @ perm @ frame_a.T
    rot_b = np.diag(signs_b) @ perm @ frame_b.T
    lu = LocalUnitary.from_rotations(rot_a, rot_b)

    rotated = to_pauli(lu.apply(rho))
    off_diagonal = np.max(np.abs(rotated.g - np.diag(np.diag(rotated.g))))
    if off_diagonal > DIAGONAL_TOL:
        logger.warning(f'canonical frame leaves off-diagonal correlations '
                       f'{off_diagonal:.3e}', src='canonicalize')
    return DiagonalPauliForm(rotated.r, rotated.s, np.diag(rotated.g)), lu


def signed_permutation_frames() -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """Pairs of signed permutations in SO(3) sharing the same permutation.

    These are the LU moves that keep a diagonal correlation tensor diagonal.
    The identity pair comes first.
    """
    frames = []
    for order in itertools.permutations(range(3)):
        base = np.eye(3)[list(order)]
        for signs_a in itertools.product((1, -1), repeat=3):
            rot_a = np.diag(signs_a) @ base
            if np.linalg.det(rot_a) < 0:
                continue
            for signs_b in itertools.product((1, -1), repeat=3):
                rot_b = np.diag(signs_b) @ base
                if np.linalg.det(rot_b) < 0:
                    continue
                frames.append((rot_a, rot_b))
    return tuple(frames)
