from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from reegeom.logger import logger
from reegeom.states.families import Weights
from reegeom.states.qstate import LocalUnitary, MatrixLike, canonicalize, \
    signed_permutation_frames

CLASSIFY_TOL = 1e-8

FRAMES = signed_permutation_frames()


class FamilyKind(Enum):
    BELL_DIAGONAL = 'BellDiagonal'
    GENERALIZED_VP = 'GeneralizedVP'
    GENERALIZED_HORODECKI = 'GeneralizedHorodecki'
    OTHER = 'Other'

    @staticmethod
    def deserialize(s: str) -> 'FamilyKind':
        try:
            return FamilyKind(s)
        except ValueError:
            raise ValueError(f'unrecognized family "{s}"') from None

    @property
    def solvable(self) -> bool:
        return self is not FamilyKind.OTHER


@dataclass(frozen=True, eq=False)
class FamilyTag:
    """Family of a state and the local unitary taking it to the family frame.

    In that frame the state has the Pauli form of the family template with
    correlation vector `correlation`.
    """
    kind: FamilyKind
    frame: LocalUnitary = field(default_factory=LocalUnitary.identity)
    correlation: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    weights: Optional[Weights] = None

    @property
    def name(self) -> str:
        return self.kind.value


def _weights(l1: float, d: float, tol: float) -> Optional[Weights]:
    lam = np.array([l1, (1 - l1 + d) / 2, (1 - l1 - d) / 2])
    if l1 <= tol or np.any(lam < -tol):
        return None
    lam = np.clip(lam, 0, None)
    return tuple(float(v) for v in lam / lam.sum())


def _match_vp(r, s, q, tol) -> Optional[Weights]:
    if max(abs(r[0]), abs(r[1]), abs(s[0]), abs(s[1])) > tol \
            or abs(r[2] - s[2]) > tol \
            or abs(q[0] + q[1]) > tol or abs(q[2] - 1) > tol:
        return None
    return _weights(q[0], (r[2] + s[2]) / 2, tol)


def _match_horodecki(r, s, q, tol) -> Optional[Weights]:
    if max(abs(r[0]), abs(r[1]), abs(s[0]), abs(s[1])) > tol \
            or abs(r[2] + s[2]) > tol \
            or abs(q[0] + q[1]) > tol or abs(q[2] - (2 * q[0] - 1)) > tol:
        return None
    return _weights(q[0], (r[2] - s[2]) / 2, tol)


def classify(rho: MatrixLike, tol: float = CLASSIFY_TOL) -> FamilyTag:
    """Match the canonical form of rho against the solvable templates.

    Templates, in some signed-permutation frame of the canonical form:
    Bell-diagonal r = s = 0; VP r = s = (0, 0, λ2 - λ3) with
    t = (λ1, -λ1, 1); Horodecki r = -s = (0, 0, λ2 - λ3) with
    t = (λ1, -λ1, 2λ1 - 1).
    """
    form, lu = canonicalize(rho)
    if np.linalg.norm(form.r) <= tol and np.linalg.norm(form.s) <= tol:
        tag = FamilyTag(FamilyKind.BELL_DIAGONAL, lu, tuple(form.q))
        logger.debug(f'classified as {tag.name}, t={tag.correlation}',
                     src='classify')
        return tag

    for rot_a, rot_b in FRAMES:
        r, s = rot_a @ form.r, rot_b @ form.s
        q = np.diag(rot_a @ np.diag(form.q) @ rot_b.T)
        for kind, match in ((FamilyKind.GENERALIZED_VP, _match_vp),
                            (FamilyKind.GENERALIZED_HORODECKI,
                             _match_horodecki)):
            weights = match(r, s, q, tol)
            if weights is not None:
                frame = LocalUnitary.from_rotations(rot_a, rot_b).compose(lu)
                tag = FamilyTag(kind, frame, tuple(q), weights)
                logger.debug(f'classified as {tag.name}, weights={weights}',
                             src='classify')
                return tag

    logger.debug('classified as Other', src='classify')
    return FamilyTag(FamilyKind.OTHER, lu, tuple(form.q))
