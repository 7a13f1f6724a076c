"""Closest separable states of the solvable families.

Bell-diagonal states: the closest separable state is where the ray from the
nearest vertex of T through t leaves the octahedron L. Generalized
Vedral-Plenio and Horodecki states: closed forms from the nearest crossing
of that ray with the deformed octahedron L_{r,s}. Each result is checked by
walking back along the reverse-map family of its closest separable state.
"""
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

import numpy as np

from reegeom.css.classify import CLASSIFY_TOL, FamilyKind, FamilyTag, \
    classify
from reegeom.errors import AlreadySeparableError, NotSolvableFamilyError, \
    NotEdgeStateError, RankDeficientError
from reegeom.geometry.bodies import nearest_vertex, in_octahedron, \
    face_crossing
from reegeom.logger import logger
from reegeom.ree.entropy import relative_entropy
from reegeom.ree.oracle import OracleConfig, ree_numeric
from reegeom.revmap.gmatrix import g_matrix, regularized_family, \
    VP_REGULARIZATION, HORODECKI_REGULARIZATION
from reegeom.states.families import bell_diagonal_state, vp_state, \
    horodecki_state, check_weights
from reegeom.states.qstate import DensityMatrix, DiagonalPauliForm, \
    MatrixLike, as_matrix, canonicalize, from_pauli, is_ppt, \
    min_pt_eigenvalue, to_pauli, PSD_TOL

SEPARABLE_TOL = 1e-12
VERTEX_TOL = 1e-9
LIMIT_TOL = 1e-8


@dataclass(frozen=True)
class Residuals:
    bloch_gap: float
    edge_gap: float
    recovery_gap: float


@dataclass(frozen=True, eq=False)
class CssResult:
    css: DensityMatrix
    tau: Tuple[float, float, float]
    family: FamilyTag
    ree: float
    residuals: Residuals
    geometric: bool = True
    separable: bool = False
    x_family: Optional[float] = None


def bloch_gap(rho: MatrixLike, css: MatrixLike) -> float:
    a, b = to_pauli(rho), to_pauli(css)
    return float(max(np.linalg.norm(a.r - b.r), np.linalg.norm(a.s - b.s)))


def edge_gap(css: MatrixLike) -> float:
    return abs(min_pt_eigenvalue(css))


def _residuals(rho: MatrixLike, css: MatrixLike,
               recovery_gap: float) -> Residuals:
    return Residuals(bloch_gap(rho, css), edge_gap(css), recovery_gap)


def _separable_result(rho: MatrixLike, family: FamilyTag,
                      tau) -> CssResult:
    rho = DensityMatrix(as_matrix(rho))
    return CssResult(rho, tuple(float(v) for v in tau), family, 0.0,
                     Residuals(0.0, edge_gap(rho), 0.0), separable=True)


def _projection_recovery(rho: MatrixLike, css: MatrixLike
                         ) -> Tuple[float, Optional[float]]:
    """Distance from rho to the family line of a full-rank css.

    Returns (gap, x) for the least-squares x in css - x G = rho; the gap is
    nan when css has no well-defined generator.
    """
    try:
        g = g_matrix(css).matrix
    except (NotEdgeStateError, RankDeficientError) as exc:
        logger.debug(f'no recovery check: {exc}', src='css')
        return float('nan'), None
    delta = as_matrix(css) - as_matrix(rho)
    x = float(np.vdot(g, delta).real / np.vdot(g, g).real)
    gap = float(np.max(np.abs(as_matrix(css) - x * g - as_matrix(rho))))
    return gap, x


def _recovery_gap(rho: DensityMatrix, recovered: DensityMatrix) -> float:
    return float(np.max(np.abs(recovered.entries - rho.entries)))


#############################################################################
# FAMILY CONSTRUCTIONS
#############################################################################
def css_bell_diagonal(t) -> CssResult:
    t = np.asarray(t, dtype=float)
    rho = bell_diagonal_state(t)
    family = FamilyTag(FamilyKind.BELL_DIAGONAL, correlation=tuple(t))
    vertex = nearest_vertex(t)
    if in_octahedron(t, SEPARABLE_TOL):
        raise AlreadySeparableError(_separable_result(rho, family, t))

    if np.linalg.norm(t - vertex.array) <= VERTEX_TOL:
        # every point of the facing face is closest; take its centroid
        tau = vertex.array / 3
    else:
        tau = face_crossing(t, vertex)
    css = bell_diagonal_state(tau)
    recovery, x = _projection_recovery(rho, css)
    return CssResult(css, tuple(tau), family, relative_entropy(rho, css),
                     _residuals(rho, css, recovery), x_family=x)


def vp_family_parameter(lam) -> float:
    """λ1 L / |λ2 - λ3| with L = ln((1 + |d|)/(1 - |d|)), d = λ2 - λ3."""
    l1, l2, l3 = check_weights(lam)
    d = abs(l2 - l3)
    if d < LIMIT_TOL:
        return 2 * l1 * (1 + d ** 2 / 3)
    return l1 * 2 * math.atanh(d) / d


def horodecki_family_parameter(lam) -> float:
    l1, l2, l3 = check_weights(lam)
    a, b = l1 + 2 * l2, l1 + 2 * l3
    y = a * b / 4
    eta = y ** 2 / ((a ** 2 + b ** 2) / 4)
    return (l1 / 2 - y) / eta


def css_vp(lam) -> CssResult:
    l1, l2, l3 = check_weights(lam)
    if l1 <= 0:
        raise ValueError(f'VP state needs a positive Bell weight, got {lam}')
    rho = vp_state(lam)
    css = DensityMatrix(np.diag([l1 / 2 + l2, 0, 0, l1 / 2 + l3]))
    x = vp_family_parameter(lam)
    recovered = regularized_family(css, x, VP_REGULARIZATION)
    family = FamilyTag(FamilyKind.GENERALIZED_VP, correlation=(l1, -l1, 1.0),
                       weights=(l1, l2, l3))
    return CssResult(css, (0.0, 0.0, 1.0), family, relative_entropy(rho, css),
                     _residuals(rho, css, _recovery_gap(rho, recovered)),
                     x_family=x)


def horodecki_crossing(lam) -> float:
    """q1 of the nearest crossing, (λ1 + 2λ2)(λ1 + 2λ3)/2."""
    l1, l2, l3 = check_weights(lam)
    return (l1 + 2 * l2) * (l1 + 2 * l3) / 2


def css_horodecki(lam) -> CssResult:
    l1, l2, l3 = check_weights(lam)
    rho = horodecki_state(lam)
    family = FamilyTag(FamilyKind.GENERALIZED_HORODECKI,
                       correlation=(l1, -l1, 2 * l1 - 1),
                       weights=(l1, l2, l3))
    if l1 ** 2 <= 4 * l2 * l3:
        raise AlreadySeparableError(
            _separable_result(rho, family, family.correlation))

    q1, d = horodecki_crossing(lam), l2 - l3
    tau = (q1, -q1, 2 * q1 - 1)
    css = from_pauli(DiagonalPauliForm((0, 0, d), (0, 0, -d), tau))
    x = horodecki_family_parameter(lam)
    recovered = regularized_family(css, x, HORODECKI_REGULARIZATION)
    return CssResult(css, tau, family, relative_entropy(rho, css),
                     _residuals(rho, css, _recovery_gap(rho, recovered)),
                     x_family=x)


def _solve_family(family: FamilyTag) -> CssResult:
    if family.kind is FamilyKind.BELL_DIAGONAL:
        return css_bell_diagonal(family.correlation)
    if family.kind is FamilyKind.GENERALIZED_VP:
        return css_vp(family.weights)
    if family.kind is FamilyKind.GENERALIZED_HORODECKI:
        return css_horodecki(family.weights)
    raise NotSolvableFamilyError(f'no geometric construction for family '
                                 f'"{family.name}"')


def css_auto(rho: MatrixLike,
             oracle: Union[OracleConfig, dict] = None,
             numeric_fallback: bool = True,
             psd_tol: float = PSD_TOL,
             classify_tol: float = CLASSIFY_TOL) -> CssResult:
    """Closest separable state of any valid state.

    Separable input is returned as is. Solvable families are solved in their
    canonical frame and mapped back; other states go to the numerical oracle
    unless `numeric_fallback` is off, in which case NotSolvableFamilyError
    is raised.
    """
    rho = DensityMatrix(as_matrix(rho)).validate(psd_tol)
    family = classify(rho, classify_tol)
    if is_ppt(rho, psd_tol):
        return _separable_result(rho, family, family.correlation)

    if not family.kind.solvable:
        if not numeric_fallback:
            raise NotSolvableFamilyError('state belongs to no solvable family')
        report = ree_numeric(rho, oracle)
        css = report.css_numeric
        tau, _ = canonicalize(css)
        return CssResult(css, tuple(tau.q), family, report.value,
                         _residuals(rho, css, float('nan')), geometric=False)

    try:
        local = _solve_family(family)
    except AlreadySeparableError as exc:
        local = exc.result
    css = family.frame.inverse().apply(local.css)
    return replace(local, css=css, family=family,
                   ree=relative_entropy(rho, css),
                   residuals=replace(local.residuals,
                                     bloch_gap=bloch_gap(rho, css),
                                     edge_gap=edge_gap(css)))
