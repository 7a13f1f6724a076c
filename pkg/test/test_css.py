import math

import numpy as np
import pytest
from pytest import approx

from reegeom.css.classify import FamilyKind, classify
from reegeom.css.css import css_bell_diagonal, css_vp, css_horodecki, \
    css_auto, vp_family_parameter, horodecki_family_parameter
from reegeom.errors import AlreadySeparableError, NotSolvableFamilyError, \
    OutsideTetrahedronError
from reegeom.ree.entropy import relative_entropy, \
    directional_optimality_check
from reegeom.revmap.zfamily import SigmaZParams
from reegeom.states.families import bell_state, bell_diagonal_state, \
    vp_state, horodecki_state, werner_state
from reegeom.states.qstate import DensityMatrix, to_pauli, \
    min_pt_eigenvalue, is_ppt
from reegeom.states.sampling import random_local_unitary, random_vp_weights, \
    random_horodecki_weights, random_entangled_bell_correlation, \
    random_density_matrix, random_separable_state

LN2 = math.log(2)


def _binary_entropy_gap(f):
    return LN2 + f * math.log(f) + (1 - f) * math.log(1 - f)


#############################################################################
# CLASSIFICATION
#############################################################################
def test_classify_vp_state():
    tag = classify(vp_state((0.5, 0.3, 0.2)))
    assert tag.kind is FamilyKind.GENERALIZED_VP
    assert tag.weights == approx((0.5, 0.3, 0.2))
    assert tag.name == 'GeneralizedVP'


def test_classify_horodecki_state():
    tag = classify(horodecki_state((0.6, 0.3, 0.1)))
    assert tag.kind is FamilyKind.GENERALIZED_HORODECKI
    assert tag.weights == approx((0.6, 0.3, 0.1))


def test_classify_bell_diagonal_mixture():
    rho = 0.8 * bell_state(1).entries + 0.2 * bell_state(2).entries
    assert classify(rho).kind is FamilyKind.BELL_DIAGONAL


def test_classify_generic_sigma_z_as_other():
    p = SigmaZParams.from_entries(0.1, 0.5, 0.3, 0.1)
    assert classify(p.matrix()).kind is FamilyKind.OTHER


def test_classify_after_local_unitary():
    rng = np.random.default_rng(0)
    lam = (0.45, 0.15, 0.4)
    rho = random_local_unitary(rng).apply(vp_state(lam))
    tag = classify(rho)
    assert tag.kind is FamilyKind.GENERALIZED_VP
    assert tag.weights == approx(lam, abs=1e-8)
    assert np.allclose(tag.frame.apply(rho).entries, vp_state(lam).entries,
                       atol=1e-8)


def test_family_kind_deserialize():
    assert FamilyKind.deserialize('GeneralizedHorodecki') is \
        FamilyKind.GENERALIZED_HORODECKI
    assert not FamilyKind.OTHER.solvable
    with pytest.raises(ValueError):
        FamilyKind.deserialize('Werner')


#############################################################################
# BELL-DIAGONAL STATES
#############################################################################
def test_werner_state_css():
    res = css_bell_diagonal((0.8, -0.8, 0.8))
    assert res.tau == approx((1 / 3, -1 / 3, 1 / 3))
    assert res.ree == approx(_binary_entropy_gap(0.85), abs=1e-12)
    assert np.allclose(res.css.entries, werner_state(0.5).entries)
    assert res.residuals.recovery_gap == approx(0, abs=1e-9)
    assert res.x_family > 0


def test_bell_states_have_ln2():
    for i in range(1, 5):
        res = css_auto(bell_state(i), numeric_fallback=False)
        assert res.ree == approx(LN2, abs=1e-12)
        assert res.residuals.edge_gap <= 1e-8


def test_face_facing_the_bell_state_is_level_set():
    beta = bell_state(1)
    o1, o2, o3 = np.eye(3)
    for a in np.linspace(0, 1, 10):
        for b in np.linspace(0, 1 - a, 5):
            tau = a * o1 - b * o2 + (1 - a - b) * o3
            sigma = bell_diagonal_state(tau)
            assert relative_entropy(beta, sigma) == approx(LN2, abs=1e-12)


def test_other_faces_are_farther():
    beta = bell_state(1)
    # face x + y - z = 1 with first coordinate x
    for x in np.linspace(0.1, 0.9, 9):
        for y in np.linspace(0.05, 0.95 - x, 4):
            tau = (x, y, x + y - 1)
            s = relative_entropy(beta, bell_diagonal_state(tau))
            assert s == approx(LN2 - math.log(x), abs=1e-12)
            assert s > LN2


def test_separable_bell_diagonal_raises():
    with pytest.raises(AlreadySeparableError) as exc:
        css_bell_diagonal((0.2, 0.2, 0.2))
    assert exc.value.result.separable
    assert exc.value.result.tau == approx((0.2, 0.2, 0.2))
    assert exc.value.result.ree == 0


def test_outside_tetrahedron_raises():
    with pytest.raises(OutsideTetrahedronError):
        css_bell_diagonal((1, 1, 1))


def test_random_bell_diagonal_residuals():
    rng = np.random.default_rng(1)
    for _ in range(20):
        t = random_entangled_bell_correlation(rng)
        res = css_bell_diagonal(t)
        assert res.residuals.bloch_gap <= 1e-10
        assert res.residuals.edge_gap <= 1e-8
        assert abs(min_pt_eigenvalue(res.css)) <= 1e-8
        assert np.sum(np.abs(res.tau)) == approx(1)


#############################################################################
# GENERALIZED VEDRAL-PLENIO STATES
#############################################################################
def test_vp_css():
    lam = (0.5, 0.3, 0.2)
    res = css_vp(lam)
    assert np.allclose(res.css.entries, np.diag([0.55, 0, 0, 0.45]))
    assert res.tau == approx((0, 0, 1))
    assert res.ree == approx(relative_entropy(vp_state(lam), res.css))
    assert res.residuals.bloch_gap <= 1e-10
    assert res.residuals.edge_gap <= 1e-8
    assert res.residuals.recovery_gap <= 1e-9
    assert res.family.kind is FamilyKind.GENERALIZED_VP


def test_vp_family_parameter():
    lam = (0.5, 0.3, 0.2)
    assert vp_family_parameter(lam) == approx(
        0.5 * math.log(1.1 / 0.9) / 0.1)
    assert vp_family_parameter((0.4, 0.3, 0.3)) == approx(0.8)
    assert vp_family_parameter((0.4, 0.3 + 1e-9, 0.3 - 1e-9)) == \
        approx(0.8, rel=1e-12)


def test_vp_needs_bell_weight():
    with pytest.raises(ValueError):
        css_vp((0, 0.5, 0.5))


def test_random_vp_residuals():
    rng = np.random.default_rng(2)
    for _ in range(20):
        lam = random_vp_weights(rng)
        res = css_vp(lam)
        assert res.residuals.bloch_gap <= 1e-10
        assert res.residuals.edge_gap <= 1e-8
        assert res.residuals.recovery_gap <= 1e-9


#############################################################################
# GENERALIZED HORODECKI STATES
#############################################################################
def test_horodecki_css():
    lam = (0.6, 0.3, 0.1)
    res = css_horodecki(lam)
    assert res.tau == approx((0.48, -0.48, -0.04))
    pauli = to_pauli(res.css)
    assert pauli.r == approx([0, 0, 0.2])
    assert pauli.s == approx([0, 0, -0.2])
    assert res.residuals.edge_gap <= 1e-8
    assert res.residuals.recovery_gap <= 1e-9


def test_horodecki_family_parameter_recovers_the_state():
    lam = (0.6, 0.3, 0.1)
    x = horodecki_family_parameter(lam)
    # Y = 0.24, R1 + R4 = 0.52, η = Y² / (R1 + R4)
    assert x == approx((0.3 - 0.24) / (0.24 ** 2 / 0.52))


def test_separable_horodecki_raises():
    with pytest.raises(AlreadySeparableError) as exc:
        css_horodecki((0.2, 0.4, 0.4))
    assert exc.value.result.ree == 0


def test_random_horodecki_residuals():
    rng = np.random.default_rng(3)
    for _ in range(20):
        lam = random_horodecki_weights(rng)
        res = css_horodecki(lam)
        assert res.residuals.bloch_gap <= 1e-10
        assert res.residuals.edge_gap <= 1e-8
        assert res.residuals.recovery_gap <= 1e-9


#############################################################################
# DISPATCH
#############################################################################
def test_css_auto_separable_input():
    res = css_auto(horodecki_state((0.2, 0.4, 0.4)))
    assert res.separable
    assert res.ree == 0
    assert np.allclose(res.css.entries, horodecki_state((0.2, 0.4, 0.4)).entries)


def test_css_auto_in_rotated_frames():
    rng = np.random.default_rng(4)
    for make, solve, lam in [
            (vp_state, css_vp, (0.5, 0.3, 0.2)),
            (horodecki_state, css_horodecki, (0.6, 0.3, 0.1))]:
        lu = random_local_unitary(rng)
        rho = lu.apply(make(lam))
        res = css_auto(rho, numeric_fallback=False)
        assert res.geometric and not res.separable
        assert res.ree == approx(solve(lam).ree, abs=1e-7)
        assert res.residuals.bloch_gap <= 1e-8
        assert res.residuals.edge_gap <= 1e-8
        assert is_ppt(res.css, 1e-8)


def test_css_auto_rejects_other_without_fallback():
    rng = np.random.default_rng(5)
    rho = random_density_matrix(rng)
    while is_ppt(rho):
        rho = random_density_matrix(rng)
    with pytest.raises(NotSolvableFamilyError):
        css_auto(rho, numeric_fallback=False)


def test_css_auto_validates_input():
    with pytest.raises(ValueError):
        css_auto(DensityMatrix(np.eye(4) / 2))


def test_directional_check_accepts_family_css():
    rng = np.random.default_rng(6)
    for _ in range(5):
        lam = random_vp_weights(rng)
        assert directional_optimality_check(
            vp_state(lam), css_vp(lam).css) >= -1e-8
        lam = random_horodecki_weights(rng)
        assert directional_optimality_check(
            horodecki_state(lam), css_horodecki(lam).css) >= -1e-8
        t = random_entangled_bell_correlation(rng)
        assert directional_optimality_check(
            bell_diagonal_state(t), css_bell_diagonal(t).css) >= -1e-8


@pytest.mark.parametrize('rho, css', [
    (werner_state(0.85), css_bell_diagonal((0.8, -0.8, 0.8)).css),
    (bell_diagonal_state((0.5, -0.7, 0.6)),
     css_bell_diagonal((0.5, -0.7, 0.6)).css),
    (vp_state((0.5, 0.3, 0.2)), css_vp((0.5, 0.3, 0.2)).css),
    (horodecki_state((0.6, 0.3, 0.1)), css_horodecki((0.6, 0.3, 0.1)).css),
])
def test_css_beats_random_separable_states(rho, css):
    rng = np.random.default_rng(8)
    best = relative_entropy(rho, css)
    for _ in range(200):
        other = random_separable_state(rng)
        assert best <= relative_entropy(rho, other) + 1e-12
