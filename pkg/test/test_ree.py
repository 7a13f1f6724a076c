import math
import warnings

import numpy as np
import pytest
from pytest import approx

from reegeom.css.css import css_auto, css_bell_diagonal, css_horodecki, \
    css_vp
from reegeom.errors import NotConvergedError, NotSolvableFamilyError
from reegeom.ree.entropy import relative_entropy, von_neumann_entropy, \
    logarithmic_mean, log_derivative, directional_derivative, \
    directional_optimality_check
from reegeom.ree.geometric import ree_geometric, ree_compare
from reegeom.ree.oracle import OracleConfig, ProductEnsemble, \
    create_oracle_config, ree_numeric
from reegeom.states.families import bell_state, werner_state, \
    horodecki_state, vp_state, bell_diagonal_state
from reegeom.states.qstate import is_ppt
from reegeom.states.sampling import random_density_matrix, \
    random_product_state, random_separable_state, \
    random_entangled_bell_correlation, random_vp_weights, \
    random_horodecki_weights

LN2 = math.log(2)


#############################################################################
# ENTROPIES
#############################################################################
def test_relative_entropy_of_state_with_itself():
    rng = np.random.default_rng(0)
    for _ in range(10):
        rho = random_density_matrix(rng)
        assert relative_entropy(rho, rho) == approx(0, abs=1e-10)


def test_relative_entropy_is_infinite_off_support():
    assert relative_entropy(bell_state(1), np.diag([1, 0, 0, 0])) == math.inf
    assert relative_entropy(np.diag([1, 0, 0, 0]), np.eye(4) / 4) == \
        approx(math.log(4))


def test_relative_entropy_is_non_negative():
    rng = np.random.default_rng(1)
    for _ in range(20):
        rho, sigma = random_density_matrix(rng), random_density_matrix(rng)
        assert relative_entropy(rho, sigma) >= -1e-12


def test_von_neumann_entropy():
    assert von_neumann_entropy(bell_state(2)) == approx(0, abs=1e-12)
    assert von_neumann_entropy(np.eye(4) / 4) == approx(math.log(4))
    assert von_neumann_entropy(np.diag([0.5, 0.5, 0, 0])) == approx(LN2)


def test_logarithmic_mean():
    assert logarithmic_mean(2.0, 2.0) == approx(2.0)
    assert logarithmic_mean(math.e, 1.0) == approx(math.e - 1)
    assert logarithmic_mean(0.3, 0.3 + 1e-12) == approx(0.3, rel=1e-10)
    assert logarithmic_mean(1.0, 0.0) == 0
    values = logarithmic_mean(np.array([[1.0], [2.0]]),
                              np.array([[3.0, 4.0]]))
    assert values.shape == (2, 2)
    assert values[0, 0] == approx(2 / math.log(3))


def test_logarithmic_mean_of_widely_separated_values():
    for tiny in (1e-20, 1e-300):
        expected = (0.6 - tiny) / math.log(0.6 / tiny)
        assert logarithmic_mean(0.6, tiny) == approx(expected, rel=1e-12)
        assert logarithmic_mean(tiny, 0.6) == approx(expected, rel=1e-12)
    assert logarithmic_mean(0.6, 1e-20) == approx(0.013175, rel=1e-4)
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        inverse = 1 / logarithmic_mean(np.array([0.6, 0.3]),
                                       np.array([1e-300, 1e-30]))
    assert np.all(np.isfinite(inverse))
    assert logarithmic_mean(0.5, 0.0) == 0


def test_logarithmic_mean_is_continuous_near_the_diagonal():
    a = 0.25
    for delta in (1e-4, 1e-7, 1e-10, 1e-13):
        exact = a * (1 + delta / (2 * a) - delta ** 2 / (12 * a ** 2))
        assert logarithmic_mean(a + delta, a) == approx(exact, rel=1e-12)


def test_log_derivative_of_diagonal_state():
    sigma = np.diag([0.4, 0.3, 0.2, 0.1])
    rho = np.diag([0.1, 0.2, 0.3, 0.4])
    gamma = log_derivative(sigma, rho)
    assert np.allclose(gamma, np.diag([0.25, 2 / 3, 1.5, 4]))


def test_directional_derivative_matches_log_derivative():
    rng = np.random.default_rng(2)
    rho = werner_state(0.85)
    css = css_bell_diagonal((0.8, -0.8, 0.8)).css
    gamma = log_derivative(css, rho)
    base = np.trace(gamma @ css.entries).real
    for _ in range(5):
        direction = random_product_state(rng)
        numeric = directional_derivative(rho, css, direction)
        analytic = base - np.trace(gamma @ direction.entries).real
        assert numeric == approx(analytic, abs=1e-6)


def test_directional_check_of_werner_css():
    rho = werner_state(0.85)
    css = css_bell_diagonal((0.8, -0.8, 0.8)).css
    assert directional_optimality_check(rho, css) >= -1e-8


def test_directional_check_flags_wrong_css():
    value = directional_optimality_check(bell_state(1), np.eye(4) / 4)
    assert value == approx(-1, abs=1e-6)


#############################################################################
# NUMERICAL ORACLE
#############################################################################
def test_product_ensemble_state_is_separable():
    ensemble = ProductEnsemble(16)
    rng = np.random.default_rng(3)
    sigma = ensemble.state(ensemble.random_params(rng))
    assert np.trace(sigma).real == approx(1)
    assert is_ppt(sigma)


def test_product_ensemble_gradient():
    ensemble = ProductEnsemble(16)
    rng = np.random.default_rng(4)
    rho = werner_state(0.85).entries
    neg_entropy = -von_neumann_entropy(rho)
    params = ensemble.random_params(rng)
    value, grad = ensemble.objective(params, rho, neg_entropy)
    assert value == approx(relative_entropy(rho, ensemble.state(params)))
    h = 1e-6
    for i in rng.choice(len(params), 12, replace=False):
        step = np.zeros_like(params)
        step[i] = h
        plus, _ = ensemble.objective(params + step, rho, neg_entropy)
        minus, _ = ensemble.objective(params - step, rho, neg_entropy)
        assert grad[i] == approx((plus - minus) / (2 * h), rel=1e-4,
                                 abs=1e-7)


def test_create_oracle_config():
    assert create_oracle_config(None) == OracleConfig()
    cfg = OracleConfig(restarts=2)
    assert create_oracle_config(cfg) is cfg
    assert create_oracle_config({'restarts': 3}).restarts == 3
    with pytest.raises(TypeError):
        create_oracle_config(42)
    with pytest.raises(ValueError):
        OracleConfig(ensemble_size=8)
    with pytest.raises(ValueError):
        OracleConfig(restarts=0)


def test_oracle_short_circuits_ppt_input():
    rng = np.random.default_rng(5)
    rho = random_separable_state(rng)
    report = ree_numeric(rho)
    assert report.value == 0
    assert np.allclose(report.css_numeric.entries, rho.entries)


def test_oracle_reports_disagreeing_restarts():
    with pytest.raises(NotConvergedError) as exc:
        ree_numeric(werner_state(0.85), {'max_iterations': 1})
    assert not exc.value.report.converged
    assert len(exc.value.report.restart_values) == 8


@pytest.mark.slow
def test_oracle_on_werner_state():
    report = ree_numeric(werner_state(0.85))
    expected = LN2 + 0.85 * math.log(0.85) + 0.15 * math.log(0.15)
    assert report.converged
    assert report.value == approx(expected, abs=1e-4)


@pytest.mark.slow
def test_oracle_agrees_with_horodecki_css():
    lam = (0.6, 0.3, 0.1)
    report = ree_compare(horodecki_state(lam))
    assert report.value == approx(css_horodecki(lam).ree)
    assert abs(report.gap) <= 2e-4


@pytest.mark.slow
def test_oracle_on_bell_state():
    report = ree_numeric(bell_state(1))
    assert report.converged
    assert report.value == approx(LN2, abs=1e-4)


@pytest.mark.slow
def test_oracle_agrees_with_vp_css():
    lam = (0.5, 0.3, 0.2)
    report = ree_compare(vp_state(lam))
    assert report.value == approx(css_vp(lam).ree)
    assert abs(report.gap) <= 2e-4


@pytest.mark.slow
def test_oracle_agrees_with_bell_diagonal_css():
    t = (0.8, -0.8, 0.8)
    report = ree_compare(bell_diagonal_state(t))
    assert report.value == approx(css_bell_diagonal(t).ree)
    assert abs(report.gap) <= 2e-4


def _random_family_state(family, rng):
    if family == 'BellDiagonal':
        return bell_diagonal_state(random_entangled_bell_correlation(rng))
    if family == 'GeneralizedVP':
        return vp_state(random_vp_weights(rng))
    return horodecki_state(random_horodecki_weights(rng))


@pytest.mark.slow
@pytest.mark.parametrize('family', ['BellDiagonal', 'GeneralizedVP',
                                    'GeneralizedHorodecki'])
def test_geometric_and_numeric_ree_agree_across_family(family):
    rng = np.random.default_rng(7)
    for _ in range(100):
        rho = _random_family_state(family, rng)
        report = ree_compare(rho)
        assert abs(report.gap) <= 2e-4
        css = css_auto(rho, numeric_fallback=False).css
        assert directional_optimality_check(rho, css) >= -1e-8


#############################################################################
# GEOMETRIC REE
#############################################################################
def test_geometric_ree_of_bell_state():
    report = ree_geometric(bell_state(1))
    assert report.value == approx(LN2, abs=1e-12)
    assert report.css_geometric is not None
    assert report.css_numeric is None
    assert math.isnan(report.gap)
    assert report.residuals.edge_gap <= 1e-8


def test_geometric_ree_rejects_other_states():
    rng = np.random.default_rng(6)
    rho = random_density_matrix(rng)
    while is_ppt(rho):
        rho = random_density_matrix(rng)
    with pytest.raises(NotSolvableFamilyError):
        ree_geometric(rho)
