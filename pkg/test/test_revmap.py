import numpy as np
import pytest
from pytest import approx

from reegeom.css.css import css_vp, css_horodecki, vp_family_parameter, \
    horodecki_family_parameter
from reegeom.errors import RankDeficientError, NotEdgeStateError, \
    LeftPhysicalRangeError, DegenerateZError, ParallelLinesError
from reegeom.ree.entropy import relative_entropy
from reegeom.revmap.gmatrix import g_matrix, pt_kernel, family_generator, \
    family_from_css, regularized_family, max_admissible_x, \
    VP_REGULARIZATION, HORODECKI_REGULARIZATION
from reegeom.revmap.zfamily import SigmaZParams, SWEEP_COLUMNS, \
    z_derivatives, z_family, z_family_pauli, line_crossing, css_line_sweep, \
    sample_sigma_z, sample_sweep_params
from reegeom.states.families import vp_state, horodecki_state
from reegeom.states.qstate import partial_transpose, to_pauli
from reegeom.states.sampling import random_vp_weights, \
    random_horodecki_weights

VERTICES = np.array([[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]])


#############################################################################
# G MATRIX
#############################################################################
def test_g_matrix_of_sigma_z():
    p = SigmaZParams.from_entries(0.1, 0.5, 0.3, 0.1)
    g = g_matrix(p.matrix())
    assert np.allclose(g.matrix, g.matrix.conj().T)
    assert np.trace(g.matrix).real == approx(0, abs=1e-12)
    kernel = partial_transpose(p.matrix()).entries @ g.kernel
    assert np.allclose(kernel, 0, atol=1e-12)


def test_g_matrix_needs_full_rank():
    with pytest.raises(RankDeficientError):
        g_matrix(np.diag([0.55, 0, 0, 0.45]))


def test_g_matrix_needs_edge_state():
    with pytest.raises(NotEdgeStateError) as exc:
        g_matrix(np.eye(4) / 4)
    assert exc.value.num_zeros == 0
    with pytest.raises(NotEdgeStateError):
        pt_kernel(np.eye(4) / 4)


def test_closed_form_family_matches_g_route():
    rng = np.random.default_rng(0)
    for _ in range(500):
        p = sample_sigma_z(rng)
        generator = family_generator(p.matrix())
        for x in (0.0, 0.05, 0.1):
            direct = p.matrix() - x * generator
            assert np.max(np.abs(z_family(p, x).entries - direct)) <= 1e-10


def test_z_family_pauli_matches_matrix():
    p = SigmaZParams.from_entries(0.1, 0.5, 0.3, 0.1)
    for x in (0.0, 0.3):
        form = z_family_pauli(p, x)
        pauli = to_pauli(z_family(p, x))
        assert form.r == approx(pauli.r, abs=1e-12)
        assert form.s == approx(pauli.s, abs=1e-12)
        assert np.allclose(form.g, pauli.g, atol=1e-12)


def test_z_derivatives_degenerate_cases():
    with pytest.raises(DegenerateZError):
        z_derivatives(SigmaZParams.from_entries(0, 0.5, 0.5, 0))
    bar = z_derivatives(SigmaZParams.from_entries(0, 0.4, 0.4, 0.2))
    assert bar.z == 0
    assert bar.R1_bar == bar.Y_bar == 0


def test_sigma_z_validation():
    with pytest.raises(ValueError):
        SigmaZParams.from_entries(0.1, 0.5, 0.3, 0.2)
    with pytest.raises(ValueError):
        SigmaZParams.from_entries(0.4, 0.1, 0.1, 0.4)


def test_family_from_css_range():
    p = SigmaZParams.from_entries(0.1, 0.5, 0.3, 0.1)
    with pytest.raises(ValueError):
        family_from_css(p.matrix(), -1)
    with pytest.raises(LeftPhysicalRangeError) as exc:
        family_from_css(p.matrix(), 1e3)
    x_max = exc.value.x_max
    assert 0 < x_max < 1e3
    assert x_max == approx(max_admissible_x(p.matrix(),
                                            family_generator(p.matrix())))
    family_from_css(p.matrix(), 0.9 * x_max)


def test_relative_entropy_grows_along_family():
    rng = np.random.default_rng(1)
    for _ in range(10):
        p = sample_sigma_z(rng)
        generator = family_generator(p.matrix())
        x_max = min(max_admissible_x(p.matrix(), generator), 10.0)
        values = [relative_entropy(family_from_css(p.matrix(), x), p.matrix())
                  for x in np.linspace(0, 0.99 * x_max, 20)]
        assert values[0] == approx(0, abs=1e-12)
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


#############################################################################
# RECOVERY OF THE SOLVABLE FAMILIES
#############################################################################
def test_vp_state_is_recovered_from_its_css():
    rng = np.random.default_rng(2)
    for _ in range(100):
        lam = random_vp_weights(rng)
        rho = regularized_family(css_vp(lam).css, vp_family_parameter(lam),
                                 VP_REGULARIZATION)
        assert np.max(np.abs(rho.entries - vp_state(lam).entries)) <= 1e-9


def test_horodecki_state_is_recovered_from_its_css():
    rng = np.random.default_rng(3)
    for _ in range(100):
        lam = random_horodecki_weights(rng)
        rho = regularized_family(css_horodecki(lam).css,
                                 horodecki_family_parameter(lam),
                                 HORODECKI_REGULARIZATION)
        assert np.max(np.abs(rho.entries - horodecki_state(lam).entries)) \
            <= 1e-9


def test_vp_at_equal_weights_uses_the_limit():
    lam = (0.4, 0.3, 0.3)
    rho = regularized_family(css_vp(lam).css, vp_family_parameter(lam),
                             VP_REGULARIZATION)
    assert np.max(np.abs(rho.entries - vp_state(lam).entries)) <= 1e-9


#############################################################################
# LINE CROSSINGS
#############################################################################
def test_bell_diagonal_lines_meet_at_vertex():
    rng = np.random.default_rng(4)
    for _ in range(10):
        first, second = sample_sweep_params(rng, 0, 0, 2, bell_diagonal=True)
        crossing = line_crossing(first, second)
        assert crossing.mu == approx([1, 1, -1], abs=1e-9)
        assert crossing.x == approx(2, abs=1e-8)
        assert crossing.x_prime == approx(2, abs=1e-8)


def test_generic_lines_miss_the_vertices():
    rng = np.random.default_rng(5)
    for _ in range(100):
        crossing = line_crossing(sample_sigma_z(rng), sample_sigma_z(rng))
        distances = np.linalg.norm(VERTICES - crossing.mu, axis=1)
        assert np.min(distances) > 1e-3


def test_crossing_lies_on_both_lines():
    rng = np.random.default_rng(6)
    p, q = sample_sigma_z(rng), sample_sigma_z(rng)
    crossing = line_crossing(p, q)
    assert z_family_pauli(p, crossing.x).q == approx(crossing.mu)
    assert z_family_pauli(q, crossing.x_prime).q == approx(crossing.mu)


def test_parallel_lines():
    p = SigmaZParams.from_entries(0.1, 0.5, 0.3, 0.1)
    with pytest.raises(ParallelLinesError):
        line_crossing(p, p)


#############################################################################
# SWEEPS
#############################################################################
def test_sweep_params_hit_bloch_components():
    rng = np.random.default_rng(7)
    for p in sample_sweep_params(rng, 0.3, -0.2, 10):
        form = z_family_pauli(p, 0.0)
        assert form.r[2] == approx(0.3)
        assert form.s[2] == approx(-0.2)


def test_sweep_params_errors():
    rng = np.random.default_rng(8)
    with pytest.raises(ValueError):
        sample_sweep_params(rng, 0.3, 0.3, 2, bell_diagonal=True)
    with pytest.raises(ValueError):
        sample_sweep_params(rng, 1.0, -1.0, 2)


def test_sweep_rows():
    rng = np.random.default_rng(9)
    params = sample_sweep_params(rng, 0.3, 0.3, 4)
    rows = css_line_sweep(params, np.linspace(0, 2, 11))
    assert SWEEP_COLUMNS == ('family_id', 'x', 't1', 't2', 't3', 'tau1',
                             'tau2', 'tau3', 'r', 's')
    keys = [(row.family_id, row.x) for row in rows]
    assert keys == sorted(keys)
    for row in rows:
        if row.x == 0:
            assert (row.t1, row.t2, row.t3) == \
                approx((row.tau1, row.tau2, row.tau3))
            assert row.r == approx(0.3) and row.s == approx(0.3)
        assert row.t1 == approx(row.t2)


def test_sweep_is_deterministic_and_thread_independent():
    params = sample_sweep_params(np.random.default_rng(10), 0, 0, 6,
                                 bell_diagonal=True)
    grid = np.linspace(0, 4, 21)
    assert css_line_sweep(params, grid, threads=1) == \
        css_line_sweep(params, grid, threads=3)


def test_sweep_lines_are_straight():
    params = sample_sweep_params(np.random.default_rng(11), 0, 0, 3,
                                 bell_diagonal=True)
    rows = css_line_sweep(params, np.linspace(0, 1, 6))
    for family_id in range(3):
        points = np.array([(r.t1, r.t2, r.t3) for r in rows
                           if r.family_id == family_id])
        if len(points) < 3:
            continue
        steps = np.diff(points, axis=0)
        cross = np.cross(steps[0], steps[1:])
        assert np.allclose(cross, 0, atol=1e-12)


def test_empty_sweep():
    assert css_line_sweep([], np.linspace(0, 1, 5)) == []
    assert sample_sweep_params(np.random.default_rng(0), 0, 0, 0) == []
