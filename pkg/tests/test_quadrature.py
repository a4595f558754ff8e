import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rplap.errors import DomainError
from rplap.quadrature import (
    ParamSurface,
    antipodal_permutation,
    build_sphere_rule,
    graded_interval_rule,
    integrate,
    integrate_projective,
    interval_rule,
    product_rectangle_rule,
    projective_volume,
    sphere_volume,
    surface_measure,
)
from rplap.degen_limits import circle_arc

VOLUMES = {1: 2.0 * math.pi, 2: 4.0 * math.pi, 3: 2.0 * math.pi**2}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_volume_closed_forms(n):
    npt.assert_allclose(sphere_volume(n), VOLUMES[n], rtol=1e-15)
    npt.assert_allclose(projective_volume(n), VOLUMES[n] / 2.0, rtol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rule_weights_sum_to_volume(n):
    rule = build_sphere_rule(n, 16)
    npt.assert_allclose(math.fsum(rule.weights.tolist()), VOLUMES[n], rtol=1e-13)
    npt.assert_allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-13)


def sphere_monomial_integral(alpha):
    # classical closed form: 2 prod Gamma((a_i+1)/2) / Gamma(sum (a_i+1)/2)
    if any(a % 2 for a in alpha):
        return 0.0
    halves = [(a + 1) / 2.0 for a in alpha]
    num = 2.0 * np.prod([math.gamma(h) for h in halves])
    return num / math.gamma(sum(halves))


@pytest.mark.parametrize(
    "n,alpha",
    [
        (1, (4, 2)),
        (2, (2, 2, 2)),
        (2, (6, 0, 2)),
        (2, (0, 8, 4)),
        (3, (2, 2, 2, 2)),
        (3, (6, 2, 0, 4)),
        (3, (0, 0, 10, 2)),
    ],
)
def test_monomial_exactness(n, alpha):
    rule = build_sphere_rule(n, sum(alpha))

    def mono(pts):
        out = np.ones(pts.shape[0])
        for i, a in enumerate(alpha):
            out *= pts[:, i] ** a
        return out

    npt.assert_allclose(integrate(rule, mono), sphere_monomial_integral(alpha), rtol=1e-12)


def test_projective_integration_halves_even_integrands():
    rule = build_sphere_rule(2, 12)
    f = lambda pts: pts[:, 0] ** 2 + 0.5
    npt.assert_allclose(integrate_projective(rule, f), 0.5 * integrate(rule, f), rtol=1e-14)
    with pytest.raises(DomainError):
        integrate_projective(rule, lambda pts: pts[:, 0])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_antipodal_permutation_pairs_nodes(n):
    rule = build_sphere_rule(n, 10)
    perm = antipodal_permutation(rule)
    assert np.all(perm != np.arange(rule.nodes.shape[0]))
    npt.assert_allclose(rule.nodes[perm], -rule.nodes, atol=1e-12)
    npt.assert_allclose(rule.weights[perm], rule.weights, rtol=1e-12)


@given(st.integers(min_value=1, max_value=12))
def test_interval_rule_polynomial_exactness(count):
    nodes, weights = interval_rule(-0.75, 1.25, count)
    degree = 2 * count - 1
    exact = (1.25 ** (degree + 1) - (-0.75) ** (degree + 1)) / (degree + 1)
    npt.assert_allclose(float(weights @ nodes[:, 0] ** degree), exact, rtol=1e-12, atol=1e-14)


def test_graded_rule_covers_the_domain_exactly():
    nodes, weights = graded_interval_rule(-1.5, 2.5, 0.3, levels=24, panel_points=8)
    npt.assert_allclose(math.fsum(weights.tolist()), 4.0, rtol=1e-14)
    assert np.min(nodes) > -1.5 and np.max(nodes) < 2.5
    # panels refine symmetrically toward the focus from both sides
    gaps = np.abs(nodes[:, 0] - 0.3)
    assert gaps.min() < 1e-7


@given(st.floats(0.05, 0.95))
def test_graded_rule_resolves_an_integrable_singularity(focus):
    nodes, weights = graded_interval_rule(0.0, 1.0, focus, levels=40, panel_points=12)
    value = float(weights @ (1.0 / np.sqrt(np.abs(nodes[:, 0] - focus))))
    exact = 2.0 * (math.sqrt(focus) + math.sqrt(1.0 - focus))
    npt.assert_allclose(value, exact, rtol=1e-5)


def test_product_rectangle_rule_is_separable():
    nodes, weights = product_rectangle_rule((0.0, 2.0), (-1.0, 1.0), 6, 5)
    value = float(weights @ (nodes[:, 0] ** 4 * nodes[:, 1] ** 2))
    npt.assert_allclose(value, (2.0**5 / 5.0) * (2.0 / 3.0), rtol=1e-13)


# --- parametric surfaces ------------------------------------------------------


def test_circle_arc_measure_is_its_angle():
    arc = circle_arc(np.array([0.0, 0.0, 1.0]), np.array([1.0, 1.0, 0.0]), (-0.4, 1.1))
    npt.assert_allclose(surface_measure(arc), 1.5, rtol=1e-12)
    assert arc.param_range == (-0.4, 1.1)


def test_surface_measure_accepts_rule_overrides():
    arc = circle_arc(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), (0.0, 2.0))
    nodes, weights = interval_rule(0.0, 2.0, 40)
    npt.assert_allclose(surface_measure(arc, nodes=nodes, weights=weights), 2.0, rtol=1e-12)
    half = surface_measure(arc, weight=lambda pts: (pts[:, 1] >= 0).astype(float))
    npt.assert_allclose(half, 2.0, rtol=1e-12)  # the arc stays in y >= 0


def test_fd_jacobian_fallback_matches_analytic():
    pole = np.array([0.0, 1.0, 0.0])
    toward = np.array([0.0, 0.0, 1.0])
    arc = circle_arc(pole, toward, (-1.0, 1.0))
    blind = ParamSurface(
        param_dim=1,
        chart=arc.chart,
        nodes=arc.nodes,
        weights=arc.weights,
        param_range=arc.param_range,
    )
    npt.assert_allclose(surface_measure(blind), surface_measure(arc), rtol=1e-8)


def test_with_rule_swaps_nodes_only():
    arc = circle_arc(np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), (0.0, 1.0))
    nodes, weights = interval_rule(0.0, 1.0, 11)
    swapped = arc.with_rule(nodes, weights)
    assert swapped.nodes.shape[0] == 11
    assert swapped.param_range == arc.param_range
    assert swapped.chart is arc.chart
    npt.assert_allclose(surface_measure(swapped), 1.0, rtol=1e-12)
