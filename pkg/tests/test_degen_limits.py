import math

import numpy as np
import numpy.testing as npt
import pytest

from rplap.degen_limits import (
    cap_patch,
    circle_arc,
    fold_limit_volume,
    moebius_area_two_routes,
    moebius_limit_volume,
    veronese_patch,
)
from rplap.errors import DomainError
from rplap.quadrature import surface_measure
from rplap.sphere_geom import moebius_apply
from rplap.veronese import veronese_apply

POLE = np.array([0.0, 0.0, 1.0])
ORTH = np.array([1.0, 0.0, 0.0])


def test_circle_arc_length():
    full = circle_arc(POLE, ORTH, (-math.pi, math.pi))
    npt.assert_allclose(surface_measure(full), 2.0 * math.pi, rtol=1e-12)
    half = circle_arc(POLE, ORTH, (-math.pi / 2, math.pi / 2))
    npt.assert_allclose(surface_measure(half), math.pi, rtol=1e-12)


def test_circle_arc_rejects_parallel_direction():
    with pytest.raises(DomainError):
        circle_arc(POLE, 2.0 * POLE)


def test_cap_patch_area_closed_form():
    patch = cap_patch(POLE, 0.8)
    npt.assert_allclose(
        surface_measure(patch), 2.0 * math.pi * (1.0 - math.cos(0.8)), rtol=1e-10
    )
    with pytest.raises(DomainError):
        cap_patch(np.array([1.0, 0.0, 0.0, 0.0]), 0.5)


def test_veronese_patch_area_scales_by_three():
    # the quadratic map stretches every tangent direction by sqrt(3) on S^2,
    # so patch areas triple
    patch = veronese_patch((math.pi / 2 - 0.5, math.pi / 2 + 0.5), (-0.5, 0.5))
    base_area = 2.0 * math.sin(0.5) * 1.0
    npt.assert_allclose(surface_measure(patch), 3.0 * base_area, rtol=1e-10)


# ---------------------------------------------------------------------------
# Fold degeneration


def test_fold_half_circle_approaches_three_pi():
    half = circle_arc(POLE, ORTH, (-math.pi / 2, math.pi / 2))
    rows = fold_limit_volume(half, POLE, [0.0, 0.9, 0.999])
    assert all(row.within_bound for row in rows)
    npt.assert_allclose(rows[0].bound, 3.0 * math.pi, rtol=1e-12)
    # t = 0: plain reflection, an isometry; the length is preserved
    npt.assert_allclose(rows[0].volume, math.pi, rtol=1e-9)
    # t -> 1: the folded image covers the sphere once plus the original arc
    npt.assert_allclose(rows[-1].volume, 9.4207766070, atol=1e-6)
    assert abs(rows[-1].volume - 3.0 * math.pi) < 0.005 * 3.0 * math.pi
    assert rows[0].volume < rows[1].volume < rows[2].volume


def test_fold_fixes_arcs_inside_the_cap():
    quarter = circle_arc(-POLE, ORTH, (-math.pi / 4, math.pi / 4))
    rows = fold_limit_volume(quarter, POLE, [0.0, 0.5, 0.999])
    for row in rows:
        npt.assert_allclose(row.volume, math.pi / 2, rtol=1e-9)


def test_fold_cap_patch_matches_closed_form():
    patch = cap_patch(POLE, 0.8)
    patch_area = 2.0 * math.pi * (1.0 - math.cos(0.8))
    rows = fold_limit_volume(patch, POLE, [0.0, 0.6, 0.9])
    assert all(row.within_bound for row in rows)
    npt.assert_allclose(rows[0].bound, 4.0 * math.pi + patch_area, rtol=1e-12)
    # t = 0 reflects the patch isometrically
    npt.assert_allclose(rows[0].volume, patch_area, rtol=1e-9)
    # once the complement cap sits inside the patch, the folded volume is
    # (patch minus complement) + (sphere minus complement), exactly
    for row, t, rtol in ((rows[1], 0.6, 3e-4), (rows[2], 0.9, 1e-5)):
        tau = 2.0 * t / (1.0 + t * t)
        small = 2.0 * math.pi * (1.0 - tau)
        exact = (patch_area - small) + (4.0 * math.pi - small)
        npt.assert_allclose(row.volume, exact, rtol=rtol)
    npt.assert_allclose(rows[2].volume, 14.40259110, atol=1e-4)


def test_fold_veronese_patch_stays_bounded():
    patch = veronese_patch((math.pi / 2 - 0.5, math.pi / 2 + 0.5), (-0.5, 0.5))
    pole = veronese_apply(2, np.array([[1.0, 0.0, 0.0]]))[0]
    rows = fold_limit_volume(patch, pole, [0.0, 0.3, 0.6, 0.9])
    assert all(row.within_bound for row in rows)
    vols = [row.volume for row in rows]
    assert vols == sorted(vols)
    assert vols[-1] < rows[-1].bound


# ---------------------------------------------------------------------------
# Moebius degeneration


def test_moebius_full_circle_keeps_its_length():
    # the circle through the blow-up point -x balances compression against
    # stretch exactly, at every radius
    full = circle_arc(-POLE, ORTH, (-math.pi, math.pi))
    rows = moebius_limit_volume(full, [r * POLE for r in (0.5, 0.9, 0.999)])
    for row in rows:
        npt.assert_allclose(row.volume, 2.0 * math.pi, atol=1e-9)
        assert row.within_bound


def test_moebius_arc_away_from_the_blowup_point_collapses():
    avoid = circle_arc(POLE, ORTH, (-math.pi / 4, math.pi / 4))
    rows = moebius_limit_volume(avoid, [0.999 * POLE])
    assert rows[0].volume < 0.01 * 2.0 * math.pi
    npt.assert_allclose(rows[0].volume, 8.29e-4, rtol=0.05)


def test_moebius_cap_patch_matches_the_image_cap():
    patch = cap_patch(POLE, 0.8)
    boundary = np.array([math.sin(0.8), 0.0, math.cos(0.8)])
    for depth, frozen in ((0.5, 7.74943046), (0.9, 12.37460614)):
        x = -depth * POLE
        rows = moebius_limit_volume(patch, [x])
        # the image of a cap is a cap; its boundary height gives the area
        height = moebius_apply(x, boundary[None])[0][2]
        npt.assert_allclose(rows[0].volume, 2.0 * math.pi * (1.0 - height), rtol=1e-6)
        npt.assert_allclose(rows[0].volume, frozen, atol=1e-6)
        assert rows[0].within_bound


def test_moebius_two_routes_agree():
    patch = cap_patch(POLE, 0.8)
    for depth in (0.3, 0.6, 0.9):
        x = np.array([0.0, depth * 0.6, -depth * 0.8])
        weighted, direct = moebius_area_two_routes(patch, x)
        npt.assert_allclose(weighted, direct, rtol=1e-7)
    half = circle_arc(POLE, ORTH, (-math.pi / 2, math.pi / 2))
    weighted, direct = moebius_area_two_routes(half, np.array([0.2, -0.3, 0.4]))
    npt.assert_allclose(weighted, direct, rtol=1e-9)
