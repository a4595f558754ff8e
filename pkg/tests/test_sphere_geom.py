import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rplap.errors import DomainError
from rplap.sphere_geom import (
    CAP_T_MAX,
    SphericalCap,
    as_ball,
    as_unit,
    cap_reflect,
    cap_reflect_factor,
    fold_apply,
    fold_factor,
    moebius_apply,
    moebius_factor,
    reflect,
    stereographic,
    stereographic_inverse,
    tangent_basis,
)

FD_STEP = 1e-6


def coords(dim):
    return arrays(np.float64, (dim,), elements=st.floats(-1.0, 1.0, allow_nan=False))


def unit_rows(raw):
    raw = np.atleast_2d(raw)
    norms = np.linalg.norm(raw, axis=1)
    if np.min(norms) < 1e-3:
        raw = raw + np.eye(raw.shape[1])[0] * 2.0
        norms = np.linalg.norm(raw, axis=1)
    return raw / norms[:, None]


@given(coords(4), coords(4))
def test_moebius_is_a_sphere_bijection(x, y):
    y = unit_rows(y)
    x = 0.8 * x / (1.0 + np.linalg.norm(x))
    image = moebius_apply(x, y)
    npt.assert_allclose(np.linalg.norm(image, axis=1), 1.0, atol=1e-12)
    # T_{-x} inverts T_x
    npt.assert_allclose(moebius_apply(-x, image), y, atol=1e-10)


def test_moebius_identity_at_origin(rng):
    y = unit_rows(rng.normal(size=(32, 5)))
    npt.assert_allclose(moebius_apply(np.zeros(5), y), y, atol=1e-15)
    npt.assert_allclose(moebius_factor(np.zeros(5), y), 1.0, atol=0)


@given(coords(3), coords(3))
def test_moebius_factor_is_the_local_stretch(x, y):
    y = unit_rows(y)
    x = 0.7 * x / (1.0 + np.linalg.norm(x))
    frame = tangent_basis(y)[0]
    factor = moebius_factor(x, y)[0]
    for col in range(frame.shape[1]):
        u = frame[:, col]
        plus = (y[0] + FD_STEP * u) / np.linalg.norm(y[0] + FD_STEP * u)
        minus = (y[0] - FD_STEP * u) / np.linalg.norm(y[0] - FD_STEP * u)
        stretch = np.linalg.norm(
            moebius_apply(x, plus[None])[0] - moebius_apply(x, minus[None])[0]
        ) / (2.0 * FD_STEP)
        npt.assert_allclose(stretch, factor, rtol=1e-5)


def test_moebius_factor_closed_form(rng):
    x = np.array([0.3, -0.2, 0.0, 0.4])
    s = unit_rows(rng.normal(size=(16, 4)))
    expected = (1.0 - x @ x) / (1.0 + x @ x + 2.0 * s @ x)
    npt.assert_allclose(moebius_factor(x, s), expected, rtol=1e-14)


def test_as_unit_rejects_off_sphere_points():
    with pytest.raises(DomainError):
        as_unit(np.array([1.0, 1.0]))
    with pytest.raises(DomainError):
        as_ball(np.array([1.0, 0.2]))


def test_tangent_basis_is_orthonormal_and_tangent(rng):
    x = unit_rows(rng.normal(size=(40, 6)))
    frames = tangent_basis(x)
    gram = np.einsum("kiu,kiv->kuv", frames, frames)
    npt.assert_allclose(gram, np.broadcast_to(np.eye(5), gram.shape), atol=1e-12)
    npt.assert_allclose(np.einsum("ki,kiu->ku", x, frames), 0.0, atol=1e-12)


@given(coords(3), coords(3))
def test_reflect_is_an_involutive_isometry(mirror, y):
    if np.linalg.norm(mirror) < 1e-2:
        mirror = np.array([1.0, 0.0, 0.0])
    mirror = mirror / np.linalg.norm(mirror)
    y = unit_rows(y)
    once = reflect(y, mirror)
    npt.assert_allclose(np.linalg.norm(once, axis=1), 1.0, atol=1e-12)
    npt.assert_allclose(reflect(once, mirror), y, atol=1e-12)
    npt.assert_allclose(once @ mirror, -(y @ mirror), atol=1e-12)


# --- spherical caps and the fold ---------------------------------------------


def test_cap_family_limits():
    pole = np.array([0.0, 0.0, 1.0])
    hemi = SphericalCap(pole, 0.0)
    equator_pt = np.array([[1.0, 0.0, 0.0]])
    assert hemi.contains(equator_pt)[0]
    assert hemi.contains(-pole[None])[0]
    assert not hemi.contains((pole - 1e-9)[None] / np.linalg.norm(pole - 1e-9))
    with pytest.raises(DomainError):
        SphericalCap(pole, CAP_T_MAX * 1.5)
    with pytest.raises(DomainError):
        SphericalCap(pole, -0.1)


@given(st.floats(0.0, 0.95))
def test_cap_boundary_height(t):
    pole = np.array([0.0, 1.0, 0.0, 0.0])
    cap = SphericalCap(pole, t)
    tau = 2.0 * t / (1.0 + t * t)
    below = unit_rows(np.array([math.sqrt(max(0.0, 1 - (tau - 1e-6) ** 2)), tau - 1e-6, 0, 0]))
    above = unit_rows(np.array([math.sqrt(max(0.0, 1 - (tau + 1e-6) ** 2)), tau + 1e-6, 0, 0]))
    assert cap.contains(below)[0]
    assert not cap.contains(above)[0]


@given(st.floats(0.05, 0.95), coords(4))
def test_cap_reflect_involution(t, y):
    pole = np.array([0.0, 0.0, 0.0, 1.0])
    cap = SphericalCap(pole, t)
    y = unit_rows(y)
    image = cap_reflect(cap, y)
    npt.assert_allclose(np.linalg.norm(image, axis=1), 1.0, atol=1e-12)
    npt.assert_allclose(cap_reflect(cap, image), y, atol=1e-9)


@given(st.floats(0.05, 0.9))
def test_cap_reflect_swaps_poles_with_known_stretch(t):
    pole = np.array([0.0, 0.0, 1.0])
    cap = SphericalCap(pole, t)
    npt.assert_allclose(cap_reflect(cap, pole[None])[0], -pole, atol=1e-12)
    npt.assert_allclose(cap_reflect(cap, -pole[None])[0], pole, atol=1e-12)
    blowup = ((1.0 + t) / (1.0 - t)) ** 2
    npt.assert_allclose(cap_reflect_factor(cap, pole[None])[0], blowup, rtol=1e-12)
    npt.assert_allclose(cap_reflect_factor(cap, -pole[None])[0], 1.0 / blowup, rtol=1e-12)


def test_cap_reflect_fixes_the_boundary_circle():
    t = 0.4
    tau = 2.0 * t / (1.0 + t * t)
    cap = SphericalCap(np.array([0.0, 0.0, 1.0]), t)
    ring = math.sqrt(1.0 - tau * tau)
    angles = np.linspace(0.0, 2.0 * math.pi, 9)
    boundary = np.stack(
        [ring * np.cos(angles), ring * np.sin(angles), np.full_like(angles, tau)], axis=-1
    )
    npt.assert_allclose(cap_reflect(cap, boundary), boundary, atol=1e-12)


@given(st.floats(0.05, 0.9), coords(3))
def test_fold_branches(t, y):
    cap = SphericalCap(np.array([0.0, 0.0, 1.0]), t)
    y = unit_rows(y)
    folded = fold_apply(cap, y)
    factor = fold_factor(cap, y)
    if cap.contains(y)[0]:
        npt.assert_allclose(folded, y, atol=1e-15)
        npt.assert_allclose(factor, 1.0, atol=0)
    else:
        npt.assert_allclose(folded, cap_reflect(cap, y), atol=1e-15)
        npt.assert_allclose(factor, cap_reflect_factor(cap, y), atol=0)
    # fold always lands on the kept side
    assert cap.contains(folded)[0] or abs(folded[0] @ cap.pole - cap.threshold) < 1e-9


def test_fold_factor_is_unit_on_the_kept_side(rng):
    cap = SphericalCap(np.array([1.0, 0.0, 0.0, 0.0]), 0.35)
    pts = unit_rows(rng.normal(size=(200, 4)))
    inside = cap.contains(pts)
    npt.assert_array_equal(fold_factor(cap, pts)[inside], 1.0)
    assert np.all(fold_factor(cap, pts)[~inside] > 1.0)


# --- stereographic chart ------------------------------------------------------


def test_stereographic_round_trip(rng):
    pole = unit_rows(rng.normal(size=4))[0]
    y = unit_rows(rng.normal(size=(64, 4)))
    y = y[y @ pole > -0.95]  # stay away from the projection point
    z = stereographic(pole, y)
    npt.assert_allclose(stereographic_inverse(pole, z), y, atol=1e-10)
    npt.assert_allclose(stereographic(pole, pole[None]), 0.0, atol=1e-13)


@given(st.floats(0.05, 0.9), coords(3))
def test_cap_reflection_is_an_inversion_in_the_chart(t, y):
    # Centered at the cap pole, the fold's reflection becomes the classical
    # inversion z -> eps^2 z / |z|^2 with eps = (1 - t) / (1 + t).
    pole = np.array([0.0, 0.0, 1.0])
    cap = SphericalCap(pole, t)
    y = unit_rows(y)
    if abs(y[0] @ pole) > 0.99:
        y = unit_rows(np.array([0.6, -0.3, 0.5]))
    eps = (1.0 - t) / (1.0 + t)
    z = stereographic(pole, y)
    lhs = stereographic(pole, cap_reflect(cap, y))
    rhs = eps**2 * z / np.sum(z * z, axis=1, keepdims=True)
    npt.assert_allclose(lhs, rhs, atol=1e-9)
