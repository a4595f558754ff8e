"""Moebius transformations, reflections, caps and folds on round spheres.

Points are numpy arrays with the ambient coordinate on the last axis; every
map broadcasts over leading axes.  Maps that receive a point on the unit
sphere return a point renormalized onto the unit sphere, so errors do not
accumulate through compositions.
"""

import numpy as np

from .errors import DomainError

__all__ = [
    "UNIT_TOL",
    "CAP_T_MAX",
    "as_unit",
    "as_ball",
    "moebius_apply",
    "moebius_factor",
    "reflect",
    "tangent_basis",
    "SphericalCap",
    "cap_reflect",
    "cap_reflect_factor",
    "fold_apply",
    "fold_factor",
    "stereographic",
    "stereographic_inverse",
    "stereographic_factor",
]

UNIT_TOL = 1e-12          # admissible deviation of |y| from 1 at validation
SPHERE_DETECT_TOL = 1e-9  # inputs this close to the sphere get renormalized outputs
MEMBERSHIP_TOL = 1e-14    # inclusive slack for cap membership
CAP_T_MAX = 1.0 - 1e-6    # caps are only formed this far along the family
_DENOM_TOL = 1e-14


def _norm(y):
    return np.sqrt(np.sum(y * y, axis=-1))


def as_unit(y, tol=UNIT_TOL):
    """Validate that y lies on the unit sphere (within tol) and renormalize."""
    y = np.asarray(y, dtype=float)
    r = _norm(y)
    dev = np.max(np.abs(r - 1.0)) if r.size else 0.0
    if dev > tol:
        raise DomainError(f"point not on the unit sphere: | |y| - 1 | = {dev:.3g}")
    return y / r[..., None]


def as_ball(x, tol=UNIT_TOL):
    """Validate that x lies in the open unit ball."""
    x = np.asarray(x, dtype=float)
    r = _norm(x)
    if r.size and np.max(r) >= 1.0:
        raise DomainError(f"point not in the open unit ball: |x| = {np.max(r):.17g}")
    return x


def _renormalized_like_input(y_in, out):
    # Outputs of sphere inputs are snapped back onto the sphere.
    r_in = _norm(np.asarray(y_in, dtype=float))
    on_sphere = np.abs(r_in - 1.0) <= SPHERE_DETECT_TOL
    if not np.any(on_sphere):
        return out
    r_out = _norm(out)
    scale = np.where(on_sphere, r_out, 1.0)
    return out / scale[..., None]


def moebius_apply(x, y):
    """Moebius translation of the closed unit ball by x.

    T_x(y) = ((1 + 2 x.y + |y|^2) x + (1 - |x|^2) y) / (1 + 2 x.y + |x|^2 |y|^2)

    with x in the open ball and y in the closed ball.  T_0 is the identity,
    T_x(0) = x, T_{-x} inverts T_x, and the boundary sphere maps to itself
    with +-x/|x| fixed.
    """
    x = as_ball(x)
    y = np.asarray(y, dtype=float)
    xy = np.sum(x * y, axis=-1, keepdims=True)
    yy = np.sum(y * y, axis=-1, keepdims=True)
    xx = np.sum(x * x, axis=-1, keepdims=True)
    denom = 1.0 + 2.0 * xy + xx * yy
    if np.min(denom) <= _DENOM_TOL:
        raise DomainError(
            f"Moebius translation degenerate: denominator {np.min(denom):.3g}"
        )
    out = ((1.0 + 2.0 * xy + yy) * x + (1.0 - xx) * y) / denom
    return _renormalized_like_input(y, out)


def moebius_factor(x, s):
    """Conformal stretch of T_x on the unit sphere at the point s.

    |D T_x(s) u| = factor * |u| for u tangent at s, with
    factor = (1 - |x|^2) / (1 + |x|^2 + 2 x.s).
    """
    x = as_ball(x)
    s = as_unit(s, tol=SPHERE_DETECT_TOL)
    xx = np.sum(x * x, axis=-1)
    xs = np.sum(x * s, axis=-1)
    denom = 1.0 + xx + 2.0 * xs
    if np.min(denom) <= _DENOM_TOL:
        raise DomainError("Moebius factor degenerate: s antipodal to x at |x| -> 1")
    return (1.0 - xx) / denom


def reflect(y, mirror):
    """Reflect y across the hyperplane orthogonal to mirror (mirror != 0)."""
    y = np.asarray(y, dtype=float)
    mirror = np.asarray(mirror, dtype=float)
    m2 = np.sum(mirror * mirror, axis=-1, keepdims=True)
    if np.min(m2) <= 1e-28:
        raise DomainError("reflection mirror vector is zero")
    out = y - 2.0 * np.sum(y * mirror, axis=-1, keepdims=True) * mirror / m2
    return _renormalized_like_input(y, out)


def tangent_basis(x):
    """Deterministic orthonormal basis of the tangent space x^perp.

    Returns an array of shape x.shape + (m-1,), columns orthonormal and
    orthogonal to x (Householder completion; stable for every x).
    """
    x = as_unit(x, tol=SPHERE_DETECT_TOL)
    m = x.shape[-1]
    sign = np.where(x[..., 0] >= 0.0, 1.0, -1.0)
    v = x.copy()
    v[..., 0] += sign
    nv2 = np.sum(v * v, axis=-1)          # = 2 (1 + |x_0|) >= 2
    eye_cols = np.zeros(x.shape[:-1] + (m, m - 1))
    eye_cols[...] = np.eye(m)[:, 1:]
    basis = eye_cols - v[..., :, None] * (2.0 * v[..., None, 1:] / nv2[..., None, None])
    return basis


class SphericalCap:
    """Cap obtained by sliding the hemisphere {y.pole <= 0} along its pole.

    The cap at parameter t in [0, 1) is the Moebius image T_{t*pole} of that
    hemisphere, which is the set {y : y.pole <= 2t/(1+t^2)}.  t = 0 gives the
    hemisphere itself; as t -> 1 the cap exhausts the sphere.
    """

    __slots__ = ("pole", "t")

    def __init__(self, pole, t):
        self.pole = as_unit(np.asarray(pole, dtype=float))
        t = float(t)
        if not 0.0 <= t <= CAP_T_MAX:
            raise DomainError(f"cap parameter t = {t!r} outside [0, {CAP_T_MAX}]")
        self.t = t

    @property
    def threshold(self):
        """Membership threshold 2t/(1+t^2) on y.pole."""
        return 2.0 * self.t / (1.0 + self.t * self.t)

    def signed_margin(self, y):
        """threshold - y.pole; nonnegative (up to tolerance) inside the cap."""
        y = np.asarray(y, dtype=float)
        return self.threshold - np.sum(y * self.pole, axis=-1)

    def contains(self, y):
        """Inclusive membership test (boundary points count as inside)."""
        return self.signed_margin(y) >= -MEMBERSHIP_TOL

    def __repr__(self):
        return f"SphericalCap(pole={self.pole!r}, t={self.t!r})"


def cap_reflect(cap, y):
    """Conformal reflection across the cap boundary, sending pole -> -pole.

    Conjugate of the linear reflection across pole^perp by the Moebius
    translation T_{t*pole}; fixes the boundary circle of the cap pointwise
    and swaps the cap with its complement.
    """
    shift = cap.t * cap.pole
    inner = moebius_apply(-shift, y)
    return moebius_apply(shift, reflect(inner, cap.pole))


def cap_reflect_factor(cap, s):
    """Conformal stretch of cap_reflect at a sphere point s."""
    shift = cap.t * cap.pole
    inner = moebius_apply(-shift, s)
    outer = reflect(inner, cap.pole)
    return moebius_factor(shift, outer) * moebius_factor(-shift, s)


def fold_apply(cap, y):
    """Fold the sphere onto the cap: identity inside, cap_reflect outside."""
    y = as_unit(y, tol=SPHERE_DETECT_TOL)
    reflected = cap_reflect(cap, y)
    inside = cap.contains(y)
    return np.where(inside[..., None], y, reflected)


def fold_factor(cap, s):
    """Conformal stretch of the fold at s (1 inside the cap).

    The stretch extends continuously across the cap boundary, where the
    reflection acts as an isometry.
    """
    s = as_unit(s, tol=SPHERE_DETECT_TOL)
    inside = cap.contains(s)
    return np.where(inside, 1.0, cap_reflect_factor(cap, s))


def _pole_frame(pole):
    """Symmetric orthogonal Q with Q @ pole = last coordinate axis."""
    pole = as_unit(pole)
    m = pole.shape[-1]
    axis = np.zeros(m)
    axis[-1] = 1.0
    v = pole - axis
    nv2 = float(v @ v)
    if nv2 < 1e-28:
        return np.eye(m)
    return np.eye(m) - 2.0 * np.outer(v, v) / nv2


def stereographic(pole, y):
    """Stereographic chart centered at pole (pole -> origin).

    Projects from the antipode -pole, which is excluded from the domain.
    """
    q = _pole_frame(pole)
    y = as_unit(y, tol=SPHERE_DETECT_TOL)
    rotated = y @ q.T
    last = rotated[..., -1]
    if np.min(1.0 + last) <= 1e-14:
        raise DomainError("stereographic chart undefined at the projection point")
    return rotated[..., :-1] / (1.0 + last)[..., None]


def stereographic_inverse(pole, z):
    """Inverse of the chart centered at pole; origin -> pole."""
    q = _pole_frame(pole)
    z = np.asarray(z, dtype=float)
    z2 = np.sum(z * z, axis=-1, keepdims=True)
    rotated = np.concatenate([2.0 * z, 1.0 - z2], axis=-1) / (1.0 + z2)
    out = rotated @ q.T
    return out / _norm(out)[..., None]


def stereographic_factor(z):
    """Length element of the inverse chart: |D inv(z) u| = 2/(1+|z|^2) |u|."""
    z = np.asarray(z, dtype=float)
    return 2.0 / (1.0 + np.sum(z * z, axis=-1))
