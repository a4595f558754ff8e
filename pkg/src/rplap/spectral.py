"""Laplacian spectra of conformal metrics on real projective space.

A metric is specified by a positive even conformal factor w against the round
metric on S^n (n = 2 or 3).  Eigenvalues are computed by Galerkin projection
onto even-degree spherical harmonics: stiffness entries carry the weight
w^{(n-2)/2}, mass entries w^{n/2}, both integrated over projective space, and
the generalized symmetric problem is reduced by a Cholesky factorization of
the mass matrix inside the dense symmetric eigensolver.
"""

from dataclasses import dataclass, field, replace
import math
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from . import harmonics
from .errors import AssemblyError, ConfigError, DomainError, NumericError
from .quadrature import (
    QuadratureRule,
    build_sphere_rule,
    integrate_projective,
    projective_volume,
)

__all__ = [
    "DEFAULT_BASIS_DEGREE",
    "ConformalFactor",
    "round_factor",
    "constant_factor",
    "zonal_factor",
    "harmonic_factor",
    "parse_factor",
    "default_rule",
    "volume",
    "normalize_volume",
    "assemble_matrices",
    "eigenvalues",
    "EigenResult",
    "EigenFunction",
    "first_excited_state",
    "cluster_eigenvalues",
]

DEFAULT_BASIS_DEGREE = {2: 8, 3: 6}
_EVEN_CHECK_SAMPLES = 64


@dataclass(frozen=True)
class ConformalFactor:
    """Positive even weight w on S^n defining the conformal metric w * g.

    `raw` evaluates the unscaled factor at sphere points; `scale` multiplies
    it (normalize_volume adjusts only the scale).  `label` is carried into
    reports; `coeffs` holds (degree, index, coefficient) triples when the
    factor is exp(u) for a finite harmonic expansion u.
    """

    sphere_dim: int
    raw: Callable[[np.ndarray], np.ndarray]
    scale: float = 1.0
    label: str = "custom"
    coeffs: tuple = ()

    def values(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        vals = self.scale * np.asarray(self.raw(points), dtype=float)
        return vals

    def density(self, points):
        """Volume density w^{n/2} against the round measure."""
        return self.values(points) ** (self.sphere_dim / 2.0)

    def energy_weight(self, points):
        """Stiffness weight w^{(n-2)/2}; identically 1 when n = 2."""
        return self.values(points) ** ((self.sphere_dim - 2) / 2.0)

    def validate(self, seed=7):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((_EVEN_CHECK_SAMPLES, self.sphere_dim + 1))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        plus = self.values(pts)
        minus = self.values(-pts)
        if np.min(plus) <= 0.0 or not np.all(np.isfinite(plus)):
            raise DomainError(f"conformal factor '{self.label}' not positive")
        dev = np.max(np.abs(plus - minus) / np.maximum(np.abs(plus), 1e-300))
        if dev > 1e-12:
            raise DomainError(
                f"conformal factor '{self.label}' not even: relative deviation {dev:.3g}"
            )
        return self


def round_factor(n):
    """The round metric: w identically 1."""
    return ConformalFactor(
        sphere_dim=n, raw=lambda pts: np.ones(pts.shape[0]), label="round"
    ).validate()


def constant_factor(n, value):
    if value <= 0:
        raise DomainError(f"constant conformal factor must be positive, got {value}")
    return ConformalFactor(
        sphere_dim=n,
        raw=lambda pts: np.full(pts.shape[0], float(value)),
        label=f"const:{value:g}",
    ).validate()


def zonal_factor(n, eps):
    """w = exp(eps * (y_last^2 - 1/(n+1))): a zonal degree-2 perturbation."""
    shift = 1.0 / (n + 1)

    def raw(pts):
        return np.exp(eps * (pts[:, -1] ** 2 - shift))

    return ConformalFactor(sphere_dim=n, raw=raw, label=f"zonal:{eps:g}").validate()


def harmonic_factor(n, triples):
    """w = exp(u) with u given by (degree, index, coefficient) triples.

    Degrees must be even and nonnegative; indices address the orthonormal
    even-harmonic basis (unit mass over projective space) within each degree
    block; coefficients are real.
    """
    triples = tuple((int(d), int(i), float(c)) for d, i, c in triples)
    if not triples:
        raise DomainError("empty harmonic coefficient list")
    max_deg = max(d for d, _, _ in triples)
    for d, i, _ in triples:
        if d < 0 or d % 2:
            raise DomainError(f"harmonic degrees must be even and >= 0, got {d}")
    base = harmonics.basis(n, max_deg)
    weights = np.zeros(base.size)
    for d, i, c in triples:
        weights[base.index_of(d, i)] += c

    def raw(pts):
        return np.exp(base.evaluate(pts) @ weights)

    label = "exp:" + ";".join(f"{d},{i},{c:g}" for d, i, c in triples)
    return ConformalFactor(
        sphere_dim=n, raw=raw, label=label, coeffs=triples
    ).validate()


def parse_factor(text, n):
    """Parse a conformal-factor specification string.

    Formats: "round" | "const:VALUE" | "zonal:EPS" (alias "zonal-eps:EPS") |
    "exp:DEG,IDX,COEF[;DEG,IDX,COEF...]".
    """
    text = text.strip()
    try:
        if text == "round":
            return round_factor(n)
        if text.startswith("const:"):
            return constant_factor(n, float(text.split(":", 1)[1]))
        if text.startswith("zonal:") or text.startswith("zonal-eps:"):
            return zonal_factor(n, float(text.split(":", 1)[1]))
        if text.startswith("exp:"):
            items = [part for part in text.split(":", 1)[1].split(";") if part.strip()]
            triples = []
            for item in items:
                d, i, c = item.split(",")
                triples.append((int(d), int(i), float(c)))
            return harmonic_factor(n, triples)
    except (ValueError, DomainError) as exc:
        raise ConfigError(f"bad conformal factor spec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown conformal factor spec {text!r}")


def default_rule(n, basis_degree=None, margin=8):
    """Assembly quadrature: exact through twice the basis degree plus margin."""
    if basis_degree is None:
        basis_degree = DEFAULT_BASIS_DEGREE[n]
    return build_sphere_rule(n, 2 * basis_degree + margin)


def volume(w, rule=None):
    """Volume of projective space under the metric w * g."""
    if rule is None:
        rule = default_rule(w.sphere_dim)
    return integrate_projective(rule, w.density, check_even=False)


def normalize_volume(w, rule=None):
    """Rescale w so the metric volume equals the round projective volume.

    Only the scalar scale changes; applying the operation twice is a no-op.
    """
    target = projective_volume(w.sphere_dim)
    current = volume(w, rule=rule)
    if current <= 0 or not math.isfinite(current):
        raise DomainError(f"conformal volume not positive: {current}")
    bump = (target / current) ** (2.0 / w.sphere_dim)
    return replace(w, scale=w.scale * bump)


def assemble_matrices(w, basis_degree=None, rule=None):
    """Galerkin stiffness/mass matrices over the even-harmonic basis.

    Returns (stiffness, mass, basis, rule).  Stiffness entries integrate
    grad Y_i . grad Y_j w^{(n-2)/2}; mass entries Y_i Y_j w^{n/2}; both over
    projective space (half sphere).  The mass matrix must come out positive
    definite or assembly fails.
    """
    n = w.sphere_dim
    if basis_degree is None:
        basis_degree = DEFAULT_BASIS_DEGREE[n]
    if basis_degree < 2 or basis_degree % 2:
        raise DomainError(f"basis degree must be even and >= 2, got {basis_degree}")
    if rule is None:
        rule = default_rule(n, basis_degree)
    base = harmonics.basis(n, basis_degree)
    nodes = rule.nodes
    half_weights = 0.5 * rule.weights
    wv = w.values(nodes)
    if np.min(wv) <= 0 or not np.all(np.isfinite(wv)):
        raise AssemblyError("conformal factor not positive at quadrature nodes")
    values = base.evaluate(nodes)
    grads = base.tangential_gradients(nodes)
    mass_weight = half_weights * wv ** (n / 2.0)
    energy_weight = half_weights * wv ** ((n - 2) / 2.0)
    mass = np.einsum("k,ki,kj->ij", mass_weight, values, values)
    stiffness = np.einsum("k,kid,kjd->ij", energy_weight, grads, grads)
    mass = 0.5 * (mass + mass.T)
    stiffness = 0.5 * (stiffness + stiffness.T)
    try:
        scipy.linalg.cholesky(mass)
    except scipy.linalg.LinAlgError as exc:
        raise AssemblyError(
            "mass matrix not positive definite; quadrature too coarse for the basis"
        ) from exc
    return stiffness, mass, base, rule


@dataclass(frozen=True)
class EigenFunction:
    """Scalar field given by harmonic-basis coefficients."""

    basis: harmonics.HarmonicBasis
    coeffs: np.ndarray

    def __call__(self, points):
        return self.basis.evaluate(points) @ self.coeffs

    def tangential_gradient(self, points):
        return np.einsum(
            "kid,i->kd", self.basis.tangential_gradients(points), self.coeffs
        )


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues (with multiplicity) and mass-orthonormal vectors."""

    sphere_dim: int
    basis_degree: int
    eigenvalues: np.ndarray
    vectors: np.ndarray  # columns, mass-orthonormal
    basis: harmonics.HarmonicBasis
    factor: ConformalFactor
    rule_exactness: int

    def eigenfunction(self, index):
        return EigenFunction(basis=self.basis, coeffs=self.vectors[:, index])


def eigenvalues(w, basis_degree=None, count=None, rule=None):
    """Solve the Galerkin eigenproblem for the metric w * g on RP^n.

    Returns an EigenResult with the `count` smallest eigenvalues (all by
    default), ascending, repeated by multiplicity.
    """
    stiffness, mass, base, rule = assemble_matrices(w, basis_degree, rule)
    try:
        vals, vecs = scipy.linalg.eigh(stiffness, mass)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(
            "generalized eigensolver failed; "
            f"cond(mass) = {np.linalg.cond(mass):.3e}, "
            f"cond(stiffness) = {np.linalg.cond(stiffness):.3e}"
        ) from exc
    if count is not None:
        vals = vals[:count]
        vecs = vecs[:, :count]
    return EigenResult(
        sphere_dim=w.sphere_dim,
        basis_degree=base.max_degree,
        eigenvalues=vals,
        vectors=vecs,
        basis=base,
        factor=w,
        rule_exactness=rule.exactness,
    )


def first_excited_state(result):
    """Eigenfunction of the smallest positive eigenvalue (index 1).

    For a degenerate eigenvalue this is the first vector of the eigenspace in
    the solver's ordering; it is mass-normalized and mass-orthogonal to the
    constants, hence has zero mean against the metric volume element.
    """
    if result.eigenvalues.shape[0] < 2:
        raise DomainError("need at least two eigenpairs for the excited state")
    return result.eigenfunction(1)


def cluster_eigenvalues(values, tol=1e-6):
    """Group ascending eigenvalues into (value, multiplicity) clusters."""
    clusters = []
    for val in np.asarray(values, dtype=float):
        if clusters and abs(val - clusters[-1][0]) <= tol * max(1.0, abs(val)):
            mean, count = clusters[-1]
            clusters[-1] = ((mean * count + val) / (count + 1), count + 1)
        else:
            clusters.append((float(val), 1))
    return [(float(v), int(c)) for v, c in clusters]
