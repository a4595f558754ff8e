"""Real spherical harmonics on S^n as explicit harmonic polynomials.

Each degree block is a basis of homogeneous harmonic polynomials in n+1
variables, orthonormalized against the exact sphere inner product and scaled
so that the half-sphere (projective) mass matrix is the identity.  Explicit
monomial coefficients give exact evaluation and exact ambient gradients.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
import math

import numpy as np
from scipy.linalg import eigh, null_space

from .errors import DomainError, NumericError

__all__ = ["HarmonicBasis", "basis", "harmonic_space_dim", "round_eigenvalue"]


def round_eigenvalue(degree, n):
    """Laplacian eigenvalue of degree-`degree` harmonics on the round S^n."""
    return float(degree * (degree + n - 1))


def harmonic_space_dim(n, degree):
    """Dimension of the space of degree-`degree` harmonics on S^n."""
    d = n + 1
    if degree == 0:
        return 1
    return (2 * degree + d - 2) * math.comb(degree + d - 3, degree - 1) // (degree)


def _monomial_exponents(dim, degree):
    """All exponent tuples of total degree `degree` in `dim` variables."""
    if degree == 0:
        return [tuple([0] * dim)]
    exps = []
    for combo in combinations_with_replacement(range(dim), degree):
        alpha = [0] * dim
        for var in combo:
            alpha[var] += 1
        exps.append(tuple(alpha))
    return sorted(set(exps), reverse=True)


def _sphere_monomial_integral(alpha):
    """Exact integral of the monomial y^alpha over the unit sphere in R^d."""
    if any(a % 2 for a in alpha):
        return 0.0
    d = len(alpha)
    log_num = sum(math.lgamma((a + 1) / 2.0) for a in alpha)
    log_den = math.lgamma((sum(alpha) + d) / 2.0)
    return 2.0 * math.exp(log_num - log_den)


def _laplacian_matrix(exps, exps_lower):
    """Matrix of the flat Laplacian from degree-k coefficients to degree k-2."""
    index = {alpha: i for i, alpha in enumerate(exps_lower)}
    mat = np.zeros((len(exps_lower), len(exps)))
    for j, alpha in enumerate(exps):
        for var, a in enumerate(alpha):
            if a >= 2:
                lower = list(alpha)
                lower[var] -= 2
                mat[index[tuple(lower)], j] += a * (a - 1)
    return mat


@dataclass(frozen=True)
class _Block:
    degree: int
    exponents: np.ndarray  # (n_monomials, d) integer exponents
    coeffs: np.ndarray  # (n_monomials, n_harmonics)


def _harmonic_block(n, degree):
    d = n + 1
    exps = _monomial_exponents(d, degree)
    if degree == 0:
        coeffs = np.array([[1.0]])
    else:
        lower = _monomial_exponents(d, degree - 2) if degree >= 2 else []
        lap = _laplacian_matrix(exps, lower) if lower else np.zeros((0, len(exps)))
        coeffs = null_space(lap)
    expected = harmonic_space_dim(n, degree)
    if coeffs.shape[1] != expected:
        raise NumericError(
            f"harmonic space dimension mismatch at degree {degree}: "
            f"{coeffs.shape[1]} != {expected}"
        )
    # Gram matrix of the null-space basis against the half-sphere inner product
    exp_arr = np.array(exps, dtype=int)
    mono_gram = np.empty((len(exps), len(exps)))
    for i, ai in enumerate(exps):
        for j in range(i, len(exps)):
            val = 0.5 * _sphere_monomial_integral(tuple(np.add(ai, exps[j])))
            mono_gram[i, j] = val
            mono_gram[j, i] = val
    gram = coeffs.T @ mono_gram @ coeffs
    vals, vecs = eigh(gram)
    if np.min(vals) <= 0:
        raise NumericError(f"harmonic Gram matrix not positive at degree {degree}")
    coeffs = coeffs @ vecs @ np.diag(1.0 / np.sqrt(vals))
    return _Block(degree=degree, exponents=exp_arr, coeffs=coeffs)


def _eval_monomials(exponents, points):
    out = np.ones((points.shape[0], exponents.shape[0]))
    for var in range(exponents.shape[1]):
        col = points[:, var]
        powers = exponents[:, var]
        max_pow = int(powers.max()) if powers.size else 0
        if max_pow == 0:
            continue
        table = np.empty((points.shape[0], max_pow + 1))
        table[:, 0] = 1.0
        for p in range(1, max_pow + 1):
            table[:, p] = table[:, p - 1] * col
        out *= table[:, powers]
    return out


@dataclass(frozen=True)
class HarmonicBasis:
    """Even-degree harmonic basis on S^n up to a maximal degree.

    Functions are indexed by (degree block, position inside block); the mass
    matrix over projective space (half sphere) is the identity.
    """

    sphere_dim: int
    max_degree: int
    blocks: tuple

    @property
    def size(self):
        return sum(b.coeffs.shape[1] for b in self.blocks)

    @property
    def degrees(self):
        """Degree of each basis function, aligned with evaluation columns."""
        out = []
        for b in self.blocks:
            out.extend([b.degree] * b.coeffs.shape[1])
        return np.array(out, dtype=int)

    def block_dim(self, degree):
        for b in self.blocks:
            if b.degree == degree:
                return b.coeffs.shape[1]
        raise DomainError(f"no degree-{degree} block in basis (max {self.max_degree})")

    def index_of(self, degree, position):
        offset = 0
        for b in self.blocks:
            if b.degree == degree:
                if not 0 <= position < b.coeffs.shape[1]:
                    raise DomainError(
                        f"harmonic index {position} out of range for degree {degree}"
                    )
                return offset + position
            offset += b.coeffs.shape[1]
        raise DomainError(f"no degree-{degree} block in basis (max {self.max_degree})")

    def evaluate(self, points):
        """Values of all basis functions, shape (N, size)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        cols = [
            _eval_monomials(b.exponents, points) @ b.coeffs for b in self.blocks
        ]
        return np.concatenate(cols, axis=1)

    def ambient_gradients(self, points):
        """Flat gradients of the harmonic polynomials, shape (N, size, d)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        d = self.sphere_dim + 1
        out = []
        for b in self.blocks:
            grads = np.zeros((points.shape[0], b.coeffs.shape[1], d))
            if b.degree > 0:
                for var in range(d):
                    powers = b.exponents[:, var]
                    mask = powers > 0
                    if not np.any(mask):
                        continue
                    reduced = b.exponents[mask].copy()
                    reduced[:, var] -= 1
                    mono = _eval_monomials(reduced, points) * powers[mask]
                    grads[:, :, var] = mono @ b.coeffs[mask]
            out.append(grads)
        return np.concatenate(out, axis=1)

    def tangential_gradients(self, points):
        """Sphere gradients at unit points: grad P - degree * P * y."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = self.evaluate(points)
        grads = self.ambient_gradients(points)
        degs = self.degrees.astype(float)
        radial = values * degs[None, :]
        return grads - radial[:, :, None] * points[:, None, :]


@lru_cache(maxsize=None)
def basis(n, max_degree):
    """Even-degree harmonic basis on S^n (degrees 0, 2, ..., max_degree)."""
    if n not in (2, 3):
        raise DomainError(f"harmonic basis supports n in {{2, 3}}, got {n}")
    if max_degree < 0 or max_degree % 2:
        raise DomainError(f"max_degree must be even and >= 0, got {max_degree}")
    blocks = tuple(_harmonic_block(n, deg) for deg in range(0, max_degree + 1, 2))
    return HarmonicBasis(sphere_dim=n, max_degree=max_degree, blocks=blocks)
