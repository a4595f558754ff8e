import numpy as np
import numpy.testing as npt
import pytest

from rplap.errors import DomainError
from rplap.harmonics import basis, harmonic_space_dim, round_eigenvalue
from rplap.quadrature import build_sphere_rule

# dimensions of the even-degree spherical-harmonic spaces
SPACE_DIMS = {
    (2, 0): 1,
    (2, 2): 5,
    (2, 4): 9,
    (2, 6): 13,
    (2, 8): 17,
    (3, 0): 1,
    (3, 2): 9,
    (3, 4): 25,
    (3, 6): 49,
}


@pytest.mark.parametrize("key,dim", sorted(SPACE_DIMS.items()))
def test_space_dimensions(key, dim):
    n, degree = key
    assert harmonic_space_dim(n, degree) == dim


def test_round_eigenvalues_follow_degree():
    assert round_eigenvalue(2, 2) == 6.0
    assert round_eigenvalue(4, 2) == 20.0
    assert round_eigenvalue(2, 3) == 8.0
    assert round_eigenvalue(4, 3) == 24.0
    for degree in (0, 2, 4, 6):
        for n in (2, 3):
            assert round_eigenvalue(degree, n) == degree * (degree + n - 1)


@pytest.mark.parametrize("n,max_degree", [(2, 8), (3, 6)])
def test_basis_size_and_degrees(n, max_degree):
    b = basis(n, max_degree)
    assert b.max_degree == max_degree
    expected = sum(SPACE_DIMS[(n, d)] for d in range(0, max_degree + 1, 2))
    assert b.size == expected
    degs = b.degrees
    assert degs[0] == 0 and degs[-1] == max_degree
    assert np.all(np.diff(degs) >= 0)


@pytest.mark.parametrize("n,max_degree", [(2, 6), (3, 4)])
def test_mass_orthonormality_over_projective_space(n, max_degree):
    b = basis(n, max_degree)
    rule = build_sphere_rule(n, 2 * max_degree + 4)
    values = b.evaluate(rule.nodes)
    gram = (values.T * (0.5 * rule.weights)) @ values
    npt.assert_allclose(gram, np.eye(b.size), atol=1e-10)


def test_functions_are_even(rng):
    b = basis(2, 6)
    pts = rng.normal(size=(30, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    npt.assert_allclose(b.evaluate(-pts), b.evaluate(pts), atol=1e-12)


def test_harmonicity_through_the_round_eigenvalue(rng):
    # spherical Laplacian via ambient second differences along tangent frames:
    # a degree-d eigenfunction must return d(d+n-1) * f
    from rplap.sphere_geom import tangent_basis

    n, h = 2, 1e-4
    b = basis(n, 4)
    pts = rng.normal(size=(6, n + 1))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    values = b.evaluate(pts)
    lap = np.zeros_like(values)
    frames = tangent_basis(pts)
    for col in range(n):
        u = frames[:, :, col]
        plus = pts + h * u
        plus /= np.linalg.norm(plus, axis=1, keepdims=True)
        minus = pts - h * u
        minus /= np.linalg.norm(minus, axis=1, keepdims=True)
        lap += (b.evaluate(plus) - 2.0 * values + b.evaluate(minus)) / h**2
    eigen = b.degrees * (b.degrees + n - 1)
    npt.assert_allclose(lap, -values * eigen[None, :], atol=5e-3)


def test_tangential_gradients_match_finite_differences(rng):
    b = basis(3, 4)
    pts = rng.normal(size=(5, 4))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    grads = b.tangential_gradients(pts)
    # gradients are tangent
    radial = np.einsum("kfd,kd->kf", grads, pts)
    npt.assert_allclose(radial, 0.0, atol=1e-11)
    from rplap.sphere_geom import tangent_basis

    h = 1e-6
    frames = tangent_basis(pts)
    for col in range(3):
        u = frames[:, :, col]
        plus = pts + h * u
        plus /= np.linalg.norm(plus, axis=1, keepdims=True)
        minus = pts - h * u
        minus /= np.linalg.norm(minus, axis=1, keepdims=True)
        fd = (b.evaluate(plus) - b.evaluate(minus)) / (2.0 * h)
        directional = np.einsum("kfd,kd->kf", grads, u)
        npt.assert_allclose(directional, fd, atol=1e-5)


def test_block_lookup_errors():
    b = basis(2, 4)
    assert b.block_dim(2) == 5
    assert b.index_of(4, 0) == 6
    with pytest.raises(DomainError):
        b.block_dim(6)
    with pytest.raises(DomainError):
        b.index_of(2, 5)
