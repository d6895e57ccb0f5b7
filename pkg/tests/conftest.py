import numpy as np
import pytest

from flagfiber import bundle as bd


E3 = np.eye(3)


@pytest.fixture
def fixture_point():
    """Dimension-3 reference point: p = diag(1,1,0), f = e1."""
    return bd.validate_point(np.diag([1.0, 1.0, 0.0]), E3[:, 0])


def rand_point(rng, dim, rank=None):
    if rank is None:
        rank = int(rng.integers(1, dim))
    return bd.random_point(rng, dim, rank)


def power_iteration_norm(m, iters=3000):
    """Independent spectral-norm oracle: power iteration on m* m."""
    a = np.asarray(m, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.size == 0:
        return 0.0
    gram = a.conj().T @ a
    n = gram.shape[0]
    v = np.ones(n, dtype=complex) + 1e-3 * (np.arange(n) + 1)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam = float(np.real(np.vdot(v, gram @ v)))
    return float(np.sqrt(max(lam, 0.0)))


def unitary_log(u):
    """Anti-Hermitian logarithm of a unitary matrix via its spectrum."""
    w, v = np.linalg.eig(u)
    angles = np.angle(w)
    return v @ np.diag(1j * angles) @ np.linalg.inv(v)


def assert_tangent_close(a, b, tol=1e-10):
    assert np.linalg.norm(a.x - b.x) <= tol
    assert np.linalg.norm(a.g - b.g) <= tol
