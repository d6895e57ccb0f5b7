"""Dense complex-matrix kernels shared by the bundle geometry modules.

Everything here operates on plain numpy arrays of complex dtype.  All
functions are pure; returned arrays are freshly allocated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "InvariantViolation",
    "AdaptedFrame",
    "inner",
    "rank_one",
    "as_complex_matrix",
    "is_hermitian",
    "is_antihermitian",
    "is_projection",
    "require_hermitian",
    "require_antihermitian",
    "require_projection",
    "require_unitary",
    "spectral_norm",
    "frobenius_norm",
    "trace_inner",
    "mat_exp",
    "principal_inv_sqrt",
    "psd_sqrt",
    "psd_pinv_sqrt",
    "projection_pair_index",
    "adapted_frame",
    "block_decompose",
    "block_compose",
    "herm_to_vec",
    "vec_to_herm",
    "antiherm_to_vec",
    "vec_to_antiherm",
    "random_unitary",
    "random_hermitian",
    "random_antihermitian",
]


class InvariantViolation(ValueError):
    """An input failed one of its structural invariants."""


def inner(u: np.ndarray, v: np.ndarray) -> complex:
    """Complex inner product, linear in the first argument."""
    return complex(np.vdot(v, u))


def rank_one(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rank-one operator sending w to inner(w, v) * u."""
    return np.outer(u, np.conj(v))


def as_complex_matrix(m, min_dim: int = 1) -> np.ndarray:
    """Coerce to a square complex matrix; full-space operators need min_dim=2."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvariantViolation(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < min_dim:
        raise InvariantViolation(f"dimension must be >= {min_dim}, got {a.shape[0]}")
    if not np.all(np.isfinite(a.view(float))):
        raise InvariantViolation("matrix has non-finite entries")
    return a


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(m))) if m.size else 1.0


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.linalg.norm(m - m.conj().T) <= tol * _scale(m))


def is_antihermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.linalg.norm(m + m.conj().T) <= tol * _scale(m))


def is_projection(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return is_hermitian(m, tol) and bool(
        np.linalg.norm(m @ m - m) <= tol * _scale(m)
    )


def require_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    a = as_complex_matrix(m)
    if not is_hermitian(a, tol):
        raise InvariantViolation(f"{name} is not Hermitian within tolerance {tol}")
    return a


def require_antihermitian(m: np.ndarray, tol: float = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    a = as_complex_matrix(m)
    if not is_antihermitian(a, tol):
        raise InvariantViolation(f"{name} is not anti-Hermitian within tolerance {tol}")
    return a


def require_projection(m: np.ndarray, tol: float = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    a = as_complex_matrix(m)
    if not is_projection(a, tol):
        raise InvariantViolation(f"{name} is not an orthogonal projection within tolerance {tol}")
    return a


def require_unitary(m: np.ndarray, tol: float = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    a = as_complex_matrix(m)
    n = a.shape[0]
    if np.linalg.norm(a.conj().T @ a - np.eye(n)) > tol * max(1.0, float(n)):
        raise InvariantViolation(f"{name} is not unitary within tolerance {tol}")
    return a


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value; zero for empty blocks."""
    a = np.asarray(m, dtype=complex)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def frobenius_norm(m: np.ndarray) -> float:
    a = np.asarray(m, dtype=complex)
    return float(np.linalg.norm(a)) if a.size else 0.0


def trace_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Real trace inner product Re tr(a* b)."""
    return float(np.real(np.sum(np.conj(a) * b)))


def mat_exp(z: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Exponential of an anti-Hermitian matrix, unitary by construction.

    Computed by unitary diagonalization of the Hermitian matrix i*z, so the
    result is a product of exactly unitary factors with unimodular phases.
    """
    a = require_antihermitian(z, tol, "mat_exp input")
    w, v = np.linalg.eigh(1j * a)
    return (v * np.exp(-1j * w)) @ v.conj().T


def principal_inv_sqrt(a: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Inverse principal square root of a positive-definite Hermitian matrix."""
    h = require_hermitian(a, tol, "principal_inv_sqrt input")
    w, v = np.linalg.eigh(h)
    if w[0] <= tol:
        raise InvariantViolation(
            f"matrix is singular or indefinite: smallest eigenvalue {w[0]:.3e}"
        )
    return (v / np.sqrt(w)) @ v.conj().T


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix."""
    w, v = np.linalg.eigh(np.asarray(a, dtype=complex))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def psd_pinv_sqrt(a: np.ndarray, rcond: float = 1e-12) -> np.ndarray:
    """Pseudo-inverse of the square root of a PSD Hermitian matrix."""
    w, v = np.linalg.eigh(np.asarray(a, dtype=complex))
    cut = rcond * max(float(w[-1]), 0.0) if w.size else 0.0
    inv = np.where(w > cut, 1.0 / np.sqrt(np.clip(w, 1e-300, None)), 0.0)
    return (v * inv) @ v.conj().T


def _rank(m: np.ndarray, tol: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, float(s[0]))))


def projection_pair_index(p_plus: np.ndarray, p: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Fredholm-style index of p @ p_plus as a map range(p_plus) -> range(p).

    Returns dim ker - dim coker of the restricted map; in finite dimension
    this equals rank(p_plus) - rank(p).
    """
    a = require_projection(p_plus, tol, "p_plus")
    b = require_projection(p, tol, "p")
    basis_plus = _range_basis(a, tol)
    basis_p = _range_basis(b, tol)
    m = basis_p.conj().T @ (b @ basis_plus)
    r = _rank(m, tol=1e-8)
    dim_ker = basis_plus.shape[1] - r
    dim_coker = basis_p.shape[1] - r
    return dim_ker - dim_coker


def _range_basis(p: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the range of a projection, as matrix columns."""
    w, v = np.linalg.eigh(p)
    keep = w > 0.5
    return v[:, keep]


@dataclass(frozen=True)
class AdaptedFrame:
    """Unitary basis splitting the space as span(f) + (range(p) - span(f)) + ker(p).

    ``basis`` has the distinguished unit vector as its first column, the rest
    of range(p) in columns 1..rank-1, and ker(p) in the remaining columns.
    ``dims`` holds the three block sizes (1, rank-1, n-rank).
    """

    basis: np.ndarray
    dims: tuple[int, int, int]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return 1 + self.dims[1]


def adapted_frame(p: np.ndarray, f: np.ndarray, tol: float = DEFAULT_TOL) -> AdaptedFrame:
    """Deterministic adapted frame for a projection p with unit vector f in its range.

    The completion uses column-pivoted orthogonalization seeded by the
    coordinate vectors, ties broken by lowest index, so equal inputs always
    produce the same frame.
    """
    p = require_projection(p, tol, "p")
    f = np.asarray(f, dtype=complex)
    n = p.shape[0]
    r = int(round(float(np.real(np.trace(p)))))
    cols = [f / np.linalg.norm(f)]
    cols.extend(_complete_block(p, cols, r - 1))
    q = np.eye(n) - p
    cols.extend(_complete_block(q, cols, n - r))
    basis = np.column_stack(cols)
    return AdaptedFrame(basis=basis, dims=(1, r - 1, n - r))


def _complete_block(proj: np.ndarray, existing: list[np.ndarray], count: int) -> list[np.ndarray]:
    """Greedily extend ``existing`` with ``count`` orthonormal vectors inside range(proj)."""
    n = proj.shape[0]
    out: list[np.ndarray] = []
    for _ in range(count):
        best = None
        best_norm = -1.0
        for j in range(n):
            cand = proj[:, j].copy()
            for c in existing + out:
                cand -= np.vdot(c, cand) * c
            nn = float(np.linalg.norm(cand))
            if nn > best_norm + 1e-12:
                best_norm = nn
                best = cand
        if best is None or best_norm < 1e-8:
            raise InvariantViolation("failed to complete orthonormal frame")
        vec = best / best_norm
        # second orthogonalization pass keeps the frame unitary to machine precision
        for c in existing + out:
            vec -= np.vdot(c, vec) * c
        vec /= np.linalg.norm(vec)
        out.append(vec)
    return out


def block_decompose(z: np.ndarray, frame: AdaptedFrame) -> list[list[np.ndarray]]:
    """Split a matrix into the 3x3 grid of blocks defined by an adapted frame."""
    a = np.asarray(z, dtype=complex)
    if a.shape != (frame.dim, frame.dim):
        raise InvariantViolation(
            f"matrix shape {a.shape} does not match frame dimension {frame.dim}"
        )
    zf = frame.basis.conj().T @ a @ frame.basis
    edges = np.cumsum((0,) + frame.dims)
    return [
        [zf[edges[i]:edges[i + 1], edges[j]:edges[j + 1]].copy() for j in range(3)]
        for i in range(3)
    ]


def block_compose(blocks: list[list[np.ndarray]], frame: AdaptedFrame) -> np.ndarray:
    """Inverse of block_decompose."""
    zf = np.vstack([
        np.hstack([np.asarray(blocks[i][j], dtype=complex) for j in range(3)])
        for i in range(3)
    ])
    if zf.shape != (frame.dim, frame.dim):
        raise InvariantViolation(
            f"assembled shape {zf.shape} does not match frame dimension {frame.dim}"
        )
    return frame.basis @ zf @ frame.basis.conj().T


def herm_to_vec(x: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of a Hermitian matrix.

    The map satisfies tr(xy) = herm_to_vec(x) . herm_to_vec(y).
    """
    a = np.asarray(x, dtype=complex)
    n = a.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    return np.concatenate([
        np.real(np.diag(a)),
        np.sqrt(2.0) * np.real(a[iu, ju]),
        np.sqrt(2.0) * np.imag(a[iu, ju]),
    ])


def vec_to_herm(v: np.ndarray, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = np.zeros((n, n), dtype=complex)
    iu, ju = np.triu_indices(n, k=1)
    m = iu.size
    out[np.arange(n), np.arange(n)] = v[:n]
    upper = (v[n:n + m] + 1j * v[n + m:n + 2 * m]) / np.sqrt(2.0)
    out[iu, ju] = upper
    out[ju, iu] = np.conj(upper)
    return out


def antiherm_to_vec(z: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of an anti-Hermitian matrix.

    The map satisfies Re tr(z* w) = antiherm_to_vec(z) . antiherm_to_vec(w).
    """
    return herm_to_vec(-1j * np.asarray(z, dtype=complex))


def vec_to_antiherm(v: np.ndarray, n: int) -> np.ndarray:
    return 1j * vec_to_herm(v, n)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary from a QR factorization with phase fixing."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a + a.conj().T) / 2.0


def random_antihermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a - a.conj().T) / 2.0
