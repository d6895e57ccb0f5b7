"""Data model for (projection, unit vector) pairs, the unitary action,
its differential, the tangent projection and the chart constructions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operator_core as oc
from .operator_core import DEFAULT_TOL, InvariantViolation, inner, rank_one

__all__ = [
    "NotProjection",
    "NotFixedVector",
    "NotUnit",
    "RealPairing",
    "AntipodalVectors",
    "TooFar",
    "OutOfChart",
    "BundlePoint",
    "TangentVector",
    "validate_point",
    "validate_tangent",
    "act",
    "transport_tangent",
    "delta",
    "tangent_project_E",
    "skew_mapping_vector",
    "codiagonal_source",
    "some_lifting",
    "rotation_unitary",
    "transport_unitary_mu",
    "cross_section",
    "trivialize",
    "trivialize_inverse",
    "same_component",
    "random_point",
    "random_tangent",
]


class NotProjection(InvariantViolation):
    """The matrix is not an orthogonal projection within tolerance."""


class NotFixedVector(InvariantViolation):
    """The vector is not fixed by the projection within tolerance."""


class NotUnit(InvariantViolation):
    """The vector does not have unit norm within tolerance."""


class RealPairing(InvariantViolation):
    """The pairing Re<g, f> does not vanish within tolerance."""


class AntipodalVectors(InvariantViolation):
    """The two unit vectors are antipodal; no rotation chart exists."""


class TooFar(InvariantViolation):
    """The projections are at distance >= 1; no transport unitary exists."""


class OutOfChart(InvariantViolation):
    """The point lies outside the chart around the base point."""


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BundlePoint:
    """A pair (p, f) with p an orthogonal projection fixing the unit vector f."""

    p: np.ndarray
    f: np.ndarray

    @property
    def dim(self) -> int:
        return self.p.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.real(np.trace(self.p)))))


@dataclass(frozen=True)
class TangentVector:
    """A pair (x, g): Hermitian p-codiagonal matrix plus compatible vector."""

    x: np.ndarray
    g: np.ndarray

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(_readonly(self.x + other.x), _readonly(self.g + other.g))

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(_readonly(self.x - other.x), _readonly(self.g - other.g))

    def __rmul__(self, c: float) -> "TangentVector":
        return TangentVector(_readonly(c * self.x), _readonly(c * self.g))

    def __neg__(self) -> "TangentVector":
        return -1.0 * self


def validate_point(p, f, tol: float = DEFAULT_TOL) -> BundlePoint:
    """Check the defining invariants and return an immutable point.

    Raises NotProjection, NotFixedVector or NotUnit naming the violated
    invariant.
    """
    a = oc.as_complex_matrix(p, min_dim=2)
    v = np.asarray(f, dtype=complex)
    if v.shape != (a.shape[0],):
        raise NotFixedVector(f"vector shape {v.shape} does not match dimension {a.shape[0]}")
    if not oc.is_projection(a, tol):
        raise NotProjection(f"p is not an orthogonal projection within tolerance {tol}")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise NotUnit(f"f has norm {np.linalg.norm(v):.12f}, expected 1")
    if np.linalg.norm(a @ v - v) > tol:
        raise NotFixedVector("p does not fix f within tolerance")
    return BundlePoint(p=_readonly(a), f=_readonly(v))


def validate_tangent(pt: BundlePoint, x, g, tol: float = DEFAULT_TOL) -> TangentVector:
    """Check membership in the tangent space at pt.

    The matrix part must be Hermitian and p-codiagonal, the vector part must
    pair imaginarily with f, and the two parts must satisfy the off-range
    compatibility p_perp g = p_perp x f.
    """
    a = oc.require_hermitian(x, tol, "tangent matrix part")
    v = np.asarray(g, dtype=complex)
    p = pt.p
    q = np.eye(pt.dim) - p
    scale = max(1.0, float(np.linalg.norm(a)), float(np.linalg.norm(v)))
    if np.linalg.norm(p @ a @ p) > tol * scale or np.linalg.norm(q @ a @ q) > tol * scale:
        raise InvariantViolation("tangent matrix part is not p-codiagonal")
    if abs(np.real(inner(v, pt.f))) > tol * scale:
        raise RealPairing("tangent vector part does not pair imaginarily with f")
    if np.linalg.norm(q @ v - q @ (a @ pt.f)) > tol * scale:
        raise InvariantViolation("tangent parts violate the compatibility condition")
    return TangentVector(x=_readonly(a), g=_readonly(v))


def act(u: np.ndarray, pt: BundlePoint, tol: float = DEFAULT_TOL) -> BundlePoint:
    """Unitary action u . (p, f) = (u p u*, u f)."""
    w = oc.require_unitary(u, tol, "u")
    return BundlePoint(p=_readonly(w @ pt.p @ w.conj().T), f=_readonly(w @ pt.f))


def transport_tangent(u: np.ndarray, v: TangentVector) -> TangentVector:
    """Push a tangent vector along the action of a unitary."""
    return TangentVector(_readonly(u @ v.x @ u.conj().T), _readonly(u @ v.g))


def delta(pt: BundlePoint, z: np.ndarray, tol: float = DEFAULT_TOL) -> TangentVector:
    """Differential of the action at the identity: z -> ([z, p], z f)."""
    a = oc.require_antihermitian(z, tol, "z")
    return TangentVector(
        x=_readonly(a @ pt.p - pt.p @ a),
        g=_readonly(a @ pt.f),
    )


def tangent_project_E(pt: BundlePoint, x, h) -> TangentVector:
    """Idempotent projection of (Hermitian, vector) pairs onto the tangent space.

    Fixes every value of delta and lands inside the tangent space; it is not
    orthogonal for the ambient inner product.
    """
    a = oc.require_hermitian(x, name="x")
    v = np.asarray(h, dtype=complex)
    p, f = pt.p, pt.f
    q = np.eye(pt.dim) - p
    x_out = q @ a @ p + p @ a @ q
    ff = rank_one(f, f)
    g_out = 1j * np.imag(inner(v, f)) * f + (p - ff) @ v + q @ (a @ f)
    return TangentVector(x=_readonly(x_out), g=_readonly(g_out))


def skew_mapping_vector(f: np.ndarray, g: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Anti-Hermitian z with z f = g, for Re<g, f> = 0 and f a unit vector."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(g)))
    if abs(np.real(inner(g, f))) > tol * scale:
        raise RealPairing("Re<g, f> must vanish for a skew mapping to exist")
    return rank_one(g, f) + inner(f, g) * rank_one(f, f) - rank_one(f, g)


def codiagonal_source(pt: BundlePoint, zh, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Anti-Hermitian x with [x, p] equal to a given Hermitian codiagonal matrix."""
    a = oc.require_hermitian(zh, tol, "zh")
    p = pt.p
    q = np.eye(pt.dim) - p
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.linalg.norm(p @ a @ p) > tol * scale or np.linalg.norm(q @ a @ q) > tol * scale:
        raise InvariantViolation("zh is not p-codiagonal within tolerance")
    return a @ p - p @ a


def some_lifting(pt: BundlePoint, v: TangentVector, check: bool = True) -> np.ndarray:
    """A deterministic anti-Hermitian z with delta(pt, z) = v.

    Built as the codiagonal source of the matrix part plus a skew mapping
    inside range(p) for the residual vector part.
    """
    if check:
        v = validate_tangent(pt, v.x, v.g)
    p = pt.p
    x_cod = v.x @ p - p @ v.x
    residual = v.g - x_cod @ pt.f
    return x_cod + skew_mapping_vector(pt.f, residual)


def rotation_unitary(xi: np.ndarray, eta: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Plane rotation mapping the unit vector xi to the unit vector eta.

    Acts as the identity on the orthogonal complement of span{xi, eta}.  When
    eta is a unimodular multiple of xi the rotation degenerates to the pure
    phase 1 + (c - 1) xi xi*.
    """
    xi = np.asarray(xi, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    if np.linalg.norm(xi - eta) >= 2.0 - tol:
        raise AntipodalVectors("unit vectors are antipodal within tolerance")
    n = xi.shape[0]
    c = inner(eta, xi)
    u = eta - c * xi
    s_num = float(np.linalg.norm(u))
    if s_num <= 1e-12:
        phase = c / abs(c)
        return np.eye(n) + (phase - 1.0) * rank_one(xi, xi)
    xi_perp = u / s_num
    # one reorthogonalization pass keeps the frame numerically exact
    xi_perp = xi_perp - inner(xi_perp, xi) * xi
    xi_perp /= np.linalg.norm(xi_perp)
    s = np.sqrt(max(0.0, 1.0 - abs(c) ** 2))
    return (
        np.eye(n)
        + (c - 1.0) * rank_one(xi, xi)
        + (np.conj(c) - 1.0) * rank_one(xi_perp, xi_perp)
        + s * (rank_one(xi_perp, xi) - rank_one(xi, xi_perp))
    )


def transport_unitary_mu(p0: np.ndarray, p: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unitary conjugating p0 into p, smooth in p and equal to 1 at p = p0.

    Uses the polar factor of p p0 + (1-p)(1-p0), defined whenever the
    projections are at operator distance < 1.
    """
    a = oc.require_projection(p0, tol, "p0")
    b = oc.require_projection(p, tol, "p")
    gap = oc.spectral_norm(b - a)
    if gap >= 1.0 - tol:
        raise TooFar(f"projections at distance {gap:.6f} >= 1")
    n = a.shape[0]
    s = b @ a + (np.eye(n) - b) @ (np.eye(n) - a)
    d = b - a
    return s @ principal_inv_sqrt_of(np.eye(n) - d @ d)


def principal_inv_sqrt_of(m: np.ndarray) -> np.ndarray:
    # thin wrapper so callers in this module share one eigenvalue floor
    return oc.principal_inv_sqrt(m, tol=1e-14)


def cross_section(base: BundlePoint, pt: BundlePoint, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unitary w with act(w, base) = pt, defined on the chart around base."""
    if oc.spectral_norm(pt.p - base.p) >= 1.0 - tol:
        raise OutOfChart("projection part is outside the chart")
    mu = transport_unitary_mu(base.p, pt.p, tol)
    h = mu.conj().T @ pt.f
    if np.linalg.norm(h - base.f) >= 2.0 - tol:
        raise OutOfChart("fiber part is outside the chart")
    v = rotation_unitary(base.f, h, tol)
    return mu @ v


def trivialize(base: BundlePoint, pt: BundlePoint, tol: float = DEFAULT_TOL):
    """Chart map (p, f) -> (p, mu*(p) f) with second component in range(base.p)."""
    if oc.spectral_norm(pt.p - base.p) >= 1.0 - tol:
        raise OutOfChart("projection part is outside the chart")
    mu = transport_unitary_mu(base.p, pt.p, tol)
    return pt.p.copy(), mu.conj().T @ pt.f


def trivialize_inverse(base: BundlePoint, p: np.ndarray, h: np.ndarray,
                       tol: float = DEFAULT_TOL) -> BundlePoint:
    """Inverse chart map (p, h) -> (p, mu(p) h)."""
    mu = transport_unitary_mu(base.p, p, tol)
    return validate_point(p, mu @ h, tol)


def same_component(pt1: BundlePoint, pt2: BundlePoint) -> bool:
    """Whether the two points are connected, i.e. their projections have equal rank."""
    if pt1.dim != pt2.dim:
        raise InvariantViolation("points live in different dimensions")
    return pt1.rank == pt2.rank


def random_point(rng: np.random.Generator, dim: int, rank: int) -> BundlePoint:
    """Haar-random point with the given projection rank."""
    if not 1 <= rank <= dim:
        raise InvariantViolation(f"rank must be in [1, {dim}], got {rank}")
    u = oc.random_unitary(rng, dim)
    p = u[:, :rank] @ u[:, :rank].conj().T
    coeff = rng.standard_normal(rank) + 1j * rng.standard_normal(rank)
    f = u[:, :rank] @ (coeff / np.linalg.norm(coeff))
    return validate_point(p, f)


def random_tangent(rng: np.random.Generator, pt: BundlePoint, scale: float = 1.0) -> TangentVector:
    """Random tangent vector, produced as delta of a random anti-Hermitian matrix."""
    return delta(pt, oc.random_antihermitian(rng, pt.dim, scale))
